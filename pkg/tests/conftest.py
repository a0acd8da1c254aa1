from fractions import Fraction

import pytest

from kantorovich import DiscreteMeasure, FiniteMetricSpace


@pytest.fixture
def line3():
    """Three points on a line at coordinates 0, 1, 2."""
    return FiniteMetricSpace([[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture
def line4():
    """Four points on a line at coordinates 0, 1, 3, 7."""
    return FiniteMetricSpace([[0, 1, 3, 7],
                              [1, 0, 2, 6],
                              [3, 2, 0, 4],
                              [7, 6, 4, 0]])


@pytest.fixture
def half_half(line3):
    return DiscreteMeasure(line3, [0, 1], [Fraction(1, 2), Fraction(1, 2)])


@pytest.fixture
def quarter_three(line3):
    return DiscreteMeasure(line3, [1, 2], [Fraction(1, 4), Fraction(3, 4)])
