"""Seeded random generators for spaces, measures, and samples.

Everything is driven by numpy's PCG64 through SeedSequence streams, so any
(seed, stream) pair reproduces bit-identically across runs and platforms.
Random distance tables use integer entries closed under shortest paths:
the metric axioms then hold exactly in float arithmetic, which keeps the
exactness claims of the law checks honest.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .graded import NestedMultiSet, NestedTuple
from .measures import DiscreteMeasure
from .monad import NestedMeasure
from .power import FinUnifMap, MultiSet, PointTuple
from .spaces import NORMS, EuclideanSpace, FiniteMetricSpace

RNG_ALGORITHM = "numpy-pcg64"


def rng_from(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic generator for a (seed, stream...) tuple."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(s) for s in stream]]))


def random_metric_space(rng: np.random.Generator, n_points: int,
                        max_dist: int = 9) -> FiniteMetricSpace:
    """Random integer distance table, metrized by shortest-path closure."""
    n = int(n_points)
    if n == 1:
        return FiniteMetricSpace([[0.0]])
    raw = rng.integers(1, max_dist + 1, size=(n, n))
    table = np.minimum(raw, raw.T).astype(np.int64)
    np.fill_diagonal(table, 0)
    for k in range(n):
        table = np.minimum(table, table[:, k:k + 1] + table[k:k + 1, :])
    return FiniteMetricSpace(table.astype(float))


def random_euclidean_space(rng: np.random.Generator, n_points: int, dim: int,
                           norm: str | None = None) -> FiniteMetricSpace:
    """Distinct integer-grid points in R^dim under a random or given norm."""
    if norm is None:
        norm = NORMS[int(rng.integers(0, len(NORMS)))]
    seen: set[tuple[int, ...]] = set()
    points: list[tuple[int, ...]] = []
    while len(points) < n_points:
        cand = tuple(int(v) for v in rng.integers(-8, 9, size=dim))
        if cand not in seen:
            seen.add(cand)
            points.append(cand)
    return EuclideanSpace(np.array(points, dtype=float), norm).to_metric()


def random_space(rng: np.random.Generator, max_points: int = 6) -> FiniteMetricSpace:
    """Either flavor of random space, at a random size >= 2."""
    n = int(rng.integers(2, max_points + 1))
    if rng.integers(0, 2) == 0:
        return random_metric_space(rng, n)
    dim = int(rng.integers(1, 4))
    return random_euclidean_space(rng, n, dim)


def simplex_fractions(rng: np.random.Generator, k: int, den: int) -> list[Fraction]:
    """Exact weights in the k-simplex with common denominator den (zeros allowed)."""
    cuts = sorted(int(c) for c in rng.integers(0, den + 1, size=k - 1))
    parts: list[Fraction] = []
    prev = 0
    for c in [*cuts, den]:
        parts.append(Fraction(c - prev, den))
        prev = c
    return parts


def simplex_floats(rng: np.random.Generator, k: int) -> list[float]:
    """Strictly positive float weights summing to 1 (up to rounding)."""
    raw = rng.random(k) + 1e-3
    return list(raw / raw.sum())


def random_measure(rng: np.random.Generator, space: FiniteMetricSpace,
                   max_support: int = 4, max_den: int = 12,
                   exact: bool = True) -> DiscreteMeasure:
    """Random measure; exact rational weights by default."""
    k = int(rng.integers(1, min(max_support, space.n) + 1))
    support = [int(i) for i in rng.choice(space.n, size=k, replace=False)]
    if exact:
        den = int(rng.integers(1, max_den + 1))
        weights: Sequence = simplex_fractions(rng, k, den)
    else:
        weights = simplex_floats(rng, k)
    return DiscreteMeasure(space, support, weights)


def random_rational_pair(rng: np.random.Generator, space: FiniteMetricSpace,
                         max_support: int = 4, den: int = 6):
    """Two measures sharing one exact common denominator (brute-force ready)."""
    out = []
    for _ in range(2):
        k = int(rng.integers(1, min(max_support, space.n) + 1))
        support = [int(i) for i in rng.choice(space.n, size=k, replace=False)]
        out.append(DiscreteMeasure(space, support, simplex_fractions(rng, k, den)))
    return out[0], out[1]


def random_tuple(rng: np.random.Generator, space: FiniteMetricSpace,
                 length: int) -> PointTuple:
    return PointTuple(space, [int(i) for i in rng.integers(0, space.n, size=length)])


def random_multiset(rng: np.random.Generator, space: FiniteMetricSpace,
                    length: int) -> MultiSet:
    return MultiSet(space, [int(i) for i in rng.integers(0, space.n, size=length)])


def random_nested_tuple(rng: np.random.Generator, space: FiniteMetricSpace,
                        outer: int, inner: int) -> NestedTuple:
    grid = rng.integers(0, space.n, size=(outer, inner))
    return NestedTuple(space, [[int(v) for v in row] for row in grid])


def random_nested_multiset(rng: np.random.Generator, space: FiniteMetricSpace,
                           outer: int, inner: int) -> NestedMultiSet:
    grid = rng.integers(0, space.n, size=(outer, inner))
    return NestedMultiSet(space, [[int(v) for v in row] for row in grid])


def random_finunif(rng: np.random.Generator, codomain_size: int,
                   fiber: int) -> FinUnifMap:
    """Uniform-fiber surjection with a shuffled domain."""
    values = np.repeat(np.arange(codomain_size), fiber)
    return FinUnifMap([int(v) for v in rng.permutation(values)], codomain_size)


def random_nested_measure(rng: np.random.Generator, space: FiniteMetricSpace,
                          max_outer: int = 3, max_support: int = 4,
                          max_den: int = 12, exact: bool = True) -> NestedMeasure:
    k = int(rng.integers(1, max_outer + 1))
    inner = [random_measure(rng, space, max_support, max_den, exact) for _ in range(k)]
    if exact:
        outer: Sequence = simplex_fractions(rng, k, int(rng.integers(1, max_den + 1)))
    else:
        outer = simplex_floats(rng, k)
    return NestedMeasure(space, inner, outer)


class MeasureSampler:
    """Sampler protocol for the law suites: a fresh space per trial, then
    measures on that space."""

    def __init__(self, max_points: int = 6, max_support: int = 4,
                 max_den: int = 12, exact: bool = True):
        self.max_points = max_points
        self.max_support = max_support
        self.max_den = max_den
        self.exact = exact

    def space(self, rng: np.random.Generator) -> FiniteMetricSpace:
        return random_space(rng, self.max_points)

    def measure(self, rng: np.random.Generator,
                space: FiniteMetricSpace) -> DiscreteMeasure:
        return random_measure(rng, space, self.max_support, self.max_den, self.exact)
