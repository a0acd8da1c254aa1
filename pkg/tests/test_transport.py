from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kantorovich import (Coupling, DiscreteMeasure, DualPotential, MultiSet,
                         ValidationError, bistochastic_min, coupling_cost,
                         dirac, first_moment, mixture, validate_coupling,
                         w1_assignment, w1_bruteforce, w1_dual_value, w1_flow,
                         wasserstein1)
from kantorovich.samplers import (random_measure, random_metric_space,
                                  random_rational_pair, rng_from)


def test_hand_checked_line_instance(half_half, quarter_three):
    # supplies 1/2@0, 1/2@1; demands 1/4@1, 3/4@2; greedy-on-a-line is optimal
    result = w1_flow(half_half, quarter_three)
    assert result.cost == pytest.approx(1.25, abs=1e-15)
    assert result.gap == 0.0
    assert result.solver == "flow"
    assert w1_bruteforce(half_half, quarter_three) == pytest.approx(1.25, abs=1e-15)


def test_dirac_distance_is_ground_distance(line4):
    for i in range(4):
        for j in range(4):
            r = wasserstein1(dirac(line4, i), dirac(line4, j))
            assert r.cost == line4.d(i, j)
            assert r.gap == 0.0


def test_distance_to_dirac_is_first_moment(line4):
    p = DiscreteMeasure.from_rational(line4, [0, 1, 2, 3], [1, 2, 2, 1], 6)
    for x in range(4):
        r = wasserstein1(p, dirac(line4, x))
        assert r.cost == pytest.approx(first_moment(p, x), abs=1e-12)


def test_coupling_is_a_coupling(half_half, quarter_three):
    result = w1_flow(half_half, quarter_three)
    assert validate_coupling(result.coupling) == []
    assert coupling_cost(result.coupling) == pytest.approx(result.cost, abs=1e-15)


def test_validate_coupling_flags_bad_marginals(half_half, quarter_three):
    bad = Coupling(half_half, quarter_three,
                   np.array([[0.5, 0.0], [0.0, 0.5]]))
    assert validate_coupling(bad) != []


def test_dual_potential_certifies(half_half, quarter_three):
    result = w1_flow(half_half, quarter_three)
    value = w1_dual_value(half_half, quarter_three, result.dual)
    assert value == pytest.approx(result.cost, abs=1e-12)


def test_dual_value_rejects_non_lipschitz(line3, half_half, quarter_three):
    # f(0)=0, f(2)=5 stretches distance 2 into 5
    f = DualPotential((0, 1, 2), (0.0, 0.0, 5.0))
    with pytest.raises(ValidationError, match="1-Lipschitz"):
        w1_dual_value(half_half, quarter_three, f)


def test_dual_value_requires_support_coverage(line3, half_half):
    f = DualPotential((0,), (0.0,))
    q = dirac(line3, 2)
    with pytest.raises(ValidationError):
        w1_dual_value(half_half, q, f)


def test_flow_matches_bruteforce_on_random_rational_instances():
    for trial in range(60):
        rng = rng_from(11, trial)
        space = random_metric_space(rng, 5)
        den = int(rng.integers(2, 7))
        p, q = random_rational_pair(rng, space, max_support=4, den=den)
        flow = w1_flow(p, q)
        brute = w1_bruteforce(p, q)
        assert flow.cost == pytest.approx(brute, abs=1e-9)
        assert flow.gap <= 1e-12


def test_rational_and_float_routes_agree():
    # identical instance fed once with exact fractions, once with floats
    for trial in range(40):
        rng = rng_from(12, trial)
        space = random_metric_space(rng, 5)
        p_exact, q_exact = random_rational_pair(rng, space, max_support=4,
                                                den=int(rng.integers(2, 9)))
        p_float = DiscreteMeasure(space, list(p_exact.support),
                                  [float(w) for w in p_exact.fractions])
        q_float = DiscreteMeasure(space, list(q_exact.support),
                                  [float(w) for w in q_exact.fractions])
        assert p_float.fractions is None
        exact_cost = w1_flow(p_exact, q_exact).cost
        float_cost = w1_flow(p_float, q_float).cost
        assert abs(exact_cost - float_cost) <= 1e-9


def test_assignment_route_on_uniform_pairs():
    for trial in range(40):
        rng = rng_from(13, trial)
        space = random_metric_space(rng, 6)
        n = int(rng.integers(1, 6))
        a = MultiSet(space, rng.integers(0, 6, size=n).tolist())
        b = MultiSet(space, rng.integers(0, 6, size=n).tolist())
        p = DiscreteMeasure.from_rational(space, list(range(6)),
                          np.bincount(a.entries, minlength=6).tolist(), n)
        q = DiscreteMeasure.from_rational(space, list(range(6)),
                          np.bincount(b.entries, minlength=6).tolist(), n)
        assign = w1_assignment(p, q)
        flow = w1_flow(p, q)
        assert assign.cost == pytest.approx(flow.cost, abs=1e-9)
        assert validate_coupling(assign.coupling) == []
        assert assign.gap <= 1e-8


def test_auto_solver_picks_assignment_for_uniform(line3):
    p = DiscreteMeasure(line3, [0, 1], [Fraction(1, 2), Fraction(1, 2)])
    q = DiscreteMeasure(line3, [1, 2], [Fraction(1, 2), Fraction(1, 2)])
    assert wasserstein1(p, q).solver == "assignment"
    # mismatched denominators lift to their lcm and still assign
    r = DiscreteMeasure(line3, [0, 1, 2], [Fraction(1, 3)] * 3)
    lifted = wasserstein1(p, r)
    assert lifted.solver == "assignment"
    assert lifted.cost == pytest.approx(w1_flow(p, r).cost, abs=1e-12)
    # non-uniform float weights force the flow route
    s = DiscreteMeasure(line3, [0, 1], [0.3, 0.7])
    assert wasserstein1(s, q).solver == "flow"
    # a huge common multiset size also forces flow
    big = DiscreteMeasure(line3, [0, 1], [Fraction(1, 257), Fraction(256, 257)])
    assert wasserstein1(big, q).solver == "flow"


def test_brute_solver_cross_checks(half_half, quarter_three):
    result = wasserstein1(half_half, quarter_three, solver="brute")
    assert result.solver == "brute"
    assert result.cost == pytest.approx(1.25, abs=1e-15)


def test_solver_name_validation(half_half, quarter_three):
    with pytest.raises(ValidationError, match="unknown solver"):
        wasserstein1(half_half, quarter_three, solver="simplex")


def test_bruteforce_requires_rational(line3):
    p = DiscreteMeasure(line3, [0, 1], [0.3, 0.7])
    q = dirac(line3, 2)
    with pytest.raises(ValidationError, match="exact weights"):
        w1_bruteforce(p, q)


def test_mismatched_spaces_rejected(line3, line4):
    with pytest.raises(ValidationError, match="different spaces"):
        w1_flow(dirac(line3, 0), dirac(line4, 0))


def test_w1_is_a_metric_on_random_instances():
    for trial in range(30):
        rng = rng_from(14, trial)
        space = random_metric_space(rng, 5)
        ms = [random_measure(rng, space, max_support=3) for _ in range(3)]
        p, q, r = ms
        dpq = wasserstein1(p, q).cost
        dqp = wasserstein1(q, p).cost
        assert dpq == pytest.approx(dqp, abs=1e-9)
        assert wasserstein1(p, p).cost <= 1e-12
        dqr = wasserstein1(q, r).cost
        dpr = wasserstein1(p, r).cost
        assert dpr <= dpq + dqr + 1e-9


def test_mixture_contraction():
    # W1(mix(t,p,r), mix(t,q,r)) <= t * W1(p,q): mixing with a common tail contracts
    for trial in range(20):
        rng = rng_from(15, trial)
        space = random_metric_space(rng, 5)
        p, q = random_rational_pair(rng, space, max_support=3, den=4)
        r = random_measure(rng, space, max_support=3)
        lam = Fraction(int(rng.integers(0, 9)), 8)
        left = mixture([lam, 1 - lam], [p, r])
        right = mixture([lam, 1 - lam], [q, r])
        assert wasserstein1(left, right).cost \
            <= float(lam) * wasserstein1(p, q).cost + 1e-9


def test_bistochastic_min_equals_multiset_distance(line4):
    a = MultiSet(line4, [0, 1, 2])
    b = MultiSet(line4, [1, 3, 3])
    from kantorovich import multiset_distance
    assert bistochastic_min(a, b) == pytest.approx(multiset_distance(a, b), abs=1e-9)


@st.composite
def rational_instances(draw):
    seed = draw(st.integers(min_value=0, max_value=9999))
    den = draw(st.integers(min_value=2, max_value=6))
    return seed, den


@given(rational_instances())
@settings(max_examples=50, deadline=None)
def test_duality_gap_property(case):
    seed, den = case
    rng = rng_from(16, seed, den)
    space = random_metric_space(rng, 5)
    p, q = random_rational_pair(rng, space, max_support=4, den=den)
    result = w1_flow(p, q)
    assert 0.0 <= result.gap <= 1e-8
    # the reported dual is feasible and attains the cost
    assert w1_dual_value(p, q, result.dual) == pytest.approx(result.cost, abs=1e-9)
