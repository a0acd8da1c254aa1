"""Randomized law suite: every commuting square and isometry, as one runner.

Each law draws its instances from a dedicated seed stream, reports the worst
observed discrepancy over the requested trials, and passes when that stays
within its tolerance. Structural laws (flattenings, quotients, exact weight
arithmetic) are held to 1e-12; anything crossing a solver boundary gets the
solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graded import (check_assoc_square, check_double_quotient, curry_flatten,
                     nested_tuple_distance, unit_discrepancy_multiset,
                     unit_discrepancy_tuple)
from .measures import dirac, first_moment, mixture, pushforward
from .monad import (check_expectation_flatten, check_iota_isometry, check_monad_laws,
                    check_ppx_square, empirical_sym)
from .power import (multiset_distance, multiset_distance_bruteforce, precompose,
                    quotient, repeat_embedding, tuple_distance)
from .samplers import (MeasureSampler, random_euclidean_space, random_finunif,
                       random_measure, random_multiset, random_nested_multiset,
                       random_nested_tuple, random_rational_pair, random_space,
                       random_tuple, rng_from)
from .spaces import EuclideanSpace
from .tolerances import EXACT_TOL, TAU_SOLVER
from .transport import w1_bruteforce, w1_flow, wasserstein1


@dataclass(frozen=True)
class LawResult:
    law: str
    trials: int
    worst_discrepancy: float
    tolerance: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "trials": self.trials,
            "worst_discrepancy": self.worst_discrepancy,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _result(law: str, trials: int, worst: float, tol: float) -> LawResult:
    return LawResult(law, trials, float(worst), tol, bool(worst <= tol))


def run_law_suite(trials: int = 100, seed: int = 0, max_points: int = 6,
                  max_support: int = 4) -> list[LawResult]:
    """Run every law check; the CLI ``laws`` command is a thin wrapper."""
    out: list[LawResult] = []

    monad_worst = check_monad_laws(MeasureSampler(max_points, max_support), trials,
                                   seed=seed)
    out.append(_result("monad.left_unit", trials, monad_worst["left_unit"], EXACT_TOL))
    out.append(_result("monad.right_unit", trials, monad_worst["right_unit"], EXACT_TOL))
    out.append(_result("monad.associativity", trials, monad_worst["associativity"],
                       EXACT_TOL))

    out.append(_result("dirac.isometry", trials,
                       _sweep(trials, seed, 11, _dirac_isometry), TAU_SOLVER))
    out.append(_result("empirical.isometry", trials,
                       _sweep(trials, seed, 12, _empirical_isometry), TAU_SOLVER))
    out.append(_result("transport.first_moment", trials,
                       _sweep(trials, seed, 13, _first_moment), TAU_SOLVER))
    out.append(_result("transport.mixture_contraction", trials,
                       _sweep(trials, seed, 14, _mixture_contraction), TAU_SOLVER))
    out.append(_result("transport.pushforward_short", trials,
                       _sweep(trials, seed, 15, _pushforward_short), TAU_SOLVER))
    out.append(_result("transport.embedding_invariance", trials,
                       _sweep(trials, seed, 16, _embedding_invariance), TAU_SOLVER))
    out.append(_result("transport.duality_gap", trials,
                       _sweep(trials, seed, 17, _duality_gap), TAU_SOLVER))
    out.append(_result("transport.flow_vs_brute", trials,
                       _sweep(trials, seed, 18, _flow_vs_brute), TAU_SOLVER))
    out.append(_result("transport.symmetry", trials,
                       _sweep(trials, seed, 19, _w1_symmetry), TAU_SOLVER))
    out.append(_result("transport.triangle", trials,
                       _sweep(trials, seed, 20, _w1_triangle), TAU_SOLVER))

    out.append(_result("power.assignment_vs_lp", trials,
                       _sweep(trials, seed, 21, _assignment_vs_lp), TAU_SOLVER))
    out.append(_result("power.repeat_isometry", trials,
                       _sweep(trials, seed, 22, _repeat_isometry), TAU_SOLVER))
    out.append(_result("power.precompose_isometry", trials,
                       _sweep(trials, seed, 23, _precompose_isometry), EXACT_TOL))
    out.append(_result("power.quotient_naturality", trials,
                       _sweep(trials, seed, 24, _quotient_naturality), 0.0))

    out.append(_result("graded.unit_triangles", trials,
                       _sweep(trials, seed, 25, _graded_units), 0.0))
    out.append(_result("graded.associativity_tuple", trials,
                       _sweep(trials, seed, 26, _assoc_tuple), 0.0))
    out.append(_result("graded.associativity_multiset", trials,
                       _sweep(trials, seed, 27, _assoc_multiset), 0.0))
    out.append(_result("graded.double_quotient", trials,
                       _sweep(trials, seed, 28, _double_quotient), 0.0))
    out.append(_result("graded.flatten_isometry", trials,
                       _sweep(trials, seed, 29, _flatten_isometry), EXACT_TOL))

    out.append(_result("monad.expectation_flatten", trials,
                       _sweep(trials, seed, 30, _expectation_flatten), 0.0))
    out.append(_result("monad.ppx_square", trials,
                       _sweep(trials, seed, 31, _ppx_square), 0.0))
    return out


def _sweep(trials: int, seed: int, stream: int, check) -> float:
    rng = rng_from(seed, stream)
    worst = 0.0
    for _ in range(trials):
        worst = max(worst, check(rng))
    return worst


# --- individual checks (each returns one trial's discrepancy) --------------


def _dirac_isometry(rng) -> float:
    space = random_space(rng)
    x, y = (int(v) for v in rng.integers(0, space.n, size=2))
    got = w1_flow(dirac(space, x), dirac(space, y)).cost
    return abs(got - space.d(x, y))


def _empirical_isometry(rng) -> float:
    space = random_space(rng)
    n = int(rng.integers(1, 5))
    return check_iota_isometry(random_multiset(rng, space, n),
                               random_multiset(rng, space, n))


def _first_moment(rng) -> float:
    space = random_space(rng)
    p = random_measure(rng, space)
    x0 = int(rng.integers(0, space.n))
    got = w1_flow(dirac(space, x0), p).cost
    return abs(got - first_moment(p, x0))


def _mixture_contraction(rng) -> float:
    space = random_space(rng)
    q1 = random_measure(rng, space)
    q2 = random_measure(rng, space)
    p = random_measure(rng, space)
    lam = Fraction(int(rng.integers(0, 9)), 8)
    lhs = w1_flow(mixture([lam, 1 - lam], [q1, p]),
                  mixture([lam, 1 - lam], [q2, p])).cost
    rhs = w1_flow(q1, q2).cost
    return abs(lhs - float(lam) * rhs)


def _short_map_instance(rng):
    """X and its image under a coordinatewise-contracted affine map."""
    dim = int(rng.integers(1, 4))
    n = int(rng.integers(2, 7))
    space = random_euclidean_space(rng, n, dim, "l2")
    matrix = rng.uniform(-1.0, 1.0, size=(dim, dim))
    sigma = float(np.linalg.svd(matrix, compute_uv=False)[0])
    if sigma > 0:
        matrix /= (sigma * 1.0000001)
    image = space.coords @ matrix.T
    image_space = EuclideanSpace(image, "l2").to_metric()
    return space, image_space


def _pushforward_short(rng) -> float:
    space, image_space = _short_map_instance(rng)
    p = random_measure(rng, space)
    q = random_measure(rng, space)
    identity = list(range(space.n))
    before = w1_flow(p, q).cost
    after = w1_flow(pushforward(identity, p, image_space),
                    pushforward(identity, q, image_space)).cost
    return max(0.0, after - before)


def _embedding_invariance(rng) -> float:
    dim = int(rng.integers(1, 4))
    small = int(rng.integers(2, 6))
    extra = int(rng.integers(1, 4))
    big_space = random_euclidean_space(rng, small + extra, dim, "l2")
    small_space = EuclideanSpace(big_space.coords[:small], "l2").to_metric()
    p = random_measure(rng, small_space)
    q = random_measure(rng, small_space)
    identity = list(range(small))
    inside = w1_flow(p, q).cost
    outside = w1_flow(pushforward(identity, p, big_space),
                      pushforward(identity, q, big_space)).cost
    return abs(inside - outside)


def _duality_gap(rng) -> float:
    space = random_space(rng)
    p, q = random_rational_pair(rng, space, den=int(rng.integers(2, 8)))
    return wasserstein1(p, q, "flow").gap


def _flow_vs_brute(rng) -> float:
    space = random_space(rng)
    p, q = random_rational_pair(rng, space, den=int(rng.integers(2, 7)))
    return abs(w1_flow(p, q).cost - w1_bruteforce(p, q))


def _w1_symmetry(rng) -> float:
    space = random_space(rng)
    p = random_measure(rng, space)
    q = random_measure(rng, space)
    return abs(w1_flow(p, q).cost - w1_flow(q, p).cost)


def _w1_triangle(rng) -> float:
    space = random_space(rng)
    p = random_measure(rng, space)
    q = random_measure(rng, space)
    r = random_measure(rng, space)
    return max(0.0, w1_flow(p, r).cost - w1_flow(p, q).cost - w1_flow(q, r).cost)


def _assignment_vs_lp(rng) -> float:
    space = random_space(rng)
    n = int(rng.integers(1, 6))
    a = random_multiset(rng, space, n)
    b = random_multiset(rng, space, n)
    lp = w1_flow(empirical_sym(a), empirical_sym(b)).cost
    lsa = multiset_distance(a, b)
    brute = multiset_distance_bruteforce(a, b)
    return max(abs(lp - lsa), abs(lsa - brute))


def _repeat_isometry(rng) -> float:
    space = random_space(rng)
    m = int(rng.integers(1, 5))
    reps = int(rng.integers(1, 4))
    a = random_multiset(rng, space, m)
    b = random_multiset(rng, space, m)
    return abs(multiset_distance(repeat_embedding(a, reps), repeat_embedding(b, reps))
               - multiset_distance(a, b))


def _precompose_isometry(rng) -> float:
    space = random_space(rng)
    t_len = int(rng.integers(1, 5))
    fiber = int(rng.integers(1, 4))
    phi = random_finunif(rng, t_len, fiber)
    s = random_tuple(rng, space, t_len)
    t = random_tuple(rng, space, t_len)
    return abs(tuple_distance(precompose(phi, s), precompose(phi, t))
               - tuple_distance(s, t))


def _quotient_naturality(rng) -> float:
    space = random_space(rng)
    t_len = int(rng.integers(1, 5))
    fiber = int(rng.integers(1, 4))
    phi = random_finunif(rng, t_len, fiber)
    t = random_tuple(rng, space, t_len)
    via_precompose = quotient(precompose(phi, t))
    via_repeat = repeat_embedding(quotient(t), fiber)
    if via_precompose.entries == via_repeat.entries:
        return 0.0
    return multiset_distance(via_precompose, via_repeat)


def _graded_units(rng) -> float:
    space = random_space(rng)
    n = int(rng.integers(1, 5))
    return max(unit_discrepancy_tuple(random_tuple(rng, space, n)),
               unit_discrepancy_multiset(random_multiset(rng, space, n)))


def _grid3(rng, space):
    outer, mid, inner = (int(v) for v in rng.integers(1, 4, size=3))
    return [[[int(v) for v in rng.integers(0, space.n, size=inner)]
             for _ in range(mid)] for _ in range(outer)]


def _assoc_tuple(rng) -> float:
    space = random_space(rng)
    return check_assoc_square(space, _grid3(rng, space), symmetrized=False)


def _assoc_multiset(rng) -> float:
    space = random_space(rng)
    return check_assoc_square(space, _grid3(rng, space), symmetrized=True)


def _double_quotient(rng) -> float:
    space = random_space(rng)
    nt = random_nested_tuple(rng, space, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    return check_double_quotient(nt)


def _flatten_isometry(rng) -> float:
    space = random_space(rng)
    outer, inner = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    a = random_nested_tuple(rng, space, outer, inner)
    b = random_nested_tuple(rng, space, outer, inner)
    return abs(nested_tuple_distance(a, b)
               - tuple_distance(curry_flatten(a), curry_flatten(b)))


def _expectation_flatten(rng) -> float:
    space = random_space(rng)
    nms = random_nested_multiset(rng, space, int(rng.integers(1, 4)),
                                 int(rng.integers(1, 4)))
    return check_expectation_flatten(nms)


def _ppx_square(rng) -> float:
    space = random_space(rng)
    nms = random_nested_multiset(rng, space, int(rng.integers(1, 4)),
                                 int(rng.integers(1, 4)))
    return 0.0 if check_ppx_square(nms) else 1.0
