"""The probability monad at finite scale.

Unit: point masses. Multiplication: expected distribution of a measure on
measures. Empirical maps send tuples/multisets to uniform measures, and the
squares tying all of these together are checked here with numeric
discrepancies (exactly 0.0 on the rational path).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .graded import NestedMultiSet, flatten_multiset
from .measures import DiscreteMeasure, dirac, mixture, weight_discrepancy
from .power import MultiSet, PointTuple, multiset_distance
from .spaces import FiniteMetricSpace, same_space
from .tolerances import TAU_WEIGHT
from .transport import w1_flow


class NestedMeasure:
    """A measure over measures: an outer weight vector on a deduplicated,
    canonically ordered roster of inner measures."""

    __slots__ = ("space", "inner", "outer_weights", "outer_fractions")

    def __init__(self, space: FiniteMetricSpace, inner: Sequence[DiscreteMeasure],
                 outer_weights: Sequence):
        if len(inner) != len(outer_weights) or not inner:
            raise ValidationError("invariant.measure", "need one outer weight per inner measure")
        for m in inner:
            if not same_space(space, m.space):
                raise ValidationError("invariant.measure", "inner measure on a different space")
        exact = (all(isinstance(w, (int, Fraction)) for w in outer_weights)
                 and all(m.fractions is not None for m in inner))

        merged: dict = {}
        keep: dict = {}
        for m, w in zip(inner, outer_weights):
            key = m.canonical_key()
            if exact:
                merged[key] = merged.get(key, Fraction(0)) + Fraction(w)
            else:
                merged.setdefault(key, []).append(float(w))
            keep.setdefault(key, m)

        roster: list[DiscreteMeasure] = []
        weights: list = []
        for key in sorted(merged, key=_roster_order):
            w = merged[key] if exact else math.fsum(merged[key])
            if (exact and w == 0) or (not exact and w == 0.0):
                continue
            if w < 0:
                raise ValidationError("invariant.measure", "negative outer weight")
            roster.append(keep[key])
            weights.append(w)
        if not roster:
            raise ValidationError("invariant.measure", "empty outer support")

        total = float(sum(weights)) if exact else math.fsum(weights)
        if abs(total - 1.0) > TAU_WEIGHT:
            raise ValidationError("invariant.measure", f"outer weights sum to {total!r}")

        self.space = space
        self.inner = tuple(roster)
        self.outer_weights = np.array([float(w) for w in weights])
        self.outer_weights.setflags(write=False)
        self.outer_fractions = tuple(weights) if exact else None

    def __len__(self) -> int:
        return len(self.inner)

    def __repr__(self) -> str:
        return f"NestedMeasure(outer={len(self.inner)})"


def _roster_order(key) -> tuple:
    support, weights = key
    return (support, tuple(float(w) for w in weights))


def nested_weight_discrepancy(a: NestedMeasure, b: NestedMeasure) -> float:
    """Worst weight difference between two nested measures with matching
    rosters; infinity when the rosters differ as sets."""
    if len(a) != len(b):
        return math.inf
    worst = 0.0
    for ma, mb, wa, wb in zip(a.inner, b.inner, a.outer_weights, b.outer_weights):
        if ma.support != mb.support:
            return math.inf
        worst = max(worst, weight_discrepancy(ma, mb))
        worst = max(worst, abs(float(wa) - float(wb)))
    if a.outer_fractions is not None and b.outer_fractions is not None:
        exact = max(abs(x - y) for x, y in zip(a.outer_fractions, b.outer_fractions))
        worst = max(worst, float(exact))
    return worst


# ---------------------------------------------------------------------------
# unit, empirical maps, expectation


def empirical(t: PointTuple) -> DiscreteMeasure:
    """Uniform measure of an ordered sample; weights are exact k/n."""
    n = len(t)
    counts: dict[int, int] = {}
    for x in t.entries:
        counts[x] = counts.get(x, 0) + 1
    supp = sorted(counts)
    return DiscreteMeasure(t.space, supp, [Fraction(counts[x], n) for x in supp])


def empirical_sym(ms: MultiSet) -> DiscreteMeasure:
    """Uniform measure of a multiset; the order-free empirical map."""
    return empirical(PointTuple(ms.space, ms.entries))


def multiset_from_measure(p: DiscreteMeasure, size: int | None = None) -> MultiSet:
    """Constructive witness that rational measures are empirical: a multiset
    whose empirical distribution is exactly p.

    ``size`` defaults to p's common denominator and must be a multiple of it.
    """
    if p.fractions is None:
        raise ValidationError("invariant.measure", "measure has no exact weights")
    den = p.denominator
    n = den if size is None else int(size)
    if n % den != 0:
        raise ValidationError("invariant.measure", f"size {n} is not a multiple of {den}")
    entries: list[int] = []
    for x, w in zip(p.support, p.fractions):
        entries.extend([x] * int(w * n))
    return MultiSet(p.space, entries)


def nested_dirac(p: DiscreteMeasure) -> NestedMeasure:
    """Point mass at a measure (the unit one level up)."""
    return NestedMeasure(p.space, [p], [Fraction(1)])


def dirac_kernel(space: FiniteMetricSpace) -> Callable[[int], DiscreteMeasure]:
    """The kernel x -> delta_x."""
    return lambda i: dirac(space, i)


def kernel_pushforward(kernel: Callable[[int], DiscreteMeasure],
                       p: DiscreteMeasure) -> NestedMeasure:
    """Push p forward along a kernel from points to measures."""
    inner = [kernel(x) for x in p.support]
    weights = p.fractions if p.fractions is not None else list(p.weights)
    return NestedMeasure(p.space, inner, weights)


def expectation(mu: NestedMeasure) -> DiscreteMeasure:
    """Expected distribution: mix the inner measures by the outer weights."""
    coeffs = (mu.outer_fractions if mu.outer_fractions is not None
              else list(mu.outer_weights))
    return mixture(coeffs, mu.inner)


def nested_expectation_outer(outer_coeffs: Sequence,
                             nested: Sequence[NestedMeasure]) -> NestedMeasure:
    """Flatten the two outermost layers of a depth-3 measure, leaving the
    innermost layer untouched."""
    if len(outer_coeffs) != len(nested) or not nested:
        raise ValidationError("invariant.measure", "need one coefficient per nested measure")
    space = nested[0].space
    inner: list[DiscreteMeasure] = []
    weights: list = []
    exact = (all(isinstance(c, (int, Fraction)) for c in outer_coeffs)
             and all(nu.outer_fractions is not None for nu in nested))
    for c, nu in zip(outer_coeffs, nested):
        if exact:
            c = Fraction(c)
            inner.extend(nu.inner)
            weights.extend(c * w for w in nu.outer_fractions)
        else:
            c = float(c)
            inner.extend(nu.inner)
            weights.extend(c * float(w) for w in nu.outer_weights)
    return NestedMeasure(space, inner, weights)


# ---------------------------------------------------------------------------
# commuting squares


def check_iota_isometry(a: MultiSet, b: MultiSet) -> float:
    """|W1(empirical a, empirical b) - multiset distance|.

    The two sides are computed by independent solvers (flow vs assignment).
    """
    flow = w1_flow(empirical_sym(a), empirical_sym(b)).cost
    return abs(flow - multiset_distance(a, b))


def check_expectation_flatten(nms: NestedMultiSet) -> float:
    """Empirical-then-expectation against flatten-then-empirical.

    Exact 0.0: both sides have weights with denominator outer*inner.
    """
    via_measures = expectation(_ppx_image(nms))
    via_flatten = empirical_sym(flatten_multiset(nms))
    return weight_discrepancy(via_measures, via_flatten)


def _ppx_image(nms: NestedMultiSet) -> NestedMeasure:
    """Empirical measure on empirical measures of the inner multisets."""
    n = nms.outer
    inner = [empirical_sym(s) for s in nms.inners]
    return NestedMeasure(nms.space, inner, [Fraction(1, n)] * n)


def check_ppx_square(nms: NestedMultiSet) -> bool:
    """Both factorizations of multisets-of-multisets into nested measures
    must produce the same nested measure.

    Down-right: empirical over the inner multisets as points, then empirical
    on each point. Right-down: empirical on each inner multiset, then
    empirical over the resulting measures.
    """
    right_down = _ppx_image(nms)

    counts: dict[MultiSet, int] = {}
    for s in nms.inners:
        counts[s] = counts.get(s, 0) + 1
    n = nms.outer
    down_right = NestedMeasure(
        nms.space,
        [empirical_sym(s) for s in counts],
        [Fraction(k, n) for k in counts.values()],
    )
    return nested_weight_discrepancy(right_down, down_right) == 0.0


# ---------------------------------------------------------------------------
# monad laws


def check_monad_laws(sampler, trials: int, seed: int = 0,
                     exact: bool = True) -> dict[str, float]:
    """Worst observed discrepancy for the three monad laws.

    ``sampler`` follows the MeasureSampler protocol: ``sampler.space(rng)``
    yields a fresh space per trial, ``sampler.measure(rng, space)`` measures
    on it. With exact-weight samples every discrepancy is exactly 0.0.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    worst = {"left_unit": 0.0, "right_unit": 0.0, "associativity": 0.0}
    for _ in range(trials):
        space = sampler.space(rng)
        p = sampler.measure(rng, space)
        worst["left_unit"] = max(worst["left_unit"],
                                 weight_discrepancy(expectation(nested_dirac(p)), p))
        worst["right_unit"] = max(
            worst["right_unit"],
            weight_discrepancy(expectation(kernel_pushforward(dirac_kernel(space), p)), p))

        nested = []
        k = int(rng.integers(1, 4))
        for _i in range(k):
            js = int(rng.integers(1, 4))
            inner = [sampler.measure(rng, space) for _j in range(js)]
            nested.append(NestedMeasure(space, inner, _coeffs(rng, js, exact)))
        outer = _coeffs(rng, k, exact)

        inner_first = expectation(NestedMeasure(space, [expectation(nu) for nu in nested], outer))
        outer_first = expectation(nested_expectation_outer(outer, nested))
        worst["associativity"] = max(worst["associativity"],
                                     weight_discrepancy(inner_first, outer_first))
    return worst


def _coeffs(rng: np.random.Generator, k: int, exact: bool, den: int = 16):
    """Random simplex weights: exact fractions or strictly positive floats."""
    if exact:
        cuts = sorted(int(c) for c in rng.integers(0, den + 1, size=k - 1))
        parts = []
        prev = 0
        for c in [*cuts, den]:
            parts.append(Fraction(c - prev, den))
            prev = c
        return parts
    raw = rng.random(k) + 1e-3
    return list(raw / raw.sum())
