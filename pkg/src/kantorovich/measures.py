"""Finitely supported probability measures over a finite metric space.

Weights are stored as floats, but constructors accept exact rationals
(``int``/``Fraction`` entries, or an explicit numerator/denominator block)
and keep the exact values alongside the floats. Operations propagate the
exact block whenever every input carries one, which is what makes the
monad-law checks downstream come out at literally zero discrepancy.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .spaces import FiniteMetricSpace, same_space
from .tolerances import TAU_WEIGHT

_EXACT_TYPES = (int, Fraction)


def _is_exact(values) -> bool:
    return all(isinstance(w, _EXACT_TYPES) for w in values)


class DiscreteMeasure:
    """A probability measure with finite support, in canonical form.

    Canonical form: support indices strictly increasing, weights positive,
    duplicates merged, zero weights dropped. ``fractions`` is either None
    (float path) or a tuple of exact weights aligned with ``support``.
    """

    __slots__ = ("space", "support", "weights", "fractions")

    def __init__(self, space: FiniteMetricSpace, support: Sequence[int], weights: Sequence):
        if len(support) != len(weights):
            raise ValidationError("invariant.measure", "support/weights length mismatch")
        if len(support) == 0:
            raise ValidationError("invariant.measure", "empty support")
        exact = _is_exact(weights)

        merged: dict[int, object] = {}
        for raw_idx, w in sorted(zip(support, weights), key=lambda kv: kv[0]):
            idx = int(raw_idx)
            if idx < 0 or idx >= space.n:
                raise ValidationError("invariant.measure", f"support index {idx} outside space")
            if exact:
                merged[idx] = merged.get(idx, Fraction(0)) + Fraction(w)
            else:
                merged.setdefault(idx, []).append(float(w))

        supp: list[int] = []
        vals: list = []
        for idx in sorted(merged):
            w = merged[idx] if exact else math.fsum(merged[idx])
            if (exact and w == 0) or (not exact and w == 0.0):
                continue
            if w < 0:
                raise ValidationError("invariant.measure", f"negative weight at index {idx}")
            supp.append(idx)
            vals.append(w)
        if not supp:
            raise ValidationError("invariant.measure", "empty support after dropping zeros")

        total = float(sum(vals)) if exact else math.fsum(vals)
        if abs(total - 1.0) > TAU_WEIGHT:
            raise ValidationError("invariant.measure", f"weights sum to {total!r}, not 1")

        self.space = space
        self.support = tuple(supp)
        self.weights = np.array([float(w) for w in vals])
        self.weights.setflags(write=False)
        self.fractions = tuple(vals) if exact else None

    @classmethod
    def from_rational(cls, space: FiniteMetricSpace, support: Sequence[int],
                      numerators: Sequence[int], denominator: int) -> "DiscreteMeasure":
        if denominator <= 0:
            raise ValidationError("invariant.measure", "denominator must be positive")
        weights = [Fraction(int(k), int(denominator)) for k in numerators]
        return cls(space, support, weights)

    @property
    def denominator(self) -> int | None:
        """Common denominator of the exact weights, None on the float path."""
        if self.fractions is None:
            return None
        return math.lcm(*(w.denominator for w in self.fractions))

    def weight_of(self, index: int) -> float:
        try:
            return float(self.weights[self.support.index(index)])
        except ValueError:
            return 0.0

    def fraction_of(self, index: int) -> Fraction:
        if self.fractions is None:
            raise ValidationError("invariant.measure", "measure has no exact weights")
        try:
            return self.fractions[self.support.index(index)]
        except ValueError:
            return Fraction(0)

    def canonical_key(self):
        """Hashable identity used to deduplicate measures in nested rosters."""
        if self.fractions is not None:
            return (self.support, self.fractions)
        return (self.support, tuple(float(w) for w in self.weights))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{i}:{w:.4g}" for i, w in zip(self.support, self.weights))
        return f"DiscreteMeasure({{{pairs}}})"


def dirac(space: FiniteMetricSpace, x: int) -> DiscreteMeasure:
    """Point mass at roster index x."""
    return DiscreteMeasure(space, [x], [Fraction(1)])


def pushforward(f: Sequence[int] | Callable[[int], int], p: DiscreteMeasure,
                codomain: FiniteMetricSpace | None = None) -> DiscreteMeasure:
    """Image measure of p under an index map f: X -> Y.

    f is a full index array over X or a callable on indices; the codomain
    defaults to p's own space.
    """
    target = codomain if codomain is not None else p.space
    if callable(f):
        mapped = [int(f(i)) for i in p.support]
    else:
        arr = list(f)
        if len(arr) != p.space.n:
            raise ValidationError("invariant.map", f"index map must have length {p.space.n}")
        mapped = [int(arr[i]) for i in p.support]
    weights = p.fractions if p.fractions is not None else list(p.weights)
    return DiscreteMeasure(target, mapped, weights)


def mixture(coeffs: Sequence, measures: Sequence[DiscreteMeasure]) -> DiscreteMeasure:
    """Convex combination sum_k coeffs[k] * measures[k] on a shared space."""
    if len(coeffs) != len(measures) or not measures:
        raise ValidationError("invariant.weights", "need one coefficient per measure")
    space = measures[0].space
    for m in measures[1:]:
        if not same_space(space, m.space):
            raise ValidationError("invariant.measure", "mixture components live on different spaces")
    if any((float(c) if not isinstance(c, _EXACT_TYPES) else c) < 0 for c in coeffs):
        raise ValidationError("invariant.weights", "mixture coefficients must be nonnegative")
    total = math.fsum(float(c) for c in coeffs)
    if abs(total - 1.0) > TAU_WEIGHT:
        raise ValidationError("invariant.weights", f"mixture coefficients sum to {total!r}")

    exact = _is_exact(coeffs) and all(m.fractions is not None for m in measures)
    support: list[int] = []
    weights: list = []
    for c, m in zip(coeffs, measures):
        if exact:
            c = Fraction(c)
            if c == 0:
                continue
            support.extend(m.support)
            weights.extend(c * w for w in m.fractions)
        else:
            c = float(c)
            if c == 0.0:
                continue
            support.extend(m.support)
            weights.extend(c * w for w in m.weights)
    return DiscreteMeasure(space, support, weights)


def first_moment(p: DiscreteMeasure, x0: int) -> float:
    """Mean distance from x0 to p: sum_i w_i d(x0, x_i)."""
    if x0 < 0 or x0 >= p.space.n:
        raise ValidationError("invariant.measure", f"index {x0} outside space")
    return math.fsum(w * p.space.d(x0, i) for i, w in zip(p.support, p.weights))


def weight_discrepancy(p: DiscreteMeasure, q: DiscreteMeasure) -> float:
    """Worst pointwise weight difference over the union of supports.

    Exact (and so exactly 0.0 for equal measures) when both measures carry
    exact weights.
    """
    if not same_space(p.space, q.space):
        return math.inf
    exact = p.fractions is not None and q.fractions is not None
    worst: object = Fraction(0) if exact else 0.0
    for idx in sorted(set(p.support) | set(q.support)):
        if exact:
            diff = abs(p.fraction_of(idx) - q.fraction_of(idx))
        else:
            diff = abs(p.weight_of(idx) - q.weight_of(idx))
        if diff > worst:
            worst = diff
    return float(worst)


def measures_equal(p: DiscreteMeasure, q: DiscreteMeasure,
                   tau_weight: float = TAU_WEIGHT) -> bool:
    """Same support, weights agreeing pointwise within tau_weight."""
    return (same_space(p.space, q.space) and p.support == q.support
            and weight_discrepancy(p, q) <= tau_weight)
