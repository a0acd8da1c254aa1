"""Constructive approximation of measures by empirical distributions.

Weight rationalization and ball truncation mirror the two steps of the
density argument for empirical measures; each returns a report carrying the
achieved transport error and, for rationalization, the a-priori bound
(n-1) * epsilon * diam(supp p). Sampling is inverse-CDF over the canonical
support order with a named, seeded generator.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .measures import DiscreteMeasure
from .monad import empirical_sym
from .power import MultiSet
from .samplers import RNG_ALGORITHM, rng_from
from .transport import w1_flow, wasserstein1

__all__ = [
    "ApproximationReport", "rationalize", "truncate_to_ball",
    "sample_empirical", "convergence_study", "RNG_ALGORITHM",
]


@dataclass(frozen=True)
class ApproximationReport:
    target: DiscreteMeasure
    approximant: DiscreteMeasure
    w1_error: float
    bound: float | None
    params: dict


def _exact_weights(p: DiscreteMeasure) -> list[Fraction]:
    if p.fractions is not None:
        return list(p.fractions)
    return [Fraction(float(w)) for w in p.weights]


def rationalize(p: DiscreteMeasure, epsilon: float) -> ApproximationReport:
    """Round weights down to multiples of 1/K, K = ceil(1/epsilon), and give
    the slack to the last support point.

    Each rounded weight loses less than epsilon, so the transport error is
    below (n-1) * epsilon * diam(supp p); the whole construction runs in
    exact arithmetic, hence weights that are already multiples of 1/K come
    back unchanged with error exactly 0.
    """
    eps = Fraction(float(epsilon))
    if eps <= 0:
        raise ValidationError("invariant.weights", "epsilon must be positive")
    k = max(1, math.ceil(1 / eps))
    weights = _exact_weights(p)

    rounded = [Fraction(math.floor(w * k), k) for w in weights[:-1]]
    rounded.append(1 - sum(rounded, Fraction(0)))
    q = DiscreteMeasure(p.space, list(p.support), rounded)

    n = len(p.support)
    diam = 0.0
    for a in p.support:
        for b in p.support:
            diam = max(diam, p.space.d(a, b))
    bound = Fraction(n - 1) * eps * Fraction(diam)
    error = 0.0 if n == 1 else w1_flow(p, q).cost
    return ApproximationReport(
        target=p, approximant=q, w1_error=error, bound=float(bound),
        params={"epsilon": float(epsilon), "denominator": k})


def truncate_to_ball(p: DiscreteMeasure, center: int, radius: float) -> ApproximationReport:
    """Move all mass strictly outside the closed ball B(center, radius) onto
    the center.

    The transport error of this move is exactly the outside first moment
    sum_{d(x_i, center) > radius} w_i d(x_i, center); the report carries that
    closed form as ``bound`` and the flow-solver value as ``w1_error`` so the
    two derivations stay cross-checkable.
    """
    if center < 0 or center >= p.space.n:
        raise ValidationError("invariant.measure", f"center {center} outside space")
    if radius < 0:
        raise ValidationError("invariant.measure", "radius must be nonnegative")
    weights = _exact_weights(p)
    inside: list[tuple[int, Fraction]] = []
    moved = Fraction(0)
    formula = Fraction(0)
    for x, w in zip(p.support, weights):
        if p.space.d(center, x) > radius:
            moved += w
            formula += w * Fraction(p.space.d(center, x))
        else:
            inside.append((x, w))

    support = [x for x, _ in inside]
    vals = [w for _, w in inside]
    if moved > 0:
        support.append(center)
        vals.append(moved)
    q = DiscreteMeasure(p.space, support, vals)
    error = w1_flow(p, q).cost if moved > 0 else 0.0
    return ApproximationReport(
        target=p, approximant=q, w1_error=float(error), bound=float(formula),
        params={"center": int(center), "radius": float(radius)})


def sample_empirical(p: DiscreteMeasure, size: int, seed: int = 0) -> MultiSet:
    """Draw an empirical sample of the given size by inverse CDF over the
    canonical support order (generator: numpy PCG64)."""
    if size <= 0:
        raise ValidationError("invariant.tuple", "sample size must be positive")
    rng = rng_from(seed)
    cum = np.cumsum(p.weights)
    draws = rng.random(size)
    picks = np.searchsorted(cum, draws, side="right")
    picks = np.minimum(picks, len(p.support) - 1)
    return MultiSet(p.space, [p.support[int(i)] for i in picks])


def convergence_study(p: DiscreteMeasure, sizes, trials: int, seed: int = 0) -> list[dict]:
    """Median W1 between empirical samples and the target, per sample size.

    Each (size, trial) pair runs on its own seed stream, so studies are
    reproducible point by point.
    """
    if trials <= 0:
        raise ValidationError("invariant.weights", "trials must be positive")
    rows: list[dict] = []
    for n in sizes:
        n = int(n)
        values = []
        for t in range(trials):
            rng = rng_from(seed, n, t)
            cum = np.cumsum(p.weights)
            draws = rng.random(n)
            picks = np.minimum(np.searchsorted(cum, draws, side="right"),
                               len(p.support) - 1)
            sample = MultiSet(p.space, [p.support[int(i)] for i in picks])
            values.append(wasserstein1(empirical_sym(sample), p).cost)
        rows.append({"n": n, "median_w1": float(statistics.median(values)),
                     "trials": trials})
    return rows
