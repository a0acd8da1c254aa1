"""Convex algebras over normed carriers, barycenters, and their laws.

The carrier is all of R^dim under an l1/l2/linf norm; the structure map of
a measure over registered carrier points is its barycenter. Binary convex
combinations follow the convention c_lambda(x, y) = lambda*x + (1-lambda)*y
(the weight rides on the first argument), which is the reading under which
the parametric associativity identity nu = lambda*(1-mu)/(1-lambda*mu)
holds; the unit laws are then c_1(x, y) = x and c_0(x, y) = y. Axiom checks
take a ``weight_on_first`` flag so the mirrored convention stays testable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .measures import DiscreteMeasure, dirac
from .monad import NestedMeasure, expectation
from .samplers import simplex_floats, simplex_fractions
from .spaces import NORMS, EuclideanSpace, vector_distance
from .tolerances import TAU_WEIGHT


class ConvexAlgebra:
    """R^dim with a named norm and barycentric structure."""

    __slots__ = ("dim", "norm")

    def __init__(self, dim: int, norm: str = "l2"):
        if dim <= 0:
            raise ValidationError("invariant.algebra", "dimension must be positive")
        if norm not in NORMS:
            raise ValidationError("invariant.algebra", f"unknown norm {norm!r}")
        self.dim = int(dim)
        self.norm = norm

    def distance(self, x, y) -> float:
        return vector_distance(x, y, self.norm)

    def __repr__(self) -> str:
        return f"ConvexAlgebra(dim={self.dim}, norm={self.norm!r})"


class SimplexWeights:
    """A finite weight vector: nonnegative entries summing to 1.

    Exact entries (ints/Fractions) are kept exactly, mirroring measures.
    """

    __slots__ = ("entries", "fractions")

    def __init__(self, entries: Sequence):
        if len(entries) == 0:
            raise ValidationError("invariant.weights", "empty weight vector")
        exact = all(isinstance(w, (int, Fraction)) for w in entries)
        vals = [Fraction(w) for w in entries] if exact else [float(w) for w in entries]
        for w in vals:
            if w < 0:
                raise ValidationError("invariant.weights", "negative weight")
        total = float(sum(vals)) if exact else math.fsum(vals)
        if abs(total - 1.0) > TAU_WEIGHT:
            raise ValidationError("invariant.weights", f"weights sum to {total!r}")
        self.entries = tuple(float(w) for w in vals)
        self.fractions = tuple(vals) if exact else None

    def __len__(self) -> int:
        return len(self.entries)

    def __repr__(self) -> str:
        return f"SimplexWeights({list(self.entries)})"


def c_lambda(algebra: ConvexAlgebra, lam: float, x, y) -> np.ndarray:
    """Binary convex combination lam*x + (1-lam)*y."""
    lam = float(lam)
    if lam < 0.0 or lam > 1.0:
        raise ValidationError("invariant.weights", f"lambda {lam!r} outside [0, 1]")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (algebra.dim,) or y.shape != (algebra.dim,):
        raise ValidationError("invariant.algebra", "point dimension mismatch")
    return lam * x + (1.0 - lam) * y


def barycenter(algebra: ConvexAlgebra, p: DiscreteMeasure) -> np.ndarray:
    """Structure map: sum_i w_i x_i for a measure over registered points.

    The measure's space must carry coordinates (come from a EuclideanSpace
    roster) of the algebra's dimension.
    """
    coords = p.space.coords
    if coords is None:
        raise ValidationError("invariant.algebra", "measure's space has no registered points")
    if coords.shape[1] != algebra.dim:
        raise ValidationError("invariant.algebra", "carrier dimension mismatch")
    pts = coords[list(p.support)]
    return pts.T @ p.weights


def mean_point(points: Sequence[np.ndarray]) -> np.ndarray:
    """Barycenter of a multiset of carrier points (uniform weights)."""
    arr = np.asarray(points, dtype=float)
    return arr.mean(axis=0)


def operad_compose(nu: SimplexWeights, parts: Sequence[SimplexWeights]) -> SimplexWeights:
    """Substitute the part vectors into nu: entries nu_i * part_i[j], in order."""
    if len(parts) != len(nu):
        raise ValidationError("invariant.weights", "need one part per outer entry")
    exact = nu.fractions is not None and all(p.fractions is not None for p in parts)
    out: list = []
    if exact:
        for w, part in zip(nu.fractions, parts):
            out.extend(w * v for v in part.fractions)
    else:
        for w, part in zip(nu.entries, parts):
            out.extend(w * v for v in part.entries)
    return SimplexWeights(out)


# ---------------------------------------------------------------------------
# law checks


def _register(points: np.ndarray, norm: str) -> EuclideanSpace:
    return EuclideanSpace(points, norm)


def _random_points(rng: np.random.Generator, k: int, dim: int) -> np.ndarray:
    """Distinct random carrier points with single-digit coordinates."""
    seen: set[tuple[float, ...]] = set()
    out: list[list[float]] = []
    while len(out) < k:
        cand = np.round(rng.uniform(-8.0, 8.0, size=dim), 3)
        key = tuple(float(v) for v in cand)
        if key not in seen:
            seen.add(key)
            out.append([float(v) for v in cand])
    return np.array(out)


def _random_carrier_measure(rng: np.random.Generator, space, exact: bool) -> DiscreteMeasure:
    k = int(rng.integers(1, space.n + 1))
    support = [int(i) for i in rng.choice(space.n, size=k, replace=False)]
    if exact:
        weights: Sequence = simplex_fractions(rng, k, int(rng.integers(1, 13)))
    else:
        weights = simplex_floats(rng, k)
    return DiscreteMeasure(space, support, weights)


def check_metric_compat(algebra: ConvexAlgebra, trials: int, seed: int = 0) -> dict[str, float]:
    """Binary compatibility d(c_lam(x,z), c_lam(y,z)) = lam*d(x,y) (equality
    on normed carriers) and the generalized inequality
    d(bary(lam, xs), bary(lam, ys)) <= sum_i lam_i d(x_i, y_i).

    Returns worst equality discrepancy and worst inequality violation.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 201]))
    worst_eq = 0.0
    worst_violation = 0.0
    for _ in range(trials):
        x, y, z = rng.uniform(-8.0, 8.0, size=(3, algebra.dim))
        lam = float(rng.random())
        lhs = algebra.distance(c_lambda(algebra, lam, x, z), c_lambda(algebra, lam, y, z))
        worst_eq = max(worst_eq, abs(lhs - lam * algebra.distance(x, y)))

        n = int(rng.integers(1, 5))
        xs = rng.uniform(-8.0, 8.0, size=(n, algebra.dim))
        ys = rng.uniform(-8.0, 8.0, size=(n, algebra.dim))
        lams = np.array(simplex_floats(rng, n))
        left = algebra.distance(xs.T @ lams, ys.T @ lams)
        right = math.fsum(float(l) * algebra.distance(a, b)
                          for l, a, b in zip(lams, xs, ys))
        worst_violation = max(worst_violation, left - right)
    return {"binary_equality": worst_eq, "general_violation": max(worst_violation, 0.0)}


def convex_axioms(algebra: ConvexAlgebra, trials: int, seed: int = 0,
                  weight_on_first: bool = True) -> dict[str, float]:
    """Worst discrepancy for the four convex-space axioms under either
    convention for which argument carries the weight."""

    def comb(lam: float, x, y):
        return c_lambda(algebra, lam, x, y) if weight_on_first \
            else c_lambda(algebra, 1.0 - lam, x, y)

    rng = np.random.default_rng(np.random.SeedSequence([seed, 202]))
    worst = {"unitality": 0.0, "idempotency": 0.0, "commutativity": 0.0,
             "associativity": 0.0}
    for _ in range(trials):
        x, y, z = rng.uniform(-8.0, 8.0, size=(3, algebra.dim))
        lam, mu = float(rng.random()), float(rng.random())

        # endpoints: comb(0, x, y) hands back y when the weight rides on the
        # first argument, x under the mirrored reading; comb(1, ..) flips
        at_zero = y if weight_on_first else x
        at_one = x if weight_on_first else y
        worst["unitality"] = max(worst["unitality"],
                                 algebra.distance(comb(0.0, x, y), at_zero),
                                 algebra.distance(comb(1.0, x, y), at_one))
        worst["idempotency"] = max(worst["idempotency"],
                                   algebra.distance(comb(lam, x, x), x))
        worst["commutativity"] = max(
            worst["commutativity"],
            algebra.distance(comb(lam, x, y), comb(1.0 - lam, y, x)))
        if lam * mu < 1.0:
            # weight on first:  comb(l, comb(m, x, y), z) = comb(lm, x, comb(n, y, z))
            # weight on second: the mirror image, with the same reparametrization
            nu = lam * (1.0 - mu) / (1.0 - lam * mu)
            if weight_on_first:
                lhs = comb(lam, comb(mu, x, y), z)
                rhs = comb(lam * mu, x, comb(nu, y, z))
            else:
                lhs = comb(lam, x, comb(mu, y, z))
                rhs = comb(lam * mu, comb(nu, x, y), z)
            worst["associativity"] = max(worst["associativity"],
                                         algebra.distance(lhs, rhs))
    return worst


def check_algebra_laws(algebra: ConvexAlgebra, trials: int, seed: int = 0,
                       exact: bool = True) -> dict[str, float]:
    """Worst discrepancies for the algebra laws of the barycenter map.

    unit:            barycenter of a point mass is the point
    multiplication:  barycenter(expectation(mu)) = weighted barycenters
    power_triangle:  mean of a multiset = mean of its n-fold repetition
    power_square:    mean of block means = global mean (equal blocks)
    affine:          short affine maps commute with barycenters
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 203]))
    worst = {"unit": 0.0, "multiplication": 0.0, "power_triangle": 0.0,
             "power_square": 0.0, "affine_naturality": 0.0}
    for _ in range(trials):
        k = int(rng.integers(2, 7))
        points = _random_points(rng, k, algebra.dim)
        space = _register(points, algebra.norm).to_metric()

        i = int(rng.integers(0, k))
        worst["unit"] = max(worst["unit"], algebra.distance(
            barycenter(algebra, dirac(space, i)), points[i]))

        n_inner = int(rng.integers(1, 4))
        inner = [_random_carrier_measure(rng, space, exact) for _ in range(n_inner)]
        if exact:
            outer: Sequence = simplex_fractions(rng, n_inner, int(rng.integers(1, 13)))
        else:
            outer = simplex_floats(rng, n_inner)
        mu = NestedMeasure(space, inner, outer)
        via_expectation = barycenter(algebra, expectation(mu))
        via_points = np.zeros(algebra.dim)
        for w, m in zip(mu.outer_weights, mu.inner):
            via_points += float(w) * barycenter(algebra, m)
        worst["multiplication"] = max(worst["multiplication"],
                                      algebra.distance(via_expectation, via_points))

        m_size = int(rng.integers(1, 5))
        reps = int(rng.integers(1, 4))
        sample = points[rng.integers(0, k, size=m_size)]
        repeated = np.concatenate([sample] * reps, axis=0)
        worst["power_triangle"] = max(worst["power_triangle"], algebra.distance(
            mean_point(sample), mean_point(repeated)))

        blocks = rng.integers(0, k, size=(int(rng.integers(1, 4)), m_size))
        block_means = [mean_point(points[b]) for b in blocks]
        flat = points[blocks.reshape(-1)]
        worst["power_square"] = max(worst["power_square"], algebra.distance(
            mean_point(block_means), mean_point(flat)))

        matrix, offset = _random_short_affine(rng, algebra)
        p = _random_carrier_measure(rng, space, exact)
        image_points = points @ matrix.T + offset
        image_space = EuclideanSpace(image_points, algebra.norm).to_metric()
        weights = p.fractions if p.fractions is not None else list(p.weights)
        image_measure = DiscreteMeasure(image_space, list(p.support), list(weights))
        lhs = matrix @ barycenter(algebra, p) + offset
        rhs = barycenter(algebra, image_measure)
        worst["affine_naturality"] = max(worst["affine_naturality"],
                                         algebra.distance(lhs, rhs))
    return worst


def _random_short_affine(rng: np.random.Generator,
                         algebra: ConvexAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """A random affine map rescaled to be distance-nonincreasing."""
    matrix = rng.uniform(-1.0, 1.0, size=(algebra.dim, algebra.dim))
    if algebra.norm == "l1":
        op = float(np.max(np.sum(np.abs(matrix), axis=0)))
    elif algebra.norm == "linf":
        op = float(np.max(np.sum(np.abs(matrix), axis=1)))
    else:
        op = _l2_norm_power_iteration(matrix)
    if op > 0:
        matrix = matrix / op * 0.95
    offset = rng.uniform(-3.0, 3.0, size=algebra.dim)
    return matrix, offset


def _l2_norm_power_iteration(matrix: np.ndarray, iters: int = 60) -> float:
    """Spectral norm estimate; rescaling divides by it with a 0.95 margin
    because the estimate can run slightly low."""
    gram = matrix.T @ matrix
    v = np.ones(matrix.shape[1]) / math.sqrt(matrix.shape[1])
    for _ in range(iters):
        w = gram @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
    return math.sqrt(float(v @ gram @ v))
