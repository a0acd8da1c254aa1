"""Finite metric spaces: distance tables, normed rosters, and products.

A space is an immutable square table of distances. Euclidean rosters carry
their coordinates alongside the induced table so that barycentric code can
read points back off the space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError
from .tolerances import MAX_TABLE_ENTRIES, TAU_METRIC

NORMS = ("l1", "l2", "linf")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class FiniteMetricSpace:
    """A finite (pseudo)metric space given by its distance table.

    The constructor checks shape only; axiom checking is the job of
    :func:`validate_metric` so that defective tables can still be built,
    inspected, and reported on.
    """

    __slots__ = ("dist", "pseudometric_ok", "coords")

    def __init__(self, dist, pseudometric_ok: bool = False, coords=None):
        table = np.array(dist, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise ValidationError("invariant.space", "distance table must be square")
        if table.shape[0] == 0:
            raise ValidationError("invariant.space", "space must be non-empty")
        table.setflags(write=False)
        self.dist = table
        self.pseudometric_ok = bool(pseudometric_ok)
        if coords is not None:
            coords = _frozen_array(coords)
            if coords.shape[0] != table.shape[0]:
                raise ValidationError("invariant.space", "coords/table size mismatch")
        self.coords = coords

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    def __repr__(self) -> str:
        kind = "pseudometric" if self.pseudometric_ok else "metric"
        return f"FiniteMetricSpace(n={self.n}, {kind})"


def same_space(a: FiniteMetricSpace, b: FiniteMetricSpace) -> bool:
    """Whether two space values denote the same carrier and table."""
    return a is b or (a.n == b.n and np.array_equal(a.dist, b.dist))


def vector_distance(u, v, norm: str) -> float:
    """Distance between two coordinate vectors under a named norm."""
    if norm not in NORMS:
        raise ValidationError("invariant.space", f"unknown norm {norm!r}")
    diff = np.asarray(u, dtype=float) - np.asarray(v, dtype=float)
    if norm == "l1":
        return float(np.sum(np.abs(diff)))
    if norm == "l2":
        return float(np.sqrt(np.sum(diff * diff)))
    return float(np.max(np.abs(diff))) if diff.size else 0.0


class EuclideanSpace:
    """A finite roster of points in R^dim under an l1/l2/linf norm."""

    __slots__ = ("points", "norm")

    def __init__(self, points, norm: str = "l2"):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValidationError("invariant.space", "roster must be a non-empty 2d array")
        if norm not in NORMS:
            raise ValidationError("invariant.space", f"unknown norm {norm!r}")
        pts.setflags(write=False)
        self.points = pts
        self.norm = norm

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def to_metric(self) -> FiniteMetricSpace:
        """Induced distance table, with coordinates attached."""
        diff = self.points[:, None, :] - self.points[None, :, :]
        if self.norm == "l1":
            table = np.sum(np.abs(diff), axis=2)
        elif self.norm == "l2":
            table = np.sqrt(np.sum(diff * diff, axis=2))
        else:
            table = np.max(np.abs(diff), axis=2)
        return FiniteMetricSpace(table, pseudometric_ok=False, coords=self.points)

    def __repr__(self) -> str:
        return f"EuclideanSpace(n={self.n}, dim={self.dim}, norm={self.norm!r})"


@dataclass(frozen=True)
class MetricViolation:
    """Worst offender for one violated metric axiom."""

    axiom: str
    where: tuple[int, ...]
    amount: float


def validate_metric(space: FiniteMetricSpace, tau_metric: float = TAU_METRIC) -> list[MetricViolation]:
    """Check the (pseudo)metric axioms on a distance table.

    Returns one entry per violated axiom, each carrying the worst offending
    index pair or triple. An empty list means the table is a pseudometric
    within ``tau_metric``; positivity is only demanded of spaces that do not
    declare ``pseudometric_ok``.
    """
    table = space.dist
    n = space.n
    out: list[MetricViolation] = []

    neg = np.min(table)
    if neg < -tau_metric:
        i, j = np.unravel_index(int(np.argmin(table)), table.shape)
        out.append(MetricViolation("nonnegativity", (int(i), int(j)), float(-neg)))

    diag = np.abs(np.diag(table))
    if np.max(diag) > tau_metric:
        i = int(np.argmax(diag))
        out.append(MetricViolation("reflexivity", (i, i), float(np.max(diag))))

    asym = np.abs(table - table.T)
    if np.max(asym) > tau_metric:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        out.append(MetricViolation("symmetry", (int(i), int(j)), float(np.max(asym))))

    worst_tri = 0.0
    worst_at = (0, 0, 0)
    for k in range(n):
        slack = table - (table[:, k][:, None] + table[k, :][None, :])
        m = float(np.max(slack))
        if m > worst_tri:
            i, j = np.unravel_index(int(np.argmax(slack)), slack.shape)
            worst_tri = m
            worst_at = (int(i), int(k), int(j))
    if worst_tri > tau_metric:
        out.append(MetricViolation("triangle", worst_at, worst_tri))

    if not space.pseudometric_ok:
        off = table + np.where(np.eye(n, dtype=bool), np.inf, 0.0)
        small = float(np.min(off))
        if small <= tau_metric and n > 1:
            i, j = np.unravel_index(int(np.argmin(off)), off.shape)
            out.append(MetricViolation("positivity", (int(i), int(j)), small))

    return out


def _check_table_cap(n_points: int, max_entries: int) -> None:
    if n_points * n_points > max_entries:
        raise ValidationError(
            "invariant.size_cap",
            f"product carrier of {n_points} points needs {n_points * n_points} table entries"
            f" (cap {max_entries})",
        )


def tensor_product(x: FiniteMetricSpace, y: FiniteMetricSpace,
                   max_entries: int = MAX_TABLE_ENTRIES) -> FiniteMetricSpace:
    """Product carrier with additive distances d((a,b),(a',b')) = d(a,a') + d(b,b').

    Carrier indices are row-major pairs: (i, j) lives at i*|Y| + j.
    """
    n = x.n * y.n
    _check_table_cap(n, max_entries)
    table = (x.dist[:, None, :, None] + y.dist[None, :, None, :]).reshape(n, n)
    return FiniteMetricSpace(table, pseudometric_ok=x.pseudometric_ok or y.pseudometric_ok)


def convex_combination_space(lam: Sequence[float], spaces: Sequence[FiniteMetricSpace],
                             max_entries: int = MAX_TABLE_ENTRIES) -> FiniteMetricSpace:
    """Weighted product space: d(x, y) = sum_i lam_i * d_i(x_i, y_i).

    Carrier indices are row-major over the factor carriers (numpy order).
    A zero weight erases the corresponding factor from the distance, so the
    result is flagged as a pseudometric in that case.
    """
    weights = [float(w) for w in lam]
    if len(weights) != len(spaces) or not spaces:
        raise ValidationError("invariant.weights", "need one weight per factor space")
    if any(w < 0 for w in weights):
        raise ValidationError("invariant.weights", "weights must be nonnegative")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValidationError("invariant.weights", "weights must sum to 1")

    sizes = [s.n for s in spaces]
    n = int(np.prod(sizes))
    _check_table_cap(n, max_entries)

    table = np.zeros((n, n))
    grids = np.unravel_index(np.arange(n), sizes)
    for w, space, g in zip(weights, spaces, grids):
        if w == 0.0:
            continue
        table += w * space.dist[np.ix_(g, g)]

    pseudo = any(w == 0.0 for w in weights) or any(s.pseudometric_ok for s in spaces)
    return FiniteMetricSpace(table, pseudometric_ok=pseudo)


def product_index(sizes: Sequence[int], multi_index: Sequence[int]) -> int:
    """Row-major flat index of a multi-index, matching the product carriers."""
    return int(np.ravel_multi_index(tuple(int(i) for i in multi_index), tuple(sizes)))


def check_short(f: Sequence[int], x: FiniteMetricSpace, y: FiniteMetricSpace,
                tau_metric: float = TAU_METRIC) -> bool:
    """Whether the index map f: X -> Y is distance-nonincreasing."""
    idx = _as_index_map(f, x, y)
    image = y.dist[np.ix_(idx, idx)]
    return bool(np.max(image - x.dist) <= tau_metric)


def check_isometric(f: Sequence[int], x: FiniteMetricSpace, y: FiniteMetricSpace,
                    tau_metric: float = TAU_METRIC) -> bool:
    """Whether the index map f: X -> Y preserves distances exactly (within tau)."""
    idx = _as_index_map(f, x, y)
    image = y.dist[np.ix_(idx, idx)]
    return bool(np.max(np.abs(image - x.dist)) <= tau_metric)


def _as_index_map(f: Iterable[int], x: FiniteMetricSpace, y: FiniteMetricSpace) -> np.ndarray:
    idx = np.array([int(v) for v in f], dtype=int)
    if idx.shape != (x.n,):
        raise ValidationError("invariant.map", f"index map must have length {x.n}")
    if idx.size and (idx.min() < 0 or idx.max() >= y.n):
        raise ValidationError("invariant.map", "index map leaves the codomain")
    return idx
