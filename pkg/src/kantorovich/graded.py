"""Nested tuples and multisets, flattening maps, and their coherence checks.

Flattening an n-by-m nested tuple is row-major concatenation; flattening a
nested multiset is multiset union. Diagram checks return a numeric
discrepancy (0.0 on success) so failures stay diagnosable.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ValidationError
from .power import MultiSet, PointTuple, multiset_distance, quotient, tuple_distance
from .spaces import FiniteMetricSpace, same_space


class NestedTuple:
    """An n-by-m grid of roster indices: n outer rows, each an m-tuple."""

    __slots__ = ("space", "rows")

    def __init__(self, space: FiniteMetricSpace, rows: Sequence[Sequence[int]]):
        if not rows:
            raise ValidationError("invariant.tuple", "empty nesting")
        width = len(rows[0])
        grid = []
        for row in rows:
            if len(row) != width:
                raise ValidationError("invariant.tuple", "ragged nesting")
            grid.append(PointTuple(space, row).entries)
        self.space = space
        self.rows = tuple(grid)

    @property
    def outer(self) -> int:
        return len(self.rows)

    @property
    def inner(self) -> int:
        return len(self.rows[0])

    def __repr__(self) -> str:
        return f"NestedTuple({[list(r) for r in self.rows]})"


class NestedMultiSet:
    """A multiset of equal-size multisets, in canonical (sorted) form."""

    __slots__ = ("space", "inners")

    def __init__(self, space: FiniteMetricSpace, inners: Sequence[Sequence[int]]):
        if not inners:
            raise ValidationError("invariant.tuple", "empty nesting")
        sets = [MultiSet(space, inner) for inner in inners]
        width = len(sets[0])
        for s in sets:
            if len(s) != width:
                raise ValidationError("invariant.tuple", "ragged nesting")
        self.space = space
        self.inners = tuple(sorted(sets, key=lambda s: s.entries))

    @property
    def outer(self) -> int:
        return len(self.inners)

    @property
    def inner(self) -> int:
        return len(self.inners[0])

    def __eq__(self, other) -> bool:
        return (isinstance(other, NestedMultiSet) and same_space(self.space, other.space)
                and tuple(s.entries for s in self.inners)
                == tuple(s.entries for s in other.inners))

    def __hash__(self) -> int:
        return hash(tuple(s.entries for s in self.inners))

    def __repr__(self) -> str:
        return f"NestedMultiSet({[list(s.entries) for s in self.inners]})"


def curry_flatten(nt: NestedTuple) -> PointTuple:
    """(X^m)^n -> X^(m*n): row-major concatenation; an isometry."""
    flat: list[int] = []
    for row in nt.rows:
        flat.extend(row)
    return PointTuple(nt.space, flat)


def flatten_multiset(nms: NestedMultiSet) -> MultiSet:
    """(X_m)_n -> X_(m*n): union of the inner multisets."""
    flat: list[int] = []
    for s in nms.inners:
        flat.extend(s.entries)
    return MultiSet(nms.space, flat)


def quotient_rows(nt: NestedTuple) -> NestedMultiSet:
    """Forget order inside each row, then the order of the rows."""
    return NestedMultiSet(nt.space, [row for row in nt.rows])


def nested_tuple_distance(a: NestedTuple, b: NestedTuple) -> float:
    """(1/n) sum of row tuple distances; equals the flattened distance."""
    if not same_space(a.space, b.space) or a.outer != b.outer or a.inner != b.inner:
        raise ValidationError("invariant.tuple", "shape mismatch")
    total = 0.0
    for ra, rb in zip(a.rows, b.rows):
        total += tuple_distance(PointTuple(a.space, ra), PointTuple(b.space, rb))
    return total / a.outer


# ---------------------------------------------------------------------------
# coherence checks (0.0 on success, metric distance of the two sides else)


def unit_discrepancy_tuple(t: PointTuple) -> float:
    """Embed a tuple as a single row and as a column of singletons; both
    flatten back to the original tuple."""
    as_row = curry_flatten(NestedTuple(t.space, [t.entries]))
    as_col = curry_flatten(NestedTuple(t.space, [[x] for x in t.entries]))
    worst = 0.0
    for other in (as_row, as_col):
        if other.entries != t.entries:
            worst = max(worst, tuple_distance(t, other))
    return worst


def unit_discrepancy_multiset(ms: MultiSet) -> float:
    """Multiset version of the unit triangles."""
    as_row = flatten_multiset(NestedMultiSet(ms.space, [ms.entries]))
    as_col = flatten_multiset(NestedMultiSet(ms.space, [[x] for x in ms.entries]))
    worst = 0.0
    for other in (as_row, as_col):
        if other.entries != ms.entries:
            worst = max(worst, multiset_distance(ms, other))
    return worst


def check_assoc_square(space: FiniteMetricSpace, grid3: Sequence[Sequence[Sequence[int]]],
                       symmetrized: bool = False) -> float:
    """Flatten a 3-deep nesting inner-first and outer-first; the results must
    coincide. ``grid3`` is an n-outer list of m-middle lists of l-inner index
    lists (rectangular)."""
    if symmetrized:
        inner_first = flatten_multiset(NestedMultiSet(
            space, [flatten_multiset(NestedMultiSet(space, block)).entries for block in grid3]))
        outer_blocks: list[Sequence[int]] = []
        for block in grid3:
            outer_blocks.extend(block)
        outer_first = flatten_multiset(NestedMultiSet(space, outer_blocks))
        if inner_first.entries == outer_first.entries:
            return 0.0
        return multiset_distance(inner_first, outer_first)

    inner_first_t = curry_flatten(NestedTuple(
        space, [curry_flatten(NestedTuple(space, block)).entries for block in grid3]))
    rows: list[Sequence[int]] = []
    for block in grid3:
        rows.extend(block)
    outer_first_t = curry_flatten(NestedTuple(space, rows))
    if inner_first_t.entries == outer_first_t.entries:
        return 0.0
    return tuple_distance(inner_first_t, outer_first_t)


def check_double_quotient(nt: NestedTuple) -> float:
    """Quotient rows then flatten, against flatten then quotient."""
    via_rows = flatten_multiset(quotient_rows(nt))
    via_flat = quotient(curry_flatten(nt))
    if via_rows.entries == via_flat.entries:
        return 0.0
    return multiset_distance(via_rows, via_flat)
