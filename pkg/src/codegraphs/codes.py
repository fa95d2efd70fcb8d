"""[n, k] linear codes as canonical subspaces, dual distance, subcodes."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .gf import FieldSpec, field_of_order
from .matgf import (
    MatGF,
    Row,
    Rows,
    kernel_rows,
    normalize,
    projective_points,
    rank_rows,
    rref_rows,
)


@dataclass(frozen=True)
class DualDistanceProfile:
    """Smallest dependent column set of a generator matrix.

    ``d_perp`` is the size of that set, which is the minimum weight of the
    dual code; ``witness`` lists one such set of column indices.
    """

    d_perp: int
    witness: tuple[int, ...]


def dual_distance_rows(gen: Rows, n: int, f: FieldSpec) -> DualDistanceProfile:
    """Column-subset search for the first linearly dependent column set.

    Works level by level: every independent set of size s-1 is extended by a
    later column, and the first column found inside the span ends the search.
    The zero-dimensional case (no rows) has only zero columns, so d = 1.
    """
    cols = [tuple(row[j] for row in gen) for j in range(n)]
    k = len(gen)
    zero = (0,) * k
    for j, col in enumerate(cols):
        if col == zero:
            return DualDistanceProfile(1, (j,))
    add, mul = f.add, f.mul

    def extend(span, col):
        out = set(span)
        for a in range(1, f.q):
            ma = mul[a]
            scaled = tuple(ma[x] for x in col)
            for v in span:
                out.add(tuple(add[x][y] for x, y in zip(v, scaled)))
        return out

    level = [((j,), extend({zero}, cols[j])) for j in range(n)]
    while level:
        nxt = []
        for combo, span in level:
            for j in range(combo[-1] + 1, n):
                if cols[j] in span:
                    return DualDistanceProfile(len(combo) + 1, combo + (j,))
        for combo, span in level:
            for j in range(combo[-1] + 1, n):
                nxt.append((combo + (j,), extend(span, cols[j])))
        level = nxt
    # n <= k with independent columns: no dependency at all
    return DualDistanceProfile(n + 1, ())


@functools.lru_cache(maxsize=1 << 18)
def cached_dual_distance(gen: Rows, n: int, f: FieldSpec) -> DualDistanceProfile:
    """Memoized :func:`dual_distance_rows` keyed by the canonical generator."""
    return dual_distance_rows(gen, n, f)


@dataclass(frozen=True)
class LinearCode:
    """An [n, k] code stored by its RREF generator matrix."""

    field: FieldSpec
    gen: Rows
    n: int

    @property
    def k(self) -> int:
        return len(self.gen)

    @property
    def q(self) -> int:
        return self.field.q

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], n: int | None = None) -> LinearCode:
        rows = [tuple(r) for r in rows]
        if n is None:
            n = len(rows[0])
        return from_matrix(MatGF.from_rows(field, rows, n))

    @cached_property
    def profile(self) -> DualDistanceProfile:
        return cached_dual_distance(self.gen, self.n, self.field)

    @property
    def d_perp(self) -> int:
        return self.profile.d_perp

    @property
    def matrix(self) -> MatGF:
        return MatGF(self.field, self.gen, self.n)

    def columns(self) -> list[Row]:
        return [tuple(row[j] for row in self.gen) for j in range(self.n)]

    def contains(self, v: Sequence[int]) -> bool:
        return rank_rows(self.gen + (tuple(v),), self.n, self.field) == self.k

    def contains_code(self, other: LinearCode) -> bool:
        return rank_rows(self.gen + other.gen, self.n, self.field) == self.k

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k, "gen": [list(r) for r in self.gen]}

    @classmethod
    def from_json(cls, data: dict) -> LinearCode:
        f = field_of_order(data["q"])
        code = cls.from_rows(f, data["gen"], data["n"])
        if code.k != data["k"]:
            raise ValueError("serialized k does not match generator rank")
        return code


def from_matrix(g: MatGF) -> LinearCode:
    """Canonical code spanned by the rows of ``g`` (which must be independent)."""
    reduced, pivots = rref_rows(g.rows, g.ncols, g.field)
    if len(pivots) != g.nrows:
        raise ValueError(f"generator matrix has rank {len(pivots)} < {g.nrows} rows")
    if not 0 < len(pivots) < g.ncols:
        raise ValueError(f"need 0 < k < n, got k={len(pivots)}, n={g.ncols}")
    return LinearCode(g.field, reduced, g.ncols)


def dual_min_distance(c: LinearCode) -> DualDistanceProfile:
    return c.profile


def dual_code(c: LinearCode) -> LinearCode:
    pivots = [row.index(1) for row in c.gen]
    return LinearCode(
        c.field,
        rref_rows(kernel_rows(c.gen, pivots, c.n, c.field), c.n, c.field)[0],
        c.n,
    )


def in_class(c: LinearCode, t: int) -> bool:
    """Membership in C_t(n, k): every t columns independent."""
    if not 0 <= t <= c.k:
        raise ValueError(f"t must lie in [0, {c.k}], got {t}")
    return c.d_perp >= t + 1


def annihilator(kpoint: Sequence[int], f: FieldSpec) -> Rows:
    """(k-1) x k matrix whose kernel is the line through ``kpoint``."""
    kpoint = tuple(kpoint)
    if not any(kpoint):
        raise ValueError("kernel point must be nonzero")
    reduced, pivots = rref_rows([kpoint], len(kpoint), f)
    return kernel_rows(reduced, pivots, len(kpoint), f)


def apply_surjection(F: Rows, gen: Rows, n: int, f: FieldSpec) -> Rows:
    """Rows of F @ gen, i.e. the columns of gen pushed through F."""
    add, mul = f.add, f.mul
    out = []
    for frow in F:
        acc = [0] * n
        for c, grow in zip(frow, gen):
            if c:
                mc = mul[c]
                acc = [add[a][mc[b]] for a, b in zip(acc, grow)]
        out.append(tuple(acc))
    return tuple(out)


def subcode_by_kernel(c: LinearCode, kpoint: Sequence[int]) -> LinearCode | None:
    """The [n, k-1] subcode cut out by the surjection with kernel <kpoint>.

    Returns None when k = 1 (the subcode would be the zero space).
    """
    if len(kpoint) != c.k:
        raise ValueError(f"kernel point must have length k={c.k}")
    F = annihilator(kpoint, c.field)
    if c.k == 1:
        return None
    rows = apply_surjection(F, c.gen, c.n, c.field)
    reduced, _ = rref_rows(rows, c.n, c.field)
    return LinearCode(c.field, reduced, c.n)


def all_subcodes(c: LinearCode) -> list[LinearCode]:
    """One [n, k-1] subcode per point of PG(k-1, q)."""
    if c.k < 2:
        raise ValueError("all_subcodes needs k >= 2")
    return [subcode_by_kernel(c, p) for p in projective_points(c.k, c.field)]


def column_points(c: LinearCode) -> list[Row]:
    """Normalized column directions in column order (zero columns kept as zero)."""
    return [normalize(col, c.field) for col in c.columns()]
