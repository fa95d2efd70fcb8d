"""Dense matrices over GF(q) and the row-reduction routines built on them.

A subspace is identified by the nonzero rows of its reduced row echelon form.
The ``*_rows`` helpers work on plain tuples of rows and are what the hot loops
elsewhere in the package call; :class:`MatGF` wraps them for the public API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import FieldSpec

Row = tuple[int, ...]
Rows = tuple[Row, ...]


def rref_rows(rows: Iterable[Sequence[int]], ncols: int, f: FieldSpec) -> tuple[Rows, tuple[int, ...]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    mul, sub, inv = f.mul, f.sub, f.inv
    nrows = len(work)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = r
        while pr < nrows and work[pr][c] == 0:
            pr += 1
        if pr == nrows:
            continue
        if pr != r:
            work[r], work[pr] = work[pr], work[r]
        lead = work[r][c]
        if lead != 1:
            scale = mul[inv[lead]]
            work[r] = [scale[x] for x in work[r]]
        prow = work[r]
        for i in range(nrows):
            if i != r:
                factor = work[i][c]
                if factor:
                    mf = mul[factor]
                    work[i] = [sub[a][mf[b]] for a, b in zip(work[i], prow)]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def rank_rows(rows: Iterable[Sequence[int]], ncols: int, f: FieldSpec) -> int:
    """Rank by forward elimination only."""
    work = [list(r) for r in rows]
    mul, sub, inv = f.mul, f.sub, f.inv
    nrows = len(work)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = r
        while pr < nrows and work[pr][c] == 0:
            pr += 1
        if pr == nrows:
            continue
        work[r], work[pr] = work[pr], work[r]
        prow = work[r]
        li = inv[prow[c]]
        for i in range(r + 1, nrows):
            x = work[i][c]
            if x:
                mf = mul[mul[x][li]]
                work[i] = [sub[a][mf[b]] for a, b in zip(work[i], prow)]
        r += 1
    return r


def kernel_rows(rref: Rows, pivots: Sequence[int], ncols: int, f: FieldSpec) -> Rows:
    """Right null space basis from an RREF, one row per free column."""
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        v = [0] * ncols
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg[rref[i][j]]
        basis.append(tuple(v))
    return tuple(basis)


def det_rows(rows: Sequence[Sequence[int]], f: FieldSpec) -> int:
    """Determinant of a square matrix by elimination."""
    work = [list(r) for r in rows]
    size = len(work)
    mul, sub, inv = f.mul, f.sub, f.inv
    det = 1
    for c in range(size):
        pr = c
        while pr < size and work[pr][c] == 0:
            pr += 1
        if pr == size:
            return 0
        if pr != c:
            work[c], work[pr] = work[pr], work[c]
            det = f.neg[det]
        prow = work[c]
        det = mul[det][prow[c]]
        li = inv[prow[c]]
        for i in range(c + 1, size):
            x = work[i][c]
            if x:
                mf = mul[mul[x][li]]
                work[i] = [sub[a][mf[b]] for a, b in zip(work[i], prow)]
    return det


def minors_rows(rows: Rows, ncols: int, f: FieldSpec) -> tuple[int, ...]:
    """All maximal minors, column subsets in lexicographic order."""
    cols = list(zip(*rows)) if rows else []
    out = []
    for subset in itertools.combinations(range(ncols), len(rows)):
        sub = [[cols[j][i] for j in subset] for i in range(len(rows))]
        out.append(det_rows(sub, f))
    return tuple(out)


def normalize(v: Sequence[int], f: FieldSpec) -> Row:
    """Scale so the first nonzero coordinate is 1; zero stays zero."""
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            s = f.mul[f.inv[x]]
            return tuple(s[y] for y in v)
    return tuple(v)


def projective_points(dim: int, f: FieldSpec) -> list[Row]:
    """Normalized representatives of PG(dim-1, q) in lexicographic order."""
    return [
        v
        for v in itertools.product(range(f.q), repeat=dim)
        if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1
    ]


def vec_add(u: Sequence[int], v: Sequence[int], f: FieldSpec) -> Row:
    add = f.add
    return tuple(add[a][b] for a, b in zip(u, v))


def vec_scale(a: int, v: Sequence[int], f: FieldSpec) -> Row:
    m = f.mul[a]
    return tuple(m[x] for x in v)


def combine(coeffs: Sequence[int], rows: Sequence[Sequence[int]], ncols: int, f: FieldSpec) -> Row:
    """Linear combination sum(coeffs[i] * rows[i])."""
    acc = [0] * ncols
    add, mul = f.add, f.mul
    for c, row in zip(coeffs, rows):
        if c:
            mc = mul[c]
            acc = [add[a][mc[b]] for a, b in zip(acc, row)]
    return tuple(acc)


def span_vectors(rows: Sequence[Sequence[int]], ncols: int, f: FieldSpec) -> set[Row]:
    """Every vector of the row space (q^rank of them)."""
    out = {tuple([0] * ncols)}
    add, mul = f.add, f.mul
    for row in rows:
        new = set()
        for v in out:
            for a in range(1, f.q):
                ma = mul[a]
                new.add(tuple(add[x][ma[y]] for x, y in zip(v, row)))
        out |= new
    return out


@dataclass(frozen=True)
class MatGF:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    field: FieldSpec
    rows: Rows
    ncols: int

    def __post_init__(self):
        q = self.field.q
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix")
            if any(not 0 <= x < q for x in r):
                raise ValueError(f"entry outside GF({q})")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Sequence[int]], ncols: int | None = None) -> MatGF:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(field, rows, ncols)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> MatGF:
        return cls(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, size: int) -> MatGF:
        return cls(field, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)), size)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def stack(self, other: MatGF) -> MatGF:
        _check_compatible(self, other)
        return MatGF(self.field, self.rows + other.rows, self.ncols)

    def scale_row(self, i: int, a: int) -> MatGF:
        rows = list(self.rows)
        rows[i] = vec_scale(a, rows[i], self.field)
        return MatGF(self.field, tuple(rows), self.ncols)

    def __matmul__(self, other: MatGF) -> MatGF:
        if self.ncols != other.nrows or self.field is not other.field:
            raise ValueError("incompatible matrices")
        cols = other.ncols
        rows = tuple(combine(r, other.rows, cols, self.field) for r in self.rows)
        return MatGF(self.field, rows, cols)

    def transpose(self) -> MatGF:
        return MatGF(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)


def _check_compatible(a: MatGF, b: MatGF) -> None:
    if a.field is not b.field:
        raise ValueError("matrices over different fields")
    if a.ncols != b.ncols:
        raise ValueError(f"column mismatch {a.ncols} != {b.ncols}")


def rref(m: MatGF) -> tuple[MatGF, int, tuple[int, ...]]:
    """RREF keeping the input shape (zero rows at the bottom), rank, pivots."""
    reduced, pivots = rref_rows(m.rows, m.ncols, m.field)
    padded = reduced + tuple((0,) * m.ncols for _ in range(m.nrows - len(reduced)))
    return MatGF(m.field, padded, m.ncols), len(pivots), pivots


def row_basis(m: MatGF) -> MatGF:
    """Canonical basis of the row space (RREF without zero rows)."""
    reduced, _ = rref_rows(m.rows, m.ncols, m.field)
    return MatGF(m.field, reduced, m.ncols)


def rank_of(m: MatGF) -> int:
    return rank_rows(m.rows, m.ncols, m.field)


def kernel_basis(m: MatGF) -> MatGF:
    """Basis of {v : m v^T = 0}; ``ncols - rank`` rows."""
    reduced, pivots = rref_rows(m.rows, m.ncols, m.field)
    return MatGF(m.field, kernel_rows(reduced, pivots, m.ncols, m.field), m.ncols)


def intersect_rowspaces(a: MatGF, b: MatGF) -> MatGF:
    """Canonical basis of rowspace(a) ∩ rowspace(b).

    Uses (A ∩ B) = (A⊥ + B⊥)⊥ for the standard dot product.
    """
    _check_compatible(a, b)
    perp = kernel_basis(a).stack(kernel_basis(b))
    return row_basis(kernel_basis(perp))


def k_minors(m: MatGF) -> tuple[int, ...]:
    """All C(n, k) maximal minors of a full-rank k x n matrix."""
    if rank_of(m) != m.nrows:
        raise ValueError("k_minors needs a matrix of full row rank")
    return minors_rows(m.rows, m.ncols, m.field)


def rowspace_contains(m: MatGF, v: Sequence[int]) -> bool:
    r = rank_of(m)
    return rank_rows(m.rows + (tuple(v),), m.ncols, m.field) == r
