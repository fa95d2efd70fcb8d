"""k-subspaces of GF(q)^n, pencils, lines of the Grassmann geometry, Plücker
coordinates.

Two k-spaces are adjacent in the Grassmann graph exactly when they share a
(k-1)-dimensional subspace, and then that subspace is their intersection.
:class:`HyperplaneIncidence` records, for every member of a family, all of its
(k-1)-subspaces; grouping members by hyperplane gives cliques that partition
the edge set.  Graph builds and the line table both start from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .codes import LinearCode, annihilator, apply_surjection, cached_dual_distance, in_class
from .errors import BudgetExceeded
from .gf import FieldSpec
from .matgf import (
    MatGF,
    Row,
    Rows,
    intersect_rowspaces,
    minors_rows,
    normalize,
    projective_points,
    rank_rows,
    rref_rows,
)

DEFAULT_SUBSPACE_CAP = 10**6


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """[n choose k]_q via the q-Pascal recurrence."""
    if k < 0 or k > n:
        return 0
    row = [1]  # row m holds [m choose j]_q for j = 0..m
    for m in range(1, n + 1):
        new = [1] * (m + 1)
        for j in range(1, m):
            new[j] = row[j - 1] + q**j * row[j]
        row = new
    return row[k]


def num_points(k: int, q: int) -> int:
    """|PG(k-1, q)|."""
    return (q**k - 1) // (q - 1)


class SubspaceFamily:
    """An ordered list of [n, k] codes; the position is the vertex index."""

    def __init__(self, n: int, k: int, field: FieldSpec, members: Sequence[LinearCode], complete: bool = False):
        self.n = n
        self.k = k
        self.field = field
        self.members = tuple(members)
        self.complete = complete
        self.index_of = {c.gen: i for i, c in enumerate(self.members)}
        if len(self.index_of) != len(self.members):
            raise ValueError("family members must be distinct subspaces")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[LinearCode]:
        return iter(self.members)

    def __getitem__(self, i: int) -> LinearCode:
        return self.members[i]

    def __repr__(self):
        return f"SubspaceFamily(n={self.n}, k={self.k}, q={self.field.q}, size={len(self)})"

    def index(self, code: LinearCode) -> int:
        return self.index_of[code.gen]

    def get(self, gen: Rows) -> int:
        return self.index_of.get(gen, -1)

    @cached_property
    def d_perp(self) -> np.ndarray:
        return np.array([c.d_perp for c in self.members], dtype=np.int64)

    def class_mask(self, t: int) -> np.ndarray:
        return self.d_perp >= t + 1

    @cached_property
    def incidence(self) -> HyperplaneIncidence:
        return HyperplaneIncidence(self)

    @cached_property
    def lines(self) -> LineTable:
        return LineTable(self)

    @cached_property
    def plucker_keys(self) -> np.ndarray:
        """Normalized Plücker vectors of all members, one row each."""
        return np.array([plucker_rows(c.gen, self.n, self.field) for c in self.members], dtype=np.int64)


def _rref_family(n: int, k: int, q: int) -> Iterator[Rows]:
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivot_set]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


@lru_cache(maxsize=32)
def enumerate_subspaces(n: int, k: int, field: FieldSpec, cap: int = DEFAULT_SUBSPACE_CAP) -> SubspaceFamily:
    """All k-subspaces of GF(q)^n as RREF codes, ordered by (pivots, free entries)."""
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got n={n}, k={k}")
    count = gaussian_binomial(n, k, field.q)
    if count > cap:
        raise BudgetExceeded("subspace cap", cap, count)
    members = [LinearCode(field, gen, n) for gen in _rref_family(n, k, field.q)]
    return SubspaceFamily(n, k, field, members, complete=True)


def enumerate_class(n: int, k: int, t: int, field: FieldSpec, cap: int = DEFAULT_SUBSPACE_CAP) -> SubspaceFamily:
    """Members of C_t(n, k), in the order of :func:`enumerate_subspaces`."""
    if not 0 <= t <= k:
        raise ValueError(f"need 0 <= t <= k, got t={t}, k={k}")
    full = enumerate_subspaces(n, k, field, cap)
    if t == 0:
        return full
    return SubspaceFamily(n, k, field, [c for c in full if in_class(c, t)])


# ---------------------------------------------------------------------------
# hyperplane incidence and lines


@lru_cache(maxsize=None)
def _annihilators(k: int, field: FieldSpec) -> tuple[tuple[Row, Rows, int], ...]:
    """(kernel point, annihilator, first nonzero coordinate) for PG(k-1, q)."""
    out = []
    for p in projective_points(k, field):
        first = next(i for i, x in enumerate(p) if x)
        out.append((p, annihilator(p, field), first))
    return tuple(out)


def reduce_modulo(v: Sequence[int], basis: Rows, pivots: Sequence[int], f: FieldSpec) -> Row:
    """Reduce ``v`` against an RREF basis so its pivot coordinates vanish."""
    v = list(v)
    sub, mul = f.sub, f.mul
    for row, pc in zip(basis, pivots):
        c = v[pc]
        if c:
            mc = mul[c]
            v = [sub[a][mc[b]] for a, b in zip(v, row)]
    return tuple(v)


class HyperplaneIncidence:
    """For each member, its (k-1)-subspaces and a quotient representative.

    Attributes
    ----------
    sub_gens : list of RREF generators of the distinct (k-1)-subspaces met.
    vertex_subs : array (N, P) of indices into ``sub_gens``; column j is the
        subspace cut out by the j-th point of PG(k-1, q).
    quotient : list (per vertex) of dicts sub index -> normalized vector of the
        member reduced modulo that subspace.
    buckets : list (per subspace) of member indices containing it, ascending.
    """

    def __init__(self, family: SubspaceFamily):
        n, k, f = family.n, family.k, family.field
        self.family = family
        ann = _annihilators(k, f)
        sub_index: dict[Rows, int] = {}
        sub_gens: list[Rows] = []
        sub_pivots: list[tuple[int, ...]] = []
        vertex_subs = np.empty((len(family), len(ann)), dtype=np.int64)
        quotient: list[dict[int, Row]] = []
        buckets: list[list[int]] = []
        for vi, code in enumerate(family.members):
            gen = code.gen
            qv = {}
            for j, (_, F, first) in enumerate(ann):
                if k == 1:
                    dgen, dpiv = (), ()
                else:
                    dgen, dpiv = rref_rows(apply_surjection(F, gen, n, f), n, f)
                si = sub_index.get(dgen)
                if si is None:
                    si = len(sub_gens)
                    sub_index[dgen] = si
                    sub_gens.append(dgen)
                    sub_pivots.append(dpiv)
                    buckets.append([])
                vertex_subs[vi, j] = si
                buckets[si].append(vi)
                qv[si] = normalize(reduce_modulo(gen[first], dgen, dpiv, f), f)
            quotient.append(qv)
        self.sub_index = sub_index
        self.sub_gens = sub_gens
        self.sub_pivots = sub_pivots
        self.vertex_subs = vertex_subs
        self.quotient = quotient
        self.buckets = buckets

    @cached_property
    def sub_d_perp(self) -> np.ndarray:
        f, n = self.family.field, self.family.n
        return np.array([cached_dual_distance(g, n, f).d_perp for g in self.sub_gens], dtype=np.int64)

    def sub_class_mask(self, t: int) -> np.ndarray:
        return self.sub_d_perp >= t + 1


class LineTable:
    """Every line of the Grassmann geometry through members of a complete family.

    ``points`` is an (L, q+1) array of member indices (ascending within a row)
    and ``bottom`` the index (into the incidence's ``sub_gens``) of the common
    (k-1)-subspace.  Each adjacent pair of members lies on exactly one row.
    """

    def __init__(self, family: SubspaceFamily):
        if not family.complete:
            raise ValueError("line table needs the complete family of k-subspaces")
        inc = family.incidence
        f = family.field
        add, mul = f.add, f.mul
        q = f.q
        rows, bottoms = [], []
        for si, members in enumerate(inc.buckets):
            reps = [inc.quotient[v][si] for v in members]
            where = {u: v for u, v in zip(reps, members)}
            covered = set()
            for a in range(len(members)):
                ua = reps[a]
                for b in range(a + 1, len(members)):
                    if (members[a], members[b]) in covered:
                        continue
                    ub = reps[b]
                    pts = [members[b]]
                    for lam in range(q):
                        ml = mul[lam]
                        pts.append(where[normalize(tuple(add[x][ml[y]] for x, y in zip(ua, ub)), f)])
                    pts.sort()
                    for pair in itertools.combinations(pts, 2):
                        covered.add(pair)
                    rows.append(pts)
                    bottoms.append(si)
        self.points = np.array(rows, dtype=np.int64).reshape(len(rows), q + 1)
        self.bottom = np.array(bottoms, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.bottom)


# ---------------------------------------------------------------------------
# pencils and geometry lines


@dataclass(frozen=True)
class PencilLine:
    """The q+1 k-spaces Z with bottom ⊂ Z ⊂ top."""

    bottom: MatGF
    top: MatGF
    points: tuple[LinearCode, ...]

    def __len__(self) -> int:
        return len(self.points)


def _pencil_from(bottom: Rows, bpiv, u: Row, w: Row, n: int, f: FieldSpec) -> tuple[LinearCode, ...]:
    """Points D + <u + λw> (λ in GF(q)) and D + <w>."""
    add, mul = f.add, f.mul
    pts = []
    for lam in range(f.q):
        ml = mul[lam]
        v = tuple(add[x][ml[y]] for x, y in zip(u, w))
        pts.append(LinearCode(f, rref_rows(bottom + (v,), n, f)[0], n))
    pts.append(LinearCode(f, rref_rows(bottom + (w,), n, f)[0], n))
    return tuple(pts)


def pencil(x: LinearCode, y: LinearCode) -> PencilLine:
    """Pencil through two Δ-adjacent codes: x first, y last."""
    if x.field is not y.field or x.n != y.n or x.k != y.k:
        raise ValueError("codes with different parameters")
    n, k, f = x.n, x.k, x.field
    top, tpiv = rref_rows(x.gen + y.gen, n, f)
    if len(tpiv) != k + 1:
        raise ValueError("codes are not adjacent (intersection dimension is not k-1)")
    inter = _intersection_rows(x.gen, y.gen, n, f)
    bottom, bpiv = rref_rows(inter, n, f)
    u = next(r for r in x.gen if rank_rows(bottom + (r,), n, f) == k)
    w = next(r for r in y.gen if rank_rows(bottom + (r,), n, f) == k)
    pts = _pencil_from(bottom, bpiv, u, w, n, f)
    return PencilLine(MatGF(f, bottom, n), MatGF(f, top, n), pts)


def _intersection_rows(a: Rows, b: Rows, n: int, f: FieldSpec) -> Rows:
    return intersect_rowspaces(MatGF(f, a, n), MatGF(f, b, n)).rows


def geometry_lines(n: int, k: int, t: int, field: FieldSpec, cap: int = DEFAULT_SUBSPACE_CAP) -> list[PencilLine]:
    """All lines of the geometry on C_t(n, k).

    A line is fixed by a (k-1)-space D in C_t(n, k-1) and a (k+1)-space over
    it (the whole space when k = n-1).  Every point of such a line lies in
    C_t(n, k) because it contains D.
    """
    if not 0 <= t <= k or not 0 < k < n:
        raise ValueError(f"invalid parameters n={n}, k={k}, t={t}")
    family = enumerate_subspaces(n, k, field, cap)
    inc = family.incidence
    good = inc.sub_class_mask(t)
    table = family.lines
    out = []
    for pts, si in zip(table.points, table.bottom):
        if not good[si]:
            continue
        codes = tuple(family[int(v)] for v in pts)
        top = rref_rows(codes[0].gen + codes[1].gen, n, field)[0]
        out.append(PencilLine(MatGF(field, inc.sub_gens[si], n), MatGF(field, top, n), codes))
    return out


# ---------------------------------------------------------------------------
# Plücker coordinates


def plucker_rows(gen: Rows, n: int, f: FieldSpec) -> Row:
    return normalize(minors_rows(gen, n, f), f)


def plucker(x: LinearCode) -> Row:
    """Normalized vector of maximal minors (first nonzero coordinate 1)."""
    return plucker_rows(x.gen, x.n, x.field)


@lru_cache(maxsize=None)
def _subset_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(itertools.combinations(range(n), k))}


def plucker_preimage(w: Sequence[int], n: int, k: int, f: FieldSpec) -> LinearCode | None:
    """The k-space with Plücker point ``w``, or None if ``w`` is not decomposable.

    Rebuilds the unique candidate whose generator is the identity on the
    first support subset of ``w`` and checks its minors against ``w``.
    """
    w = normalize(w, f)
    if not any(w):
        return None
    index = _subset_index(n, k)
    subsets = list(index)
    base = subsets[next(i for i, x in enumerate(w) if x)]
    base_inv = f.inv[w[index[base]]]
    rows = []
    for r, ir in enumerate(base):
        row = [0] * n
        for j in range(n):
            if j == ir:
                row[j] = 1
            elif j in base:
                continue
            else:
                swapped = base[:r] + (j,) + base[r + 1 :]
                srt = tuple(sorted(swapped))
                # sign of the sort: j moves past the base entries strictly between ir and j
                between = sum(1 for b in base if min(ir, j) < b < max(ir, j))
                val = f.mul[w[index[srt]]][base_inv]
                row[j] = f.neg[val] if between % 2 else val
        rows.append(tuple(row))
    gen, piv = rref_rows(rows, n, f)
    if len(piv) != k:
        return None
    if plucker_rows(gen, n, f) != w:
        return None
    return LinearCode(f, gen, n)


def plucker_line_in_variety(x: LinearCode, y: LinearCode) -> tuple[bool, list[LinearCode | None]]:
    """Whether the projective line through plucker(x), plucker(y) lies on the
    Grassmann variety, with the preimage of each of its q+1 points.

    Points are listed as plucker(x) + λ·plucker(y) for λ = 0..q-1, then plucker(y).
    """
    if x == y:
        raise ValueError("need two distinct codes")
    f = x.field
    px, py = plucker(x), plucker(y)
    add, mul = f.add, f.mul
    pts = []
    for lam in range(f.q):
        ml = mul[lam]
        pts.append(tuple(add[a][ml[b]] for a, b in zip(px, py)))
    pts.append(py)
    pre = [plucker_preimage(p, x.n, x.k, f) for p in pts]
    return all(c is not None for c in pre), pre
