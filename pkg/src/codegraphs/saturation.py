"""Point sets of PG(k-1, q), secant spans, saturating sets and isolation."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .codes import LinearCode, annihilator, apply_surjection, cached_dual_distance, in_class
from .errors import BudgetExceeded
from .gf import FieldSpec
from .matgf import Row, normalize, projective_points, rref_rows, span_vectors

DEFAULT_SEARCH_BUDGET = 10**6


@lru_cache(maxsize=None)
def _pg(k: int, f: FieldSpec) -> tuple[tuple[Row, ...], dict[Row, int]]:
    pts = tuple(projective_points(k, f))
    return pts, {p: i for i, p in enumerate(pts)}


@lru_cache(maxsize=1 << 16)
def _span_mask(k: int, f: FieldSpec, idx: tuple[int, ...]) -> int:
    pts, where = _pg(k, f)
    mask = 0
    for v in span_vectors([pts[i] for i in idx], k, f):
        if any(v):
            mask |= 1 << where[normalize(v, f)]
    return mask


@dataclass(frozen=True)
class ProjPointSet:
    """Distinct points of PG(k-1, q), each with a multiplicity."""

    k: int
    field: FieldSpec
    points: tuple[Row, ...]
    multiplicity: tuple[int, ...]

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], k: int, field: FieldSpec) -> ProjPointSet:
        counts = Counter()
        for v in vectors:
            if len(v) != k:
                raise ValueError(f"vector of length {len(v)} in PG({k - 1}, q)")
            if not any(v):
                raise ValueError("the zero vector is not a projective point")
            counts[normalize(v, field)] += 1
        pts = tuple(sorted(counts))
        return cls(k, field, pts, tuple(counts[p] for p in pts))

    @classmethod
    def from_mask(cls, mask: int, k: int, field: FieldSpec) -> ProjPointSet:
        pts, _ = _pg(k, field)
        chosen = tuple(p for i, p in enumerate(pts) if mask >> i & 1)
        return cls(k, field, chosen, (1,) * len(chosen))

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, v) -> bool:
        return normalize(v, self.field) in self.points

    @property
    def indices(self) -> tuple[int, ...]:
        _, where = _pg(self.k, self.field)
        return tuple(sorted(where[p] for p in self.points))

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m

    def is_whole_space(self) -> bool:
        return len(self.points) == len(_pg(self.k, self.field)[0])

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.points]


def whole_space(k: int, field: FieldSpec) -> ProjPointSet:
    pts, _ = _pg(k, field)
    return ProjPointSet(k, field, pts, (1,) * len(pts))


def columns_as_points(c: LinearCode) -> ProjPointSet:
    """Column directions of the canonical generator matrix."""
    cols = c.columns()
    if any(not any(col) for col in cols):
        raise ValueError("code has a zero column")
    return ProjPointSet.from_vectors(cols, c.k, c.field)


def _secant_mask(idx: tuple[int, ...], t: int, k: int, f: FieldSpec) -> int:
    if len(idx) <= t + 1:
        # fewer than t+2 points: a single subset, or the whole set when |Ω| <= t
        return _span_mask(k, f, idx)
    mask = 0
    for sub in itertools.combinations(idx, t + 1):
        mask |= _span_mask(k, f, sub)
    return mask


def secant_span(omega: ProjPointSet, t: int) -> ProjPointSet:
    """Union of the spans of all (t+1)-subsets of omega.

    When |omega| <= t there is no such subset and the span of omega itself is
    returned instead.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    mask = _secant_mask(omega.indices, t, omega.k, omega.field)
    return ProjPointSet.from_mask(mask, omega.k, omega.field)


def _full_mask(k: int, f: FieldSpec) -> int:
    return (1 << len(_pg(k, f)[0])) - 1


def covers_at_level(omega: ProjPointSet, t: int) -> bool:
    """S_{t-1}(omega) is all of PG(k-1, q)."""
    if t < 1:
        raise ValueError("covers_at_level needs t >= 1")
    return _secant_mask(omega.indices, t - 1, omega.k, omega.field) == _full_mask(omega.k, omega.field)


def is_t_saturating(omega: ProjPointSet, t: int) -> bool:
    """S_t(omega) = PG(k-1, q) and, for t >= 1, S_{t-1}(omega) != PG(k-1, q)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    full = _full_mask(omega.k, omega.field)
    idx = omega.indices
    if _secant_mask(idx, t, omega.k, omega.field) != full:
        return False
    return t == 0 or _secant_mask(idx, t - 1, omega.k, omega.field) != full


class IsolationDisagreement(AssertionError):
    """The geometric and subcode-based isolation tests gave different answers."""

    def __init__(self, code: LinearCode, t: int, geometric: bool, direct: bool):
        self.code, self.t, self.geometric, self.direct = code, t, geometric, direct
        super().__init__(f"isolation tests disagree for {code.to_json()} at t={t}: geometric={geometric}, direct={direct}")


def _check_isolation_pre(c: LinearCode, t: int) -> None:
    if t < 1:
        raise ValueError("isolation is tested for t >= 1")
    if not in_class(c, t):
        raise ValueError(f"code is not in C_{t}(n, k)")


def isolated_geometric(c: LinearCode, t: int) -> bool:
    """Columns cover PG(k-1, q) with their t-point spans."""
    _check_isolation_pre(c, t)
    return covers_at_level(columns_as_points(c), t)


def isolated_direct(c: LinearCode, t: int) -> bool:
    """No [n, k-1] subcode lies in C_t(n, k-1)."""
    _check_isolation_pre(c, t)
    f, n = c.field, c.n
    for p in projective_points(c.k, f):
        if c.k == 1:
            sub = ()
        else:
            sub = rref_rows(apply_surjection(annihilator(p, f), c.gen, n, f), n, f)[0]
        if cached_dual_distance(sub, n, f).d_perp >= t + 1:
            return False
    return True


def is_isolated(c: LinearCode, t: int) -> bool:
    """Isolation of ``c`` in Λ_t, decided two independent ways.

    Raises :class:`IsolationDisagreement` if the saturating-set test and the
    subcode test differ.
    """
    geo = isolated_geometric(c, t)
    direct = isolated_direct(c, t)
    if geo != direct:
        raise IsolationDisagreement(c, t, geo, direct)
    return geo


# ---------------------------------------------------------------------------
# minimal covering sets


@dataclass(frozen=True)
class SaturationResult:
    k: int
    t: int
    q: int
    mode: str
    size: int
    witness: tuple[Row, ...]
    optimal: bool
    budget: int | None
    examined: int
    lower_bound: int = 1

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "t": self.t,
            "q": self.q,
            "mode": self.mode,
            "size": self.size,
            "witness": [list(p) for p in self.witness],
            "optimal": self.optimal,
            "budget": self.budget,
            "examined": self.examined,
            "lower_bound": self.lower_bound,
        }


def _greedy(k: int, t: int, f: FieldSpec) -> tuple[int, ...]:
    pts, _ = _pg(k, f)
    full = _full_mask(k, f)
    chosen: tuple[int, ...] = ()
    while _secant_mask(chosen, t, k, f) != full:
        best, best_cov = None, -1
        for i in range(len(pts)):
            if i in chosen:
                continue
            cov = bin(_secant_mask(tuple(sorted(chosen + (i,))), t, k, f)).count("1")
            if cov > best_cov:
                best, best_cov = i, cov
        chosen = tuple(sorted(chosen + (best,)))
    return chosen


def min_saturating_size(
    k: int, t: int, field: FieldSpec, mode: str = "exact", budget: int = DEFAULT_SEARCH_BUDGET
) -> SaturationResult:
    """Smallest Ω ⊆ PG(k-1, q) with S_t(Ω) = PG(k-1, q).

    ``exact`` tries sizes m = 1, 2, ... and, for each, all m-subsets in
    lexicographic order with coverage accumulated along the search path.  If
    more than ``budget`` subsets would be examined the greedy bound is
    returned with ``optimal=False``; ``lower_bound`` is then the first size
    that was not ruled out completely.  ``greedy`` adds the point of largest
    coverage gain until everything is covered.
    """
    if k < 1 or t < 0:
        raise ValueError("need k >= 1 and t >= 0")
    pts, _ = _pg(k, field)
    if mode == "greedy":
        w = _greedy(k, t, field)
        return SaturationResult(k, t, field.q, "greedy", len(w), tuple(pts[i] for i in w), False, None, 0, 1)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")

    full = _full_mask(k, field)
    npts = len(pts)
    examined = 0

    def search(m: int) -> tuple[int, ...] | None:
        nonlocal examined
        stack: list[tuple[int, ...]] = [()]
        # depth-first, lexicographic: children pushed in reverse order
        while stack:
            combo = stack.pop()
            if len(combo) == m:
                examined += 1
                if examined > budget:
                    raise BudgetExceeded("exact-search budget", budget)
                if _secant_mask(combo, t, k, field) == full:
                    return combo
                continue
            start = combo[-1] + 1 if combo else 0
            for i in range(npts - (m - len(combo)), start - 1, -1):
                stack.append(combo + (i,))
        return None

    m = 1
    try:
        for m in range(1, npts + 1):
            found = search(m)
            if found is not None:
                return SaturationResult(
                    k, t, field.q, "exact", m, tuple(pts[i] for i in found), True, budget, examined, m
                )
    except BudgetExceeded:
        w = _greedy(k, t, field)
        return SaturationResult(
            k, t, field.q, "exact", len(w), tuple(pts[i] for i in w), False, budget, examined, m
        )
    raise AssertionError("the whole space always covers itself")
