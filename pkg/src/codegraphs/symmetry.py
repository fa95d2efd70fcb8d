"""Monomial maps on GF(q)^n and their action on codes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .codes import LinearCode
from .errors import BudgetExceeded
from .gf import FieldSpec, primitive_element
from .graphs import GraphKind
from .matgf import rank_rows, rref_rows

DEFAULT_ORBIT_BUDGET = 10**5


@dataclass(frozen=True)
class MonomialMap:
    """Column j moves to position ``perm[j]`` after scaling by ``scales[j]``.

    Positions are 0-based.
    """

    perm: tuple[int, ...]
    scales: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")
        if len(self.scales) != len(self.perm):
            raise ValueError("perm and scales differ in length")
        if any(s == 0 for s in self.scales):
            raise ValueError("scales must be nonzero")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> MonomialMap:
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> MonomialMap:
        perm = list(range(n))
        perm[i], perm[j] = j, i
        return cls(tuple(perm), (1,) * n)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(s == 1 for s in self.scales)

    def compose(self, other: MonomialMap, f: FieldSpec) -> MonomialMap:
        """The map applying ``other`` first, then ``self``."""
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        scales = tuple(f.mul[self.scales[other.perm[j]]][other.scales[j]] for j in range(self.n))
        return MonomialMap(perm, scales)

    def apply_vector(self, v: Sequence[int], f: FieldSpec) -> tuple[int, ...]:
        out = [0] * self.n
        for j, x in enumerate(v):
            out[self.perm[j]] = f.mul[self.scales[j]][x]
        return tuple(out)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "scales": list(self.scales)}

    @classmethod
    def from_json(cls, data: dict) -> MonomialMap:
        return cls(tuple(data["perm"]), tuple(data["scales"]))


def generators(n: int, f: FieldSpec) -> list[MonomialMap]:
    """Transpositions (i j), i < j, then diag(α, 1, ..., 1) when q > 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    gens = [MonomialMap.swap(n, i, j) for i in range(n) for j in range(i + 1, n)]
    if f.q > 2:
        gens.append(MonomialMap(tuple(range(n)), (primitive_element(f),) + (1,) * (n - 1)))
    return gens


def act(m: MonomialMap, c: LinearCode) -> LinearCode:
    if m.n != c.n:
        raise ValueError(f"map on {m.n} coordinates applied to a code of length {c.n}")
    f = c.field
    if any(s >= f.q for s in m.scales):
        raise ValueError(f"scale outside {f!r}")
    rows = [m.apply_vector(r, f) for r in c.gen]
    return LinearCode(f, rref_rows(rows, c.n, f)[0], c.n)


def orbit(c: LinearCode, budget: int = DEFAULT_ORBIT_BUDGET) -> set[LinearCode]:
    """Closure of {c} under the monomial generators, by breadth-first search."""
    gens = generators(c.n, c.field)
    seen = {c}
    queue = deque([c])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = act(g, x)
            if y not in seen:
                if len(seen) >= budget:
                    raise BudgetExceeded("orbit budget", budget)
                seen.add(y)
                queue.append(y)
    return seen


def generator_step_ok(c: LinearCode, image: LinearCode) -> bool:
    """``image`` equals ``c`` or meets it in a hyperplane."""
    return rank_rows(c.gen + image.gen, c.n, c.field) in (c.k, c.k + 1)


def verify_orbit_in_component(c: LinearCode, t: int, g) -> bool:
    """Every orbit member of ``c`` lies in the Δ_t component of ``c``.

    ``g`` must be the Δ_t graph of c's parameters.
    """
    fam = g.family
    if g.kind is not GraphKind.DELTA or g.t != t:
        raise ValueError("expected the Δ_t graph")
    if (fam.n, fam.k, fam.field) != (c.n, c.k, c.field):
        raise ValueError("graph and code parameters differ")
    labels = g.labels
    home_v = fam.get(c.gen)
    if home_v < 0:
        raise ValueError("code is not a vertex of the graph")
    home = labels[home_v]
    for member in orbit(c):
        v = fam.get(member.gen)
        if v < 0 or labels[v] != home:
            return False
    return True
