"""The graphs Γ(n,k), Δ_t(n,k), Λ_t(n,k) on enumerated code families.

Adjacency is stored in CSR form (``indptr``/``indices``, neighbours sorted).
The default build groups vertices by shared (k-1)-subspace, which yields every
edge exactly once; ``method="pairwise"`` evaluates the adjacency predicate on
all pairs instead and is kept for cross-checking small cases.
"""

from __future__ import annotations

import enum
import io
from collections import deque
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .codes import LinearCode, cached_dual_distance, in_class
from .gf import FieldSpec
from .grassmann import DEFAULT_SUBSPACE_CAP, SubspaceFamily, enumerate_subspaces
from .matgf import intersect_rowspaces, rank_rows


class GraphKind(str, enum.Enum):
    GAMMA = "gamma"
    DELTA = "delta"
    LAMBDA = "lambda"


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.count = size

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra
            self.count -= 1


def _check_same_params(x: LinearCode, y: LinearCode) -> None:
    if x.field is not y.field or x.n != y.n or x.k != y.k:
        raise ValueError("codes with different (q, n, k)")


def delta_adjacent(x: LinearCode, y: LinearCode) -> bool:
    """dim(x ∩ y) = k - 1."""
    _check_same_params(x, y)
    return rank_rows(x.gen + y.gen, x.n, x.field) == x.k + 1


def lambda_adjacent(x: LinearCode, y: LinearCode, t: int) -> bool:
    """Δ-adjacent and the intersection lies in C_t(n, k-1)."""
    _check_same_params(x, y)
    if not (in_class(x, t) and in_class(y, t)):
        raise ValueError(f"both codes must lie in C_{t}(n, k)")
    if not delta_adjacent(x, y):
        return False
    inter = intersect_rowspaces(x.matrix, y.matrix).rows
    return cached_dual_distance(inter, x.n, x.field).d_perp >= t + 1


_TRIU: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(m: int) -> tuple[np.ndarray, np.ndarray]:
    if m not in _TRIU:
        _TRIU[m] = np.triu_indices(m, 1)
    return _TRIU[m]


def _csr_from_edges(nv: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.concatenate([src, dst])
    b = np.concatenate([dst, src])
    order = np.lexsort((b, a))
    a, b = a[order], b[order]
    if len(a) > 1:
        dup = (a[1:] == a[:-1]) & (b[1:] == b[:-1])
        if dup.any():
            raise AssertionError("duplicate edge generated")
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(np.bincount(a, minlength=nv), out=indptr[1:])
    return indptr, b.astype(np.int64)


class CodeGraph:
    """A graph whose vertices are the members of ``family``.

    ``parent_index[i]`` is the position of vertex i in the complete family of
    k-subspaces it was carved from.
    """

    def __init__(
        self,
        kind: GraphKind,
        t: int,
        family: SubspaceFamily,
        indptr: np.ndarray,
        indices: np.ndarray,
        parent_index: np.ndarray | None = None,
        labels: np.ndarray | None = None,
    ):
        self.kind = GraphKind(kind)
        self.t = t
        self.family = family
        self.indptr = indptr
        self.indices = indices
        self.parent_index = parent_index if parent_index is not None else np.arange(len(family))
        if labels is not None:
            self.__dict__["labels"] = labels

    # -- basic structure ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.family)

    @property
    def n_edges(self) -> int:
        return int(len(self.indices) // 2)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> list[int]:
        return self.indices[self.indptr[v] : self.indptr[v + 1]].tolist()

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v) for v in range(self.n_vertices)]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.indices[self.indptr[u] : self.indptr[u + 1]]
        pos = np.searchsorted(row, v)
        return bool(pos < len(row) and row[pos] == v)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges (u, v) with u < v in lexicographic order."""
        for u in range(self.n_vertices):
            for v in self.indices[self.indptr[u] : self.indptr[u + 1]]:
                if v > u:
                    yield u, int(v)

    def edge_array(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n_vertices), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    # -- connectivity --------------------------------------------------------

    @cached_property
    def labels(self) -> np.ndarray:
        """Component label per vertex; components numbered by smallest member."""
        uf = UnionFind(self.n_vertices)
        for u, v in self.edge_array():
            uf.union(int(u), int(v))
        return _canonical_labels(uf)

    @cached_property
    def components(self) -> list[list[int]]:
        comps: list[list[int]] = [[] for _ in range(int(self.labels.max()) + 1 if self.n_vertices else 0)]
        for v, c in enumerate(self.labels.tolist()):
            comps[c].append(v)
        return comps

    @property
    def n_components(self) -> int:
        return len(self.components)

    def is_connected(self) -> bool:
        """Standard connectivity; the empty graph counts as connected."""
        return self.n_components <= 1

    def isolated(self) -> list[int]:
        return np.flatnonzero(self.degrees == 0).tolist()

    # -- distances -------------------------------------------------------------

    def bfs_distances(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def shortest_path(self, source: int, target: int) -> list[int] | None:
        prev = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if u == target:
                break
            for v in self.neighbors(u):
                if v not in prev:
                    prev[v] = u
                    queue.append(v)
        if target not in prev:
            return None
        path = [target]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        return path[::-1]

    def subgraph(self, vertices: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Induced subgraph in CSR form over ``vertices`` (relabelled 0..m-1)."""
        vertices = np.asarray(vertices, dtype=np.int64)
        remap = np.full(self.n_vertices, -1, dtype=np.int64)
        remap[vertices] = np.arange(len(vertices))
        src = np.repeat(np.arange(self.n_vertices), self.degrees)
        keep = (remap[src] >= 0) & (remap[self.indices] >= 0)
        a, b = remap[src[keep]], remap[self.indices[keep]]
        indptr = np.zeros(len(vertices) + 1, dtype=np.int64)
        np.cumsum(np.bincount(a, minlength=len(vertices)), out=indptr[1:])
        order = np.lexsort((b, a))
        return indptr, b[order]

    def diameter(self, component: int = 0) -> int:
        """Diameter of one connected component."""
        comp = self.components[component]
        if len(comp) <= 1:
            return 0
        indptr, indices = self.subgraph(comp)
        return csr_diameter(indptr, indices)

    def diameters(self) -> list[int]:
        return [self.diameter(i) for i in range(self.n_components)]

    # -- export --------------------------------------------------------------

    def summary(self, with_diameter: bool = True) -> dict:
        return {
            "kind": self.kind.value,
            "q": self.family.field.q,
            "n": self.family.n,
            "k": self.family.k,
            "t": self.t,
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "components": self.n_components,
            "isolated": len(self.isolated()),
            "diameter_per_component": self.diameters() if with_diameter else None,
        }

    def to_dot(self) -> str:
        out = io.StringIO()
        name = f"{self.kind.value}_q{self.family.field.q}_n{self.family.n}_k{self.family.k}_t{self.t}"
        out.write(f"graph {name} {{\n")
        for v, code in enumerate(self.family):
            label = " ".join(str(x) for row in code.gen for x in row)
            out.write(f'  {v} [label="{label}"];\n')
        for u, v in self.edge_array().tolist():
            out.write(f"  {u} -- {v};\n")
        out.write("}\n")
        return out.getvalue()

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("source,target\n")
        for u, v in self.edge_array().tolist():
            out.write(f"{u},{v}\n")
        return out.getvalue()


def _canonical_labels(uf: UnionFind) -> np.ndarray:
    size = len(uf.parent)
    labels = np.empty(size, dtype=np.int64)
    seen: dict[int, int] = {}
    for v in range(size):
        r = uf.find(v)
        if r not in seen:
            seen[r] = len(seen)
        labels[v] = seen[r]
    return labels


def csr_diameter(indptr: np.ndarray, indices: np.ndarray, budget_bytes: int = 64 << 20) -> int:
    """Diameter of a connected graph given in CSR form with no isolated vertex.

    Runs breadth-first search from every vertex at once, 64 sources per machine
    word: each round ORs every vertex's reach bitset with its neighbours'.  The
    number of rounds that still change something is the largest eccentricity
    among the sources of that batch.
    """
    nv = len(indptr) - 1
    if nv <= 1:
        return 0
    if (np.diff(indptr) == 0).any():
        raise ValueError("graph is not connected")
    nnz = max(len(indices), 1)
    words = int(max(1, min(32, budget_bytes // (8 * nnz))))
    batch = 64 * words
    starts = indptr[:-1]
    best = 0
    for lo in range(0, nv, batch):
        hi = min(nv, lo + batch)
        bits = np.zeros((nv, words), dtype=np.uint64)
        offs = np.arange(hi - lo)
        onehot = np.left_shift(np.uint64(1), (offs % 64).astype(np.uint64))
        bits[lo + offs, offs // 64] = onehot
        want = np.zeros(words, dtype=np.uint64)
        np.bitwise_or.at(want, offs // 64, onehot)
        rounds = 0
        while True:
            reach = np.bitwise_or.reduceat(bits[indices], starts, axis=0)
            reach |= bits
            if np.array_equal(reach, bits):
                break
            bits = reach
            rounds += 1
        if not (bits == want).all():
            raise ValueError("graph is not connected")
        best = max(best, rounds)
    return best


def build_graph(
    kind: GraphKind | str,
    n: int,
    k: int,
    t: int,
    field: FieldSpec,
    cap: int = DEFAULT_SUBSPACE_CAP,
    method: str = "incidence",
) -> CodeGraph:
    """Build Γ (t must be 0), Δ_t or Λ_t on C_t(n, k)."""
    kind = GraphKind(kind)
    if kind is GraphKind.GAMMA and t != 0:
        raise ValueError("the Grassmann graph has t = 0")
    if not 0 <= t <= k or not 0 < k < n:
        raise ValueError(f"invalid parameters n={n}, k={k}, t={t}")
    full = enumerate_subspaces(n, k, field, cap)
    vertices = np.flatnonzero(full.class_mask(t))
    family = full if len(vertices) == len(full) else SubspaceFamily(n, k, field, [full[int(v)] for v in vertices])
    if method == "incidence":
        return _build_by_incidence(kind, t, full, family, vertices)
    if method == "pairwise":
        return _build_pairwise(kind, t, family, vertices)
    raise ValueError(f"unknown build method {method!r}")


def _build_by_incidence(kind, t, full, family, vertices) -> CodeGraph:
    nv = len(vertices)
    remap = np.full(len(full), -1, dtype=np.int64)
    remap[vertices] = np.arange(nv)
    inc = full.incidence
    good = inc.sub_class_mask(t)
    uf = UnionFind(nv)
    srcs, dsts = [], []
    for si, bucket in enumerate(inc.buckets):
        if kind is GraphKind.LAMBDA and not good[si]:
            continue
        members = remap[bucket]
        members = members[members >= 0]
        m = len(members)
        if m < 2:
            continue
        for a, b in zip(members[:-1].tolist(), members[1:].tolist()):
            uf.union(a, b)
        iu, ju = _triu(m)
        srcs.append(members[iu])
        dsts.append(members[ju])
    if srcs:
        src, dst = np.concatenate(srcs), np.concatenate(dsts)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    indptr, indices = _csr_from_edges(nv, src, dst)
    return CodeGraph(kind, t, family, indptr, indices, vertices, labels=_canonical_labels(uf))


def _build_pairwise(kind, t, family, vertices) -> CodeGraph:
    members = family.members
    src, dst = [], []
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if kind is GraphKind.LAMBDA:
                adj = lambda_adjacent(members[i], members[j], t)
            else:
                adj = delta_adjacent(members[i], members[j])
            if adj:
                src.append(i)
                dst.append(j)
    indptr, indices = _csr_from_edges(
        len(members), np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)
    )
    return CodeGraph(kind, t, family, indptr, indices, vertices)


def components(g: CodeGraph) -> list[list[int]]:
    return g.components


def diameter(g: CodeGraph, restrict_to_component: int = 0) -> int:
    return g.diameter(restrict_to_component)


def isolated_vertices(g: CodeGraph) -> list[int]:
    """Degree-0 vertices of a Λ_t graph."""
    if g.kind is not GraphKind.LAMBDA:
        raise ValueError("isolated_vertices is defined on Λ_t graphs")
    return g.isolated()
