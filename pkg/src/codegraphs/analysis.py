"""Verifiers for the structural claims about Δ_t and Λ_t, and threshold scans.

Every verifier returns a :class:`VerificationReport`.  Verifiers compute their
evidence directly (graph builds, isolation tests, pencils, Plücker points) and
never take one claim as given to check another.  Graphs and isolation flags
are cached per (q, n, k) so a grid run builds each graph once per claim.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np

from .codes import LinearCode, subcode_by_kernel
from .errors import BudgetExceeded
from .gf import FieldSpec, field_of_order
from .graphs import CodeGraph, GraphKind, build_graph, csr_diameter, lambda_adjacent
from .grassmann import DEFAULT_SUBSPACE_CAP, SubspaceFamily, enumerate_subspaces, pencil, plucker_line_in_variety
from .matgf import projective_points, rref_rows
from .saturation import (
    DEFAULT_SEARCH_BUDGET,
    columns_as_points,
    covers_at_level,
    isolated_direct,
    isolated_geometric,
    min_saturating_size,
)
from .symmetry import DEFAULT_ORBIT_BUDGET, act, generator_step_ok, generators, orbit

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"
EQUAL, UNEQUAL, UNRESOLVED = "EQUAL", "UNEQUAL", "UNRESOLVED"

CLAIMS = (
    "main-thm-1",
    "main-thm-2",
    "t1-threshold",
    "t2-threshold",
    "large-q",
    "transparency",
    "diameter",
    "equiv",
    "conjecture",
)


# ---------------------------------------------------------------------------
# grid and report types


@dataclass(frozen=True, order=True)
class Cell:
    q: int
    n: int
    k: int
    t: int

    def to_json(self) -> dict:
        return {"q": self.q, "n": self.n, "k": self.k, "t": self.t}


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid: for each q, lengths n up to ``n_max`` and k up to ``k_max``."""

    n_max: tuple[tuple[int, int], ...] = ((2, 7), (3, 5), (4, 5))
    k_max: int = 4
    subspace_cap: int = DEFAULT_SUBSPACE_CAP
    orbit_budget: int = DEFAULT_ORBIT_BUDGET
    search_budget: int = DEFAULT_SEARCH_BUDGET
    sample_size: int = 1000

    def __post_init__(self):
        if not self.n_max or self.k_max < 1:
            raise ValueError("grid ranges must be nonempty")
        for q, nm in self.n_max:
            field_of_order(q)
            if nm < 2:
                raise ValueError(f"n_max for q={q} must be >= 2")
        if min(self.subspace_cap, self.orbit_budget, self.search_budget, self.sample_size) <= 0:
            raise ValueError("caps must be positive")

    @property
    def q_values(self) -> list[int]:
        return [q for q, _ in self.n_max]

    def n_max_for(self, q: int) -> int:
        return dict(self.n_max)[q]

    def triples(self) -> list[tuple[int, int, int]]:
        out = []
        for q, nm in self.n_max:
            for n in range(2, nm + 1):
                for k in range(1, min(self.k_max, n - 1) + 1):
                    out.append((q, n, k))
        return out

    def cells(self) -> list[Cell]:
        return [Cell(q, n, k, t) for q, n, k in self.triples() for t in range(k + 1)]

    def qk_pairs(self) -> list[tuple[int, int]]:
        return sorted({(q, k) for q, _, k in self.triples()})

    def to_json(self) -> dict:
        return {
            "n_max": {str(q): nm for q, nm in self.n_max},
            "k_max": self.k_max,
            "subspace_cap": self.subspace_cap,
            "orbit_budget": self.orbit_budget,
            "search_budget": self.search_budget,
            "sample_size": self.sample_size,
        }


def default_grid() -> GridSpec:
    return GridSpec()


@dataclass
class VerificationReport:
    """Outcome of one claim on one cell.  ``runtime`` is not serialized."""

    claim: str
    cell: dict
    outcome: str
    reason: str = ""
    witness: object = None
    details: dict = field(default_factory=dict)
    runtime: float = 0.0

    def __post_init__(self):
        if self.outcome not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if self.outcome == FAIL and self.witness is None:
            raise ValueError("a FAIL report needs a witness")

    @property
    def failed(self) -> bool:
        return self.outcome == FAIL

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "cell": self.cell,
            "outcome": self.outcome,
            "reason": self.reason,
            "witness": self.witness,
            "details": self.details,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass
class ThresholdResult:
    """ν_t(k;q) and ν_t⁺(k;q) found by scanning n = k+1 .. ceiling."""

    q: int
    k: int
    t: int
    ceiling: int
    nu: int | None
    nu_plus: int | None
    status: str
    witness: dict | None = None
    rows: list = field(default_factory=list)

    def __post_init__(self):
        if self.nu is not None and self.nu_plus is not None and self.nu > self.nu_plus:
            raise ValueError("nu must not exceed nu_plus")

    @property
    def nu_found(self) -> bool:
        return self.nu is not None

    @property
    def nu_plus_found(self) -> bool:
        return self.nu_plus is not None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "k": self.k,
            "t": self.t,
            "ceiling": self.ceiling,
            "nu": self.nu,
            "nu_plus": self.nu_plus,
            "status": self.status,
            "witness": self.witness,
            "rows": self.rows,
        }


def _code_json(c: LinearCode) -> list[list[int]]:
    return [list(r) for r in c.gen]


# ---------------------------------------------------------------------------
# per-(q, n, k) cached data


class CellData:
    """Family, graphs, isolation flags and diameters for one (q, n, k)."""

    def __init__(self, q: int, n: int, k: int, cap: int = DEFAULT_SUBSPACE_CAP):
        self.q, self.n, self.k, self.cap = q, n, k, cap
        self.field = field_of_order(q)
        self._graphs: dict[tuple[GraphKind, int], CodeGraph] = {}
        self._isolation: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._diameters: dict[tuple[GraphKind, int], int] = {}

    @cached_property
    def full(self) -> SubspaceFamily:
        return enumerate_subspaces(self.n, self.k, self.field, self.cap)

    def class_size(self, t: int) -> int:
        return int(self.full.class_mask(t).sum())

    def graph(self, kind: GraphKind | str, t: int) -> CodeGraph:
        key = (GraphKind(kind), t)
        if key not in self._graphs:
            self._graphs[key] = build_graph(key[0], self.n, self.k, t, self.field, self.cap)
        return self._graphs[key]

    def isolation(self, t: int) -> tuple[np.ndarray, np.ndarray]:
        """(geometric, direct) isolation flags for the vertices of Λ_t."""
        if t not in self._isolation:
            fam = self.graph(GraphKind.LAMBDA, t).family
            geo = np.array([isolated_geometric(c, t) for c in fam], dtype=bool)
            direct = np.array([isolated_direct(c, t) for c in fam], dtype=bool)
            self._isolation[t] = (geo, direct)
        return self._isolation[t]

    def lambda_tilde_diameter(self, t: int) -> int:
        key = (GraphKind.LAMBDA, t)
        if key not in self._diameters:
            g = self.graph(GraphKind.LAMBDA, t)
            keep = np.flatnonzero(g.degrees > 0)
            indptr, indices = g.subgraph(keep)
            self._diameters[key] = csr_diameter(indptr, indices)
        return self._diameters[key]

    def delta_diameter(self, t: int) -> int:
        key = (GraphKind.DELTA, t)
        if key not in self._diameters:
            g = self.graph(GraphKind.DELTA, t)
            self._diameters[key] = csr_diameter(g.indptr, g.indices)
        return self._diameters[key]


_CELL_CACHE: OrderedDict = OrderedDict()
_CELL_CACHE_SIZE = 3


def cell_data(q: int, n: int, k: int, cap: int = DEFAULT_SUBSPACE_CAP) -> CellData:
    key = (q, n, k, cap)
    if key in _CELL_CACHE:
        _CELL_CACHE.move_to_end(key)
        return _CELL_CACHE[key]
    cd = CellData(q, n, k, cap)
    _CELL_CACHE[key] = cd
    while len(_CELL_CACHE) > _CELL_CACHE_SIZE:
        _CELL_CACHE.popitem(last=False)
    return cd


def clear_cache() -> None:
    _CELL_CACHE.clear()


# ---------------------------------------------------------------------------
# connectivity conventions


def lambda_disconnected(g: CodeGraph) -> bool:
    """Disconnection as used for ν_t: two or more components, or an isolated
    vertex (a single isolated vertex counts).  The empty graph is connected."""
    if g.n_vertices == 0:
        return False
    return g.n_components >= 2 or bool((g.degrees == 0).any())


def tilde_connected(g: CodeGraph) -> bool:
    """Whether the non-isolated vertices of ``g`` lie in one component."""
    keep = g.degrees > 0
    return len(set(g.labels[keep].tolist())) <= 1


def _timed(fn: Callable[..., VerificationReport]) -> Callable[..., VerificationReport]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            rep = fn(*args, **kwargs)
        except BudgetExceeded as exc:
            rep = VerificationReport(fn.__name__, {}, SKIPPED, reason=str(exc))
            rep.details["cap"] = exc.cap
        rep.runtime = time.perf_counter() - start
        return rep

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _report(claim: str, cell: dict, failures: list, details: dict, reason_ok: str = "") -> VerificationReport:
    if failures:
        return VerificationReport(claim, cell, FAIL, reason=failures[0]["what"], witness=failures[:5], details=details)
    return VerificationReport(claim, cell, PASS, reason=reason_ok, details=details)


# ---------------------------------------------------------------------------
# connectivity equivalence and the path through sums of subcodes


def _good_subcode(x: LinearCode, t: int) -> LinearCode | None:
    for p in projective_points(x.k, x.field):
        d = subcode_by_kernel(x, p)
        if d is not None and d.d_perp >= t + 1:
            return d
    return None


def lemma_cc_path(x: LinearCode, y: LinearCode, t: int, delta_lower: CodeGraph) -> list[LinearCode] | None:
    """Path x, E_0, ..., E_{w-1}, y in Λ_t(n, k) built from a Δ_t(n, k-1) path.

    D_0 ⊂ x and D_w ⊂ y are subcodes in C_t(n, k-1), D_0 ... D_w a shortest
    path between them in ``delta_lower`` and E_i = D_i + D_{i+1}.  Consecutive
    duplicates are dropped.  Returns None when some ingredient is missing.
    """
    dx, dy = _good_subcode(x, t), _good_subcode(y, t)
    if dx is None or dy is None:
        return None
    fam = delta_lower.family
    i, j = fam.get(dx.gen), fam.get(dy.gen)
    if i < 0 or j < 0:
        return None
    route = delta_lower.shortest_path(i, j)
    if route is None:
        return None
    f, n = x.field, x.n
    seq = [x]
    for a, b in zip(route, route[1:]):
        e = LinearCode(f, rref_rows(fam[a].gen + fam[b].gen, n, f)[0], n)
        seq.append(e)
    seq.append(y)
    out = [seq[0]]
    for c in seq[1:]:
        if c != out[-1]:
            out.append(c)
    return out


def validate_path(path: list[LinearCode], t: int) -> int | None:
    """Index of the first step that is not a Λ_t edge, or None if all are."""
    for i, (a, b) in enumerate(zip(path, path[1:])):
        try:
            if not lambda_adjacent(a, b, t):
                return i
        except ValueError:
            return i
    return None


def _sample_pairs(items: list[int], count: int) -> list[tuple[int, int]]:
    if len(items) < 2:
        return []
    picks = sorted({round(x) for x in np.linspace(0, len(items) - 1, count + 1)})
    pairs = [(items[0], items[-1])]
    pairs += [(items[a], items[b]) for a, b in zip(picks, picks[1:]) if a != b]
    return sorted(set(pairs))


def _lower_delta_connected(q: int, n: int, k: int, t: int, cap: int) -> tuple[bool, dict, CodeGraph | None]:
    """Connectivity of Δ_t(n, k-1), with the zero-dimensional case as a single point."""
    if k == 1:
        return True, {"lower_dim": 0, "lower_vertices": None, "convention": "Δ_t(n,0) has at most one vertex"}, None
    lower = cell_data(q, n, k - 1, cap)
    if t > k - 1:
        size = lower.class_size(t)
        info = {"lower_dim": k - 1, "lower_vertices": size}
        if size:
            raise AssertionError(f"C_{t}(n,{k - 1}) nonempty with t > k-1")
        return True, info, None
    dg = lower.graph(GraphKind.DELTA, t)
    return dg.is_connected(), {"lower_dim": k - 1, "lower_vertices": dg.n_vertices, "lower_components": dg.n_components}, dg


@_timed
def verify_main_thm_1(cell: Cell, cap: int = DEFAULT_SUBSPACE_CAP, path_pairs: int = 6) -> VerificationReport:
    """Δ_t(n,k-1) connected ⟺ Λ̃_t(n,k) connected, plus Λ_t = Λ̃_t ⊔ ℐ_t and
    the constructive path between non-isolated codes."""
    q, n, k, t = cell.q, cell.n, cell.k, cell.t
    cd = cell_data(q, n, k, cap)
    lam = cd.graph(GraphKind.LAMBDA, t)
    failures = []
    try:
        lower_conn, lower_info, dg = _lower_delta_connected(q, n, k, t, cap)
    except AssertionError as exc:
        return VerificationReport("main-thm-1", cell.to_json(), FAIL, reason=str(exc), witness={"t": t, "k": k})

    isolated = lam.isolated()
    if t >= 1:
        geo, direct = cd.isolation(t)
        expected = np.flatnonzero(geo & direct).tolist()
        for v in np.flatnonzero(geo != direct).tolist():
            failures.append({"what": "isolation tests disagree", "code": _code_json(lam.family[v])})
    else:
        expected = []
    if isolated != expected:
        diff = sorted(set(isolated) ^ set(expected))
        failures.append({"what": "degree-0 vertices differ from isolated codes", "code": _code_json(lam.family[diff[0]])})

    keep = np.flatnonzero(lam.degrees > 0)
    _, sub_indices = lam.subgraph(keep)
    if len(sub_indices) // 2 != lam.n_edges or len(keep) + len(isolated) != lam.n_vertices:
        failures.append({"what": "Λ_t is not the disjoint union of Λ̃_t and ℐ_t", "code": None})

    tilde_conn = tilde_connected(lam)
    if tilde_conn != lower_conn:
        comps = sorted({int(lam.labels[v]) for v in keep})
        failures.append({
            "what": "connectivity of Δ_t(n,k-1) and Λ̃_t(n,k) differ",
            "lower_connected": lower_conn,
            "tilde_connected": tilde_conn,
            "tilde_components": len(comps),
        })

    paths_checked = 0
    if lower_conn and dg is not None and len(keep) >= 2:
        for a, b in _sample_pairs(keep.tolist(), path_pairs):
            x, y = lam.family[a], lam.family[b]
            path = lemma_cc_path(x, y, t, dg)
            bad = None if path is not None else -1
            if path is not None:
                bad = validate_path(path, t)
            if bad is not None:
                failures.append({"what": "constructed path is not a Λ_t path", "x": _code_json(x), "y": _code_json(y), "step": bad})
            paths_checked += 1

    details = {
        "lambda_vertices": lam.n_vertices,
        "lambda_edges": lam.n_edges,
        "isolated": len(isolated),
        "tilde_vertices": int(len(keep)),
        "tilde_connected": tilde_conn,
        "lower_connected": lower_conn,
        "paths_checked": paths_checked,
        **lower_info,
    }
    return _report("main-thm-1", cell.to_json(), failures, details)


@_timed
def verify_isolation_agreement(cell: Cell, cap: int = DEFAULT_SUBSPACE_CAP) -> VerificationReport:
    """Saturating-coverage and subcode isolation tests agree on every vertex."""
    if cell.t < 1:
        raise ValueError("isolation is defined for t >= 1")
    cd = cell_data(cell.q, cell.n, cell.k, cap)
    fam = cd.graph(GraphKind.LAMBDA, cell.t).family
    geo, direct = cd.isolation(cell.t)
    failures = [
        {"what": "isolation tests disagree", "code": _code_json(fam[v]), "geometric": bool(geo[v]), "direct": bool(direct[v])}
        for v in np.flatnonzero(geo != direct).tolist()
    ]
    details = {"vertices": len(fam), "isolated": int(geo.sum())}
    return _report("main-thm-2", cell.to_json(), failures, details)


# ---------------------------------------------------------------------------
# thresholds


def _scan_row(g: CodeGraph) -> dict:
    return {
        "n": g.family.n,
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "components": g.n_components,
        "isolated": len(g.isolated()),
        "disconnected": lambda_disconnected(g),
    }


@_timed
def verify_t1_threshold(q: int, k: int, n_max: int, cap: int = DEFAULT_SUBSPACE_CAP) -> VerificationReport:
    """Λ₁(n,k) disconnected exactly when n >= (q^k-1)/(q-1); isolated codes are
    those whose columns meet every point of PG(k-1,q); at the threshold they
    form a single monomial orbit."""
    threshold = (q**k - 1) // (q - 1)
    cell = {"q": q, "k": k, "t": 1, "n_max": n_max}
    if n_max < threshold:
        return VerificationReport("t1-threshold", cell, SKIPPED, reason=f"threshold {threshold} above n_max")
    f = field_of_order(q)
    pg = set(projective_points(k, f))
    rows, failures = [], []
    for n in range(k + 1, n_max + 1):
        g = cell_data(q, n, k, cap).graph(GraphKind.LAMBDA, 1)
        row = _scan_row(g)
        iso = g.isolated()
        full_cols = [v for v, c in enumerate(g.family) if set(columns_as_points(c).points) == pg]
        row["full_column_codes"] = len(full_cols)
        if row["disconnected"] != (n >= threshold):
            failures.append({"what": "connectivity does not flip at the threshold", "n": n, "disconnected": row["disconnected"]})
        if iso != full_cols:
            v = sorted(set(iso) ^ set(full_cols))[0]
            failures.append({"what": "isolated codes differ from codes with all points as columns", "n": n, "code": _code_json(g.family[v])})
        if n == threshold and iso:
            members = {g.family[v] for v in iso}
            orb = orbit(g.family[iso[0]])
            row["isolated_orbits"] = 1 if orb == members else None
            if orb != members:
                failures.append({"what": "isolated codes at the threshold are not one orbit", "n": n, "code": _code_json(g.family[iso[0]])})
            row["isolated_witness"] = _code_json(g.family[iso[0]])
        rows.append(row)
    details = {"threshold": threshold, "rows": rows, "connected_side": [r["n"] for r in rows if r["n"] < threshold]}
    return _report("t1-threshold", cell, failures, details)


@_timed
def verify_t2_threshold(
    q: int, k: int, n_max: int, cap: int = DEFAULT_SUBSPACE_CAP, search_budget: int = DEFAULT_SEARCH_BUDGET
) -> VerificationReport:
    """Λ₂(n,k) disconnected exactly when n reaches the least size of a point
    set whose 2-secants cover PG(k-1,q); isolated codes are those whose
    columns have that property."""
    cell = {"q": q, "k": k, "t": 2, "n_max": n_max}
    if k < 2:
        raise ValueError("t = 2 needs k >= 2")
    f = field_of_order(q)
    sat = min_saturating_size(k, 1, f, "exact", search_budget)
    lo = sat.lower_bound
    hi = sat.size
    rows, failures, undecided, vacuous = [], [], [], []
    for n in range(k + 1, n_max + 1):
        g = cell_data(q, n, k, cap).graph(GraphKind.LAMBDA, 2)
        row = _scan_row(g)
        iso = set(g.isolated())
        for v, c in enumerate(g.family):
            if covers_at_level(columns_as_points(c), 2) != (v in iso):
                failures.append({"what": "isolation differs from 2-secant coverage", "n": n, "code": _code_json(c)})
                break
        if not row["vertices"]:
            # no code to speak of: the statement is vacuous here
            expected = None
            vacuous.append(n)
        elif n < lo:
            expected = False
        elif n >= hi:
            expected = True
        else:
            expected = None
            undecided.append(n)
        if expected is not None and row["disconnected"] != expected:
            failures.append({"what": "connectivity does not flip at the minimum coverage size", "n": n, "disconnected": row["disconnected"]})
        rows.append(row)
    details = {
        "min_coverage": sat.to_json(),
        "rows": rows,
        "connected_side": [r["n"] for r in rows if r["n"] < lo and r["vertices"]],
        "disconnected_side": [r["n"] for r in rows if r["n"] >= hi and r["vertices"]],
        "undecided": undecided,
        "empty_class": vacuous,
    }
    reason = "" if sat.optimal else f"exact search stopped by budget; sizes below {lo} excluded"
    return _report("t2-threshold", cell, failures, details, reason_ok=reason)


def scan_thresholds(q: int, k: int, t: int, n_ceiling: int, cap: int = DEFAULT_SUBSPACE_CAP) -> ThresholdResult:
    """Scan n = k+1 .. n_ceiling for ν_t(k;q) and ν_t⁺(k;q)."""
    if not 0 <= t <= k:
        raise ValueError("need 0 <= t <= k")
    nu = nu_plus = None
    rows, witness = [], None
    for n in range(k + 1, n_ceiling + 1):
        g = cell_data(q, n, k, cap).graph(GraphKind.LAMBDA, t)
        row = _scan_row(g)
        rows.append(row)
        if nu is None and row["disconnected"]:
            nu = n
            reps = [g.family[comp[0]] for comp in g.components[:3]]
            witness = {"n": n, "component_sizes": sorted((len(c) for c in g.components), reverse=True)[:10],
                       "representatives": [_code_json(c) for c in reps]}
        if nu_plus is None and row["isolated"]:
            nu_plus = n
            witness = dict(witness or {}, isolated_code=_code_json(g.family[g.isolated()[0]]))
        if nu_plus is not None:
            break
    if nu is not None and nu_plus is not None:
        status = EQUAL if nu == nu_plus else UNEQUAL
    elif nu is not None:
        # disconnected below the ceiling without any isolated code up to it
        status = UNEQUAL
    else:
        status = UNRESOLVED
    return ThresholdResult(q, k, t, n_ceiling, nu, nu_plus, status, witness, rows)


@_timed
def verify_conjecture(q: int, k: int, t: int, n_ceiling: int, cap: int = DEFAULT_SUBSPACE_CAP) -> VerificationReport:
    """ν_t = ν_t⁺ must hold for t in {1, 2}; for larger t the status is recorded."""
    res = scan_thresholds(q, k, t, n_ceiling, cap)
    cell = {"q": q, "k": k, "t": t, "n_max": n_ceiling}
    details = res.to_json()
    if t in (1, 2) and res.status == UNEQUAL:
        return VerificationReport("conjecture", cell, FAIL, reason="ν_t and ν_t⁺ differ", witness=res.witness, details=details)
    return VerificationReport("conjecture", cell, PASS, reason=res.status, details=details)


# ---------------------------------------------------------------------------
# large q, t = k, emptiness of the isolated set


@_timed
def verify_large_q(cell: Cell, cap: int = DEFAULT_SUBSPACE_CAP) -> VerificationReport:
    """Checks whichever of these apply to the cell:

    - t = k: Λ_k has no edges;
    - t < k and q > C(n,t): Λ_t is connected;
    - t < k and q^(k-t) > C(n,t): C_t(n,k) nonempty and no isolated code;
    - t < k and q^k - 1 > C(n,t)(q^t - 1): no isolated code.
    """
    q, n, k, t = cell.q, cell.n, cell.k, cell.t
    lam = cell_data(q, n, k, cap).graph(GraphKind.LAMBDA, t)
    binom = math.comb(n, t)
    iso = lam.isolated()
    checks, failures = [], []
    if t == k:
        checks.append("edgeless")
        if lam.n_edges:
            u, v = lam.edge_array()[0].tolist()
            failures.append({"what": "Λ_k has an edge", "x": _code_json(lam.family[u]), "y": _code_json(lam.family[v])})
    else:
        if q > binom:
            checks.append("large-q-connected")
            if lam.n_vertices == 0 or lambda_disconnected(lam):
                failures.append({"what": "Λ_t not connected although q > C(n,t)", "vertices": lam.n_vertices,
                                 "components": lam.n_components, "isolated": len(iso)})
        if q ** (k - t) > binom:
            checks.append("no-isolated")
            if lam.n_vertices == 0:
                failures.append({"what": "C_t(n,k) empty although q^(k-t) > C(n,t)", "vertices": 0})
            if iso:
                failures.append({"what": "isolated code although q^(k-t) > C(n,t)", "code": _code_json(lam.family[iso[0]])})
        if q**k - 1 > binom * (q**t - 1):
            checks.append("no-isolated-counting")
            if iso:
                failures.append({"what": "isolated code although q^k-1 > C(n,t)(q^t-1)", "code": _code_json(lam.family[iso[0]])})
    details = {"checks": checks, "binom": binom, "vertices": lam.n_vertices, "edges": lam.n_edges,
               "components": lam.n_components, "isolated": len(iso)}
    return _report("large-q", cell.to_json(), failures, details, reason_ok="" if checks else "hypotheses not met")


# ---------------------------------------------------------------------------
# transparency


class _PluckerIndex:
    """Lookup from (possibly unnormalized) Plücker vectors to family members.

    Vectors are encoded as base-q integers.  Every nonzero multiple of every
    member's Plücker vector is stored, so a vector is found without scaling
    it first.  In characteristic 2 field addition is XOR of element indices,
    so sums of encoded vectors are XORs of their codes.
    """

    def __init__(self, fam: SubspaceFamily):
        f = fam.field
        q = f.q
        P = fam.plucker_keys.astype(np.uint8)
        width = P.shape[1]
        if width * math.log2(q) > 62:
            raise OverflowError("Plücker vectors do not fit a 64-bit code")
        self.field = f
        self.P = P
        self.weights = np.array([q**i for i in range(width - 1, -1, -1)], dtype=np.int64)
        self.mul8 = np.array(f.mul, dtype=np.uint8)
        self.add8 = np.array(f.add, dtype=np.uint8)
        scaled = np.stack([self.encode(self.mul8[mu][P]) for mu in range(1, q)])
        self.scaled = scaled
        flat = scaled.ravel()
        owner = np.tile(np.arange(len(fam), dtype=np.int64), q - 1)
        order = np.argsort(flat, kind="stable")
        self.sorted = flat[order]
        self.owner = owner[order]

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits.astype(np.int64) @ self.weights

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.sorted, codes)
        pos = np.minimum(pos, len(self.sorted) - 1)
        hit = self.sorted[pos] == codes
        return np.where(hit, self.owner[pos], -1)

    def combo(self, i: np.ndarray, j: np.ndarray, lam: int) -> np.ndarray:
        """Codes of P_i + lam * P_j (broadcasting i against j)."""
        if lam == 0:
            return np.broadcast_to(self.scaled[0][i], np.broadcast_shapes(np.shape(i), np.shape(j)))
        if self.field.p == 2:
            return self.scaled[0][i] ^ self.scaled[lam - 1][j]
        s = self.add8[self.P[i], self.mul8[lam][self.P[j]]]
        return self.encode(s)


def _transparency_lines(fam: SubspaceFamily, t: int, idx: _PluckerIndex) -> tuple[dict, list]:
    """Pencil conditions and Plücker images on every line of the geometry."""
    q = fam.field.q
    table = fam.lines
    mask = fam.class_mask(t)
    good = fam.incidence.sub_class_mask(t)
    pts = table.points
    in_class = mask[pts]
    count = in_class.sum(axis=1)
    lam_line = good[table.bottom]
    failures = []
    bad_a = np.flatnonzero(lam_line & (count < q + 1))
    bad_b = np.flatnonzero(~lam_line & (count == q + 1))
    for li, what in [(bad_a[:1], "Λ-adjacent pair with a pencil member outside C_t"),
                     (bad_b[:1], "Δ- but not Λ-adjacent pair whose pencil lies in C_t")]:
        for line in li.tolist():
            failures.append({"what": what, "pencil": [_code_json(fam[int(v)]) for v in pts[line]]})

    plucker_bad = 0
    first_bad = None
    chunk = 1 << 16
    for lo in range(0, len(pts), chunk):
        block = pts[lo : lo + chunk]
        a, b = block[:, 0], block[:, 1]
        images = [idx.lookup(idx.combo(a, b, lam)) for lam in range(q)]
        images.append(b)
        got = np.sort(np.stack(images, axis=1), axis=1)
        wrong = ~(got == block).all(axis=1)
        if wrong.any():
            plucker_bad += int(wrong.sum())
            if first_bad is None:
                first_bad = lo + int(np.flatnonzero(wrong)[0])
    if first_bad is not None:
        failures.append({"what": "Plücker line differs from the pencil image",
                         "pencil": [_code_json(fam[int(v)]) for v in pts[first_bad]]})
    stats = {
        "lines": int(len(pts)),
        "lines_with_pairs": int((count >= 2).sum()),
        "lambda_lines": int((lam_line & (count >= 2)).sum()),
        "delta_pairs": int((count * (count - 1) // 2).sum()),
        "lambda_pairs": int(((count * (count - 1) // 2) * lam_line).sum()),
        "plucker_mismatches": plucker_bad,
    }
    return stats, failures


def _plucker_full_lines(fam: SubspaceFamily, vertices: np.ndarray, idx: _PluckerIndex, block_elems: int = 1 << 22) -> np.ndarray:
    """All pairs i < j (as positions in ``vertices``) whose Plücker line lies in
    the image of ``vertices``, encoded as i * len(vertices) + j."""
    q = fam.field.q
    nv = len(vertices)
    member = np.zeros(len(fam), dtype=bool)
    member[vertices] = True
    out = []
    rows = max(1, block_elems // max(nv, 1))
    for lo in range(0, nv, rows):
        hi = min(nv, lo + rows)
        ii = vertices[lo:hi][:, None]
        jj = vertices[None, lo:]
        owner = idx.lookup(idx.combo(ii, jj, 1))
        ok = (owner >= 0) & member[np.maximum(owner, 0)]
        local_i = np.arange(lo, hi)[:, None]
        local_j = np.arange(lo, nv)[None, :]
        ok &= local_j > local_i
        ci, cj = np.nonzero(ok)
        ci, cj = ci + lo, cj + lo
        for lam in range(2, q):
            if not len(ci):
                break
            owner = idx.lookup(idx.combo(vertices[ci], vertices[cj], lam))
            keep = (owner >= 0) & member[np.maximum(owner, 0)]
            ci, cj = ci[keep], cj[keep]
        out.append(ci.astype(np.int64) * nv + cj)
    return np.sort(np.concatenate(out)) if out else np.zeros(0, dtype=np.int64)


@_timed
def verify_transparency(cell: Cell, cap: int = DEFAULT_SUBSPACE_CAP, scalar_samples: int = 4) -> VerificationReport:
    """Pencils of Λ-adjacent pairs stay in C_t, pencils of other Δ-adjacent
    pairs leave it, and a Plücker line lies in the image of C_t exactly for
    Λ-adjacent pairs."""
    q, n, k, t = cell.q, cell.n, cell.k, cell.t
    cd = cell_data(q, n, k, cap)
    fam = cd.full
    dg = cd.graph(GraphKind.DELTA, t)
    lam = cd.graph(GraphKind.LAMBDA, t)
    idx = _PluckerIndex(fam)
    stats, failures = _transparency_lines(fam, t, idx)
    if stats["delta_pairs"] != dg.n_edges or stats["lambda_pairs"] != lam.n_edges:
        failures.append({"what": "line table and graph edge counts differ", "delta_edges": dg.n_edges,
                         "lambda_edges": lam.n_edges, "delta_pairs": stats["delta_pairs"], "lambda_pairs": stats["lambda_pairs"]})

    vertices = np.asarray(lam.parent_index, dtype=np.int64)
    nv = len(vertices)
    full_pairs = _plucker_full_lines(fam, vertices, idx)
    e = lam.edge_array().astype(np.int64)
    lam_pairs = np.sort(e[:, 0] * nv + e[:, 1]) if len(e) else np.zeros(0, dtype=np.int64)
    if not np.array_equal(full_pairs, lam_pairs):
        diff = np.setxor1d(full_pairs, lam_pairs)
        a, b = divmod(int(diff[0]), nv)
        failures.append({"what": "Plücker line in V_t does not match Λ-adjacency",
                         "x": _code_json(lam.family[a]), "y": _code_json(lam.family[b])})
    stats["pairs_checked"] = nv * (nv - 1) // 2
    stats["plucker_lines_in_image"] = int(len(full_pairs))

    # scalar cross-check through the pencil and Plücker functions
    edges = dg.edge_array()
    picks = edges[np.linspace(0, len(edges) - 1, min(scalar_samples, len(edges))).astype(int)] if len(edges) else []
    for u, v in (picks.tolist() if len(edges) else []):
        x, y = dg.family[u], dg.family[v]
        pl = pencil(x, y)
        all_in = all(z.d_perp >= t + 1 for z in pl.points)
        on_var, pre = plucker_line_in_variety(x, y)
        in_vt = on_var and all(z.d_perp >= t + 1 for z in pre)
        lam_adj = lambda_adjacent(x, y, t)
        if not (all_in == lam_adj == in_vt):
            failures.append({"what": "scalar pencil check disagrees", "x": _code_json(x), "y": _code_json(y)})
    return _report("transparency", cell.to_json(), failures, stats)


# ---------------------------------------------------------------------------
# diameter and monomial equivalence


@_timed
def verify_diameter_bound(q: int, n: int, k: int, cap: int = DEFAULT_SUBSPACE_CAP) -> VerificationReport:
    """diam Λ̃₁(n,k) <= k+1, and <= diam Δ₁(n,k-1) + 1 when the latter is connected."""
    cell = {"q": q, "n": n, "k": k, "t": 1}
    cd = cell_data(q, n, k, cap)
    lam = cd.graph(GraphKind.LAMBDA, 1)
    keep = int((lam.degrees > 0).sum())
    if keep == 0:
        return VerificationReport("diameter", cell, PASS, reason="Λ̃₁ is empty", details={"tilde_vertices": 0})
    try:
        diam = cd.lambda_tilde_diameter(1)
    except ValueError:
        return VerificationReport("diameter", cell, FAIL, reason="Λ̃₁ is disconnected", witness={"tilde_vertices": keep})
    failures = []
    details = {"tilde_vertices": keep, "diameter": diam, "bound": k + 1}
    if diam > k + 1:
        failures.append({"what": "diameter above k+1", "diameter": diam})
    if k >= 2:
        lower = cell_data(q, n, k - 1, cap)
        dg = lower.graph(GraphKind.DELTA, 1)
        if dg.n_vertices and dg.is_connected():
            dd = lower.delta_diameter(1)
            details["lower_delta_diameter"] = dd
            if diam > dd + 1:
                failures.append({"what": "diameter above diam Δ₁(n,k-1)+1", "diameter": diam, "lower": dd})
    return _report("diameter", cell, failures, details)


_ORBIT_CACHE: dict = {}


def _cached_orbit(c: LinearCode, budget: int) -> set[LinearCode]:
    key = (c, budget)
    if key not in _ORBIT_CACHE:
        if len(_ORBIT_CACHE) > 64:
            _ORBIT_CACHE.clear()
        _ORBIT_CACHE[key] = orbit(c, budget)
    return _ORBIT_CACHE[key]


@_timed
def verify_equiv(
    cell: Cell, cap: int = DEFAULT_SUBSPACE_CAP, sample_size: int = 1000, orbit_budget: int = DEFAULT_ORBIT_BUDGET
) -> VerificationReport:
    """Each monomial generator maps a vertex of Δ_t to itself or to a neighbour;
    the whole orbit of the first vertex stays in its component."""
    q, n, k, t = cell.q, cell.n, cell.k, cell.t
    cd = cell_data(q, n, k, cap)
    dg = cd.graph(GraphKind.DELTA, t)
    fam = dg.family
    nv = len(fam)
    if nv <= sample_size:
        sample = list(range(nv))
    else:
        sample = sorted({int(round(x)) for x in np.linspace(0, nv - 1, sample_size)})
    gens = generators(n, cd.field)
    failures, steps = [], 0
    for v in sample:
        c = fam[v]
        for g in gens:
            img = act(g, c)
            steps += 1
            if img == c:
                continue
            w = fam.get(img.gen)
            if w < 0 or not dg.has_edge(v, w) or not generator_step_ok(c, img):
                failures.append({"what": "generator image neither equal nor adjacent", "code": _code_json(c), "map": g.to_json()})
                break
    details = {"vertices": nv, "sampled": len(sample), "generator_steps": steps}
    if nv:
        try:
            orb = _cached_orbit(fam[0], orbit_budget)
            labels = dg.labels
            home = labels[0]
            members = [fam.get(m.gen) for m in orb]
            details["orbit_size"] = len(orb)
            if any(m < 0 or labels[m] != home for m in members):
                failures.append({"what": "orbit leaves the component", "code": _code_json(fam[0])})
        except BudgetExceeded:
            details["orbit_size"] = None
            details["orbit_check"] = "orbit budget exceeded"
    return _report("equiv", cell.to_json(), failures, details)


# ---------------------------------------------------------------------------
# grid runs and output


def _fix_claim(rep: VerificationReport, claim: str) -> VerificationReport:
    rep.claim = claim
    return rep


def run_claim(claim: str, grid: GridSpec | None = None, cells: Iterable[Cell] | None = None) -> Iterator[VerificationReport]:
    """Yield reports for ``claim`` over the grid (or the given cells) in canonical order."""
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}")
    grid = grid or default_grid()
    cap = grid.subspace_cap
    cell_list = sorted(cells) if cells is not None else grid.cells()

    def tagged(rep, cell_json):
        rep = _fix_claim(rep, claim)
        if not rep.cell:
            rep.cell = cell_json
        return rep

    if claim == "main-thm-1":
        for c in cell_list:
            yield tagged(verify_main_thm_1(c, cap), c.to_json())
    elif claim == "main-thm-2":
        for c in cell_list:
            if c.t >= 1:
                yield tagged(verify_isolation_agreement(c, cap), c.to_json())
    elif claim == "large-q":
        for c in cell_list:
            yield tagged(verify_large_q(c, cap), c.to_json())
    elif claim == "transparency":
        for c in cell_list:
            yield tagged(verify_transparency(c, cap), c.to_json())
    elif claim == "equiv":
        for c in cell_list:
            yield tagged(verify_equiv(c, cap, grid.sample_size, grid.orbit_budget), c.to_json())
    elif claim == "diameter":
        for q, n, k in sorted({(c.q, c.n, c.k) for c in cell_list}):
            yield tagged(verify_diameter_bound(q, n, k, cap), {"q": q, "n": n, "k": k, "t": 1})
    else:
        pairs = sorted({(c.q, c.k) for c in cell_list})
        for q, k in pairs:
            nm = max(c.n for c in cell_list if c.q == q)
            cj = {"q": q, "k": k, "n_max": nm}
            if claim == "t1-threshold":
                yield tagged(verify_t1_threshold(q, k, nm, cap), dict(cj, t=1))
            elif claim == "t2-threshold":
                if k >= 2:
                    yield tagged(verify_t2_threshold(q, k, nm, cap, grid.search_budget), dict(cj, t=2))
            elif claim == "conjecture":
                for t in (1, 2, 3):
                    if t <= k:
                        yield tagged(verify_conjecture(q, k, t, nm, cap), dict(cj, t=t))


def write_reports(reports: Iterable[VerificationReport], stream) -> list[VerificationReport]:
    """Write one JSON object per line; returns the reports written."""
    out = []
    for rep in reports:
        stream.write(rep.dumps() + "\n")
        out.append(rep)
    return out


def markdown_summary(reports: Iterable[VerificationReport]) -> str:
    """Claim × cell table followed by per-claim totals."""
    reports = list(reports)
    lines = ["| claim | cell | outcome | note |", "|---|---|---|---|"]
    for r in reports:
        cell = ", ".join(f"{k}={v}" for k, v in sorted(r.cell.items()))
        note = r.reason.replace("|", "/")
        lines.append(f"| {r.claim} | {cell} | {r.outcome} | {note} |")
    lines.append("")
    lines.append("| claim | PASS | FAIL | SKIPPED |")
    lines.append("|---|---|---|---|")
    for claim in sorted({r.claim for r in reports}):
        got = [r.outcome for r in reports if r.claim == claim]
        lines.append(f"| {claim} | {got.count(PASS)} | {got.count(FAIL)} | {got.count(SKIPPED)} |")
    return "\n".join(lines) + "\n"
