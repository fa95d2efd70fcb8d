"""Command-line front end.

Subcommands: ``build`` (graph with on-disk cache), ``verify`` (claim
verifiers), ``scan`` (ν_t / ν_t⁺ tables) and ``satmin`` (smallest covering
point sets).  Exit codes: 0 success, 1 a verification failed, 2 a size cap or
search budget was hit, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import struct
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis
from .errors import BudgetExceeded
from .gf import field_of_order
from .graphs import CodeGraph, GraphKind, build_graph
from .grassmann import DEFAULT_SUBSPACE_CAP, SubspaceFamily, enumerate_subspaces
from .saturation import DEFAULT_SEARCH_BUDGET, min_saturating_size
from .symmetry import DEFAULT_ORBIT_BUDGET

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3
CACHE_ENV = "CODEGRAPHS_CACHE"
CACHE_MAGIC = b"CGRF"
FORMAT_VERSION = 1
FORMATS = ("json", "csv", "dot", "md")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    q: list[int] = field(default_factory=list)
    n: int | None = None
    k: list[int] = field(default_factory=list)
    t: list[int] = field(default_factory=list)
    kind: str = "lambda"
    claim: str | None = None
    grid: str | None = None
    ceiling: int | None = None
    mode: str = "exact"
    subspace_cap: int = DEFAULT_SUBSPACE_CAP
    orbit_budget: int = DEFAULT_ORBIT_BUDGET
    search_budget: int = DEFAULT_SEARCH_BUDGET
    workers: int = 1
    cache_dir: Path | None = None
    use_cache: bool = True
    fmt: str = "json"
    output: Path | None = None
    seed: int | None = None  # reserved; every computation is deterministic

    def __post_init__(self):
        for name in ("subspace_cap", "orbit_budget", "search_budget", "workers"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "codegraphs"


# ---------------------------------------------------------------------------
# graph cache


def cache_key(kind: str, q: int, n: int, k: int, t: int) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": kind, "q": q, "n": n, "k": k, "t": t}


def cache_path(cache_dir: Path, key: dict) -> Path:
    return cache_dir / f"{key['kind']}-q{key['q']}-n{key['n']}-k{key['k']}-t{key['t']}-v{key['format_version']}.cgr"


def write_cache(path: Path, key: dict, g: CodeGraph) -> None:
    header = dict(key, vertices=g.n_vertices, edges=g.n_edges)
    hbytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<I", len(hbytes)))
        fh.write(hbytes)
        fh.write(np.asarray(g.indptr, dtype="<u4").tobytes())
        fh.write(np.asarray(g.indices, dtype="<u4").tobytes())
    tmp.replace(path)


def read_cache(path: Path, key: dict) -> tuple[dict, np.ndarray, np.ndarray] | None:
    """Header and CSR arrays, or None if the file is absent or does not match ``key``."""
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        return None
    if data[:4] != CACHE_MAGIC or len(data) < 8:
        return None
    (hlen,) = struct.unpack("<I", data[4:8])
    try:
        header = json.loads(data[8 : 8 + hlen])
    except ValueError:
        return None
    if any(header.get(k) != v for k, v in key.items()):
        return None
    nv, ne = header["vertices"], header["edges"]
    body = np.frombuffer(data, dtype="<u4", offset=8 + hlen)
    if len(body) != nv + 1 + 2 * ne:
        return None
    indptr = body[: nv + 1].astype(np.int64)
    indices = body[nv + 1 :].astype(np.int64)
    return header, indptr, indices


def load_or_build(kind: str, q: int, n: int, k: int, t: int, cfg: RunConfig) -> tuple[CodeGraph, bool]:
    """The requested graph and whether it came from the cache."""
    f = field_of_order(q)
    key = cache_key(kind, q, n, k, t)
    path = cache_path(cfg.cache_dir or default_cache_dir(), key)
    if cfg.use_cache:
        hit = read_cache(path, key)
        if hit is not None:
            header, indptr, indices = hit
            full = enumerate_subspaces(n, k, f, cfg.subspace_cap)
            vertices = np.flatnonzero(full.class_mask(t))
            if len(vertices) == header["vertices"]:
                fam = full if len(vertices) == len(full) else SubspaceFamily(n, k, f, [full[int(v)] for v in vertices])
                return CodeGraph(GraphKind(kind), t, fam, indptr, indices, vertices), True
    g = build_graph(kind, n, k, t, f, cfg.subspace_cap)
    if cfg.use_cache:
        write_cache(path, key, g)
    return g, False


# ---------------------------------------------------------------------------
# commands


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _md_table(rows: list[dict], cols: list[str]) -> str:
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        out.append("| " + " | ".join("" if r.get(c) is None else str(r.get(c)) for c in cols) + " |")
    return "\n".join(out) + "\n"


def _one(values: list[int], name: str) -> int:
    if len(values) != 1:
        raise UsageError(f"--{name} takes exactly one value for this command")
    return values[0]


def cmd_build(cfg: RunConfig) -> int:
    q, k = _one(cfg.q, "q"), _one(cfg.k, "k")
    t = _one(cfg.t, "t") if cfg.t else 0
    if cfg.n is None:
        raise UsageError("build needs --n")
    n = cfg.n
    if not (0 <= t <= k < n and k > 0):
        raise UsageError("need 0 <= t <= k < n and k > 0")
    if cfg.kind == "gamma" and t != 0:
        raise UsageError("the Grassmann graph takes --t 0")
    g, cached = load_or_build(cfg.kind, q, n, k, t, cfg)
    if cfg.fmt == "csv":
        _emit(g.to_csv(), cfg)
    elif cfg.fmt == "dot":
        _emit(g.to_dot(), cfg)
    else:
        summary = g.summary(with_diameter=False)
        summary.pop("diameter_per_component")
        if cfg.fmt == "md":
            _emit(_md_table([summary], list(summary)), cfg)
        else:
            _emit(_json(summary), cfg)
    if cfg.use_cache:
        print(f"cache {'hit' if cached else 'written'}", file=sys.stderr)
    return EXIT_OK


def _grid_for(cfg: RunConfig) -> analysis.GridSpec:
    base = analysis.default_grid()
    return analysis.GridSpec(
        n_max=base.n_max,
        k_max=base.k_max,
        subspace_cap=cfg.subspace_cap,
        orbit_budget=cfg.orbit_budget,
        search_budget=cfg.search_budget,
    )


def cmd_verify(cfg: RunConfig) -> int:
    claims = analysis.CLAIMS if cfg.claim == "all" else (cfg.claim,)
    for c in claims:
        if c not in analysis.CLAIMS:
            raise UsageError(f"unknown claim {c!r}; choose from {', '.join(analysis.CLAIMS)} or all")
    grid = _grid_for(cfg)
    if cfg.grid == "default":
        cells = None
    elif cfg.grid is not None:
        raise UsageError(f"unknown grid {cfg.grid!r}")
    else:
        if not cfg.q or not cfg.k or cfg.n is None:
            raise UsageError("give --grid default or --q, --n, --k (and --t)")
        ts = cfg.t or None
        cells = []
        for q in cfg.q:
            field_of_order(q)
            for k in cfg.k:
                if not 0 < k < cfg.n:
                    raise UsageError("need 0 < k < n")
                for t in ts if ts is not None else range(k + 1):
                    if not 0 <= t <= k:
                        raise UsageError("need 0 <= t <= k")
                    cells.append(analysis.Cell(q, cfg.n, k, t))
    reports = []
    for claim in claims:
        reports.extend(analysis.run_claim(claim, grid, cells))
    if cfg.fmt == "md":
        _emit(analysis.markdown_summary(reports), cfg)
    elif cfg.fmt == "json":
        _emit("".join(r.dumps() + "\n" for r in reports), cfg)
    else:
        raise UsageError("verify writes json or md")
    if any(r.failed for r in reports):
        return EXIT_FAIL
    capped = [r for r in reports if r.outcome == analysis.SKIPPED and "cap" in r.details]
    if capped:
        print(f"codegraphs: {len(capped)} report(s) skipped: {capped[0].reason}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    if not cfg.q or not cfg.k or not cfg.t:
        raise UsageError("scan needs --q, --k and --t")
    if cfg.ceiling is None:
        raise UsageError("scan needs --ceiling")
    results = []
    for q in cfg.q:
        field_of_order(q)
        for k in cfg.k:
            for t in cfg.t:
                if not 0 <= t <= k:
                    raise UsageError("need 0 <= t <= k")
                results.append(analysis.scan_thresholds(q, k, t, cfg.ceiling, cfg.subspace_cap))
    if cfg.fmt == "md":
        rows = [r.to_json() for r in results]
        _emit(_md_table(rows, ["q", "k", "t", "ceiling", "nu", "nu_plus", "status"]), cfg)
    elif cfg.fmt == "json":
        _emit("".join(json.dumps(r.to_json(), sort_keys=True, separators=(",", ":")) + "\n" for r in results), cfg)
    else:
        raise UsageError("scan writes json or md")
    return EXIT_OK


def cmd_satmin(cfg: RunConfig) -> int:
    q, k = _one(cfg.q, "q"), _one(cfg.k, "k")
    t = _one(cfg.t, "t") if cfg.t else 1
    if k < 1 or t < 0:
        raise UsageError("need k >= 1 and t >= 0")
    res = min_saturating_size(k, t, field_of_order(q), cfg.mode, cfg.search_budget)
    if cfg.fmt == "md":
        row = res.to_json()
        row["witness"] = " ".join("(" + ",".join(map(str, p)) + ")" for p in row["witness"])
        _emit(_md_table([row], ["q", "k", "t", "mode", "size", "optimal", "lower_bound", "witness"]), cfg)
    else:
        _emit(_json(res.to_json()), cfg)
    if cfg.mode == "exact" and not res.optimal:
        print(f"exact-search budget {cfg.search_budget} exceeded; reported size is a greedy bound", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "scan": cmd_scan, "satmin": cmd_satmin}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, nargs="+", default=[], help="field order(s)")
    common.add_argument("--n", type=int, help="code length (n_max for threshold claims)")
    common.add_argument("--k", type=int, nargs="+", default=[], help="dimension(s)")
    common.add_argument("--t", type=int, nargs="+", default=[], help="dual-distance parameter(s)")
    common.add_argument("--subspace-cap", type=int, default=DEFAULT_SUBSPACE_CAP)
    common.add_argument("--orbit-budget", type=int, default=DEFAULT_ORBIT_BUDGET)
    common.add_argument("--search-budget", type=int, default=DEFAULT_SEARCH_BUDGET)
    common.add_argument("--workers", type=int, default=1, help="accepted for compatibility; runs are sequential")
    common.add_argument("--cache-dir", type=Path, help=f"graph cache directory (default ${CACHE_ENV} or ~/.cache/codegraphs)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    common.add_argument("--output", "-o", type=Path)
    common.add_argument("--seed", type=int, help="reserved; has no effect")

    p = _Parser(prog="codegraphs", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    b = sub.add_parser("build", parents=[common], help="build or load a graph")
    b.add_argument("--kind", choices=[k.value for k in GraphKind], default="lambda")
    v = sub.add_parser("verify", parents=[common], help="run claim verifiers")
    v.add_argument("--claim", required=True, help=f"one of {', '.join(analysis.CLAIMS)}, or all")
    v.add_argument("--grid", help="'default' for the built-in grid")
    s = sub.add_parser("scan", parents=[common], help="scan for ν_t and ν_t⁺")
    s.add_argument("--ceiling", type=int, required=True)
    m = sub.add_parser("satmin", parents=[common], help="smallest point set whose t-secant spans cover PG(k-1,q)")
    m.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            q=args.q,
            n=args.n,
            k=args.k,
            t=args.t,
            kind=getattr(args, "kind", "lambda"),
            claim=getattr(args, "claim", None),
            grid=getattr(args, "grid", None),
            ceiling=getattr(args, "ceiling", None),
            mode=getattr(args, "mode", "exact"),
            subspace_cap=args.subspace_cap,
            orbit_budget=args.orbit_budget,
            search_budget=args.search_budget,
            workers=args.workers,
            cache_dir=args.cache_dir,
            use_cache=not args.no_cache,
            fmt=args.fmt,
            output=args.output,
            seed=args.seed,
        )
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"codegraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"codegraphs: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"codegraphs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
