from __future__ import annotations

import io
import json

import pytest

from codegraphs import analysis
from codegraphs.analysis import (
    CLAIMS,
    EQUAL,
    FAIL,
    PASS,
    SKIPPED,
    UNRESOLVED,
    Cell,
    GridSpec,
    ThresholdResult,
    VerificationReport,
    cell_data,
    clear_cache,
    default_grid,
    lambda_disconnected,
    lemma_cc_path,
    markdown_summary,
    run_claim,
    scan_thresholds,
    tilde_connected,
    validate_path,
    verify_conjecture,
    verify_diameter_bound,
    verify_equiv,
    verify_isolation_agreement,
    verify_large_q,
    verify_main_thm_1,
    verify_t1_threshold,
    verify_t2_threshold,
    verify_transparency,
    write_reports,
)
from codegraphs.graphs import GraphKind

SMALL = GridSpec(n_max=((2, 5), (3, 4)), k_max=3)


@pytest.fixture(autouse=True)
def fresh_cache():
    clear_cache()
    yield
    clear_cache()


def test_default_grid_shape():
    g = default_grid()
    assert len(g.triples()) == 38
    assert len(g.cells()) == 118
    assert g.q_values == [2, 3, 4]
    assert g.n_max_for(2) == 7
    cells = g.cells()
    assert all(c.t <= c.k < c.n for c in cells)
    assert max(c.n for c in cells if c.q == 3) == 5
    assert max(c.k for c in cells) == 4


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(n_max=())
    with pytest.raises(ValueError):
        GridSpec(n_max=((6, 4),))
    with pytest.raises(ValueError):
        GridSpec(sample_size=0)
    assert GridSpec().to_json()["n_max"] == {"2": 7, "3": 5, "4": 5}


def test_report_rules():
    with pytest.raises(ValueError):
        VerificationReport("x", {}, FAIL)
    with pytest.raises(ValueError):
        VerificationReport("x", {}, "MAYBE")
    r = VerificationReport("x", {"q": 2}, PASS, runtime=3.5)
    assert "runtime" not in r.dumps()
    assert json.loads(r.dumps())["cell"] == {"q": 2}
    with pytest.raises(ValueError):
        ThresholdResult(2, 2, 1, 5, 4, 3, EQUAL)


def test_conventions():
    d = cell_data(2, 4, 2)
    assert lambda_disconnected(d.graph(GraphKind.LAMBDA, 1))
    assert not lambda_disconnected(d.graph(GraphKind.LAMBDA, 2))  # empty graph
    g = cell_data(2, 3, 2).graph(GraphKind.LAMBDA, 1)
    # K3 plus one isolated vertex: disconnected, but the non-isolated part is connected
    assert lambda_disconnected(g) and tilde_connected(g)


@pytest.mark.parametrize("cell", [Cell(2, 4, 2, 1), Cell(2, 5, 3, 1), Cell(3, 4, 2, 1), Cell(2, 5, 3, 2), Cell(2, 4, 1, 1), Cell(2, 5, 3, 3)])
def test_main_thm_1_small(cell):
    rep = verify_main_thm_1(cell)
    assert rep.outcome == PASS, rep.to_json()
    assert rep.runtime > 0


def test_lemma_path_is_lambda_path():
    cd = cell_data(2, 5, 3)
    lam = cd.graph(GraphKind.LAMBDA, 1)
    lower = cell_data(2, 5, 2).graph(GraphKind.DELTA, 1)
    x, y = lam.family[0], lam.family[len(lam.family) - 1]
    path = lemma_cc_path(x, y, 1, lower)
    assert path[0] == x and path[-1] == y
    assert validate_path(path, 1) is None
    assert validate_path([x, x], 1) == 0


def test_isolation_agreement_and_injected_disagreement(monkeypatch):
    assert verify_isolation_agreement(Cell(2, 4, 2, 1)).outcome == PASS
    clear_cache()
    monkeypatch.setattr(analysis, "isolated_direct", lambda c, t: False)
    rep = verify_isolation_agreement(Cell(2, 4, 2, 1))
    assert rep.outcome == FAIL and rep.witness
    with pytest.raises(ValueError):
        verify_isolation_agreement(Cell(2, 4, 2, 0))


def test_t1_threshold_small():
    rep = verify_t1_threshold(2, 2, 5)
    assert rep.outcome == PASS
    assert rep.details["threshold"] == 3
    at = [r for r in rep.details["rows"] if r["n"] == 3][0]
    assert at["isolated"] == 1 and at["isolated_orbits"] == 1
    assert verify_t1_threshold(2, 3, 5).outcome == SKIPPED


def test_t2_threshold_fano():
    rep = verify_t2_threshold(2, 3, 6)
    assert rep.outcome == PASS
    assert rep.details["min_coverage"]["size"] == 4
    assert rep.details["connected_side"] == []
    assert rep.details["disconnected_side"] == [4, 5, 6]


def test_t2_threshold_vacuous_cells():
    rep = verify_t2_threshold(2, 2, 5)
    assert rep.outcome == PASS
    # only the [3,2] simplex code has d⊥ = 3 over GF(2) with k = 2
    assert rep.details["empty_class"] == [4, 5]
    assert rep.details["disconnected_side"] == [3]


def test_scan_examples():
    res = scan_thresholds(2, 2, 1, 6)
    assert (res.nu, res.nu_plus, res.status) == (3, 3, EQUAL)
    res = scan_thresholds(2, 3, 1, 3)
    assert res.rows == [] and res.status == UNRESOLVED
    res = scan_thresholds(2, 3, 1, 5)
    assert res.status == UNRESOLVED and res.nu is None
    rep = verify_conjecture(3, 2, 1, 5)
    assert rep.outcome == PASS and rep.reason == EQUAL
    with pytest.raises(ValueError):
        scan_thresholds(2, 2, 3, 5)


def test_large_q_checks():
    rep = verify_large_q(Cell(2, 4, 3, 3))
    assert rep.outcome == PASS and "edgeless" in rep.details["checks"]
    rep = verify_large_q(Cell(4, 3, 2, 1))
    assert rep.outcome == PASS and "large-q-connected" in rep.details["checks"]
    rep = verify_large_q(Cell(3, 4, 3, 1))
    assert "no-isolated" in rep.details["checks"] and rep.outcome == PASS


@pytest.mark.parametrize("cell", [Cell(2, 4, 2, 1), Cell(2, 4, 2, 0), Cell(3, 4, 2, 1), Cell(2, 5, 3, 2), Cell(4, 4, 2, 1)])
def test_transparency_small(cell):
    rep = verify_transparency(cell)
    assert rep.outcome == PASS, rep.to_json()
    assert rep.details["delta_pairs"] >= rep.details["lambda_pairs"]


def test_transparency_finds_bad_pencil_at_q2():
    rep = verify_transparency(Cell(2, 4, 2, 1))
    assert rep.details["delta_pairs"] > rep.details["lambda_pairs"]


def test_diameter_examples():
    rep = verify_diameter_bound(2, 4, 2)
    assert rep.outcome == PASS and rep.details["diameter"] <= 3
    rep = verify_diameter_bound(3, 4, 2)
    assert rep.outcome == PASS and rep.details["diameter"] <= 3


@pytest.mark.parametrize("cell", [Cell(2, 4, 2, 1), Cell(3, 4, 2, 1), Cell(2, 5, 3, 2)])
def test_equiv_small(cell):
    rep = verify_equiv(cell)
    assert rep.outcome == PASS
    assert rep.details["sampled"] == rep.details["vertices"]


def test_equiv_sampling():
    rep = verify_equiv(Cell(2, 5, 2, 1), sample_size=10)
    assert rep.details["sampled"] <= 10 < rep.details["vertices"]


def test_budget_becomes_skipped():
    rep = verify_main_thm_1(Cell(2, 6, 3, 1), cap=100)
    assert rep.outcome == SKIPPED and "subspace cap" in rep.reason


def test_run_claim_order_and_output():
    with pytest.raises(ValueError):
        list(run_claim("bogus", SMALL))
    reps = list(run_claim("main-thm-1", SMALL))
    keys = [(r.cell["q"], r.cell["n"], r.cell["k"], r.cell["t"]) for r in reps]
    assert keys == sorted(keys) and len(reps) == len(SMALL.cells())
    assert all(r.outcome == PASS for r in reps)
    buf = io.StringIO()
    write_reports(reps, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == len(reps) and json.loads(lines[0])["claim"] == "main-thm-1"
    md = markdown_summary(reps)
    assert "| main-thm-1 | %d | 0 | 0 |" % len(reps) in md


def test_every_claim_runs_on_a_tiny_grid():
    tiny = GridSpec(n_max=((2, 4),), k_max=2)
    for claim in CLAIMS:
        reps = list(run_claim(claim, tiny))
        assert reps, claim
        assert all(r.claim == claim and r.outcome in (PASS, SKIPPED) for r in reps), claim
