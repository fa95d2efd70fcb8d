from __future__ import annotations

import itertools

import numpy as np
import pytest

import oracles
from codegraphs.codes import LinearCode, in_class
from codegraphs.errors import BudgetExceeded
from codegraphs.gf import field_of_order
from codegraphs.graphs import GraphKind, build_graph, delta_adjacent
from codegraphs.grassmann import (
    enumerate_class,
    enumerate_subspaces,
    gaussian_binomial,
    geometry_lines,
    num_points,
    pencil,
    plucker,
    plucker_line_in_variety,
    plucker_preimage,
)

GF2 = field_of_order(2)


def code(rows, q=2):
    return LinearCode.from_rows(field_of_order(q), rows)


def test_counts_examples():
    assert len(enumerate_subspaces(3, 2, GF2)) == 7
    assert len(enumerate_subspaces(4, 2, GF2)) == 35
    assert len(enumerate_subspaces(2, 1, field_of_order(3))) == 4


def test_gaussian_binomial_frozen(frozen):
    for rec in frozen["gaussian"]:
        assert gaussian_binomial(rec["n"], rec["k"], rec["q"]) == rec["count"]
        assert oracles.gaussian_binomial_product(rec["n"], rec["k"], rec["q"]) == rec["count"]


@pytest.mark.parametrize("q,n,k", [(2, 3, 1), (2, 4, 2), (2, 5, 2), (2, 5, 3), (3, 3, 2), (3, 4, 2), (4, 3, 1), (4, 3, 2)])
def test_enumeration_matches_brute_force(q, n, k):
    fam = enumerate_subspaces(n, k, field_of_order(q))
    assert len(fam) == oracles.gaussian_binomial_product(n, k, q)
    got = {oracles.span(c.gen, q) for c in fam}
    assert got == oracles.brute_subspaces(n, k, q)


def test_enumeration_order_is_sorted_and_stable():
    fam = enumerate_subspaces(4, 2, field_of_order(3))
    again = enumerate_subspaces.__wrapped__(4, 2, field_of_order(3))
    assert [c.gen for c in fam] == [c.gen for c in again]
    pivots = [tuple(r.index(1) for r in c.gen) for c in fam]
    assert pivots == sorted(pivots)


def test_enumeration_cap():
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_subspaces(6, 3, GF2, cap=100)
    assert exc.value.cap == "subspace cap"
    with pytest.raises(ValueError):
        enumerate_subspaces(3, 3, GF2)


def test_enumerate_class_examples():
    assert [c.gen for c in enumerate_class(4, 2, 0, GF2)] == [c.gen for c in enumerate_subspaces(4, 2, GF2)]
    ones = enumerate_class(3, 2, 1, GF2)
    assert len(ones) == 4
    assert all(all(any(col) for col in c.columns()) for c in ones)
    mds = enumerate_class(3, 2, 2, GF2)
    assert [c.gen for c in mds] == [((1, 0, 1), (0, 1, 1))]


def test_class_sizes_frozen(frozen):
    for rec in frozen["cells"]:
        fam = enumerate_class(rec["n"], rec["k"], rec["t"], field_of_order(rec["q"]))
        assert len(fam) == rec["vertices"], rec


def test_num_points():
    assert [num_points(k, 2) for k in (1, 2, 3)] == [1, 3, 7]
    assert num_points(2, 9) == 10


def test_pencil_in_plane():
    x = code([[1, 0, 0], [0, 1, 0]])
    y = code([[1, 0, 0], [0, 0, 1]])
    line = pencil(x, y)
    assert len(line) == 3
    assert line.points[0] == x and line.points[-1] == y
    assert line.points[1] == code([[1, 0, 0], [0, 1, 1]])
    assert line.bottom.to_list() == [[1, 0, 0]]
    assert line.top.nrows == 3


@pytest.mark.parametrize("q", [2, 3, 4])
def test_pencil_points_contain_bottom(q):
    fam = enumerate_subspaces(4, 2, field_of_order(q))
    x = fam[0]
    for y in list(fam)[1:40]:
        if not delta_adjacent(x, y):
            with pytest.raises(ValueError):
                pencil(x, y)
            continue
        line = pencil(x, y)
        assert len(set(line.points)) == q + 1
        for z in line.points:
            assert z.contains_code(LinearCode(z.field, line.bottom.rows, 4))
            assert oracles.intersection_dim(z.gen, x.gen, q, 4) >= 1


@pytest.mark.parametrize("q,n,k,t", [(2, 4, 2, 0), (2, 4, 2, 1), (2, 5, 3, 1), (2, 5, 3, 2), (3, 4, 2, 1), (2, 4, 3, 1)])
def test_geometry_lines(q, n, k, t):
    f = field_of_order(q)
    lines = geometry_lines(n, k, t, f)
    lam = build_graph(GraphKind.LAMBDA, n, k, t, f)
    fam = lam.family
    collinear = set()
    for line in lines:
        assert len(line.points) == q + 1
        assert all(in_class(z, t) for z in line.points)
        for a, b in itertools.combinations(line.points, 2):
            i, j = sorted((fam.get(a.gen), fam.get(b.gen)))
            collinear.add((i, j))
    assert collinear == {tuple(e) for e in lam.edge_array().tolist()}
    if t == 0:
        assert len(lines) == len(enumerate_subspaces(n, k, f).lines)


def test_line_table_covers_each_adjacent_pair_once():
    fam = enumerate_subspaces(4, 2, field_of_order(3))
    table = fam.lines
    seen = {}
    for row in table.points.tolist():
        for pair in itertools.combinations(row, 2):
            assert pair not in seen
            seen[pair] = True
    gamma = build_graph(GraphKind.GAMMA, 4, 2, 0, field_of_order(3))
    assert set(seen) == {tuple(e) for e in gamma.edge_array().tolist()}


def test_plucker_examples():
    assert plucker(code([[1, 0, 1], [0, 1, 1]])) == (1, 1, 1)
    c = code([[1, 2, 0, 1], [0, 1, 1, 2]], 3)
    same = LinearCode.from_rows(c.field, [[1, 0, 1, 0], [0, 1, 1, 2]])
    assert same == c
    assert plucker(same) == plucker(c)


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 5, 3), (4, 4, 2)])
def test_plucker_injective_and_matches_oracle(q, n, k):
    fam = enumerate_subspaces(n, k, field_of_order(q))
    pts = [plucker(c) for c in fam]
    assert len(set(pts)) == len(fam)
    for c, p in list(zip(fam, pts))[:: max(1, len(fam) // 40)]:
        assert p == oracles.plucker_brute(c.gen, q)
        assert plucker_preimage(p, n, k, c.field) == c


def test_plucker_preimage_rejects_non_decomposable():
    # e12 + e34 is not a decomposable 2-vector in GF(2)^4
    w = (1, 0, 0, 0, 0, 1)
    assert plucker_preimage(w, 4, 2, GF2) is None
    assert plucker_preimage((0,) * 6, 4, 2, GF2) is None


@pytest.mark.parametrize("q", [2, 3])
def test_plucker_line_in_variety_iff_adjacent(q):
    f = field_of_order(q)
    fam = enumerate_subspaces(4, 2, f)
    x = fam[0]
    for y in list(fam)[1:]:
        ok, pre = plucker_line_in_variety(x, y)
        assert ok == delta_adjacent(x, y)
        if ok:
            assert set(pre) == set(pencil(x, y).points)


def test_plucker_line_examples():
    x = code([[1, 0, 0, 0], [0, 1, 0, 0]])
    y = code([[0, 0, 1, 0], [0, 0, 0, 1]])
    assert plucker_line_in_variety(x, y)[0] is False
    with pytest.raises(ValueError):
        plucker_line_in_variety(x, x)


def test_incidence_buckets():
    fam = enumerate_subspaces(4, 2, GF2)
    inc = fam.incidence
    assert inc.vertex_subs.shape == (35, 3)
    # every 1-space of GF(2)^4 lies in 7 of the 2-spaces
    assert len(inc.sub_gens) == 15
    assert all(len(b) == 7 for b in inc.buckets)
    assert list(inc.sub_d_perp) == [oracles.dual_min_weight(g, 2, 4) for g in inc.sub_gens]


def test_plucker_keys_rows():
    fam = enumerate_subspaces(4, 2, GF2)
    keys = fam.plucker_keys
    assert keys.shape == (35, 6)
    assert np.array_equal(keys[3], np.array(plucker(fam[3])))
