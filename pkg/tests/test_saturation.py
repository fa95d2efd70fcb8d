from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from codegraphs.codes import LinearCode
from codegraphs.gf import field_of_order
from codegraphs.grassmann import enumerate_class
from codegraphs.matgf import projective_points
from codegraphs.saturation import (
    IsolationDisagreement,
    ProjPointSet,
    columns_as_points,
    covers_at_level,
    is_isolated,
    is_t_saturating,
    isolated_direct,
    isolated_geometric,
    min_saturating_size,
    secant_span,
    whole_space,
)

GF2 = field_of_order(2)
FANO = projective_points(3, GF2)
TRIANGLE = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def pts(vectors, k, q=2):
    return ProjPointSet.from_vectors(vectors, k, field_of_order(q))


@st.composite
def point_sets(draw):
    q, k = draw(st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2)]))
    allp = projective_points(k, field_of_order(q))
    chosen = draw(st.lists(st.sampled_from(allp), min_size=1, max_size=6, unique=True))
    return pts(chosen, k, q), draw(st.integers(0, 3))


def test_columns_as_points():
    c = LinearCode.from_rows(GF2, [[1, 0, 1], [0, 1, 1]])
    omega = columns_as_points(c)
    assert set(omega.points) == {(1, 0), (0, 1), (1, 1)}
    assert omega.is_whole_space()
    rep = columns_as_points(LinearCode.from_rows(GF2, [[1, 0, 1, 1], [0, 1, 0, 0]]))
    assert dict(zip(rep.points, rep.multiplicity)) == {(0, 1): 1, (1, 0): 3}
    with pytest.raises(ValueError):
        columns_as_points(LinearCode.from_rows(GF2, [[1, 0, 0], [0, 1, 0]]))


def test_point_set_validation():
    with pytest.raises(ValueError):
        pts([(0, 0)], 2)
    with pytest.raises(ValueError):
        pts([(1, 0, 0)], 2)
    three = pts([(2, 0)], 2, 3)
    assert three.points == ((1, 0),) and (2, 0) in three


def test_secant_span_examples():
    assert secant_span(pts(TRIANGLE, 3), 0).points == pts(TRIANGLE, 3).points
    line = secant_span(pts([(1, 0, 0), (0, 1, 0)], 3), 1)
    assert set(line.points) == {(1, 0, 0), (0, 1, 0), (1, 1, 0)}
    tri = secant_span(pts(TRIANGLE, 3), 1)
    assert len(tri) == 6 and (1, 1, 1) not in tri
    with pytest.raises(ValueError):
        secant_span(pts(TRIANGLE, 3), -1)


def test_is_t_saturating_examples():
    assert is_t_saturating(whole_space(3, GF2), 0)
    assert not is_t_saturating(pts([(1, 0)], 2), 1)
    assert not is_t_saturating(whole_space(2, GF2), 1)
    assert is_t_saturating(pts([(1, 0), (0, 1)], 2), 1)
    assert is_t_saturating(pts(TRIANGLE, 3), 2)


def test_covers_at_level_examples():
    assert covers_at_level(whole_space(2, GF2), 1)
    assert covers_at_level(pts([(1, 0), (0, 1)], 2), 2)
    assert not covers_at_level(pts(TRIANGLE, 3), 2)
    with pytest.raises(ValueError):
        covers_at_level(whole_space(2, GF2), 0)


@settings(max_examples=120, deadline=None)
@given(point_sets())
def test_secant_span_matches_oracle(case):
    omega, t = case
    assert set(secant_span(omega, t).points) == oracles.secant_span_brute(omega.points, omega.field.q, t)


@settings(max_examples=120, deadline=None)
@given(point_sets(), st.data())
def test_monotone_and_nested(case, data):
    omega, t = case
    allp = projective_points(omega.k, omega.field)
    extra = data.draw(st.lists(st.sampled_from(allp), max_size=3))
    bigger = ProjPointSet.from_vectors(list(omega.points) + extra, omega.k, omega.field)
    assert set(secant_span(omega, t).points) <= set(secant_span(bigger, t).points)
    if t >= 1 and len(omega) >= t + 1:
        assert set(secant_span(omega, t - 1).points) <= set(secant_span(omega, t).points)


def test_isolation_examples():
    simplex = LinearCode.from_rows(GF2, [[1, 0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 0, 1, 1, 1]])
    assert is_isolated(simplex, 1)
    for c in enumerate_class(4, 2, 2, field_of_order(3)):
        assert is_isolated(c, 2)
    three = LinearCode.from_rows(field_of_order(3), [[1, 0, 1], [0, 1, 1]])
    assert not is_isolated(three, 1)
    with pytest.raises(ValueError):
        is_isolated(three, 0)
    with pytest.raises(ValueError):
        is_isolated(LinearCode.from_rows(GF2, [[1, 0, 0], [0, 1, 0]]), 1)


@pytest.mark.parametrize("q,n,k,t", [(2, 3, 2, 1), (2, 4, 2, 1), (2, 5, 3, 1), (2, 5, 3, 2), (3, 4, 2, 1), (3, 4, 3, 1), (2, 4, 3, 3)])
def test_isolation_matches_brute(q, n, k, t):
    f = field_of_order(q)
    for c in enumerate_class(n, k, t, f):
        brute = oracles.isolated_brute(oracles.span(c.gen, q), q, n, k, t)
        assert isolated_geometric(c, t) == isolated_direct(c, t) == brute


def test_isolation_k1():
    c = LinearCode.from_rows(field_of_order(3), [[1, 1, 2]])
    assert is_isolated(c, 1)


def test_disagreement_error_message():
    c = LinearCode.from_rows(GF2, [[1, 0, 1], [0, 1, 1]])
    err = IsolationDisagreement(c, 1, True, False)
    assert isinstance(err, AssertionError) and "geometric=True" in str(err)


@pytest.mark.parametrize("idx", range(9))
def test_min_cover_frozen(idx, frozen):
    rec = frozen["min_cover"][idx]
    f = field_of_order(rec["q"])
    res = min_saturating_size(rec["k"], rec["t"], f)
    assert res.optimal and res.size == rec["size"] == res.lower_bound
    omega = pts(res.witness, rec["k"], rec["q"])
    assert len(omega) == res.size
    assert set(secant_span(omega, rec["t"]).points) == set(projective_points(rec["k"], f))
    greedy = min_saturating_size(rec["k"], rec["t"], f, mode="greedy")
    assert greedy.size >= res.size and not greedy.optimal


def test_min_cover_live_oracle():
    assert min_saturating_size(3, 1, GF2).size == oracles.min_cover_brute(3, 2, 1) == 4


def test_min_cover_k2_any_q():
    for q in (2, 3, 4, 5, 7):
        res = min_saturating_size(2, 1, field_of_order(q))
        assert res.size == 2
    assert min_saturating_size(2, 1, GF2).witness == ((0, 1), (1, 0))


def test_min_cover_budget():
    res = min_saturating_size(4, 1, GF2, budget=50)
    assert not res.optimal and res.budget == 50
    assert res.lower_bound <= 5 <= res.size
    with pytest.raises(ValueError):
        min_saturating_size(3, 1, GF2, mode="bogus")
    with pytest.raises(ValueError):
        min_saturating_size(0, 1, GF2)


def test_result_json():
    d = min_saturating_size(2, 1, GF2).to_json()
    assert d["size"] == 2 and d["optimal"] and d["witness"] == [[0, 1], [1, 0]]
