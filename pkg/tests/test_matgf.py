from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from codegraphs.gf import field_of_order
from codegraphs.matgf import (
    MatGF,
    intersect_rowspaces,
    k_minors,
    kernel_basis,
    normalize,
    projective_points,
    rank_of,
    rowspace_contains,
    row_basis,
    rref,
    span_vectors,
)

GF2 = field_of_order(2)


def M(rows, q=2, ncols=None):
    return MatGF.from_rows(field_of_order(q), rows, ncols)


@st.composite
def matrices(draw, q=None, max_rows=4, max_cols=5):
    q = q or draw(st.sampled_from([2, 3, 4, 5]))
    n = draw(st.integers(1, max_cols))
    r = draw(st.integers(1, max_rows))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=r, max_size=r))
    return M(rows, q, n)


@st.composite
def matrix_pairs(draw):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    a = draw(matrices(q=q))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=a.ncols, max_size=a.ncols), min_size=1, max_size=4))
    # share a row with a sometimes so intersections are not always trivial
    if draw(st.booleans()):
        rows.append(list(a.rows[0]))
    return a, M(rows, q, a.ncols)


def test_rref_zero_matrix():
    z = MatGF.zeros(GF2, 2, 3)
    red, r, piv = rref(z)
    assert r == 0 and piv == () and red == z


def test_rref_identity():
    eye = MatGF.identity(field_of_order(3), 3)
    red, r, _ = rref(eye)
    assert red == eye and r == 3


def test_rref_hand_example():
    red, r, piv = rref(M([[1, 0, 1], [1, 1, 0]]))
    assert red.to_list() == [[1, 0, 1], [0, 1, 1]] and r == 2 and piv == (0, 1)


def test_stacked_rank():
    g = M([[1, 0, 1], [0, 1, 1]])
    assert rank_of(g.stack(g)) == 2
    x = M([[1, 0, 0, 0], [0, 1, 0, 0]])
    y = M([[1, 0, 0, 0], [0, 0, 1, 0]])
    assert rank_of(x.stack(y)) == 3
    z = M([[0, 0, 1, 0], [0, 0, 0, 1]])
    assert rank_of(x.stack(z)) == 4


def test_kernel_examples():
    assert kernel_basis(MatGF.identity(GF2, 3)).nrows == 0
    assert kernel_basis(M([[1, 1]])).to_list() == [[1, 1]]
    assert kernel_basis(M([[1, 0, 1], [0, 1, 1]])).to_list() == [[1, 1, 1]]


def test_intersection_examples():
    a = M([[1, 0, 1], [0, 1, 1]])
    assert row_basis(intersect_rowspaces(a, a)) == row_basis(a)
    b = M([[1, 0, 0, 0], [0, 1, 0, 0]])
    c = M([[0, 0, 1, 0], [0, 0, 0, 1]])
    assert intersect_rowspaces(b, c).nrows == 0
    x = M([[1, 1, 1], [1, 0, 0]])
    y = M([[1, 1, 1], [0, 1, 0]])
    assert intersect_rowspaces(x, y).to_list() == [[1, 1, 1]]


def test_minors_examples():
    assert k_minors(M([[1, 0, 0], [0, 1, 0]])) == (1, 0, 0)
    assert k_minors(M([[1, 0, 1], [0, 1, 1]])) == (1, 1, 1)
    with pytest.raises(ValueError):
        k_minors(M([[1, 1], [1, 1]]))


@pytest.mark.parametrize("q", [3, 4, 5])
def test_minors_scale_with_row(q):
    f = field_of_order(q)
    g = M([[1, 0, 2 % q, 1], [0, 1, 1, 3 % q]], q)
    for a in range(1, q):
        scaled = g.scale_row(0, a)
        assert k_minors(scaled) == tuple(f.mul[a][x] for x in k_minors(g))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_minors_match_leibniz_oracle(q):
    for rows in [((1, 0, 1, 1), (0, 1, 1, q - 1)), ((1, 1, 0, 0), (0, 0, 1, 1)), ((1, 0, 0, 1), (0, 1, q - 1, 0))]:
        assert normalize(k_minors(M(rows, q)), field_of_order(q)) == oracles.plucker_brute(rows, q)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_span_oracle(m):
    assert rank_of(m) == oracles.rank_by_span(m.rows, m.field.q, m.ncols)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_canonical(m):
    red, r, piv = rref(m)
    # same row space, idempotent, pivots are leading ones with zero columns elsewhere
    assert span_vectors(red.rows, m.ncols, m.field) == span_vectors(m.rows, m.ncols, m.field)
    assert rref(red)[0] == red
    for i, p in enumerate(piv):
        assert red.rows[i][p] == 1
        assert all(red.rows[j][p] == 0 for j in range(r) if j != i)
        assert all(x == 0 for x in red.rows[i][:p])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_orthogonal_complement(m):
    ker = kernel_basis(m)
    f = m.field
    assert ker.nrows == m.ncols - rank_of(m)
    for v in ker.rows:
        for r in m.rows:
            acc = 0
            for a, b in zip(v, r):
                acc = f.add[acc][f.mul[a][b]]
            assert acc == 0


@settings(max_examples=150, deadline=None)
@given(matrix_pairs())
def test_intersection_matches_oracle(pair):
    a, b = pair
    q, n = a.field.q, a.ncols
    inter = intersect_rowspaces(a, b)
    assert rank_of(inter) == oracles.intersection_dim(a.rows, b.rows, q, n)
    assert rank_of(inter) == rank_of(a) + rank_of(b) - rank_of(a.stack(b))
    for v in inter.rows:
        assert rowspace_contains(a, v) and rowspace_contains(b, v)


@pytest.mark.parametrize("q,dim", [(2, 3), (3, 2), (4, 2), (3, 3)])
def test_projective_points(q, dim):
    pts = projective_points(dim, field_of_order(q))
    assert pts == oracles.pg_points(dim, q)
    assert len(pts) == (q**dim - 1) // (q - 1)


def test_normalize():
    f = field_of_order(5)
    assert normalize((0, 3, 1), f) == (0, 1, 2)
    assert normalize((0, 0), f) == (0, 0)


def test_matrix_validation():
    with pytest.raises(ValueError):
        M([[1, 0], [1]])
    with pytest.raises(ValueError):
        M([[2, 0]])
    with pytest.raises(ValueError):
        MatGF.from_rows(GF2, [])
    with pytest.raises(ValueError):
        M([[1, 0]]).stack(M([[1, 0, 0]]))
    with pytest.raises(ValueError):
        M([[1, 0]], 2).stack(M([[1, 0]], 3))


def test_matmul_and_transpose():
    a = M([[1, 2], [0, 1]], 3)
    b = M([[1, 1], [2, 0]], 3)
    assert (a @ b).to_list() == [[2, 1], [2, 0]]
    assert a.transpose().to_list() == [[1, 0], [2, 1]]
    assert (MatGF.identity(a.field, 2) @ a) == a


def test_span_size():
    for rows in itertools.product([(1, 0, 1), (0, 1, 1), (1, 1, 0)], repeat=2):
        assert len(span_vectors(rows, 3, GF2)) == 2 ** rank_of(M(rows))
