from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hochfib.exactla import (Matrix, SparseMatrix, Subspace, _flint_rref, bareiss_rref, image_basis,
                             kernel_basis, quotient_dim, rank, rank_rows, rref, solve, solve_rows)

entries = st.integers(min_value=-3, max_value=3)


@st.composite
def small_matrices(draw, max_dim=6):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows


def test_rref_identity_and_zero():
    red, rk, piv = rref(Matrix.identity(2))
    assert rk == 2 and piv == [0, 1]
    assert red.tolist() == Matrix.identity(2).tolist()
    _, rk, piv = rref(Matrix.zeros(3, 4))
    assert rk == 0 and piv == []


def test_rank_of_dependent_rows():
    assert rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(3)).dim == 0
    assert kernel_basis(Matrix.zeros(2, 3)).dim == 3
    k = kernel_basis(Matrix.from_rows([[1, 1]]))
    assert k.dim == 1
    assert k.contains([1, -1])


def test_image_examples():
    assert image_basis(Matrix.identity(3)).dim == 3
    assert image_basis(Matrix.zeros(3, 2)).dim == 0
    im = image_basis(Matrix.from_rows([[1], [2]]))
    assert im.dim == 1 and im.contains([1, 2]) and not im.contains([1, 0])


def test_solve_examples():
    assert solve(Matrix.identity(2), [3, Fraction(-1, 2)]) == [3, Fraction(-1, 2)]
    assert solve(Matrix.zeros(2, 2), [1, 0]) is None
    assert solve(Matrix.from_rows([[2]]), [1]) == [Fraction(1, 2)]
    with pytest.raises(ValueError):
        solve(Matrix.identity(2), [1, 2, 3])


def test_quotient_dim_examples():
    plane = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    line = Subspace(3, [[1, 1, 0]])
    assert quotient_dim(line, plane) == 1
    assert quotient_dim(plane, plane) == 0
    assert quotient_dim(Subspace(3), Subspace(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3
    with pytest.raises(ValueError):
        quotient_dim(Subspace(3, [[0, 0, 1]]), plane)


def test_sparse_and_dense_agree():
    m = Matrix.from_rows([[1, 0, 2], [0, 0, 0], [3, 0, 6]])
    s = SparseMatrix.from_dense(m)
    assert s.rank() == rank(m) == 1
    assert s.to_dense().tolist() == m.tolist()
    assert s.apply({0: 1, 2: 1}) == {0: 3, 2: 9}


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rref_matches_sympy(rows):
    m = Matrix.from_rows(rows)
    red, rk, piv = rref(m)
    ref, ref_piv = sympy.Matrix(rows).rref()
    assert rk == len(ref_piv)
    assert piv == list(ref_piv)
    assert red.tolist() == [[Fraction(int(x.p), int(x.q)) for x in ref.row(i)] for i in range(ref.rows)]


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_bareiss_and_flint_routes_agree(rows):
    """Both elimination back ends give the same reduced rows and pivots."""
    ncols = len(rows[0])
    nz = [r for r in rows if any(r)]
    if not nz:
        return
    assert bareiss_rref(nz, ncols) == _flint_rref(nz, ncols)


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_nullity_and_transpose(rows):
    m = Matrix.from_rows(rows)
    assert rank(m) == rank(m.transpose())
    assert kernel_basis(m).dim + rank(m) == m.cols
    for v in kernel_basis(m).basis:
        assert not any(m.apply(v))


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.data())
def test_solve_roundtrip(rows, data):
    m = Matrix.from_rows(rows)
    x = data.draw(st.lists(entries, min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b
    sparse = [{j: v for j, v in enumerate(r) if v} for r in rows]
    z = solve_rows(sparse, b, m.cols)
    assert z is not None
    assert m.apply([z.get(j, 0) for j in range(m.cols)]) == b


def test_large_rank_uses_flint_and_matches_sympy():
    # big enough to leave the Bareiss size window
    rows = [[(i * j + i + 2 * j) % 5 - 2 for j in range(60)] for i in range(50)]
    assert rank_rows(rows, 60) == sympy.Matrix(rows).rank()


def test_subspace_operations():
    a = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    assert a.intersection(b).dim == 1
    assert (a + b).dim == 3
    assert a.reduce({0: 2, 2: 1}) == {2: 1}
    assert Subspace(3, [[1, 1, 0]]).is_subspace_of(a)
