from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import exclusion as ex
from exclusion.tensor import Matrix, PoleError, SparseMatrix, derivative_at, \
    embed_at_positions, embed_local, exact_nullspace, inverse, kron, \
    partial_trace_first, partial_transpose, permutation_op

I2 = Matrix.identity(2)
I4 = Matrix.identity(4)


def basis_proj(i):
    m = Matrix.zeros(2, 2)
    m.a[i][i] = F(1)
    return m


def test_kron_identities():
    assert kron(I2, I2) == I4
    d = Matrix([[1, 0], [0, 2]])
    assert kron(d, I2) == Matrix([[1, 0, 0, 0], [0, 1, 0, 0],
                                  [0, 0, 2, 0], [0, 0, 0, 2]])
    out = kron(basis_proj(0), basis_proj(1))
    expect = Matrix.zeros(4, 4)
    expect.a[1][1] = F(1)
    assert out == expect


small_entries = st.integers(min_value=-3, max_value=3)


def mat_strategy(n):
    return st.lists(st.lists(small_entries, min_size=n, max_size=n),
                    min_size=n, max_size=n).map(Matrix)


@settings(max_examples=25)
@given(mat_strategy(2), mat_strategy(2), mat_strategy(2))
def test_kron_associative(A, B, C):
    assert kron(kron(A, B), C) == kron(A, kron(B, C))


def test_permutation_op():
    P = permutation_op()
    e0, e1 = [F(1), F(0)], [F(0), F(1)]
    v01 = [a * b for a in e0 for b in e1]
    v10 = [a * b for a in e1 for b in e0]
    assert P.apply(v01) == v10
    assert P * P == I4
    w, _, _ = ex.local_operators(ex.ssep(1, 1, 1, 1))
    assert P - I4 == w


def test_embed_local():
    assert embed_local(I2, 1, 3).to_dense() == Matrix.identity(8)
    w, B, _ = ex.local_operators(ex.ssep(1, 1, F(1, 2), F(1, 3)))
    assert embed_local(w, 1, 2).to_dense() == w
    assert embed_local(B, 1, 2).to_dense() == kron(B, I2)
    with pytest.raises(ValueError):
        embed_local(I2, 4, 3)
    with pytest.raises(ValueError):
        embed_local(w, 3, 3)


def test_embed_disjoint_supports_commute():
    w, B, Bbar = ex.local_operators(ex.asep(2, 1, 1, F(1, 2), F(1, 3)))
    a = embed_local(w, 1, 4)
    b = embed_local(w, 3, 4)
    assert a * b == b * a
    c = embed_local(B, 1, 4)
    d = embed_local(Bbar, 4, 4)
    assert c * d == d * c


def test_partial_trace_first():
    assert partial_trace_first(I4) == 2 * I2
    assert partial_trace_first(permutation_op()) == I2
    A = Matrix([[1, 2], [3, 4]])
    B = Matrix([[5, 6], [7, 8]])
    assert partial_trace_first(kron(A, B)) == A.trace() * B
    sp = SparseMatrix.from_dense(kron(A, B))
    assert partial_trace_first(sp).to_dense() == A.trace() * B


def test_partial_transpose():
    assert partial_transpose(I4, 2) == I4
    A = Matrix([[1, 2], [3, 4]])
    B = Matrix([[5, 6], [7, 8]])
    assert partial_transpose(kron(A, B), 2) == kron(A, B.transpose())
    assert partial_transpose(kron(A, B), 1) == kron(A.transpose(), B)
    R = ex.r_matrix(ex.asep(2, 1, 1, 1, 1), F(3))
    assert partial_transpose(partial_transpose(R, 1), 2) == R.transpose()


def test_exact_nullspace_small():
    M = SparseMatrix.from_dense(Matrix([[-1, 1], [1, -1]]))
    ker = exact_nullspace(M)
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == v[1] != 0
    assert exact_nullspace(SparseMatrix.identity(2)) == []


def test_exact_nullspace_tasep_l2():
    M = ex.build_markov(ex.tasep(1, 1), 2)
    ker = exact_nullspace(M)
    assert len(ker) == 1
    v = ker[0]
    scale = v[0]
    assert [x / scale for x in v] == [F(1), F(1), F(2), F(1)]
    assert all(x == 0 for x in M.apply(v))


def test_exact_nullspace_residual_is_exact():
    mdl = ex.rd(3, 1, 1, F(1, 2), F(1, 3))
    M = ex.build_markov(mdl, 5)
    (v,) = exact_nullspace(M)
    assert all(x == 0 for x in M.apply(v))


def test_derivative_at():
    sq = derivative_at(lambda x: Matrix([[x * x]]), F(3))
    assert sq.a[0][0] == 6
    ssep = ex.ssep(1, 1, F(1, 2), F(1, 3))
    w, B, _ = ex.local_operators(ssep)
    rp = derivative_at(lambda x: ex.r_matrix(ssep, x), F(0))
    assert permutation_op() * rp == w
    kp = derivative_at(lambda x: ex.k_matrix(ssep, "K", x), F(0))
    assert kp * F(1, 2) == B


def test_derivative_at_pole():
    ssep = ex.ssep(1, 1, 1, 1)
    with pytest.raises(PoleError):
        derivative_at(lambda x: ex.r_matrix(ssep, x), F(-1))


def test_inverse():
    A = Matrix([[1, 2], [3, 4]])
    assert inverse(A) * A == I2
    with pytest.raises(PoleError):
        inverse(Matrix([[1, 2], [2, 4]]))


def test_sparse_matrix_contract():
    m = SparseMatrix(4)
    m.add(0, 1, F(2))
    m.add(0, 1, F(-2))
    assert m.nnz == 0  # no explicit zeros
    m.add(2, 3, F(1, 2))
    m.add(1, 0, F(3))
    assert list(m.items()) == [(1, 0, F(3)), (2, 3, F(1, 2))]
    with pytest.raises(IndexError):
        m.add(4, 0, F(1))


def test_embed_at_positions_matches_kron_order():
    A = Matrix([[1, 2], [3, 4]])
    B = Matrix([[0, 1], [5, 0]])
    two = embed_at_positions(kron(A, B), (0, 1), 2).to_dense()
    assert two == kron(A, B)
    swapped = embed_at_positions(kron(A, B), (1, 0), 2).to_dense()
    assert swapped == kron(B, A)
