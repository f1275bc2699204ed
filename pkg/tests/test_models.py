from fractions import Fraction as F

import pytest

import exclusion as ex
from exclusion.models import UnsupportedError, lambda_crossing
from exclusion.scalars import Jet
from exclusion.sampling import sample_points
from exclusion.tensor import Matrix, PoleError, derivative_at, permutation_op


def test_local_operators_ssep_is_swap_minus_identity():
    w, _, _ = ex.local_operators(ex.ssep(1, 1, 1, 1))
    assert w == permutation_op() - Matrix.identity(4)


def test_local_operators_tasep():
    _, B, Bbar = ex.local_operators(ex.tasep(F(1, 2), F(1, 3)))
    assert B == Matrix([[F(-1, 2), 0], [F(1, 2), 0]])
    assert Bbar == Matrix([[0, F(1, 3)], [0, F(-1, 3)]])


def test_local_operators_rd():
    w, _, _ = ex.local_operators(ex.rd(3, 1, 1, 0, 0))
    assert w == Matrix([[-1, 0, 0, 1], [0, -9, 9, 0],
                        [0, 9, -9, 0], [1, 0, 0, -1]])


def test_r_matrix_asep_values():
    mdl = ex.asep(2, 1, 1, 1, 1)
    R = ex.r_matrix(mdl, F(3))
    assert R == Matrix([[1, 0, 0, 0],
                        [0, F(4, 5), F(3, 5), 0],
                        [0, F(1, 5), F(2, 5), 0],
                        [0, 0, 0, 1]])


def test_r_matrix_tasep_values():
    R = ex.r_matrix(ex.tasep(1, 1), F(2))
    assert R == Matrix([[1, 0, 0, 0], [0, 0, 2, 0], [0, 1, -1, 0], [0, 0, 0, 1]])


def test_r_matrix_regularity(all_models):
    for mdl in all_models:
        assert ex.r_matrix(mdl, mdl.identity_point) == permutation_op()


def test_r_matrix_pole():
    with pytest.raises(PoleError):
        ex.r_matrix(ex.asep(2, 1, 1, 1, 1), F(1, 2))
    with pytest.raises(PoleError):
        ex.r_matrix(ex.ssep(1, 1, 1, 1), F(-1))
    with pytest.raises(PoleError):
        ex.r_matrix(ex.rd(3, 1, 1, 0, 0), F(-1, 2))  # kappa(x+1)+x-1 = 0


def test_k_matrix_regularity(all_models):
    for mdl in all_models:
        for kind in ("K", "Kbar"):
            assert ex.k_matrix(mdl, kind, mdl.identity_point) == Matrix.identity(2)


def test_k_matrix_ssep_value():
    K = ex.k_matrix(ex.ssep(1, 1, 0, 0), "K", F(1))
    assert K == Matrix([[0, 0], [1, 1]])


def test_k_matrix_tasep_ktilde_value():
    Kt = ex.k_matrix(ex.tasep(1, F(1, 2)), "Ktilde", F(2))
    assert Kt == Matrix([[F(1, 3), F(1, 3)], [0, F(2, 3)]])


def test_column_sums(all_models):
    ones4 = [F(1)] * 4
    ones2 = [F(1)] * 2
    for mdl in all_models:
        for x in sample_points(mdl, 3, seed=11):
            R = ex.r_matrix(mdl, x)
            assert [sum(R.a[i][j] for i in range(4)) for j in range(4)] == ones4
            for kind in ("K", "Kbar"):
                K = ex.k_matrix(mdl, kind, x)
                assert [sum(K.a[i][j] for i in range(2)) for j in range(2)] == ones2


def test_derivative_identities(all_models):
    # P R'(id) = rho w; K'(id) = 2 rho B; Kbar'(id) = -2 rho Bbar
    P = permutation_op()
    for mdl in all_models:
        w, B, Bbar = ex.local_operators(mdl)
        idp = mdl.identity_point
        rp = derivative_at(lambda x: ex.r_matrix(mdl, x), idp)
        assert P * rp == mdl.rho * w
        kp = derivative_at(lambda x: ex.k_matrix(mdl, "K", x), idp)
        assert kp == (2 * mdl.rho) * B
        kbp = derivative_at(lambda x: ex.k_matrix(mdl, "Kbar", x), idp)
        assert kbp == (-2 * mdl.rho) * Bbar


def test_crossing_scalar_asep():
    mdl = ex.asep(2, 1, 1, 1, 1)
    assert lambda_crossing(mdl, F(3)) == F(22, 25)
    assert mdl.crossing.Q == 4


def test_markov_vector():
    a = ex.asep(2, 1, 1, 1, 1)
    assert ex.markov_vector(a, F(3)) == (F(3), F(1))
    s = ex.ssep(1, 1, 1, 1)
    assert ex.markov_vector(s, F(7)) == (F(1), F(1))
    with pytest.raises(UnsupportedError):
        ex.markov_vector(ex.rd(3, 1, 1, 0, 0), F(2))


def test_markov_vector_r_invariance():
    mdl = ex.asep(2, 1, 1, 1, 1)
    x1, x2 = F(2), F(3)
    v1 = ex.markov_vector(mdl, x1)
    v2 = ex.markov_vector(mdl, x2)
    vv = [v1[i] * v2[j] for i in range(2) for j in range(2)]
    R = ex.r_matrix(mdl, x1 / x2)
    assert R.apply(vv) == vv


def test_general_asep_k():
    mdl = ex.asep(2, 1, 1, F(1, 2), F(1, 3))
    plain = ex.general_asep_k(1, F(1, 2), 2, tau=1)
    for x in (F(2), F(5, 3)):
        assert plain(x) == ex.k_matrix(mdl, "K", x)
    twisted = ex.general_asep_k(1, F(1, 2), 2, tau=2)
    assert twisted(F(1)) == Matrix.identity(2)
    with pytest.raises(ValueError):
        ex.general_asep_k(1, 1, 2, tau=0)


def test_ktilde_closed_form_equals_map(asep_model, ssep_model):
    for mdl in (asep_model, ssep_model):
        for x in sample_points(mdl, 3, seed=5):
            assert ex.ktilde_from_kbar(mdl, x) == ex.k_matrix(mdl, "Ktilde", x)


def test_kbar_roundtrip(ssep_model, rd_model):
    for mdl in (ssep_model, rd_model):
        for x in sample_points(mdl, 5, seed=3):
            assert ex.kbar_from_ktilde(mdl, x) == ex.k_matrix(mdl, "Kbar", x)


def test_ktilde_map_unsupported_for_tasep():
    with pytest.raises(UnsupportedError):
        ex.ktilde_from_kbar(ex.tasep(1, 1), F(2))


def test_rd_ktilde_dual_matches_series(rd_model):
    # dual-number evaluation through the removable singularity at x=1
    from exclusion.scalars import Dual
    got = ex.k_matrix(rd_model, "Ktilde", Dual.variable(F(1)))
    plain = ex.k_matrix(rd_model, "Ktilde", F(1))
    assert got.map(lambda e: e.value) == plain
    assert plain.trace() == 1
    # sanity-bound the derivative against a secant at nearby points
    x1, x2 = F(99, 100), F(101, 100)
    k1 = ex.k_matrix(rd_model, "Ktilde", x1)
    k2 = ex.k_matrix(rd_model, "Ktilde", x2)
    slope = (k2 - k1).map(lambda e: e / (x2 - x1))
    deriv = got.map(lambda e: e.deriv)
    # secant of a smooth rational function brackets the derivative loosely
    for i in range(2):
        for jj in range(2):
            assert abs(float(slope.a[i][jj]) - float(deriv.a[i][jj])) < 0.05


def test_rd_ktilde_has_real_pole_at_phi():
    # x^2 = phi^2 is a genuine pole of the RD dual matrix at kappa=3
    with pytest.raises(PoleError):
        ex.k_matrix(ex.rd(3, 1, 1, 0, 0), "Ktilde", F(1, 2))


def test_asep_scaling_limit_to_ssep():
    # q = 1 + eps, z = 1 + x eps: the ASEP R-matrix entries converge to the
    # SSEP ones as eps -> 0, checked on first-order jets
    x = F(3)
    ssep = ex.ssep(1, 1, 1, 1)
    target = ex.r_matrix(ssep, x)
    qj = Jet([F(1), F(1), F(0)])
    zj = Jet([F(1), x, F(0)])
    d = qj * zj - 1
    entries = [[1, 0, 0, 0],
               [0, (zj - 1) * qj / d, (qj - 1) * zj / d, 0],
               [0, (qj - 1) / d, (zj - 1) / d, 0],
               [0, 0, 0, 1]]
    for i in range(4):
        for j in range(4):
            e = entries[i][j]
            val = e.value if isinstance(e, Jet) else F(e)
            assert val == target.a[i][j]


def test_model_constructor_validation():
    with pytest.raises(ValueError):
        ex.asep(1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        ex.asep(0, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        ex.rd(1, 1, 1, 0, 0)
    with pytest.warns(UserWarning):
        ex.ssep(-1, 1, 1, 1)


def test_rd_boundary_coefficients():
    from exclusion.ansatz import rd_boundary_coefficients
    co = rd_boundary_coefficients(3, 1, 1, 0, 0)
    assert co["a"] == F(5, 7)
    assert co["c"] == F(-1, 7)
    assert co["phi"] == F(1, 2)
