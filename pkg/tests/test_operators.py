import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridiag_spectra.families import CoeffPolynomial, Jacobi, inner_product
from tridiag_spectra.operators import (
    SHIFT_A,
    SHIFT_B,
    GridFunction,
    JacobiOperatorParams,
    QOperatorParams,
    apply_L_jacobi,
    apply_L_littleq,
    apply_T_jacobi,
    apply_T_q1,
    apply_T_q2,
    eigen_residual,
    eigenvalue_Lambda,
    multiply_r,
)
from tridiag_spectra.tridiag import pair_for

Q1 = QOperatorParams(0.5, 0.4, 1.2, 0.5, SHIFT_A)
Q2 = QOperatorParams(0.5, 0.4, 1.2, 0.5, SHIFT_B)
JAC = JacobiOperatorParams(0.5, 0.3, delta=-1.2)
K = 60


def _apply(params):
    return apply_T_q1 if params.case == SHIFT_A else apply_T_q2


def test_jacobi_constant_image():
    out = apply_T_jacobi(CoeffPolynomial.constant(1), JAC)
    g = JAC.gamma
    assert out.coefficients == pytest.approx((g, -g), rel=1e-15)


def test_q1_constant_image():
    f = GridFunction(np.ones(K), Q1.q)
    out = apply_T_q1(f, Q1)
    assert len(out.values) == K - 1
    assert np.allclose(out.values, Q1.gamma * Q1.q ** np.arange(K - 1), rtol=1e-15, atol=0)


def test_q2_constant_image():
    f = GridFunction(np.ones(K), Q2.q)
    out = apply_T_q2(f, Q2)
    bq = Q2.b * Q2.q
    x = Q2.q ** np.arange(K - 1)
    assert np.allclose(out.values, Q2.gamma * (1 - bq * x) / (1 - bq), rtol=1e-14, atol=0)


def test_lambda_values():
    assert JAC.Lambda(0) == 0 and JAC.Lambda(-1) == 0
    assert JAC.Lambda(2) == pytest.approx(-2 * (2 + 0.5 + 0.3 + 2))
    assert Q1.Lambda(0) == 0
    a, b, q = Q1.a, Q1.b, Q1.q
    assert Q1.Lambda(1) == pytest.approx((1 - q) * (1 - a * b * q ** 3) / q, rel=1e-15)
    assert eigenvalue_Lambda(Q1, 3, shifted=True) == pytest.approx(Q1.Lambda(3) + Q1.gamma, rel=1e-14)


def test_gamma_from_delta():
    al, be, d = 0.5, 0.3, -1.2
    assert JAC.gamma == pytest.approx(-(al + d + 1) * (be - d + 1))
    assert JacobiOperatorParams(al, be, gamma_value=0.7).gamma == 0.7


def test_jacobi_L_eigenfunctions():
    al, be = 1.5, 0.3
    fam = Jacobi(al, be)
    for n in range(8):
        p = fam.coefficients(n)
        img = apply_L_jacobi(p, al, be)
        lam = -n * (n + al + be + 1)
        assert max(map(abs, (img - p * lam).coefficients), default=0.0) < 1e-11


def test_jacobi_T_on_shifted_family():
    # T Phi_n = Lambda_n^gamma (1 - x) Phi_n
    pair = pair_for(JAC)
    for n in range(8):
        P = pair.big.coefficients(n)
        lhs = apply_T_jacobi(P, JAC)
        rhs = multiply_r(P, JAC) * JAC.Lambda_gamma(n)
        assert max(map(abs, (lhs - rhs).coefficients), default=0.0) < 1e-10


@pytest.mark.parametrize("params", [Q1, Q2], ids=["q1", "q2"])
def test_q_T_on_shifted_family(params):
    pair = pair_for(params)
    x = params.q ** np.arange(K)
    for n in range(6):
        f = GridFunction(pair.Phi(n, x), params.q)
        Tf = _apply(params)(f, params).values
        ref = params.Lambda_gamma(n) * pair.r(x[:-1]) * f.values[:-1]
        # stencil coefficients grow like 1/x in the b-shift case
        scale = np.maximum(1, np.abs(f.values[:-1])) / x[:-1]
        assert np.max(np.abs(Tf - ref) / scale) < 1e-13
        assert np.max(eigen_residual(f, params, 0.0)) > 0


def test_little_q_operator_eigenvalues():
    a, b, q = 0.5, 0.4, 0.5
    pair = pair_for(Q1)
    x = q ** np.arange(K)
    fam = pair.small
    for n in range(5):
        f = GridFunction(fam.eval(n, x), q)
        lam = q ** (-n) * (1 - q ** n) * (1 - a * b * q ** (n + 1))
        out = apply_L_littleq(f, a, b).values
        scale = np.maximum(1, np.abs(f.values[:-1])) / x[:-1]
        assert np.max(np.abs(out - lam * f.values[:-1]) / scale) < 1e-13


def test_jacobi_symmetry():
    fam = Jacobi(JAC.alpha, JAC.beta)
    m = fam.measure()
    for i in range(5):
        for j in range(5):
            p, r = fam.coefficients(i), fam.coefficients(j)
            lhs = inner_product(apply_T_jacobi(p, JAC), r, m)
            rhs = inner_product(p, apply_T_jacobi(r, JAC), m)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("params", [Q1, Q2], ids=["q1", "q2"])
def test_lattice_symmetry(params):
    fam = pair_for(params).small
    Kl = 300
    x = params.q ** np.arange(Kl)
    w = fam.masses(Kl)[: Kl - 1]
    vals = [fam.eval(n, x) for n in range(4)]
    imgs = [_apply(params)(GridFunction(v, params.q), params).values for v in vals]
    for i in range(4):
        for j in range(4):
            lhs = np.dot(w, imgs[i] * vals[j][:-1])
            rhs = np.dot(w, vals[i][:-1] * imgs[j])
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@settings(max_examples=25)
@given(c1=st.floats(0.3, 3), c2=st.floats(0.3, 3))
def test_gamma_linearity(c1, c2):
    # T^{g1} f - T^{g2} f = (g1 - g2) r f
    p1 = QOperatorParams(0.5, 0.4, c1, 0.5, SHIFT_A)
    p2 = QOperatorParams(0.5, 0.4, c2, 0.5, SHIFT_A)
    x = 0.5 ** np.arange(K)
    f = GridFunction(np.cos(3 * x), 0.5)
    diff = apply_T_q1(f, p1).values - apply_T_q1(f, p2).values
    expected = (p1.gamma - p2.gamma) * x[:-1] * f.values[:-1]
    assert np.allclose(diff, expected, rtol=1e-12, atol=1e-13)


def test_eigen_residual_negative_control():
    pair = pair_for(Q1)
    x = Q1.q ** np.arange(K)
    f = GridFunction(pair.Phi(2, x), Q1.q)
    # Phi_n is not an eigenfunction of T itself: the residual must be large
    assert np.max(eigen_residual(f, Q1, Q1.Lambda_gamma(2))) > 1e-2


def test_grid_rejects_mismatched_q():
    f = GridFunction(np.ones(10), 0.3)
    with pytest.raises(ValueError):
        apply_T_q1(f, Q1)
    with pytest.raises(ValueError):
        apply_T_q1(GridFunction(np.ones(10), 0.5), Q2)


@pytest.mark.parametrize("kwargs", [dict(a=0.5, b=0.4, c=0.0, q=0.5), dict(a=3.0, b=0.4, c=1, q=0.5),
                                    dict(a=0.5, b=0.4, c=1, q=1.0)])
def test_q_params_validation(kwargs):
    with pytest.raises(ValueError):
        QOperatorParams(**kwargs)


def test_jacobi_params_validation():
    with pytest.raises(ValueError):
        JacobiOperatorParams(0.5, 0.3)
    with pytest.raises(ValueError):
        JacobiOperatorParams(-1.5, 0.3, delta=0.1)
