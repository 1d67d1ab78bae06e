import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridiag_spectra.families import AlSalamChihara, LittleQJacobi
from tridiag_spectra.operators import SHIFT_A, SHIFT_B, GridFunction, JacobiOperatorParams, QOperatorParams
from tridiag_spectra.spectral import (
    SOURCE_JACOBI_DEFLATED,
    SOURCE_JACOBI,
    SOURCE_A_SHIFT,
    affine_map,
    asc_values,
    biorthogonal_gram,
    compare_spectrum,
    direct_eigenfunction_q1,
    direct_eigenfunction_q2,
    direct_recurrence_q2,
    interlaces,
    jacobi_delta_roots,
    jacobi_discrete_families,
    match_recurrence,
    predict_spectrum,
    sigma_measure,
    sturm_count,
    target_family,
    thread_cap,
    truncated_spectrum,
    v_transform,
    v_transform_closed_form,
)
from tridiag_spectra.checks import eigenfunction_residual
from tridiag_spectra.tridiag import closed_form_sequences

Q1_EXAMPLE = QOperatorParams(0.5, 0.0, 3.0, 0.5, SHIFT_A)
Q1 = QOperatorParams(0.5, 0.4, 1.2, 0.5, SHIFT_A)
Q2 = QOperatorParams(0.5, 0.5, 1.0, 0.5, SHIFT_B)


# predictions


def test_jacobi_zero_parameters_have_no_discrete_spectrum():
    pred = predict_spectrum(JacobiOperatorParams(0.0, 0.0, delta=0.0))
    assert pred.source == SOURCE_JACOBI
    assert pred.discrete_points == ()
    assert pred.band_sup == -0.5


def test_q1_example_prediction():
    pred = predict_spectrum(Q1_EXAMPLE)
    assert pred.source == SOURCE_A_SHIFT
    assert len(pred.continuous_bands) == 1
    assert pred.continuous_bands[0] == pytest.approx((0.25, 2.25), rel=1e-15)
    assert pred.discrete_points == pytest.approx((1 / 6,), rel=1e-15)
    # the other candidate value lies inside the band, so it cannot be a discrete point
    assert pred.band_contains(5 / 12)


def test_gamma_zero_prediction_contains_zero():
    p = JacobiOperatorParams(0.5, 0.3, delta=1.3)
    pred = predict_spectrum(p)
    assert pred.source == SOURCE_JACOBI_DEFLATED
    assert 0.0 in pred.discrete_points


def test_q2_prediction_is_containment():
    pred = predict_spectrum(Q2)
    assert pred.containment_only
    assert pred.band_inf == 0


def test_prediction_rejects_sign_change():
    with pytest.raises(ValueError):
        predict_spectrum(QOperatorParams(0.5, 0.4, 5.0, 0.5, SHIFT_A))


@settings(max_examples=60)
@given(al=st.floats(-0.9, 3), be=st.floats(-0.9, 3), delta=st.floats(-5, 5))
def test_jacobi_dichotomy(al, be, delta):
    # at most one of the two candidate sets is nonempty
    first, second = jacobi_discrete_families(al, be, delta)
    assert not (first and second)
    edge = -0.5 * (al + 1) ** 2
    # u < 0 puts the point above the edge; u -> 0 reaches it in floating point
    assert all(x >= edge for x in first + second)


@settings(max_examples=40)
@given(al=st.floats(-0.9, 3), be=st.floats(-0.9, 3), delta=st.floats(-3, 3))
def test_delta_roots_recover_gamma(al, be, delta):
    p = JacobiOperatorParams(al, be, delta=delta)
    d1, d2 = jacobi_delta_roots(al, be, p.gamma)
    assert min(abs(d1 - delta), abs(d2 - delta)) < 1e-7 * max(1, abs(delta))


# finite sections


def test_section_of_size_one():
    tr = truncated_spectrum([0.0], [2.5], 1)
    assert tr.eigenvalues == pytest.approx([2.5], rel=1e-13)


def test_section_two_by_two():
    a, b = [1.0, 0.0], [0.0, 0.0]
    tr = truncated_spectrum(a, b, 2)
    assert np.sort(tr.eigenvalues) == pytest.approx([-1.0, 1.0], abs=1e-14)


def test_section_five_by_five_against_dense_eigensolver():
    rng = np.random.default_rng(3)
    a, b = rng.normal(size=5), rng.normal(size=5)
    dense = np.diag(b) + np.diag(a[:4], 1) + np.diag(a[:4], -1)
    ref = np.linalg.eigvalsh(dense)
    tr = truncated_spectrum(a, b, 5)
    assert np.sort(tr.eigenvalues) == pytest.approx(ref, abs=1e-13)
    # the characteristic polynomial vanishes at each eigenvalue
    for i, lam in enumerate(np.sort(tr.eigenvalues)):
        slope = np.prod(np.abs(np.delete(ref, i) - lam))
        assert abs(np.linalg.det(dense - lam * np.eye(5))) < 1e-12 * slope * max(1.0, abs(lam))


def test_sturm_count():
    b = np.array([1.0, 2.0, 3.0])
    assert list(sturm_count(b, np.zeros(2), np.array([0.5, 1.5, 3.5]))) == [0, 1, 3]


@pytest.mark.parametrize("params", [JacobiOperatorParams(0.5, 0.3, delta=-1.2), Q1, Q2],
                         ids=["jacobi", "q1", "q2"])
def test_interlacing(params):
    a, b = closed_form_sequences(params, 121)
    for N in (20, 120):
        small = truncated_spectrum(a, b, N).eigenvalues
        big = truncated_spectrum(a, b, N + 1).eigenvalues
        assert interlaces(small, big, tol=1e-12)


def test_thread_count_does_not_change_results(monkeypatch):
    a, b = closed_form_sequences(Q1, 200)
    one = truncated_spectrum(a, b, 200, threads=1).eigenvalues
    four = truncated_spectrum(a, b, 200, threads=4).eigenvalues
    assert np.array_equal(one, four)
    monkeypatch.setenv("TRIDIAG_SPECTRA_THREADS", "3")
    assert thread_cap() == 3
    assert np.array_equal(truncated_spectrum(a, b, 200).eigenvalues, one)
    monkeypatch.setenv("TRIDIAG_SPECTRA_THREADS", "zero")
    with pytest.raises(ValueError):
        thread_cap()


def test_section_finds_jacobi_discrete_point():
    p = JacobiOperatorParams(0.5, 0.3, delta=-1.2)
    pred = predict_spectrum(p)
    assert pred.discrete_points == pytest.approx((-0.72,))
    a, b = closed_form_sequences(p, 400)
    rep = compare_spectrum(pred, truncated_spectrum(a, b, 400))
    assert rep.nearest[0][2] < 1e-4


# recurrence identification


@pytest.mark.parametrize("params", [
    JacobiOperatorParams(0.5, 0.3, delta=0.4),
    JacobiOperatorParams(0.5, 0.3, delta=1.3),  # gamma = 0, deflated
    Q1,
    Q1_EXAMPLE,
])
def test_match_recurrence(params):
    rep = match_recurrence(params, 20)
    assert rep.max_error < 1e-10


def test_q2_has_no_target_family():
    with pytest.raises(ValueError):
        target_family(Q2)


def test_affine_map_at_band_edge():
    shift, scale = affine_map(Q1_EXAMPLE)
    # x = 1 is the lower edge (1 - sqrt(aq))^2 of the band
    assert shift + scale == pytest.approx(0.25, rel=1e-15)
    shift, scale = affine_map(JacobiOperatorParams(0.0, 0.0, delta=0.0))
    assert shift == -0.5 and scale == -2.0


# direct eigenfunctions and the transform V


def test_direct_eigenfunction_q1():
    lam = 1.0
    y = direct_eigenfunction_q1(Q1_EXAMPLE, lam, 60)
    assert y.values[0] == pytest.approx(1.0, rel=1e-15)
    assert eigenfunction_residual(y, Q1_EXAMPLE, lam) < 1e-10
    assert eigenfunction_residual(y, Q1_EXAMPLE, lam + 0.01) > 1e-6


def test_asc_values_match_series():
    A, B, q = 0.4, 0.3, 0.5
    x = np.linspace(-0.9, 0.9, 7)
    vals = asc_values(A, B, q, 8, x)
    fam = AlSalamChihara(A, B, q)
    for k in range(8):
        assert np.allclose(vals[k], fam.eval(k, x), rtol=1e-11, atol=1e-12)


def test_v_indicator():
    vals = np.zeros(10)
    vals[0] = 1.0
    out = v_transform(GridFunction(vals, Q1.q), Q1, np.array([-0.5, 0.0, 0.7]))
    assert np.allclose(out.value, 1.0, rtol=0, atol=1e-15)


def test_v_is_isometric_on_polynomials():
    x, w = sigma_measure(Q1)
    fam = LittleQJacobi(Q1.a, Q1.b, Q1.q)
    V = np.array([v_transform(lambda y, n=n: fam.eval(n, y), Q1, x).value for n in range(6)])
    gram = (V * w) @ V.T
    assert np.max(np.abs(gram - np.diag([fam.norm(n) for n in range(6)]))) < 1e-7


def test_v_closed_form():
    x = np.linspace(-0.9, 0.9, 9)
    fam = LittleQJacobi(Q1.a, Q1.b, Q1.q)
    for n in range(5):
        direct = v_transform(lambda y, n=n: fam.eval(n, y), Q1, x).value
        assert np.allclose(direct, v_transform_closed_form(Q1, n, x), rtol=1e-10, atol=1e-12)


def test_biorthogonality_symmetric_scale():
    assert np.max(np.abs(biorthogonal_gram(Q1, 1.0, 4))) < 1e-7
    with pytest.raises(ValueError):
        biorthogonal_gram(Q1, 5.0, 2)


def test_direct_recurrence_q2():
    a, c, q = 0.5, 1.0, 0.5
    p0 = QOperatorParams(a, 0.0, c, q, SHIFT_B)
    for k in range(5):
        ak, bk = direct_recurrence_q2(p0, k)
        assert bk == pytest.approx(q ** (-k) * (a * (1 - c * q ** (k + 1)) + 1), rel=1e-15)
        assert ak == pytest.approx(-math.sqrt(a) * q ** (-k - 0.5) * math.sqrt(1 - q ** (k + 1)), rel=1e-15)
    s = 1 - Q2.b * Q2.q
    coeffs = [direct_recurrence_q2(Q2, k) for k in range(200)]
    off = np.array([c[0] for c in coeffs]) / s
    diag = np.array([c[1] for c in coeffs]) / s
    assert np.all(diag > 0)
    # the direct recurrence is supported on [0, inf)
    ev = truncated_spectrum(off, diag, 200).eigenvalues
    assert ev.min() >= -1e-6


def test_direct_eigenfunction_q2():
    y = direct_eigenfunction_q2(Q2, 2.0, 40)
    assert y.values[0] == 1.0
    assert eigenfunction_residual(y, Q2, 2.0) < 1e-10
