"""Numerical verification routines shared by the command line and the test suite.

Each routine returns plain numbers (residuals); pass/fail decisions against
tolerances are left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import Jacobi, inner_product
from .operators import (
    SHIFT_A,
    GridFunction,
    JacobiOperatorParams,
    QOperatorParams,
    apply_T_jacobi,
    apply_T_q1,
    apply_T_q2,
    eigen_residual,
)
from .tridiag import (
    closed_form_coeffs,
    connection_coeffs,
    jacobi_matrix_coeffs,
    m_recurrence_coeffs,
    pair_for,
)

__all__ = [
    "TridiagonalityReport",
    "tridiagonality",
    "connection_residual",
    "m_recurrence_residual",
    "gamma_shift_residual",
    "sample_points",
    "eigenfunction_residual",
]

LATTICE_K = 300


@dataclass(frozen=True)
class TridiagonalityReport:
    matrix: np.ndarray  # <T phi_n, phi_m>
    offband: float  # max |M[n, m]| over |n - m| >= 2
    band: float  # max relative deviation from the closed-form a_n, b_n


def _rel(x: float, ref: float) -> float:
    """|x - ref| relative to |ref|; absolute when ref vanishes."""
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x)


def _jacobi_matrix(params: JacobiOperatorParams, n_max: int) -> np.ndarray:
    fam = Jacobi(params.alpha, params.beta)
    m = fam.measure()
    basis = [fam.coefficients(n) * (1 / math.sqrt(fam.norm(n))) for n in range(n_max + 1)]
    images = [apply_T_jacobi(p, params) for p in basis]
    out = np.empty((n_max + 1, n_max + 1))
    for i, tp in enumerate(images):
        for j, p in enumerate(basis):
            out[i, j] = inner_product(tp, p, m)
    return out


def _q_matrix(params: QOperatorParams, n_max: int, K: int) -> np.ndarray:
    pair = pair_for(params)
    fam = pair.small
    m = fam.measure(K)
    x = m.points
    apply = apply_T_q1 if params.case == SHIFT_A else apply_T_q2
    basis = [fam.eval(n, x) / math.sqrt(fam.norm(n)) for n in range(n_max + 1)]
    images = [apply(GridFunction(v, params.q), params).values for v in basis]
    w = m.masses[: K - 1]
    out = np.empty((n_max + 1, n_max + 1))
    for i, tv in enumerate(images):
        for j, v in enumerate(basis):
            out[i, j] = float(np.dot(w, tv * v[: K - 1]))
    return out


def tridiagonality(params, n_max: int = 12, K: int = LATTICE_K) -> TridiagonalityReport:
    """Matrix of T^gamma in the orthonormal basis, compared with the closed forms.

    Jacobi: exact action on monomial coefficients plus exact Gauss quadrature.
    q-cases: three-point stencils and lattice sums over K points (the stencil
    drops the last point, whose mass is negligible at K = 300).
    """
    if isinstance(params, JacobiOperatorParams):
        M = _jacobi_matrix(params, n_max)
    else:
        M = _q_matrix(params, n_max, K)
    n = np.arange(n_max + 1)
    far = np.abs(n[:, None] - n[None, :]) >= 2
    offband = float(np.max(np.abs(M[far]))) if far.any() else 0.0
    band = 0.0
    for k in range(n_max + 1):
        a, b = closed_form_coeffs(params, k)
        band = max(band, _rel(M[k, k], b))
        if k < n_max:
            # the matrix is symmetric; compare both off-diagonal copies
            band = max(band, _rel(M[k, k + 1], a), _rel(M[k + 1, k], a))
    return TridiagonalityReport(M, offband, band)


def sample_points(params, count: int = 20) -> np.ndarray:
    """Deterministic evaluation points inside the support of the measures."""
    if isinstance(params, JacobiOperatorParams):
        return np.cos(np.pi * (np.arange(count) + 0.5) / count)
    k = np.arange(count // 2)
    off = np.linspace(0.05, 0.95, count - len(k))
    return np.concatenate((params.q ** k, off))


def _values(pair, which: str, N: int, x) -> list:
    fn = pair.phi if which == "small" else pair.Phi
    return [fn(n, x) for n in range(N + 1)]


def connection_residual(params, n_max: int = 12, x=None) -> float:
    """max |phi_n - A_n Phi_n - B_n Phi_{n-1}| / max(1, max|phi_n|) over n <= n_max."""
    pair = pair_for(params)
    x = sample_points(params) if x is None else np.asarray(x, dtype=float)
    small = _values(pair, "small", n_max, x)
    big = _values(pair, "big", n_max, x)
    worst = 0.0
    for n in range(n_max + 1):
        A, B = connection_coeffs(pair, n)
        rhs = A * big[n] + (B * big[n - 1] if n > 0 else 0.0)
        scale = max(1.0, float(np.max(np.abs(small[n]))))
        worst = max(worst, float(np.max(np.abs(small[n] - rhs))) / scale)
    return worst


def m_recurrence_residual(params, n_max: int = 12, x=None) -> float:
    """max |r phi_n - (up phi_{n+1} + mid phi_n + down phi_{n-1})|, relative as above."""
    pair = pair_for(params)
    x = sample_points(params) if x is None else np.asarray(x, dtype=float)
    small = _values(pair, "small", n_max + 1, x)
    r = pair.r(x)
    worst = 0.0
    for n in range(n_max + 1):
        up, mid, down = m_recurrence_coeffs(pair, n)
        rhs = up * small[n + 1] + mid * small[n] + (down * small[n - 1] if n > 0 else 0.0)
        scale = max(1.0, float(np.max(np.abs(small[n + 1]))), float(np.max(np.abs(small[n]))))
        worst = max(worst, float(np.max(np.abs(r * small[n] - rhs))) / scale)
    return worst


def gamma_shift_residual(params, gammas=(-0.7, 0.3, 2.5), n_max: int = 12) -> float:
    """max over gamma of |a_n^gamma - a_n^0 - gamma A_n B_{n+1}| and the analogous
    b_n^gamma - b_n^0 - gamma (A_n^2 + B_n^2), relative to max(1, |coefficient|)."""
    pair = pair_for(params)
    worst = 0.0
    for g in gammas:
        for n in range(n_max + 1):
            a_g, b_g = jacobi_matrix_coeffs(pair, g, n)
            a_0, b_0 = jacobi_matrix_coeffs(pair, 0.0, n)
            up, mid, _ = m_recurrence_coeffs(pair, n)
            worst = max(worst,
                        abs(a_g - a_0 - g * up) / max(1.0, abs(a_g)),
                        abs(b_g - b_0 - g * mid) / max(1.0, abs(b_g)))
    return worst


def eigenfunction_residual(f: GridFunction, params: QOperatorParams, lam: float, k_min: int = 1) -> float:
    """Largest relative stencil residual of T f = lam f over k_min <= k <= K-2."""
    return float(np.max(eigen_residual(f, params, lam)[k_min:]))

