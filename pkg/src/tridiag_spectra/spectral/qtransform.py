"""Direct eigenfunctions and the transform V for the little q-Jacobi operators."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..families import AlSalamChihara, AskeyWilson, LittleQJacobi, orthonormal_values
from ..operators import SHIFT_A, SHIFT_B, GridFunction, QOperatorParams
from ..specialfn import (
    SeriesParams,
    basic_hypergeometric_terminating,
    q_pochhammer,
    q_pochhammer_pair,
    real_part,
)

__all__ = [
    "TransformValue",
    "asc_parameters",
    "spectral_variable",
    "direct_eigenfunction_q1",
    "asc_values",
    "v_transform",
    "v_transform_closed_form",
    "general_identity_lhs",
    "general_identity_rhs",
    "biorthogonal_transform",
    "biorthogonal_pair_check",
    "biorthogonal_gram",
    "sigma_measure",
    "direct_recurrence_q2",
    "direct_eigenfunction_q2",
]

SERIES_TAIL = 1e-18
SERIES_STEP = 20
MAX_EXTENSIONS = 50


@dataclass(frozen=True)
class TransformValue:
    value: float
    tail: float
    terms: int


def _require(params: QOperatorParams, case: str):
    if params.case != case:
        raise ValueError(f"expected the {case} operator, got {params.case}")


def asc_parameters(params: QOperatorParams):
    """(c sqrt(aq), (b/c) sqrt(q/a)) of the direct eigenfunction family."""
    a, b, c, q = params.a, params.b, params.c, params.q
    return c * math.sqrt(a * q), (b / c) * math.sqrt(q / a)


def spectral_variable(params: QOperatorParams, lam):
    """x with lambda = 1 + aq - 2 sqrt(aq) x."""
    s = math.sqrt(params.a * params.q)
    return (1 + params.a * params.q - np.asarray(lam, dtype=float)) / (2 * s)


def asc_values(A: float, B: float, q: float, K: int, x) -> np.ndarray:
    """Q_0..Q_{K-1}(x; A, B | q) from the three-term recurrence (lc(Q_k) = 2^k).

    2x Q_k = Q_{k+1} + (A+B) q^k Q_k + (1 - q^k)(1 - AB q^(k-1)) Q_{k-1}.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((K,) + x.shape)
    out[0] = 1.0
    if K > 1:
        out[1] = 2 * x - (A + B)
    for k in range(1, K - 1):
        out[k + 1] = ((2 * x - (A + B) * q ** k) * out[k]
                      - (1 - q ** k) * (1 - A * B * q ** (k - 1)) * out[k - 1])
    return out


def direct_eigenfunction_q1(params: QOperatorParams, lam: float, K: int) -> GridFunction:
    """y(q^k) = p_k / sqrt(w_k(a, b; q)) with p_k the orthonormal Al-Salam-Chihara
    values at 2x = (aq + 1 - lambda)/sqrt(aq), normalised so p_0 = 1."""
    _require(params, SHIFT_A)
    if K < 3:
        raise ValueError("need K >= 3")
    A, B = asc_parameters(params)
    fam = AlSalamChihara(A, B, params.q)
    x = float(spectral_variable(params, lam))
    p = orthonormal_values(fam, K - 1, x) * math.sqrt(fam.norm(0))
    w = LittleQJacobi(params.a, params.b, params.q).masses(K)
    return GridFunction(p / np.sqrt(w), params.q)


def _series_length(t: float, q: float, extra: int = 0) -> int:
    if t == 0:
        return 1 + extra
    return int(math.ceil(math.log(SERIES_TAIL) / math.log(abs(t)))) + extra + 1


def _transform_sum(vals, t, A, B, q, x):
    """sum_k vals[k] t^k/(q;q)_k Q_k(x; A, B|q) with a tail estimate."""
    K = len(vals)
    x = np.asarray(x, dtype=float)
    Q = asc_values(A, B, q, K, x)
    k = np.arange(K)
    qq = np.concatenate(([1.0], np.cumprod(1 - q ** (k[1:]))))
    coef = np.asarray(vals, dtype=float) * float(t) ** k / qq
    terms = coef.reshape((K,) + (1,) * x.ndim) * Q
    total = np.sum(terms, axis=0)
    # the bracketing factor bounds the geometric remainder of the tail
    last = np.max(np.abs(terms[-3:]), axis=0)
    tail = last * abs(t) / (1 - abs(t))
    return total, tail


def _adaptive_sum(values, t, A, B, q, x, K):
    """Sum with K terms, lengthened until the tail estimate is below SERIES_TAIL
    relative to the sum; the coefficients t^k Q_k/(q;q)_k may grow before they decay."""
    for _ in range(MAX_EXTENSIONS):
        vals = values(K)
        total, tail = _transform_sum(vals, t, A, B, q, x)
        if np.all(tail <= SERIES_TAIL * np.maximum(1.0, np.abs(total))):
            break
        K += SERIES_STEP
    return total, tail, K


def v_transform(f, params: QOperatorParams, x) -> TransformValue:
    """(Vf)(x) = sum_k f(q^k) (aq)^(k/2)/(q;q)_k Q_k(x; c sqrt(aq), (b/c) sqrt(q/a) | q).

    ``f`` is a GridFunction (the sum runs over its K values) or a callable of
    the lattice point, in which case terms are added until the tail estimate
    drops below 1e-18 relative to the sum.
    """
    _require(params, SHIFT_A)
    a, q = params.a, params.q
    s = math.sqrt(a * q)
    A, B = asc_parameters(params)
    if isinstance(f, GridFunction):
        total, tail = _transform_sum(f.values, s, A, B, q, x)
        return TransformValue(total, tail, f.K)
    total, tail, K = _adaptive_sum(lambda K: np.asarray(f(q ** np.arange(K, dtype=float)), dtype=float),
                                   s, A, B, q, x, _series_length(s, q))
    return TransformValue(total, tail, K)


def v_transform_closed_form(params: QOperatorParams, n: int, x):
    """(V p_n)(x) through the Askey-Wilson polynomial with parameters
    (sqrt(aq), c sqrt(aq), (b/c) sqrt(q/a), sqrt(aq))."""
    return biorthogonal_transform(params, n, 1.0, x)


def _biorthogonal_prefactor(params: QOperatorParams, n: int, alpha: float) -> float:
    a, b, c, q = params.a, params.b, params.c, params.q
    return (alpha ** n * (a * q) ** (n / 2)
            * q_pochhammer(alpha * a * c * q ** (n + 1), q) * q_pochhammer(alpha * b * q ** (n + 1) / c, q)
            / q_pochhammer(a * q, q, n))


def _biorthogonal_family(params: QOperatorParams, alpha: float) -> AskeyWilson:
    s = math.sqrt(params.a * params.q)
    A, B = asc_parameters(params)
    return AskeyWilson(alpha * s, A, B, s / alpha, params.q)


def biorthogonal_transform(params: QOperatorParams, n: int, alpha: float, x):
    """V applied to q^k -> alpha^k p_n(q^k; a, b; q), in closed form."""
    _require(params, SHIFT_A)
    x = np.asarray(x, dtype=float)
    aw = _biorthogonal_family(params, alpha)
    s = math.sqrt(params.a * params.q)
    return _biorthogonal_prefactor(params, n, alpha) * aw.eval(n, x) / q_pochhammer_pair(alpha * s, x, q=params.q)


def _biorthogonal_transforms(params: QOperatorParams, n_max: int, alpha: float, x) -> np.ndarray:
    """Rows n = 0..n_max of the closed form, with the polynomials taken from the
    stable orthonormal recurrence on [-1, 1] instead of the cancelling series."""
    aw = _biorthogonal_family(params, alpha)
    s = math.sqrt(params.a * params.q)
    vals = orthonormal_values(aw, n_max, x)
    out = np.empty_like(vals)
    denom = q_pochhammer_pair(alpha * s, x, params.q)
    for n in range(n_max + 1):
        scale = math.copysign(math.sqrt(aw.norm(n)), aw.lc(n))
        out[n] = _biorthogonal_prefactor(params, n, alpha) * scale * vals[n] / denom
    return out


def general_identity_lhs(n: int, t: float, x, a: float, b: float, c: float, d: float, q: float) -> TransformValue:
    """sum_k t^k/(q;q)_k p_n(q^k; a, b; q) Q_k(x; c, d | q), truncated with a tail bound."""
    if not abs(t) < 1:
        raise ValueError("need |t| < 1")
    fam = LittleQJacobi(a, b, q)
    total, tail, K = _adaptive_sum(lambda K: fam.eval(n, q ** np.arange(K, dtype=float)),
                                   t, c, d, q, x, _series_length(t, q, extra=n))
    return TransformValue(total, tail, K)


def general_identity_rhs(n: int, t: float, x, a: float, b: float, c: float, d: float, q: float):
    """(tc, td; q)_inf / (t e^{i theta}, t e^{-i theta}; q)_inf times a terminating 4phi3."""
    x = np.asarray(x, dtype=float)
    z = x + 1j * np.sqrt(1 - x * x)
    pre = q_pochhammer(t * c, q) * q_pochhammer(t * d, q) / q_pochhammer_pair(t, x, q)
    series = basic_hypergeometric_terminating(
        SeriesParams((q ** (-n), a * b * q ** (n + 1), t * z, t / z), (a * q, t * c, t * d), q, q), n)
    return pre * real_part(series)


def sigma_measure(params: QOperatorParams, nodes: int = 400):
    """Normalised Al-Salam-Chihara measure: int Q_k Q_l dsigma = (q, bq; q)_k delta_kl.

    Returns (nodes, weights) on (-1, 1). Only the purely continuous case
    (both parameters of modulus < 1) is supported.
    """
    from ..families import gauss_jacobi

    A, B = asc_parameters(params)
    q = params.q
    fam = AlSalamChihara(A, B, q)
    m = fam.measure(nodes)
    t, w = gauss_jacobi(m.nodes, -0.5, -0.5)
    scale = q_pochhammer(q, q) * q_pochhammer(params.b * q, q)
    return t, w * m.factor(t) * scale


def _check_biorthogonal(params: QOperatorParams, alpha_scale: float):
    _require(params, SHIFT_A)
    s = math.sqrt(params.a * params.q)
    if not s < alpha_scale < 1 / s:
        raise ValueError(f"alpha must lie in ({s}, {1 / s})")
    A, B = asc_parameters(params)
    if max(abs(A), abs(B), alpha_scale * s, s / alpha_scale) >= 1:
        raise ValueError("sigma must be purely continuous for this check")


def biorthogonal_gram(params: QOperatorParams, alpha_scale: float, n_max: int, nodes: int = 400) -> np.ndarray:
    """G[n, m] = <V f_n, V g_m>_sigma - h_n delta_nm for f_n = alpha^k p_n, g_m = alpha^-k p_m."""
    _check_biorthogonal(params, alpha_scale)
    x, w = sigma_measure(params, nodes)
    f = _biorthogonal_transforms(params, n_max, alpha_scale, x)
    g = _biorthogonal_transforms(params, n_max, 1 / alpha_scale, x)
    gram = (f * w) @ g.T
    fam = LittleQJacobi(params.a, params.b, params.q)
    return gram - np.diag([fam.norm(n) for n in range(n_max + 1)])


def biorthogonal_pair_check(params: QOperatorParams, alpha_scale: float, n: int, m: int, nodes: int = 400) -> float:
    """One entry of :func:`biorthogonal_gram`."""
    return float(biorthogonal_gram(params, alpha_scale, max(n, m), nodes)[n, m])


def direct_recurrence_q2(params: QOperatorParams, k: int):
    """(a_k, b_k) of (1 - bq) lambda p_k = a_k p_{k+1} + b_k p_k + a_{k-1} p_{k-1}."""
    _require(params, SHIFT_B)
    a, b, c, q = params.a, params.b, params.c, params.q
    ak = (-math.sqrt(a) * q ** (-k - 0.5) * (1 - b * q ** (k + 2))
          * math.sqrt((1 - b * q ** (k + 1)) * (1 - q ** (k + 1))))
    bk = q ** (-k) * (1 - b * q ** (k + 1)) * (a * (1 - c * q ** (k + 1)) + (1 - b * q ** (k + 1) / c))
    return ak, bk


def direct_eigenfunction_q2(params: QOperatorParams, lam: float, K: int) -> GridFunction:
    """y(q^k) = p_k / sqrt(w_k(a, b; q)) with p_k from the direct recurrence, p_0 = 1."""
    _require(params, SHIFT_B)
    s = 1 - params.b * params.q
    p = np.empty(K)
    p[0] = 1.0
    prev_a = 0.0
    for k in range(K - 1):
        ak, bk = direct_recurrence_q2(params, k)
        back = prev_a * p[k - 1] if k > 0 else 0.0
        p[k + 1] = (s * lam * p[k] - bk * p[k] - back) / ak
        prev_a = ak
    w = LittleQJacobi(params.a, params.b, params.q).masses(K)
    return GridFunction(p / np.sqrt(w), params.q)
