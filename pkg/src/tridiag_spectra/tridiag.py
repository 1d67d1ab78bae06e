"""Tridiagonalisation framework for a pair of orthogonal polynomial families.

Given polynomials P_n orthogonal for mu and p_n orthogonal for nu with
dmu = r dnu, r of degree one, and an operator L with L P_n = Lambda_n P_n,
the operator T = r (L + gamma) acts tridiagonally on phi_n = p_n / sqrt(h_n).
Everything here is expressed through leading coefficients and norms, so the
same code serves every family pair.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .families import CoeffPolynomial, Jacobi, LittleQJacobi
from .operators import SHIFT_A, SHIFT_B, JacobiOperatorParams, QOperatorParams

__all__ = [
    "FamilyPair",
    "TridiagCoefficients",
    "BirthDeathRates",
    "SignAssumptionError",
    "jacobi_pair",
    "q1_pair",
    "q2_pair",
    "pair_for",
    "connection_coeffs",
    "jacobi_matrix_coeffs",
    "closed_form_coeffs",
    "closed_form_sequences",
    "m_recurrence_coeffs",
    "tridiag_coefficients",
    "birth_death_rates",
    "spectral_polynomials",
    "minimal_solution",
    "formal_eigenvector",
    "poisson_kernel",
]


class SignAssumptionError(ValueError):
    """The signs of Lambda_n^gamma or a_n^gamma are not constant in n."""


@dataclass(frozen=True)
class FamilyPair:
    """P_n (``big``, measure mu) and p_n (``small``, measure nu) with dmu = r dnu.

    ``Lambda(n)`` is the eigenvalue of L on P_n, with Lambda(-1) = 0.
    """

    big: object
    small: object
    r: CoeffPolynomial
    Lambda: Callable[[int], float]
    label: str = ""

    def __post_init__(self):
        if self.r.degree != 1:
            raise ValueError("r must have degree one")

    def phi(self, n: int, x):
        return self.small.eval(n, x) / math.sqrt(self.small.norm(n))

    def Phi(self, n: int, x):
        return self.big.eval(n, x) / math.sqrt(self.big.norm(n))

    def Lambda_gamma(self, n: int, gamma: float) -> float:
        return 0.0 if n < 0 else self.Lambda(n) + gamma

    def density_mismatch(self, points) -> float:
        """Max relative deviation of dmu from r dnu at support points."""
        pts = np.asarray(points, dtype=float)
        lhs = self.big.weight(pts)
        rhs = self.r(pts) * self.small.weight(pts)
        return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)))


def jacobi_pair(alpha: float, beta: float) -> FamilyPair:
    """P = P^(alpha+1, beta), p = P^(alpha, beta), r = 1 - x."""
    s = alpha + beta + 2

    def Lambda(n):
        return 0.0 if n < 0 else -n * (n + s)

    return FamilyPair(Jacobi(alpha + 1, beta), Jacobi(alpha, beta), CoeffPolynomial((1.0, -1.0)), Lambda, "jacobi")


def _littleq_Lambda(a, b, q):
    def Lambda(n):
        if n < 0:
            return 0.0
        return q ** (-n) * (1 - q ** n) * (1 - a * b * q ** (n + 2))

    return Lambda


def q1_pair(a: float, b: float, q: float) -> FamilyPair:
    """P = p(.; aq, b), p = p(.; a, b), r = x."""
    return FamilyPair(LittleQJacobi(a * q, b, q), LittleQJacobi(a, b, q), CoeffPolynomial((0.0, 1.0)),
                      _littleq_Lambda(a, b, q), "q1")


def q2_pair(a: float, b: float, q: float) -> FamilyPair:
    """P = p(.; a, bq), p = p(.; a, b), r = (1 - bqx)/(1 - bq)."""
    if b == 0:
        raise ValueError("the b-shift pair degenerates for b = 0 (B_n vanishes)")
    s = 1 - b * q
    return FamilyPair(LittleQJacobi(a, b * q, q), LittleQJacobi(a, b, q), CoeffPolynomial((1 / s, -b * q / s)),
                      _littleq_Lambda(a, b, q), "q2")


def pair_for(params) -> FamilyPair:
    if isinstance(params, JacobiOperatorParams):
        return jacobi_pair(params.alpha, params.beta)
    if params.case == SHIFT_A:
        return q1_pair(params.a, params.b, params.q)
    return q2_pair(params.a, params.b, params.q)


# ---------------------------------------------------------------------------
# generic coefficients


@functools.lru_cache(maxsize=4096)
def _log_lc(fam, n):
    return fam.log_lc(n)


@functools.lru_cache(maxsize=4096)
def _log_norm(fam, n):
    return fam.log_norm(n)


@functools.lru_cache(maxsize=8192)
def connection_coeffs(pair: FamilyPair, n: int):
    """(A_n, B_n) with phi_n = A_n Phi_n + B_n Phi_{n-1}; B_0 = 0."""
    if n < 0:
        return 0.0, 0.0
    sp, lp = _log_lc(pair.small, n)
    sP, lP = _log_lc(pair.big, n)
    A = sp * sP * math.exp(lp - lP + 0.5 * (_log_norm(pair.big, n) - _log_norm(pair.small, n)))
    if n == 0:
        return A, 0.0
    sP1, lP1 = _log_lc(pair.big, n - 1)
    lcr = pair.r.leading
    B = (math.copysign(1.0, lcr) * sP1 * sp
         * math.exp(math.log(abs(lcr)) + 0.5 * (_log_norm(pair.small, n) - _log_norm(pair.big, n - 1)) + lP1 - lp))
    return A, B


def jacobi_matrix_coeffs(pair: FamilyPair, gamma: float, n: int):
    """(a_n, b_n) of T^gamma in the basis phi_n.

    a_n = Lambda_n^gamma lc(r) lc(p_n)/lc(p_{n+1}) sqrt(h_{n+1}/h_n),
    b_n = Lambda_n^gamma A_n^2 + Lambda_{n-1}^gamma B_n^2.
    """
    if n < 0:
        return 0.0, 0.0
    s0, l0 = _log_lc(pair.small, n)
    s1, l1 = _log_lc(pair.small, n + 1)
    lcr = pair.r.leading
    ratio = s0 * s1 * math.copysign(1.0, lcr) * math.exp(
        math.log(abs(lcr)) + l0 - l1 + 0.5 * (_log_norm(pair.small, n + 1) - _log_norm(pair.small, n)))
    a = pair.Lambda_gamma(n, gamma) * ratio
    A, B = connection_coeffs(pair, n)
    b = pair.Lambda_gamma(n, gamma) * A * A + pair.Lambda_gamma(n - 1, gamma) * B * B
    return a, b


def m_recurrence_coeffs(pair: FamilyPair, n: int):
    """(up, mid, down) with r phi_n = up phi_{n+1} + mid phi_n + down phi_{n-1}."""
    A, B = connection_coeffs(pair, n)
    _, B1 = connection_coeffs(pair, n + 1)
    Am, _ = connection_coeffs(pair, n - 1)
    return A * B1, A * A + B * B, Am * B


# ---------------------------------------------------------------------------
# closed forms


def _jacobi_closed(p: JacobiOperatorParams, n: int, printed: bool):
    al, be, g = p.alpha, p.beta, p.gamma
    s = al + be
    lam = n * (n + s + 2) - g  # (n+alpha+delta+1)(n+beta-delta+1)
    a = 2 * lam / (2 * n + s + 2) * math.sqrt(
        (n + 1) * (n + al + 1) * (n + be + 1) * (n + s + 1) / ((2 * n + s + 1) * (2 * n + s + 3)))
    b = -2 * lam * (n + al + 1) * (n + s + 1) / ((2 * n + s + 1) * (2 * n + s + 2))
    if n > 0:
        if printed:
            if p.delta is None:
                raise ValueError("the display as printed needs delta")
            d = p.delta
            lam_prev = (n + al + d + 1) * (n + be - d)
        else:
            lam_prev = (n - 1) * (n + s + 1) - g  # (n+alpha+delta)(n+beta-delta)
        b -= 2 * n * (n + be) * lam_prev / ((2 * n + s) * (2 * n + s + 1))
    return a, b


def _q_factors(p: QOperatorParams, n: int):
    a, b, c, q = p.a, p.b, p.c, p.q
    lam = (1 - a * c * q ** (n + 1)) * (1 - b * q ** (n + 1) / c)
    root = math.sqrt((1 - q ** (n + 1)) * (1 - a * q ** (n + 1)) * (1 - b * q ** (n + 1)) * (1 - a * b * q ** (n + 1))
                     / ((1 - a * b * q ** (2 * n + 1)) * (1 - a * b * q ** (2 * n + 3))))
    return lam, root / (1 - a * b * q ** (2 * n + 2))


def _q1_closed(p: QOperatorParams, n: int):
    a, b, c, q = p.a, p.b, p.c, p.q
    lam, root = _q_factors(p, n)
    an = -math.sqrt(a * q) * lam * root
    bn = (lam * (1 - a * q ** (n + 1)) * (1 - a * b * q ** (n + 1))
          / ((1 - a * b * q ** (2 * n + 1)) * (1 - a * b * q ** (2 * n + 2))))
    if n > 0:
        bn += (a * q * (1 - q ** n) * (1 - a * c * q ** n) * (1 - b * q ** n) * (1 - b * q ** n / c)
               / ((1 - a * b * q ** (2 * n)) * (1 - a * b * q ** (2 * n + 1))))
    return an, bn


def _q2_closed(p: QOperatorParams, n: int, printed: bool):
    a, b, c, q = p.a, p.b, p.c, p.q
    lam, root = _q_factors(p, n)
    s = 1 - b * q
    an = b * q * math.sqrt(a * q) / s * lam * root
    # the display repeats (1 - abq^(2n+1)); the generic path gives (1 - abq^(2n+2))
    last = 2 * n + 1 if printed else 2 * n + 2
    den = (1 - a * b * q ** (2 * n + 1)) * (1 - a * b * q ** last)
    bn = q ** (-n) * lam * (1 - a * b * q ** (n + 1)) * (1 - b * q ** (n + 1)) / (s * den)
    if n > 0:
        # the display uses Lambda_n factors here; Lambda_{n-1} factors are what the generic path gives
        lam_prev = lam if printed else (1 - a * c * q ** n) * (1 - b * q ** n / c)
        bn += (a * b * b * q ** (n + 2) * lam_prev * (1 - q ** n) * (1 - a * q ** n)
               / (s * (1 - a * b * q ** (2 * n)) * (1 - a * b * q ** (2 * n + 1))))
    return an, bn


def closed_form_coeffs(params, n: int, printed: bool = False):
    """Closed-form (a_n^gamma, b_n^gamma) for the Jacobi, a-shift or b-shift operator.

    ``printed=True`` reproduces the displayed formulas literally, including
    factors that disagree with the generic computation.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(params, JacobiOperatorParams):
        return _jacobi_closed(params, n, printed)
    if params.case == SHIFT_A:
        return _q1_closed(params, n)
    if params.case == SHIFT_B:
        return _q2_closed(params, n, printed)
    raise ValueError(f"unknown case {params.case!r}")


# ---------------------------------------------------------------------------
# coefficient sequences


@dataclass(frozen=True)
class TridiagCoefficients:
    """Sequences for n = 0..N-1 (``A``, ``B`` carry one extra entry, index N)."""

    A: np.ndarray
    B: np.ndarray
    a: np.ndarray
    b: np.ndarray
    gamma: float
    pair: FamilyPair | None = None

    def __post_init__(self):
        for name in ("A", "B", "a", "b"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.B[0] != 0.0:
            raise ValueError("B_0 must vanish")

    @property
    def N(self) -> int:
        return len(self.a)


@functools.lru_cache(maxsize=64)
def tridiag_coefficients(pair: FamilyPair, gamma: float, N: int) -> TridiagCoefficients:
    """Generic-path sequences, computed once per (pair, gamma, N) and frozen."""
    AB = [connection_coeffs(pair, n) for n in range(N + 1)]
    ab = [jacobi_matrix_coeffs(pair, gamma, n) for n in range(N)]
    return TridiagCoefficients([x[0] for x in AB], [x[1] for x in AB], [x[0] for x in ab], [x[1] for x in ab],
                               gamma, pair)


def closed_form_sequences(params, N: int, printed: bool = False):
    """Arrays (a, b) of the closed forms for n < N."""
    vals = [closed_form_coeffs(params, n, printed) for n in range(N)]
    return np.array([v[0] for v in vals]), np.array([v[1] for v in vals])


# ---------------------------------------------------------------------------
# birth-death rates


@dataclass(frozen=True)
class BirthDeathRates:
    lam: np.ndarray
    mu: np.ndarray
    eps: int
    eta: int


def birth_death_rates(pair: FamilyPair, gamma: float, N: int) -> BirthDeathRates:
    """Rates lambda_n = |Lambda_n^gamma| A_n^2 and mu_n = |Lambda_{n-1}^gamma| B_n^2, n < N.

    Requires the signs of a_n^gamma and Lambda_n^gamma to be constant for n < N.
    """
    lams = np.array([pair.Lambda_gamma(n, gamma) for n in range(N)])
    coeffs = tridiag_coefficients(pair, gamma, N)
    eta = np.sign(lams)
    eps = np.sign(coeffs.a)
    if np.any(eta == 0) or np.any(eta != eta[0]):
        raise SignAssumptionError("sign of Lambda_n^gamma varies with n")
    if np.any(eps == 0) or np.any(eps != eps[0]):
        raise SignAssumptionError("sign of a_n^gamma varies with n")
    lam_prev = np.concatenate(([0.0], lams[:-1]))
    birth = np.abs(lams) * coeffs.A[:N] ** 2
    death = np.abs(lam_prev) * coeffs.B[:N] ** 2
    return BirthDeathRates(birth, death, int(eps[0]), int(eta[0]))


# ---------------------------------------------------------------------------
# spectral polynomials and formal eigenvectors


def spectral_polynomials(a, b, lam: float, N: int) -> np.ndarray:
    """r_0..r_{N-1} from lam r_n = a_n r_{n+1} + b_n r_n + a_{n-1} r_{n-1}, r_0 = 1."""
    r = np.empty(N)
    r[0] = 1.0
    prev = 0.0
    for n in range(N - 1):
        back = a[n - 1] * prev if n > 0 else 0.0
        r[n + 1] = ((lam - b[n]) * r[n] - back) / a[n]
        prev = r[n]
    return r


def minimal_solution(a, b, lam: float, N: int, start: int | None = None) -> np.ndarray:
    """Minimal solution of the same recurrence by backward (Miller) recursion, scaled to r_0 = 1.

    ``a``, ``b`` must be defined up to index ``start`` (default len(a) - 1).
    """
    M = len(a) - 1 if start is None else start
    if M < N:
        raise ValueError("backward recursion must start beyond N")
    nxt, cur = 0.0, 1e-300
    vals = np.empty(M + 1)
    vals[M] = cur
    for n in range(M, 0, -1):
        prev = ((lam - b[n]) * cur - a[n] * nxt) / a[n - 1]
        nxt, cur = cur, prev
        vals[n - 1] = cur
        if abs(cur) > 1e200:
            vals[n - 1:] /= cur
            nxt, cur = nxt / cur, 1.0
    return vals[:N] / vals[0]


def _basis(coeffs: TridiagCoefficients, basis):
    if basis is not None:
        return basis
    if coeffs.pair is None:
        raise ValueError("coefficients carry no family pair; pass basis=")
    return coeffs.pair.phi


def formal_eigenvector(coeffs: TridiagCoefficients, r_values, x: float, N: int, basis=None):
    """Partial sum sum_{n<N} r_n phi_n(x) and the size of the last coefficient.

    The diagnostic |r_{N-1}| is the L2(nu) norm of the last term; the sum
    converges in L2(nu) only if these decay.
    """
    phi = _basis(coeffs, basis)
    r = np.asarray(r_values, dtype=float)
    if len(r) < N:
        raise ValueError("need r_n for n < N")
    total = sum(r[n] * phi(n, x) for n in range(N))
    return float(total), float(abs(r[N - 1]))


def poisson_kernel(coeffs: TridiagCoefficients, r_values, x: float, t: float, N: int, basis=None):
    """Partial sum of sum_n t^n r_n phi_n(x) and a geometric tail estimate."""
    if not abs(t) < 1:
        raise ValueError("need |t| < 1")
    phi = _basis(coeffs, basis)
    r = np.asarray(r_values, dtype=float)
    terms = np.array([t ** n * r[n] * phi(n, x) for n in range(N)])
    scale = max(np.max(np.abs(np.asarray(r[:N]) * np.array([phi(n, x) for n in range(N)]))), 0.0)
    tail = scale * abs(t) ** N / (1 - abs(t))
    return float(np.sum(terms)), float(tail)
