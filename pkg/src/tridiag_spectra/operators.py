"""The differential and q-difference operators being tridiagonalised.

Polynomials are acted on exactly in coefficient space; lattice functions are
acted on pointwise by the three-point stencil. At the lattice point x = 1 the
backward-neighbour coefficient is (x - 1) = 0, so no value at 1/q is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .families import CoeffPolynomial

__all__ = [
    "GridFunction",
    "JacobiOperatorParams",
    "QOperatorParams",
    "SHIFT_A",
    "SHIFT_B",
    "apply_T_jacobi",
    "apply_L_jacobi",
    "apply_T_q1",
    "apply_T_q2",
    "eigen_residual",
    "apply_L_littleq",
    "multiply_r",
    "eigenvalue_Lambda",
]

SHIFT_A = "shift_a"
SHIFT_B = "shift_b"


@dataclass(frozen=True)
class GridFunction:
    """Values f(q^k) for k = 0..K-1."""

    values: np.ndarray
    q: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) < 3:
            raise ValueError("grid function needs at least 3 lattice values")
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        object.__setattr__(self, "values", vals)

    @property
    def K(self) -> int:
        return len(self.values)

    @property
    def points(self) -> np.ndarray:
        return self.q ** np.arange(self.K, dtype=float)

    @classmethod
    def sample(cls, fn: Callable, q: float, K: int) -> "GridFunction":
        return cls(np.asarray(fn(q ** np.arange(K, dtype=float)), dtype=float), q)


@dataclass(frozen=True)
class JacobiOperatorParams:
    """T^gamma = (1-x)(L + gamma) with L the Jacobi operator for (alpha+1, beta).

    Give either ``delta`` (then gamma = -(alpha+delta+1)(beta-delta+1)) or
    ``gamma`` directly.
    """

    alpha: float
    beta: float
    delta: float | None = None
    gamma_value: float | None = None

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError("alpha and beta must exceed -1")
        if (self.delta is None) == (self.gamma_value is None):
            raise ValueError("give exactly one of delta and gamma")

    @property
    def gamma(self) -> float:
        if self.delta is not None:
            return -(self.alpha + self.delta + 1) * (self.beta - self.delta + 1)
        return self.gamma_value

    def Lambda(self, n: int) -> float:
        if n < 0:
            return 0.0
        return -n * (n + self.alpha + self.beta + 2)

    def Lambda_gamma(self, n: int) -> float:
        if n < 0:
            return 0.0
        return self.Lambda(n) + self.gamma


@dataclass(frozen=True)
class QOperatorParams:
    """Little q-Jacobi difference operator data for the a-shift or b-shift case."""

    a: float
    b: float
    c: float
    q: float
    case: str = SHIFT_A

    def __post_init__(self):
        a, b, c, q = self.a, self.b, self.c, self.q
        if not 0 < q < 1:
            raise ValueError(f"q must lie in (0, 1), got {q}")
        if not (0 < a < 1 / q and b < 1 / q):
            raise ValueError(f"need 0 < a < 1/q and b < 1/q, got a={a}, b={b}")
        if c == 0:
            raise ValueError("c must be nonzero")
        if self.case not in (SHIFT_A, SHIFT_B):
            raise ValueError(f"unknown case {self.case!r}")

    @property
    def gamma(self) -> float:
        a, b, c, q = self.a, self.b, self.c, self.q
        return (1 + a * b * q * q) - (a * c * q + b * q / c)

    def Lambda(self, n: int) -> float:
        """Eigenvalue of the shifted-family operator; identical formula in both cases."""
        if n < 0:
            return 0.0
        a, b, q = self.a, self.b, self.q
        return q ** (-n) * (1 - q ** n) * (1 - a * b * q ** (n + 2))

    def Lambda_gamma(self, n: int) -> float:
        if n < 0:
            return 0.0
        a, b, c, q = self.a, self.b, self.c, self.q
        return q ** (-n) * (1 - a * c * q ** (n + 1)) * (1 - b * q ** (n + 1) / c)

    def lambda_positive(self) -> bool:
        """Whether Lambda_n^gamma > 0 for every n >= 0.

        Past the index where both q-dependent factors lie within 1/2 of 1
        they stay positive, so a finite scan decides the question.
        """
        a, b, c, q = self.a, self.b, self.c, self.q
        n = 0
        while True:
            u, v = a * c * q ** (n + 1), b * q ** (n + 1) / c
            if (1 - u) * (1 - v) <= 0:
                return False
            if abs(u) < 0.5 and abs(v) < 0.5:
                return True
            n += 1


def eigenvalue_Lambda(params, n: int, shifted: bool = False) -> float:
    """Lambda_n (or Lambda_n + gamma); Lambda_{-1} = 0 by convention."""
    return params.Lambda_gamma(n) if shifted else params.Lambda(n)


# ---------------------------------------------------------------------------
# Jacobi case


_X = CoeffPolynomial((0.0, 1.0))


def apply_L_jacobi(p: CoeffPolynomial, alpha: float, beta: float) -> CoeffPolynomial:
    """Hypergeometric operator with eigenfunctions P_n^(alpha, beta)."""
    drift = CoeffPolynomial((beta - alpha, -(alpha + beta + 2)))
    return (1 - _X * _X) * p.deriv(2) + drift * p.deriv(1)


def apply_T_jacobi(p: CoeffPolynomial, params: JacobiOperatorParams) -> CoeffPolynomial:
    """(1-x)(1-x^2) p'' + (1-x)(beta-alpha-1-(alpha+beta+3)x) p' + gamma (1-x) p."""
    inner = apply_L_jacobi(p, params.alpha + 1, params.beta) + params.gamma * p
    return (1 - _X) * inner


# ---------------------------------------------------------------------------
# q-lattice cases


def _stencil(f: GridFunction, fwd, back, diag) -> GridFunction:
    v = f.values
    x = f.points[:-1]
    up = v[1:] - v[:-1]
    down = np.zeros_like(x)
    down[1:] = v[:-2] - v[1:-1]
    out = fwd(x) * up + back(x) * down + diag(x) * v[:-1]
    return GridFunction(out, f.q)


def apply_L_littleq(f: GridFunction, a: float, b: float) -> GridFunction:
    """(B(x)/x)(f(qx) - f(x)) + (D(x)/x)(f(x/q) - f(x)), B = a(bqx - 1), D = x - 1.

    Returns values at q^0..q^(K-2); the last point lacks a forward neighbour.
    """
    q = f.q
    return _stencil(f, lambda x: a * (b * q * x - 1) / x, lambda x: (x - 1) / x, lambda x: 0.0 * x)


def _q_stencil_coeffs(params: QOperatorParams):
    """(forward, backward, diagonal) coefficient functions of T^gamma on the lattice."""
    a, b, q, g = params.a, params.b, params.q, params.gamma
    if params.case == SHIFT_A:
        return (lambda x: a * q * (b * q * x - 1), lambda x: x - 1, lambda x: g * x)
    if b * q == 1:
        raise ValueError("b = 1/q is excluded")
    s = 1 - b * q

    def r(x):
        return (1 - b * q * x) / s

    return (
        lambda x: a * (b * q * q * x - 1) * r(x) / x,
        lambda x: (x - 1) * r(x) / x,
        lambda x: g * r(x),
    )


def _apply_q(f: GridFunction, params: QOperatorParams, case: str) -> GridFunction:
    if params.case != case:
        raise ValueError(f"expected the {case} operator, got {params.case}")
    if f.q != params.q:
        raise ValueError("grid and operator use different q")
    return _stencil(f, *_q_stencil_coeffs(params))


def apply_T_q1(f: GridFunction, params: QOperatorParams) -> GridFunction:
    """aq(bqx - 1)(f(qx) - f(x)) + (x - 1)(f(x/q) - f(x)) + gamma x f(x).

    Output has K-1 values (k = 0..K-2).
    """
    return _apply_q(f, params, SHIFT_A)


def apply_T_q2(f: GridFunction, params: QOperatorParams) -> GridFunction:
    """The b-shift operator r (L_{a,bq} + gamma); unbounded on the weighted lattice space.

    Output has K-1 values (k = 0..K-2).
    """
    return _apply_q(f, params, SHIFT_B)


def eigen_residual(f: GridFunction, params: QOperatorParams, lam: float) -> np.ndarray:
    """Pointwise |T f - lam f| relative to the sum of the magnitudes of its terms.

    The lattice eigenfunctions grow like q^(-k/2) or faster, so an absolute
    residual only measures that growth; this ratio is at rounding level for a
    true eigenfunction. Returns K-1 values.
    """
    if f.q != params.q:
        raise ValueError("grid and operator use different q")
    fwd, back, diag = _q_stencil_coeffs(params)
    Tf = _stencil(f, fwd, back, diag).values
    v = np.abs(f.values)
    x = f.points[:-1]
    down = np.zeros_like(x)
    down[1:] = v[:-2] + v[1:-1]
    scale = (np.abs(fwd(x)) * (v[1:] + v[:-1]) + np.abs(back(x)) * down
             + (np.abs(diag(x)) + abs(lam)) * v[:-1])
    res = np.abs(Tf - lam * f.values[:-1])
    return np.divide(res, scale, out=np.zeros_like(res), where=scale > 0)


def multiply_r(f, params):
    """Multiplication by the degree-one density ratio r of the operator's case.

    Works on :class:`CoeffPolynomial` (Jacobi, r = 1 - x) and
    :class:`GridFunction` (r = x for the a-shift, (1 - bqx)/(1 - bq) for the b-shift).
    """
    if isinstance(params, JacobiOperatorParams):
        return (1 - _X) * f
    x = f.points
    if params.case == SHIFT_A:
        r = x
    else:
        r = (1 - params.b * params.q * x) / (1 - params.b * params.q)
    return GridFunction(r * f.values, f.q)


def lattice_index(x: float, q: float) -> int:
    k = round(math.log(x) / math.log(q))
    if abs(q ** k - x) > 1e-12 * x:
        raise ValueError(f"{x} is not a lattice point")
    return k
