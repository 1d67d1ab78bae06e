"""Orthogonal polynomial families, their measures and inner products.

Each family is an immutable dataclass exposing

* ``eval(n, x)``        -- the polynomial in its standard normalisation,
* ``norm(n)``           -- squared norm under the family's measure,
* ``lc(n)``             -- leading coefficient,
* ``weight(x)``         -- weight density or point mass,
* ``recurrence(n)``     -- (offdiag, diag) of the orthonormal recurrence
  x r_n = offdiag_n r_{n+1} + diag_n r_n + offdiag_{n-1} r_{n-1},
  normalised so that every r_n has positive leading coefficient,
* ``measure()``         -- a :class:`ContinuousInterval` or
  :class:`DiscreteQLattice` usable with :func:`inner_product`.

The Wilson family is parametrised in the variable ``y = x**2``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import eigh_tridiagonal
from scipy.special import loggamma

from .specialfn import (
    SeriesParams,
    basic_hypergeometric_terminating,
    hypergeometric_terminating,
    log_gamma_ratio,
    pochhammer,
    q_pochhammer,
    q_pochhammer_pair,
    real_part,
)

__all__ = [
    "CoeffPolynomial",
    "Jacobi",
    "LittleQJacobi",
    "Wilson",
    "AskeyWilson",
    "AlSalamChihara",
    "ContinuousInterval",
    "DiscreteQLattice",
    "QuadratureError",
    "IndeterminateNormalisation",
    "family_eval",
    "family_norm",
    "family_lc",
    "family_weight",
    "family_recurrence",
    "orthonormal_values",
    "gauss_jacobi",
    "inner_product",
]

LATTICE_SIZE = 300
LATTICE_TAIL = 1e-15


class QuadratureError(ValueError):
    """Requested quadrature cannot integrate the given degrees exactly."""


class IndeterminateNormalisation(ValueError):
    """A squared off-diagonal recurrence coefficient is not positive."""


# ---------------------------------------------------------------------------
# polynomials in coefficient form


@dataclass(frozen=True)
class CoeffPolynomial:
    """Polynomial stored by exact rational monomial coefficients, index = degree.

    Floats convert to Fraction without rounding, so arithmetic and operator
    actions are exact; evaluation rounds once per point.
    """

    terms: tuple = ()

    def __post_init__(self):
        c = [Fraction(v) for v in self.terms]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "terms", tuple(c))

    @classmethod
    def constant(cls, value):
        return cls((value,))

    @property
    def coefficients(self) -> tuple:
        """Coefficients rounded to float."""
        return tuple(float(c) for c in self.terms)

    @property
    def degree(self) -> int:
        return len(self.terms) - 1

    @property
    def leading(self) -> float:
        return float(self.terms[-1]) if self.terms else 0.0

    def _horner(self, x: float) -> float:
        xe = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.terms):
            acc = acc * xe + c
        return float(acc)

    def __call__(self, x, exact: bool = True):
        x = np.asarray(x, dtype=float)
        if not self.terms:
            return np.zeros_like(x)[()]
        if not exact:
            return npoly.polyval(x, self.coefficients)
        out = np.empty(x.shape)
        for idx, v in np.ndenumerate(x):
            out[idx] = self._horner(float(v))
        return out[()] if out.ndim == 0 else out

    def deriv(self, m: int = 1) -> "CoeffPolynomial":
        c = list(self.terms)
        for _ in range(m):
            c = [k * v for k, v in enumerate(c)][1:]
        return CoeffPolynomial(tuple(c))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.terms), len(other.terms))
        a = self.terms + (Fraction(0),) * (n - len(self.terms))
        b = other.terms + (Fraction(0),) * (n - len(other.terms))
        return CoeffPolynomial(tuple(u + v for u, v in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CoeffPolynomial(tuple(-c for c in self.terms))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.terms or not other.terms:
            return CoeffPolynomial()
        return CoeffPolynomial(tuple(_frac_polymul(self.terms, other.terms)))

    __rmul__ = __mul__


def _as_poly(p) -> CoeffPolynomial:
    if isinstance(p, CoeffPolynomial):
        return p
    return CoeffPolynomial((p,))


def _poly_from_fractions(coeffs) -> CoeffPolynomial:
    return CoeffPolynomial(tuple(coeffs))


def _frac_polymul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class ContinuousInterval:
    """Absolutely continuous measure on [lo, hi].

    The density is ``(1-t)^alpha (1+t)^beta * factor(x)`` where ``t`` maps
    [lo, hi] affinely onto [-1, 1] and ``(alpha, beta) = exponents``. When
    ``factor`` is ``None`` the measure is a pure Jacobi weight and Gauss
    quadrature is exact for polynomials; otherwise ``nodes`` fixes the rule.
    """

    lo: float
    hi: float
    exponents: tuple = (0.0, 0.0)
    factor: Callable | None = None
    nodes: int | None = None


@dataclass(frozen=True)
class DiscreteQLattice:
    """Point masses ``masses[k]`` at ``q**k``, truncated at ``len(masses)``."""

    q: float
    masses: np.ndarray
    tail_bound: float = 0.0

    @property
    def K(self) -> int:
        return len(self.masses)

    @property
    def points(self) -> np.ndarray:
        return self.q ** np.arange(self.K, dtype=float)


Measure = Union[ContinuousInterval, DiscreteQLattice]


# ---------------------------------------------------------------------------
# families


def _check_n(n):
    if n < 0 or int(n) != n:
        raise ValueError(f"degree must be a nonnegative integer, got {n}")


@dataclass(frozen=True)
class Jacobi:
    """Jacobi polynomials P_n^(alpha, beta) on [-1, 1]."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(f"Jacobi parameters must exceed -1, got ({self.alpha}, {self.beta})")

    def eval(self, n, x):
        _check_n(n)
        a, b = self.alpha, self.beta
        x = np.asarray(x, dtype=float)
        z = (1 - x) / 2
        series = hypergeometric_terminating(SeriesParams((-n, n + a + b + 1), (a + 1,), None, z), n)
        return pochhammer(a + 1, n) / math.factorial(n) * series

    def norm(self, n) -> float:
        _check_n(n)
        a, b = self.alpha, self.beta
        if n == 0:
            return 2 ** (a + b + 1) * log_gamma_ratio([a + 1, b + 1], [a + b + 2])
        return (2 ** (a + b + 1) / (2 * n + a + b + 1)
                * log_gamma_ratio([n + a + 1, n + b + 1], [n + a + b + 1, n + 1]))

    def lc(self, n) -> float:
        _check_n(n)
        return pochhammer(n + self.alpha + self.beta + 1, n) / (2 ** n * math.factorial(n))

    def log_lc(self, n):
        _check_n(n)
        s = self.alpha + self.beta + 1
        val = sum(math.log(n + s + j) for j in range(n)) - n * math.log(2) - math.lgamma(n + 1)
        return 1.0, val

    def log_norm(self, n) -> float:
        return math.log(self.norm(n))

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        if np.any((x <= -1) | (x >= 1)):
            raise ValueError("Jacobi weight is supported on (-1, 1)")
        out = (1 - x) ** self.alpha * (1 + x) ** self.beta
        return out[()] if out.ndim == 0 else out

    def recurrence(self, n):
        _check_n(n)
        a, b = self.alpha, self.beta
        s = a + b
        if n == 0:
            diag = (b - a) / (s + 2)
            off2 = 4 * (a + 1) * (b + 1) / ((s + 2) ** 2 * (s + 3))
        else:
            diag = (b * b - a * a) / ((2 * n + s) * (2 * n + s + 2))
            off2 = (4 * (n + 1) * (n + a + 1) * (n + b + 1) * (n + s + 1)
                    / ((2 * n + s + 1) * (2 * n + s + 2) ** 2 * (2 * n + s + 3)))
        return _offdiag(off2, n), diag

    def coefficients(self, n) -> CoeffPolynomial:
        """Monomial coefficients of P_n, built in exact rational arithmetic."""
        _check_n(n)
        a, b = Fraction(self.alpha), Fraction(self.beta)
        # P_n = (a+1)_n/n! sum_k (-n)_k (n+a+b+1)_k / ((a+1)_k k!) ((1-x)/2)^k
        total = [Fraction(0)] * (n + 1)
        coef = Fraction(1)
        power = [Fraction(1)]
        for k in range(n + 1):
            for i, c in enumerate(power):
                total[i] += coef * c
            coef = coef * (-n + k) * (n + a + b + 1 + k) / ((a + 1 + k) * (k + 1))
            power = _frac_polymul(power, [Fraction(1, 2), Fraction(-1, 2)])
        pre = Fraction(1)
        for j in range(n):
            pre *= (a + 1 + j) / (j + 1)
        return _poly_from_fractions([pre * c for c in total])

    def measure(self) -> ContinuousInterval:
        return ContinuousInterval(-1.0, 1.0, (self.alpha, self.beta))


@dataclass(frozen=True)
class LittleQJacobi:
    """Little q-Jacobi polynomials p_n(x; a, b; q) on the lattice q^k."""

    a: float
    b: float
    q: float

    def __post_init__(self):
        a, b, q = self.a, self.b, self.q
        if not 0 < q < 1:
            raise ValueError(f"q must lie in (0, 1), got {q}")
        if not (0 < a < 1 / q and b < 1 / q):
            raise ValueError(f"little q-Jacobi needs 0 < a < 1/q and b < 1/q, got a={a}, b={b}")

    def _series(self, n):
        a, b, q = self.a, self.b, self.q
        return (q ** (-n), a * b * q ** (n + 1)), (a * q,)

    def eval(self, n, x):
        """p_n(x); lattice points q^k are treated as exact powers of q."""
        _check_n(n)
        num, den = self._series(n)
        x = np.asarray(x, dtype=float)
        exact = functools.partial(self._exact_series_params, n, x)
        return basic_hypergeometric_terminating(SeriesParams(num, den, self.q, self.q * x, exact), n)

    def _exact_series_params(self, n, x, idx):
        a, b, q = Fraction(self.a), Fraction(self.b), Fraction(self.q)
        xv = float(np.broadcast_to(x, x.shape)[idx]) if x.ndim else float(x)
        xe = Fraction(xv)
        if xv > 0:
            k = round(math.log(xv) / math.log(self.q))
            if k >= 0 and math.isclose(float(q ** k), xv, rel_tol=1e-13):
                xe = q ** k
        return [q ** (-n), a * b * q ** (n + 1)], [a * q], q * xe

    def norm(self, n) -> float:
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        return (q_pochhammer(a * b * q * q, q) / q_pochhammer(a * q, q)
                * (1 - a * b * q) * (a * q) ** n / (1 - a * b * q ** (2 * n + 1))
                * q_pochhammer(q, q, n) * q_pochhammer(q * b, q, n)
                / (q_pochhammer(q * a, q, n) * q_pochhammer(q * a * b, q, n)))

    def log_norm(self, n) -> float:
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        val = (math.log(q_pochhammer(a * b * q * q, q)) - math.log(q_pochhammer(a * q, q))
               + math.log(1 - a * b * q) + n * math.log(a * q) - math.log(1 - a * b * q ** (2 * n + 1)))
        qj = q ** np.arange(1, n + 1, dtype=float)
        return val + float(np.sum(np.log1p(-qj) + np.log1p(-b * qj) - np.log1p(-a * qj) - np.log1p(-a * b * qj)))

    def lc(self, n) -> float:
        _check_n(n)
        sign, val = self.log_lc(n)
        return sign * math.exp(val)

    def log_lc(self, n):
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        j = np.arange(n, dtype=float)
        f = 1 - a * b * q ** (n + 1 + j)
        sign = (-1.0) ** n * (-1.0) ** int(np.count_nonzero(f < 0))
        val = -0.5 * n * (n - 1) * math.log(q) + float(np.sum(np.log(np.abs(f)) - np.log1p(-a * q ** (j + 1))))
        return sign, val

    def mass(self, k):
        """Point mass w_k at q^k."""
        a, b, q = self.a, self.b, self.q
        k = np.asarray(k)
        out = np.empty(k.shape, dtype=float)
        for idx, kk in np.ndenumerate(k):
            out[idx] = q_pochhammer(q * b, q, int(kk)) / q_pochhammer(q, q, int(kk)) * (a * q) ** int(kk)
        return out[()] if out.ndim == 0 else out

    def masses(self, K: int) -> np.ndarray:
        a, b, q = self.a, self.b, self.q
        k = np.arange(K)
        ratio = np.concatenate(([1.0], (1 - b * q ** (k[1:])) / (1 - q ** (k[1:])) * a * q))
        return np.cumprod(ratio)

    def weight(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise ValueError("point is not on the q-lattice")
        k = np.rint(np.log(x) / math.log(self.q))
        if np.any(k < 0) or np.any(np.abs(self.q ** k - x) > 1e-12 * x):
            raise ValueError("point is not on the q-lattice")
        return self.mass(k.astype(int))

    def tail_bound(self, K: int) -> float:
        """Bound on the mass beyond index K."""
        a, b, q = self.a, self.b, self.q
        sup = q_pochhammer(-abs(b) * q, q) / q_pochhammer(q, q)
        return (a * q) ** K / (1 - a * q) * sup

    def recurrence(self, n):
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        up = self._A(n)
        down = self._C(n + 1)
        return _offdiag(up * down, n), up + self._C(n)

    def _A(self, n):
        a, b, q = self.a, self.b, self.q
        return (q ** n * (1 - a * q ** (n + 1)) * (1 - a * b * q ** (n + 1))
                / ((1 - a * b * q ** (2 * n + 1)) * (1 - a * b * q ** (2 * n + 2))))

    def _C(self, n):
        if n == 0:
            return 0.0
        a, b, q = self.a, self.b, self.q
        return (a * q ** n * (1 - q ** n) * (1 - b * q ** n)
                / ((1 - a * b * q ** (2 * n)) * (1 - a * b * q ** (2 * n + 1))))

    def coefficients(self, n) -> CoeffPolynomial:
        """Monomial coefficients of p_n."""
        _check_n(n)
        a, b, q = (Fraction(v) for v in (self.a, self.b, self.q))
        out = []
        c = Fraction(1)
        for j in range(n + 1):
            out.append(c)
            c = c * (1 - q ** (j - n)) * (1 - a * b * q ** (n + 1 + j)) / ((1 - q ** (j + 1)) * (1 - a * q ** (j + 1))) * q
        return _poly_from_fractions(out)

    def measure(self, K: int = LATTICE_SIZE) -> DiscreteQLattice:
        tail = self.tail_bound(K)
        if tail >= LATTICE_TAIL:
            raise ValueError(f"lattice truncation K={K} leaves tail mass {tail:.2e}; increase K")
        return DiscreteQLattice(self.q, self.masses(K), tail)


@dataclass(frozen=True)
class Wilson:
    """Wilson polynomials W_n(y; a, b, c, d) in the variable y = x**2."""

    a: float
    b: float
    c: float
    d: float

    @property
    def _s(self):
        return self.a + self.b + self.c + self.d

    def eval(self, n, y):
        _check_n(n)
        a, b, c, d = self.a, self.b, self.c, self.d
        y = np.asarray(y, dtype=float)
        mu = np.sqrt(y.astype(complex))
        series = hypergeometric_terminating(
            SeriesParams((-n, n + self._s - 1, a + 1j * mu, a - 1j * mu), (a + b, a + c, a + d), None, 1.0), n)
        pre = pochhammer(a + b, n) * pochhammer(a + c, n) * pochhammer(a + d, n)
        return real_part(pre * series, scale=np.maximum(np.abs(pre * series), abs(pre)))

    def lc(self, n) -> float:
        _check_n(n)
        return (-1) ** n * pochhammer(n + self._s - 1, n)

    def log_lc(self, n):
        _check_n(n)
        val = sum(math.log(abs(n + self._s - 1 + j)) for j in range(n))
        sign = (-1.0) ** n
        for j in range(n):
            sign *= math.copysign(1.0, n + self._s - 1 + j)
        return sign, val

    def norm(self, n) -> float:
        """Squared norm for the weight of :meth:`weight` (positive parameters)."""
        _check_n(n)
        return math.exp(self.log_norm(n))

    def log_norm(self, n) -> float:
        a, b, c, d, s = self.a, self.b, self.c, self.d, self._s
        if min(a + b, a + c, a + d, b + c, b + d, c + d) <= 0:
            raise ValueError("Wilson norm needs positive pairwise parameter sums")
        val = sum(math.log(n + s - 1 + j) for j in range(n)) + math.lgamma(n + 1)
        for p in (a + b, a + c, a + d, b + c, b + d, c + d):
            val += math.lgamma(n + p)
        return val - math.lgamma(2 * n + s)

    def weight(self, x):
        """Density in x = sqrt(y) on (0, inf), including the 1/(2 pi) factor."""
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0):
            raise ValueError("Wilson weight is supported on (0, inf)")
        ix = 1j * x
        logw = sum(loggamma(p + ix) for p in (self.a, self.b, self.c, self.d)) - loggamma(2 * ix)
        out = np.exp(2 * logw.real) / (2 * math.pi)
        return out[()] if out.ndim == 0 else out

    def recurrence(self, n):
        _check_n(n)
        up = self._A(n)
        return _offdiag(up * self._C(n + 1), n), up + self._C(n) - self.a ** 2

    def _A(self, n):
        a, b, c, d, s = self.a, self.b, self.c, self.d, self._s
        if n == 0:
            return (a + b) * (a + c) * (a + d) / s
        return ((n + s - 1) * (n + a + b) * (n + a + c) * (n + a + d)
                / ((2 * n + s - 1) * (2 * n + s)))

    def _C(self, n):
        if n == 0:
            return 0.0
        a, b, c, d, s = self.a, self.b, self.c, self.d, self._s
        return (n * (n + b + c - 1) * (n + b + d - 1) * (n + c + d - 1)
                / ((2 * n + s - 2) * (2 * n + s - 1)))

    def measure(self, cutoff: float = 60.0, nodes: int = 600) -> ContinuousInterval:
        return ContinuousInterval(0.0, cutoff, (0.0, 0.0), self.weight, nodes)


def _theta_variable(x):
    x = np.asarray(x, dtype=float)
    return x + np.sqrt((x * x - 1).astype(complex))


@dataclass(frozen=True)
class AskeyWilson:
    """Askey-Wilson polynomials p_n(x; t1, t2, t3, t4 | q), x = cos(theta)."""

    t1: float
    t2: float
    t3: float
    t4: float
    q: float

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.t1 == 0:
            raise ValueError("first Askey-Wilson parameter must be nonzero (reorder parameters)")

    @property
    def params(self):
        return (self.t1, self.t2, self.t3, self.t4)

    @property
    def _prod(self):
        return self.t1 * self.t2 * self.t3 * self.t4

    def eval(self, n, x):
        _check_n(n)
        # symmetric in the parameters; expanding around the largest one cancels least
        a, b, c, d = sorted(self.params, key=abs, reverse=True)
        q = self.q
        z = _theta_variable(x)
        series = basic_hypergeometric_terminating(
            SeriesParams((q ** (-n), self._prod * q ** (n - 1), a * z, a / z), (a * b, a * c, a * d), q, q), n)
        pre = (a ** (-n) * q_pochhammer(a * b, q, n) * q_pochhammer(a * c, q, n)
               * q_pochhammer(a * d, q, n))
        return real_part(pre * series, scale=np.maximum(np.abs(pre * series), abs(pre)))

    def lc(self, n) -> float:
        _check_n(n)
        return 2 ** n * q_pochhammer(self._prod * self.q ** (n - 1), self.q, n)

    def log_lc(self, n):
        v = self.lc(n)
        return math.copysign(1.0, v), math.log(abs(v))

    def norm(self, n) -> float:
        _check_n(n)
        a, b, c, d = self.params
        q = self.q
        abcd = self._prod
        num = q_pochhammer(abcd * q ** (n - 1), q, n) * q_pochhammer(abcd * q ** (2 * n), q)
        den = q_pochhammer(q ** (n + 1), q)
        for p in (a * b, a * c, a * d, b * c, b * d, c * d):
            den *= q_pochhammer(p * q ** n, q)
        return num / den

    def log_norm(self, n) -> float:
        return math.log(self.norm(n))

    def weight(self, x):
        """Density in x on (-1, 1): w(x) / (2 pi sqrt(1 - x^2))."""
        x = np.asarray(x, dtype=float)
        if np.any((x <= -1) | (x >= 1)):
            raise ValueError("Askey-Wilson weight is supported on (-1, 1)")
        out = self._smooth_weight(x) / np.sqrt(1 - x * x)
        return out[()] if out.ndim == 0 else out

    def _smooth_weight(self, x):
        q = self.q
        # (e^{2i theta}, e^{-2i theta}; q)_inf
        top = q_pochhammer_pair(1.0, 2 * x * x - 1, q)
        bot = 1.0
        for t in self.params:
            bot = bot * q_pochhammer_pair(t, x, q)
        return top / bot / (2 * math.pi)

    def recurrence(self, n):
        _check_n(n)
        a = self.t1
        up = self._A(n)
        return _offdiag(up * self._C(n + 1), n, scale=0.5), 0.5 * (a + 1 / a - up - self._C(n))

    def _A(self, n):
        a, b, c, d = self.params
        q, abcd = self.q, self._prod
        if n == 0:
            return (1 - a * b) * (1 - a * c) * (1 - a * d) / (a * (1 - abcd))
        return ((1 - a * b * q ** n) * (1 - a * c * q ** n) * (1 - a * d * q ** n) * (1 - abcd * q ** (n - 1))
                / (a * (1 - abcd * q ** (2 * n - 1)) * (1 - abcd * q ** (2 * n))))

    def _C(self, n):
        if n == 0:
            return 0.0
        a, b, c, d = self.params
        q, abcd = self.q, self._prod
        return (a * (1 - q ** n) * (1 - b * c * q ** (n - 1)) * (1 - b * d * q ** (n - 1)) * (1 - c * d * q ** (n - 1))
                / ((1 - abcd * q ** (2 * n - 2)) * (1 - abcd * q ** (2 * n - 1))))

    def measure(self, nodes: int = 400) -> ContinuousInterval:
        if max(abs(t) for t in self.params) >= 1:
            raise ValueError("continuous measure only: all |t_i| < 1 required")
        return ContinuousInterval(-1.0, 1.0, (-0.5, -0.5), self._smooth_weight, nodes)


@dataclass(frozen=True)
class AlSalamChihara:
    """Al-Salam-Chihara polynomials Q_n(x; a, b | q)."""

    a: float
    b: float
    q: float

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")

    def eval(self, n, x):
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        if abs(b) > abs(a):
            a, b = b, a
        if a == 0:
            raise ValueError("series form needs a nonzero parameter")
        z = _theta_variable(x)
        series = basic_hypergeometric_terminating(
            SeriesParams((q ** (-n), a * z, a / z), (a * b, 0.0), q, q), n)
        pre = q_pochhammer(a * b, q, n) * a ** (-n)
        return real_part(pre * series, scale=np.maximum(np.abs(pre * series), abs(pre)))

    def lc(self, n) -> float:
        _check_n(n)
        return 2.0 ** n

    def log_lc(self, n):
        return 1.0, n * math.log(2.0)

    def norm(self, n) -> float:
        _check_n(n)
        q = self.q
        return 1.0 / (q_pochhammer(q ** (n + 1), q) * q_pochhammer(self.a * self.b * q ** n, q))

    def log_norm(self, n) -> float:
        return math.log(self.norm(n))

    def weight(self, x):
        return AskeyWilson(self.a if self.a else self.b, self.b if self.a else 0.0, 0.0, 0.0, self.q).weight(x)

    def recurrence(self, n):
        _check_n(n)
        a, b, q = self.a, self.b, self.q
        off2 = (1 - q ** (n + 1)) * (1 - a * b * q ** n)
        return _offdiag(off2, n, scale=0.5), 0.5 * (a + b) * q ** n

    def measure(self, nodes: int = 400) -> ContinuousInterval:
        aw = AskeyWilson(self.a if self.a else self.b, self.b if self.a else 0.0, 0.0, 0.0, self.q)
        return aw.measure(nodes)


Family = Union[Jacobi, LittleQJacobi, Wilson, AskeyWilson, AlSalamChihara]


def _offdiag(square, n, scale=1.0):
    if not square > 0:
        raise IndeterminateNormalisation(f"squared off-diagonal at n={n} is {square!r}")
    return scale * math.sqrt(square)


# ---------------------------------------------------------------------------
# functional interface


def family_eval(f: Family, n: int, x):
    """Degree-n polynomial of the family at x, via its terminating series."""
    return f.eval(n, x)


def family_norm(f: Family, n: int) -> float:
    return f.norm(n)


def family_lc(f: Family, n: int) -> float:
    return f.lc(n)


def family_weight(f: Family, point):
    return f.weight(point)


def family_recurrence(f: Family, n: int):
    """(offdiag_n, diag_n) of the orthonormal recurrence with positive leading coefficients."""
    return f.recurrence(n)


def orthonormal_values(f: Family, N: int, x) -> np.ndarray:
    """Rows r_0..r_N at x from the orthonormal recurrence (r_0 = 1/sqrt(h_0))."""
    x = np.asarray(x, dtype=float)
    out = np.empty((N + 1,) + x.shape)
    out[0] = 1.0 / math.sqrt(f.norm(0))
    prev = np.zeros_like(x)
    off_prev = 0.0
    for n in range(N):
        off, diag = f.recurrence(n)
        out[n + 1] = ((x - diag) * out[n] - off_prev * prev) / off
        prev = out[n]
        off_prev = off
    return out


# ---------------------------------------------------------------------------
# quadrature and inner products


@functools.lru_cache(maxsize=64)
def gauss_jacobi(npts: int, alpha: float, beta: float):
    """Gauss-Jacobi nodes and weights by Golub-Welsch on the Jacobi recurrence.

    Results are cached and returned as read-only arrays.
    """
    if npts < 1:
        raise ValueError("need at least one node")
    fam = Jacobi(alpha, beta)
    diag = np.empty(npts)
    off = np.empty(npts - 1)
    for n in range(npts):
        o, d = fam.recurrence(n)
        diag[n] = d
        if n < npts - 1:
            off[n] = o
    nodes, vecs = eigh_tridiagonal(diag, off)
    weights = fam.norm(0) * vecs[0] ** 2
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _degree(f):
    if isinstance(f, CoeffPolynomial):
        return f.degree
    return getattr(f, "degree", None)


def _evaluate_on(f, pts):
    if callable(f):
        return np.asarray(f(pts), dtype=float)
    vals = np.asarray(getattr(f, "values", f), dtype=float)
    return vals


def inner_product(f1, f2, m: Measure, nodes: int | None = None) -> float:
    """Integral of f1 * f2 against the measure m.

    ``f1``/``f2`` are :class:`CoeffPolynomial`, callables, or (for lattice
    measures) arrays / grid functions of values at ``q**k``.
    """
    if isinstance(m, DiscreteQLattice):
        K = m.K
        v1 = _evaluate_on(f1, m.points)
        v2 = _evaluate_on(f2, m.points)
        if v1.shape[0] < K or v2.shape[0] < K:
            raise ValueError(f"need values on at least {K} lattice points")
        return float(np.dot(m.masses, v1[:K] * v2[:K]))

    lo, hi = m.lo, m.hi
    alpha, beta = m.exponents
    if m.factor is None:
        d1, d2 = _degree(f1), _degree(f2)
        if d1 is None or d2 is None:
            if nodes is None and m.nodes is None:
                raise QuadratureError("pass nodes= for non-polynomial integrands")
            npts = nodes or m.nodes
        else:
            need = (max(d1, 0) + max(d2, 0)) // 2 + 8
            npts = need if nodes is None else nodes
            if npts < (max(d1, 0) + max(d2, 0)) // 2 + 1:
                raise QuadratureError(f"{npts} nodes cannot integrate degree {d1 + d2} exactly")
    else:
        npts = nodes or m.nodes
        if npts is None:
            raise QuadratureError("non-Jacobi density needs an explicit node count")
    t, w = gauss_jacobi(npts, alpha, beta)
    half = (hi - lo) / 2
    x = lo + (t + 1) * half
    scale = half ** (1 + alpha + beta)
    vals = _evaluate_on(f1, x) * _evaluate_on(f2, x)
    if m.factor is not None:
        vals = vals * m.factor(x)
    return float(np.dot(w, vals) * scale)
