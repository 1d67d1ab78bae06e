"""Scalar special-function kernels.

Pochhammer and q-Pochhammer symbols, terminating (basic) hypergeometric
series and gamma ratios. Series are summed in double precision; when the
terms cancel badly (a common situation for polynomials evaluated far from
the origin or on a q-lattice) the affected entries are recomputed exactly
in rational arithmetic and rounded once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

try:  # GMP rationals are an order of magnitude faster than fractions.Fraction
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

__all__ = [
    "SeriesParams",
    "SeriesPoleError",
    "pochhammer",
    "q_pochhammer",
    "hypergeometric_terminating",
    "basic_hypergeometric_terminating",
    "log_gamma_ratio",
    "compensated_sum",
    "q_pochhammer_pair",
    "real_part",
]

# Infinite products stop once |x q^j| drops below this.
QPOCH_TAIL = 1e-18
# Terms whose absolute sum exceeds the result by this factor are redone exactly
# (float summation then still gives about 1e-13 relative accuracy).
CANCELLATION_LIMIT = 1e3
# Imaginary residue tolerated when a real result is expected.
IMAG_RESIDUE = 1e-12


class SeriesPoleError(ZeroDivisionError):
    """A denominator Pochhammer symbol vanished before the series terminated."""


@dataclass(frozen=True)
class SeriesParams:
    """Parameters of a (basic) hypergeometric series.

    ``base_q`` is ``None`` for the classical series. Parameters and the
    argument may be complex or numpy arrays; arrays broadcast together.
    """

    numerator_params: Sequence = field(default_factory=tuple)
    denominator_params: Sequence = field(default_factory=tuple)
    base_q: float | None = None
    argument: object = 1.0
    # Optional callable idx -> (numerator, denominator, argument) in exact
    # rational form, used when an entry has to be recomputed exactly.
    exact: object = None

    def __post_init__(self):
        if self.base_q is not None and not 0.0 < self.base_q < 1.0:
            raise ValueError(f"base q must lie in (0, 1), got {self.base_q}")


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1.0
    for j in range(n):
        out *= x + j
    return out


def _check_q(q):
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")


def q_pochhammer(x, q: float, n=math.inf):
    """q-shifted factorial (x; q)_n, with ``n = math.inf`` for the infinite product.

    ``x`` may be a complex scalar or an array.
    """
    _check_q(q)
    x = np.asarray(x)
    scalar = x.ndim == 0
    if scalar:
        return _q_pochhammer_scalar(x[()], q, n)
    out = np.ones_like(x, dtype=np.result_type(x, float))
    if n == math.inf:
        xq = x.astype(out.dtype)
        for _ in range(100000):
            if np.all(np.abs(xq) < QPOCH_TAIL):
                break
            out = out * (1 - xq)
            xq = xq * q
        else:  # pragma: no cover - q extremely close to 1
            raise ArithmeticError("infinite q-Pochhammer product did not converge")
    else:
        if n < 0 or int(n) != n:
            raise ValueError("n must be a nonnegative integer or math.inf")
        xq = x.astype(out.dtype)
        for _ in range(int(n)):
            out = out * (1 - xq)
            xq = xq * q
    return out[()] if scalar else out


def _q_pochhammer_scalar(x, q: float, n):
    xq = complex(x) if np.iscomplexobj(x) else float(x)
    out = 1.0
    if n == math.inf:
        for _ in range(100000):
            if abs(xq) < QPOCH_TAIL:
                return out
            out *= 1 - xq
            xq *= q
        raise ArithmeticError("infinite q-Pochhammer product did not converge")  # pragma: no cover
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer or math.inf")
    for _ in range(int(n)):
        out *= 1 - xq
        xq *= q
    return out


def compensated_sum(terms):
    """Kahan summation of a sequence of scalars or equally shaped arrays."""
    terms = list(terms)
    if len(terms) <= 8:
        total = 0
        for t in terms:
            total = total + t
        return total
    total = terms[0] * 0
    comp = terms[0] * 0
    for t in terms:
        y = t - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


# ---------------------------------------------------------------------------
# series machinery


def _ratios(num, den, q, z, n):
    """Consecutive term ratios t_{j+1}/t_j for j < n (broadcast arrays)."""
    ratios = []
    r, s = len(num), len(den)
    qj = 1.0
    for j in range(n):
        top = 1.0
        bot = 1.0
        if q is None:
            for a in num:
                top = top * (a + j)
            for b in den:
                bot = bot * (b + j)
            bot = bot * (j + 1)
        else:
            for a in num:
                top = top * (1 - a * qj)
            for b in den:
                bot = bot * (1 - b * qj)
            bot = bot * (1 - qj * q)
            extra = 1 + s - r
            if extra:
                top = top * (-qj) ** extra
        if np.any(np.asarray(bot) == 0):
            raise SeriesPoleError(f"denominator pole at term {j + 1}")
        ratios.append(top / bot * z)
        qj *= q if q is not None else 1.0
    return ratios


def _to_exact(v):
    if isinstance(v, tuple):
        return (Rational(v[0]), Rational(v[1]))
    if isinstance(v, (Fraction, int)) or type(v) is Rational:
        return (Rational(v), Rational(0))
    v = complex(v)
    return (Rational(v.real), Rational(v.imag))


def _cmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _cdiv(u, v):
    den = v[0] * v[0] + v[1] * v[1]
    if den == 0:
        raise SeriesPoleError("denominator pole in exact evaluation")
    return ((u[0] * v[0] + u[1] * v[1]) / den, (u[1] * v[0] - u[0] * v[1]) / den)


def _exact_series(num, den, q, z, n):
    """Exact rational evaluation of the series for scalar inputs given as floats."""
    one = (Rational(1), Rational(0))
    num = [_to_exact(a) for a in num]
    den = [_to_exact(b) for b in den]
    z = _to_exact(z)
    r, s = len(num), len(den)
    qx = Rational(q) if q is not None else None
    term = one
    total = one
    qj = Rational(1)
    for j in range(n):
        top = one
        bot = one
        if qx is None:
            for a in num:
                top = _cmul(top, (a[0] + j, a[1]))
            for b in den:
                bot = _cmul(bot, (b[0] + j, b[1]))
            bot = _cmul(bot, (Rational(j + 1), Rational(0)))
        else:
            for a in num:
                top = _cmul(top, (1 - a[0] * qj, -a[1] * qj))
            for b in den:
                bot = _cmul(bot, (1 - b[0] * qj, -b[1] * qj))
            bot = _cmul(bot, (1 - qj * qx, Rational(0)))
            extra = 1 + s - r
            if extra:
                top = _cmul(top, ((-qj) ** extra, Rational(0)))
        term = _cmul(_cdiv(_cmul(term, top), bot), z)
        total = (total[0] + term[0], total[1] + term[1])
        if qx is not None:
            qj *= qx
    return complex(float(total[0]), float(total[1]))


def _check_terminating(num, n, q) -> int:
    """Index of the numerator parameter that terminates the series."""
    target = -n if q is None else q ** (-n)
    for i, a in enumerate(num):
        arr = np.asarray(a)
        if arr.ndim == 0 and np.isreal(arr) and math.isclose(float(np.real(arr)), target, rel_tol=1e-12, abs_tol=0.0):
            return i
    what = f"-{n}" if q is None else f"q^-{n}"
    raise ValueError(f"terminating series needs a numerator parameter equal to {what}")


def _evaluate(params: SeriesParams, n: int, order: str):
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    n = int(n)
    q = params.base_q
    num = [np.asarray(a) for a in params.numerator_params]
    den = [np.asarray(b) for b in params.denominator_params]
    z = np.asarray(params.argument)
    stop = _check_terminating(num, n, q) if n > 0 else None
    shape = np.broadcast_shapes(z.shape, *(a.shape for a in num), *(b.shape for b in den))
    is_complex = any(np.iscomplexobj(v) for v in (*num, *den, z))
    if order not in ("forward", "reverse"):
        raise ValueError("order must be 'forward' or 'reverse'")
    ratios = _ratios(num, den, q, z, n)

    terms = [np.ones(shape)]
    for rt in ratios:
        terms.append(terms[-1] * rt)
    total = np.asarray(compensated_sum(terms if order == "forward" else terms[::-1]))
    total = np.broadcast_to(total, shape).copy() if total.shape != shape else total
    mag = np.sum([np.abs(np.broadcast_to(t, shape)) for t in terms], axis=0)
    bad = mag > CANCELLATION_LIMIT * np.abs(total)
    if np.any(bad):
        if not is_complex:
            total = total.astype(float)
        else:
            total = total.astype(complex)
        for idx in zip(*np.nonzero(bad)) if shape else [()]:
            if params.exact is not None:
                enum, eden, ez = params.exact(idx)
            else:
                pick = lambda v: np.broadcast_to(v, shape)[idx]  # noqa: E731
                enum, eden, ez = [pick(a) for a in num], [pick(b) for b in den], pick(z)
                if stop is not None:
                    # the rounded float q^-n would stop exact termination
                    enum[stop] = Rational(-n) if q is None else Rational(q) ** (-n)
            val = _exact_series(enum, eden, q, ez, n)
            total[idx] = val if is_complex else val.real
    return total[()] if total.ndim == 0 else total


def hypergeometric_terminating(params: SeriesParams, n: int, order: str = "forward"):
    """Terminating classical series pFq(-n, ...; ...; z).

    Terms are generated by forward term recursion. ``order='reverse'`` sums
    them from the last term to the first.
    """
    if params.base_q is not None:
        raise ValueError("classical series takes no base q")
    return _evaluate(params, n, order)


def basic_hypergeometric_terminating(params: SeriesParams, n: int, order: str = "forward"):
    """Terminating basic series r phi s(q^-n, ...; ...; q, z).

    Uses the standard normalisation with the factor
    ((-1)^k q^(k(k-1)/2))^(1+s-r). Complex parameters are allowed; the result
    is complex whenever any input is.
    """
    if params.base_q is None:
        raise ValueError("basic series needs a base q")
    return _evaluate(params, n, order)


def log_gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """prod Gamma(num) / prod Gamma(den), evaluated through log-gamma."""
    total = 0.0
    for x in num_args:
        if x <= 0:
            raise ValueError(f"gamma argument must be positive, got {x}")
        total += math.lgamma(x)
    for x in den_args:
        if x <= 0:
            raise ValueError(f"gamma argument must be positive, got {x}")
        total -= math.lgamma(x)
    return math.exp(total)


def real_part(value, scale=None):
    """Drop an imaginary residue that must vanish, checking it does."""
    value = np.asarray(value)
    if not np.iscomplexobj(value):
        return value[()] if value.ndim == 0 else value
    ref = np.maximum(np.abs(value), 1.0) if scale is None else scale
    if np.any(np.abs(value.imag) > IMAG_RESIDUE * ref):
        raise ArithmeticError(f"unexpected imaginary part {np.max(np.abs(value.imag)):.3e}")
    out = value.real
    return out[()] if out.ndim == 0 else out


def q_pochhammer_pair(t, x, q: float):
    """(t e^{i theta}, t e^{-i theta}; q)_inf for x = cos(theta), in real arithmetic.

    Each conjugate pair of factors multiplies to 1 - 2 t x q^j + t^2 q^{2j}.
    """
    _check_q(q)
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    tq = float(t)
    while abs(tq) >= QPOCH_TAIL:
        out = out * (1 - 2 * tq * x + tq * tq)
        tq *= q
    return out[()] if out.ndim == 0 else out
