"""Closed-form spectra of the three operators."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from ..operators import SHIFT_A, SHIFT_B, JacobiOperatorParams, QOperatorParams

__all__ = [
    "SpectralPrediction",
    "predict_spectrum",
    "jacobi_delta_roots",
    "jacobi_discrete_families",
    "SOURCE_JACOBI",
    "SOURCE_JACOBI_DEFLATED",
    "SOURCE_A_SHIFT",
    "SOURCE_B_SHIFT",
]

SOURCE_JACOBI = "jacobi"
SOURCE_JACOBI_DEFLATED = "jacobi-deflated"
SOURCE_A_SHIFT = "a-shift"
SOURCE_B_SHIFT = "b-shift"

# enumeration cap for the discrete sets; every set here is finite
_MAX_INDEX = 10000


@dataclass(frozen=True)
class SpectralPrediction:
    """Continuous bands (closed or open intervals, possibly infinite) and discrete points.

    For the b-shift operator only a containment statement is available:
    ``containment_only`` is set and the single band is [0, inf).
    """

    continuous_bands: tuple
    discrete_points: tuple
    source: str
    containment_only: bool = False
    notes: tuple = field(default_factory=tuple)

    def band_contains(self, x: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.continuous_bands)

    @property
    def band_sup(self) -> float:
        return max(hi for _, hi in self.continuous_bands)

    @property
    def band_inf(self) -> float:
        return min(lo for lo, _ in self.continuous_bands)


def jacobi_delta_roots(alpha: float, beta: float, gamma: float):
    """Both roots delta of -(alpha+delta+1)(beta-delta+1) = gamma (complex if needed)."""
    disc = (beta - alpha) ** 2 + 4 * ((alpha + 1) * (beta + 1) + gamma)
    root = cmath.sqrt(disc)
    return ((beta - alpha) + root) / 2, ((beta - alpha) - root) / 2


def _jacobi_prediction(p: JacobiOperatorParams) -> SpectralPrediction:
    al, be = p.alpha, p.beta
    edge = -0.5 * (al + 1) ** 2
    band = ((-math.inf, edge),)
    if p.delta is not None:
        delta = p.delta
    else:
        d1, _ = jacobi_delta_roots(al, be, p.gamma)
        if abs(d1.imag) > 0:
            return SpectralPrediction(band, (), SOURCE_JACOBI, notes=("complex delta: no discrete spectrum",))
        delta = d1.real
    if p.gamma == 0:
        pts = {0.0}
        for k in range(_MAX_INDEX):
            u = 0.5 * (1 - al) + k
            if u >= 0:
                break
            pts.add(edge + 2 * u * u)
        return SpectralPrediction(band, tuple(sorted(pts)), SOURCE_JACOBI_DEFLATED)
    first, second = jacobi_discrete_families(al, be, delta)
    return SpectralPrediction(band, tuple(sorted(first + second)), SOURCE_JACOBI)


def jacobi_discrete_families(alpha: float, beta: float, delta: float):
    """The two candidate discrete sets for real delta, enumerated separately.

    Point -(alpha+1)^2/2 + 2u^2 for u = start + k < 0, with start
    (1+alpha)/2 + delta or (1-alpha)/2 + beta - delta.
    """
    edge = -0.5 * (alpha + 1) ** 2
    out = []
    for start in (0.5 * (1 + alpha) + delta, 0.5 * (1 - alpha) + beta - delta):
        pts = []
        for k in range(_MAX_INDEX):
            u = start + k
            if u >= 0:
                break
            pts.append(edge + 2 * u * u)
        out.append(tuple(pts))
    return out[0], out[1]


def _q1_prediction(p: QOperatorParams) -> SpectralPrediction:
    a, b, c, q = p.a, p.b, p.c, p.q
    s = math.sqrt(a * q)
    band = (((1 - s) ** 2, (1 + s) ** 2),)
    pts = []
    for k in range(_MAX_INDEX):
        if abs(q ** k * c * s) <= 1:
            break
        pts.append((1 - q ** (-k) / c) * (1 - a * c * q ** (1 + k)))
    if b != 0:
        B = (b / c) * math.sqrt(q / a)
        for l in range(_MAX_INDEX):
            if abs(q ** l * B) <= 1:
                break
            pts.append((1 - b * q ** (l + 1) / c) * (1 - a * c * q ** (-l) / b))
    return SpectralPrediction(band, tuple(sorted(pts)), SOURCE_A_SHIFT)


def predict_spectrum(params) -> SpectralPrediction:
    """Spectrum predicted by the closed-form results for the operator described by ``params``.

    Raises ValueError for parameter sets outside the hypotheses (the q-cases
    need Lambda_n^gamma > 0 for all n).
    """
    if isinstance(params, JacobiOperatorParams):
        return _jacobi_prediction(params)
    if not isinstance(params, QOperatorParams):
        raise TypeError("expected Jacobi or q operator parameters")
    if not params.lambda_positive():
        raise ValueError("Lambda_n^gamma > 0 fails for some n")
    if params.case == SHIFT_A:
        if not params.a * params.q < 1:
            raise ValueError("need 0 < aq < 1")
        return _q1_prediction(params)
    if params.case == SHIFT_B:
        return SpectralPrediction(((0.0, math.inf),), (), SOURCE_B_SHIFT, containment_only=True)
    raise ValueError(f"unknown case {params.case!r}")
