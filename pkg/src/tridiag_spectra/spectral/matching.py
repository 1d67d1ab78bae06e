"""Identify the Jacobi-matrix coefficients with named orthonormal recurrences."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..families import AskeyWilson, Wilson
from ..operators import SHIFT_A, JacobiOperatorParams, QOperatorParams
from ..tridiag import pair_for, tridiag_coefficients
from .predict import jacobi_delta_roots

__all__ = ["MatchReport", "match_recurrence", "target_family", "affine_map"]


@dataclass(frozen=True)
class MatchReport:
    family: object
    n_max: int
    offdiag_error: float
    diag_error: float
    skipped: str = ""

    @property
    def max_error(self) -> float:
        return max(self.offdiag_error, self.diag_error)


def _jacobi_delta(p: JacobiOperatorParams):
    if p.delta is not None:
        return p.delta
    d1, _ = jacobi_delta_roots(p.alpha, p.beta, p.gamma)
    return d1.real if d1.imag == 0 else None


def target_family(params):
    """Orthonormal family whose recurrence the (gauge-fixed, rescaled) coefficients should match.

    Returns (family, index offset); the offset is 1 for the deflated
    gamma = 0 Jacobi operator, whose recurrence starts at phi_1.
    """
    if isinstance(params, JacobiOperatorParams):
        al, be = params.alpha, params.beta
        if params.gamma == 0:
            return Wilson(0.5 * (1 + al), 0.5 * (1 - al), 0.5 * (3 + al), be + 0.5 * (3 + al)), 1
        d = _jacobi_delta(params)
        if d is None:
            return None, 0
        return Wilson(0.5 * (1 + al), 0.5 * (1 + al) + d, 0.5 * (1 - al) + be - d, 0.5 * (1 + al)), 0
    if params.case != SHIFT_A:
        raise ValueError("the b-shift coefficients match no named family")
    a, b, c, q = params.a, params.b, params.c, params.q
    s = math.sqrt(a * q)
    return AskeyWilson(s, c * s, (b / c) * math.sqrt(q / a), s, q), 0


def affine_map(params):
    """(shift, scale) with T-eigenvalue = shift + scale * (family variable)."""
    if isinstance(params, JacobiOperatorParams):
        # lambda = -(alpha+1)^2/2 - 2 mu^2, variable y = mu^2
        return -0.5 * (params.alpha + 1) ** 2, -2.0
    s = math.sqrt(params.a * params.q)
    return 1 + params.a * params.q, -2 * s


def match_recurrence(params, n_max: int) -> MatchReport:
    """Compare (|a_n|, b_n) with shift + scale * (recurrence of the target family).

    Errors are relative to max(1, |coefficient|), taken over n <= n_max.
    """
    fam, offset = target_family(params)
    if fam is None:
        return MatchReport(None, n_max, math.nan, math.nan, skipped="complex delta: parameters not real")
    pair = pair_for(params)
    coeffs = tridiag_coefficients(pair, params.gamma, n_max + offset + 2)
    shift, scale = affine_map(params)
    off_err = diag_err = 0.0
    for n in range(n_max + 1):
        off, diag = fam.recurrence(n)
        m = n + offset
        a_pred = abs(scale) * off
        b_pred = shift + scale * diag
        off_err = max(off_err, abs(abs(coeffs.a[m]) - a_pred) / max(1.0, abs(coeffs.a[m])))
        diag_err = max(diag_err, abs(coeffs.b[m] - b_pred) / max(1.0, abs(coeffs.b[m])))
    return MatchReport(fam, n_max, off_err, diag_err)


def deflated_section(a, b):
    """Drop the first row and column (the gamma = 0 Jacobi operator kills phi_0)."""
    return np.asarray(a)[1:], np.asarray(b)[1:]
