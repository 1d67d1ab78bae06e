"""Tridiagonalisation of differential and q-difference operators by orthogonal polynomials."""

from .operators import SHIFT_A, SHIFT_B, JacobiOperatorParams, QOperatorParams
from .tridiag import closed_form_coeffs, pair_for, tridiag_coefficients

__version__ = "0.1.0"

__all__ = [
    "SHIFT_A",
    "SHIFT_B",
    "JacobiOperatorParams",
    "QOperatorParams",
    "closed_form_coeffs",
    "pair_for",
    "tridiag_coefficients",
]
