"""Spectral analysis of the Jacobi matrices: predictions, finite sections,
recurrence identification and the little q-Jacobi transform."""

from .matching import MatchReport, affine_map, deflated_section, match_recurrence, target_family
from .predict import (
    SOURCE_A_SHIFT,
    SOURCE_B_SHIFT,
    SOURCE_JACOBI,
    SOURCE_JACOBI_DEFLATED,
    SpectralPrediction,
    jacobi_delta_roots,
    jacobi_discrete_families,
    predict_spectrum,
)
from .qtransform import (
    TransformValue,
    asc_parameters,
    asc_values,
    biorthogonal_gram,
    biorthogonal_pair_check,
    biorthogonal_transform,
    direct_eigenfunction_q1,
    direct_eigenfunction_q2,
    direct_recurrence_q2,
    general_identity_lhs,
    general_identity_rhs,
    sigma_measure,
    spectral_variable,
    v_transform,
    v_transform_closed_form,
)
from .sections import (
    SpectrumReport,
    TruncatedSpectrum,
    compare_spectrum,
    interlaces,
    sturm_count,
    thread_cap,
    truncated_spectrum,
)

__all__ = [
    "MatchReport", "affine_map", "deflated_section", "match_recurrence", "target_family",
    "SOURCE_A_SHIFT", "SOURCE_B_SHIFT", "SOURCE_JACOBI", "SOURCE_JACOBI_DEFLATED", "SpectralPrediction",
    "jacobi_delta_roots", "jacobi_discrete_families", "predict_spectrum",
    "TransformValue", "asc_parameters", "asc_values", "biorthogonal_gram", "biorthogonal_pair_check",
    "biorthogonal_transform", "direct_eigenfunction_q1", "direct_eigenfunction_q2", "direct_recurrence_q2",
    "general_identity_lhs", "general_identity_rhs", "sigma_measure", "spectral_variable", "v_transform",
    "v_transform_closed_form",
    "SpectrumReport", "TruncatedSpectrum", "compare_spectrum", "interlaces", "sturm_count", "thread_cap",
    "truncated_spectrum",
]
