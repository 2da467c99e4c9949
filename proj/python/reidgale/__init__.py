"""Gale-dual matrices (L, K^t) and Reid's-recipe markings for crepant
resolutions of cyclic quotient singularities, plus the pure matrix pipeline."""

try:
    from ._reidgale import (
        analyze,
        analyze_data,
        gale_dual,
        hermite_normal_form,
        invariant_factors,
        junior_points,
        kernel_basis,
        matrix_mode,
        smith_normal_form,
        validate_fan,
        verify_short_exact,
    )
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _reidgale import (
        analyze,
        analyze_data,
        gale_dual,
        hermite_normal_form,
        invariant_factors,
        junior_points,
        kernel_basis,
        matrix_mode,
        smith_normal_form,
        validate_fan,
        verify_short_exact,
    )

__all__ = [
    "analyze",
    "analyze_data",
    "gale_dual",
    "hermite_normal_form",
    "invariant_factors",
    "junior_points",
    "kernel_basis",
    "matrix_mode",
    "smith_normal_form",
    "validate_fan",
    "verify_short_exact",
]
