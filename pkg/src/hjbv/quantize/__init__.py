"""Boundary quantization: star products, boundary operators, BV data."""

from .bvbfv import (CASE_VARIANTS, VARIANT_FORMS, BvBfvData,
                    HalfDensityKernel, build_bfv_action, build_bv_action,
                    graded_bracket, right_deriv, wkb_half_density_kernel)
from .omega import (OmegaOperator, apply_omega, boundary_context, build_omega,
                    check_polarization_compat, htilde, omega_squared_check,
                    polarization_map)
from .star import (StarAlgebra, StarExp, star_algebra, star_commutator,
                   star_commutator_check, star_exp, star_log, star_product)

__all__ = [
    "CASE_VARIANTS", "VARIANT_FORMS", "BvBfvData", "HalfDensityKernel",
    "build_bfv_action", "build_bv_action", "graded_bracket", "right_deriv",
    "wkb_half_density_kernel",
    "OmegaOperator", "apply_omega", "boundary_context", "build_omega",
    "check_polarization_compat", "htilde", "omega_squared_check",
    "polarization_map",
    "StarAlgebra", "StarExp", "star_algebra", "star_commutator",
    "star_commutator_check", "star_exp", "star_log", "star_product",
]
