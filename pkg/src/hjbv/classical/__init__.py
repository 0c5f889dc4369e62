from .biaffine import (biaffine_path_data, closed_trajectory, hj_biaffine,
                       hj_biaffine_path, phi_series, psi_series, rginv_series,
                       wzw, wzw_series)
from .evolution import Trajectory, solve_evolution
from .hj import (HJResult, circle_particle_hj, cm_hj, hj_linear,
                 hj_linear_general_polarization, legendre_reduce,
                 partial_legendre, rp_hj, transplant, verify_generating)
from .numerics import (expm, expm_batch, ordered_double, rk4, rk4_final,
                       rk4_with_check, simpson, simpson_refined)
from .systems import (ConstraintSystem, check_involution, poisson_bracket,
                      system_from_dict)

__all__ = [
    "ConstraintSystem", "HJResult", "Trajectory", "biaffine_path_data",
    "check_involution", "circle_particle_hj", "closed_trajectory", "cm_hj",
    "expm", "expm_batch", "hj_biaffine", "hj_biaffine_path", "hj_linear",
    "hj_linear_general_polarization", "legendre_reduce", "ordered_double",
    "partial_legendre", "phi_series", "poisson_bracket", "psi_series",
    "rginv_series", "rk4", "rk4_final", "rk4_with_check", "rp_hj", "simpson",
    "simpson_refined", "solve_evolution", "system_from_dict", "transplant",
    "verify_generating", "wzw", "wzw_series",
]
