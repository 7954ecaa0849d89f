"""Numerical and exact-arithmetic toolkit for hypergeometric theta functions,
qKZB heat operators, their modular transformations, and the Macdonald
polynomial degenerations, with machine-checkable identity suites."""

from .types import (
    ConsistencyError,
    DEFAULT_TRUNC,
    DivergenceError,
    EvalResult,
    HTSIndex,
    ModularParams,
    PoleError,
    RegimeError,
    ThetaLevelIndex,
    Truncation,
)
from .theta import (
    e_kappa_residual,
    jacobi_theta,
    jacobi_theta_dlam,
    level_residual,
    theta0,
    theta_basis,
)
from .ellint import (
    build_u_contour,
    omega,
    pole_pinch_distance,
    q_weight,
    u_hyper,
    u_trig_degenerate,
    u_trig_semi,
)
from .hts import (
    delta,
    delta_tilde,
    gram_inversion,
    i_integral,
    i_regularized,
    is_admissible,
)
from .operators import (
    apply_T_bar,
    apply_T_kappa,
    apply_U,
    apply_f_of_Y,
    cherednik_Y,
    cherednik_Y_inv,
    qkzb_residual,
    t_q_apply,
)
from .laurent import LaurentPoly
from .macdonald import (
    ct_inner_product,
    elliptic_macdonald,
    macdonald_general,
    macdonald_m2,
    orthogonality_vs_inversion,
    trig_limit_ratio,
)
from .modular import (
    c_minus,
    c_plus,
    check_S_transform,
    check_T_shift,
    compose,
    group_relations,
    psi,
    s_minus_matrix,
    s_plus_matrix,
    transform,
)
from .limits import (
    classical_limit_check,
    classical_rhs_const,
    conformal_block,
    diff_eqn_check,
    mehta_check,
    orthogonality_check,
)
from .suites import SUITE_NAMES, VerifyReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError", "DEFAULT_TRUNC", "DivergenceError", "EvalResult",
    "HTSIndex", "ModularParams", "PoleError", "RegimeError", "ThetaLevelIndex",
    "Truncation",
    "e_kappa_residual", "jacobi_theta", "jacobi_theta_dlam", "level_residual",
    "theta0", "theta_basis",
    "build_u_contour", "omega", "pole_pinch_distance", "q_weight", "u_hyper",
    "u_trig_degenerate", "u_trig_semi",
    "delta", "delta_tilde", "gram_inversion", "i_integral", "i_regularized",
    "is_admissible",
    "apply_T_bar", "apply_T_kappa", "apply_U", "apply_f_of_Y", "cherednik_Y",
    "cherednik_Y_inv", "qkzb_residual", "t_q_apply",
    "LaurentPoly",
    "ct_inner_product", "elliptic_macdonald", "macdonald_general",
    "macdonald_m2", "orthogonality_vs_inversion", "trig_limit_ratio",
    "c_minus", "c_plus", "check_S_transform", "check_T_shift", "compose",
    "group_relations", "psi", "s_minus_matrix", "s_plus_matrix", "transform",
    "classical_limit_check", "classical_rhs_const", "conformal_block",
    "diff_eqn_check", "mehta_check", "orthogonality_check",
    "SUITE_NAMES", "VerifyReport", "run_suite",
]
