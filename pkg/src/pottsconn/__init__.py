"""Exact three-point connectivity of critical Potts spin clusters, and the
Monte Carlo machinery to test it.

The analytic side combines a Barnes-type special function (specfun), the
structure constants and couplings built from it (constants), and the
conformal-radius moment formulas whose fixed-point rederivation closes the
loop (radii).  The mc subpackage samples critical FK configurations, colors
clusters, and measures the universal connectivity ratio the formulas predict.
"""

from .constants import (
    DozzArgs,
    ModelParams,
    alpha0,
    c_of_q,
    dozz_normalization,
    im_dozz,
    kappa_from_q,
    q_from_kappa,
    r_constant,
)
from .errors import ConvergenceError, DomainError, InsufficientStatisticsError
from .golden import table1_reference, table2_reference
from .radii import (
    MomentValue,
    bcle_nonsimple_moment,
    bcle_simple_moment,
    c_kappa,
    cle_nonsimple_moment,
    fixed_point_moment,
    general_rho_moment,
    general_rho_threshold,
    lambda0,
    log_moment_b_to_r,
    log_moment_r_to_b,
    moment_b_to_r,
    moment_r_to_b,
)
from .specfun import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    UpsilonParams,
    gamma_ratio,
    ln_upsilon_strip,
    upsilon,
    upsilon_log_sign,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DEFAULT_QUADRATURE",
    "DomainError",
    "DozzArgs",
    "InsufficientStatisticsError",
    "ModelParams",
    "MomentValue",
    "QuadratureSpec",
    "UpsilonParams",
    "alpha0",
    "bcle_nonsimple_moment",
    "bcle_simple_moment",
    "c_kappa",
    "c_of_q",
    "cle_nonsimple_moment",
    "dozz_normalization",
    "fixed_point_moment",
    "gamma_ratio",
    "general_rho_moment",
    "general_rho_threshold",
    "im_dozz",
    "kappa_from_q",
    "lambda0",
    "ln_upsilon_strip",
    "log_moment_b_to_r",
    "log_moment_r_to_b",
    "moment_b_to_r",
    "moment_r_to_b",
    "q_from_kappa",
    "r_constant",
    "table1_reference",
    "table2_reference",
    "upsilon",
    "upsilon_log_sign",
]
