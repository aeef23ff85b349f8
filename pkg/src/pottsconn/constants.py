"""Closed-form constants of the three-point connectivity prediction.

Maps the cluster weight q in [1, 4] to the interface parameter
kappa = 4 arccos(-sqrt(q)/2)/pi in [8/3, 4], evaluates the universal ratio

    C(q) = sqrt(kappa/2) * sin(kappa pi / 2) / sin(4 pi / kappa),

the normalized structure constant built from Upsilon functions, and the
product R(q) = C(q) * structure constant at the triple charge
alpha0 = 1/(4 beta) - beta/2 with beta = 2/sqrt(kappa).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, UpsilonParams, upsilon_log_sign

# beta ranges over [1, sqrt(3/2)] as q ranges over [4, 1]
_BETA_MAX = math.sqrt(1.5)
_BETA_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Consistent (q, kappa, beta, r) tuple for one critical Potts model."""

    q: float
    kappa: float
    beta: float
    r: float

    def __post_init__(self):
        if abs(q_from_kappa(self.kappa) - self.q) > 1e-12:
            raise DomainError("kappa and q are inconsistent")
        if abs(self.beta - 2.0 / math.sqrt(self.kappa)) > 1e-12:
            raise DomainError("beta must equal 2/sqrt(kappa)")
        if abs(self.r - 1.0 / self.q) > 1e-12:
            raise DomainError("r must equal 1/q")

    @classmethod
    def from_q(cls, q: float) -> "ModelParams":
        kappa = kappa_from_q(q)
        return cls(q=q, kappa=kappa, beta=2.0 / math.sqrt(kappa), r=1.0 / q)

    @classmethod
    def from_kappa(cls, kappa: float) -> "ModelParams":
        q = q_from_kappa(kappa)
        return cls(q=q, kappa=kappa, beta=2.0 / math.sqrt(kappa), r=1.0 / q)


@dataclass(frozen=True)
class DozzArgs:
    """The three real charge parameters of the structure constant."""

    alpha1: float
    alpha2: float
    alpha3: float


def kappa_from_q(q: float) -> float:
    """kappa = 4 arccos(-sqrt(q)/2) / pi, mapping [1, 4] onto [8/3, 4]."""
    if not 1.0 <= q <= 4.0:
        raise DomainError(f"q = {q} outside [1, 4]")
    return 4.0 * math.acos(-math.sqrt(q) / 2.0) / math.pi


def q_from_kappa(kappa: float) -> float:
    """Inverse map q = 4 cos^2(pi kappa / 4) on [8/3, 4]."""
    if not 8.0 / 3.0 <= kappa <= 4.0:
        raise DomainError(f"kappa = {kappa} outside [8/3, 4]")
    c = math.cos(math.pi * kappa / 4.0)
    return 4.0 * c * c


def c_of_q(q: float) -> float:
    """C(q) = sqrt(kappa/2) sin(kappa pi/2) / sin(4 pi/kappa) with kappa = kappa_from_q(q).

    The sine ratio is 0/0 at kappa = 4; its limit is 2, and the guarded branch
    below returns sqrt(kappa/2) * 2 whenever |kappa - 4| < 1e-6, giving
    C = 2 sqrt(2) at the q = 4 endpoint.
    """
    kappa = kappa_from_q(q)
    if abs(kappa - 4.0) < 1e-6:
        return math.sqrt(kappa / 2.0) * 2.0
    return math.sqrt(kappa / 2.0) * math.sin(kappa * math.pi / 2.0) / math.sin(4.0 * math.pi / kappa)


def alpha0(beta: float) -> float:
    """The triple charge alpha0 = 1/(4 beta) - beta/2."""
    if beta <= 0:
        raise DomainError("beta must be positive")
    return 1.0 / (4.0 * beta) - beta / 2.0


def _check_beta(beta: float) -> None:
    if not (1.0 - _BETA_TOL <= beta <= _BETA_MAX + _BETA_TOL):
        raise DomainError(
            f"beta = {beta} outside [1, sqrt(3/2)]; the q = 4 endpoint gives beta = 1"
        )


@lru_cache(maxsize=None)
def _log_normalization(beta: float, quad_spec: QuadratureSpec) -> float:
    """log A with A = Upsilon(2 beta - 1/beta)^(1/2) / Upsilon(beta)^(3/2).

    This choice makes the alpha-dependent Upsilon factors of the structure
    constant cancel identically at charges (alpha, alpha, 0), forcing the
    normalized value 1 there.  Both arguments lie in the strip for beta in
    [1, sqrt(3/2)], so the logs are finite and the signs positive.
    """
    p = UpsilonParams(beta)
    log_num, sign_num = upsilon_log_sign(2.0 * beta - 1.0 / beta, p, quad_spec)
    log_den, sign_den = upsilon_log_sign(beta, p, quad_spec)
    if sign_num != 1 or sign_den != 1:
        raise DomainError("normalization requires positive Upsilon values")
    return 0.5 * log_num - 1.5 * log_den


def dozz_normalization(beta: float, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """The normalization factor A as a plain float."""
    _check_beta(beta)
    return math.exp(_log_normalization(beta, quad_spec))


def im_dozz(args: DozzArgs, beta: float, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """The normalized structure constant at charges (alpha1, alpha2, alpha3).

    Evaluates

        A * Upsilon(2 beta - 1/beta + sum alpha_j)
          * prod_i Upsilon(sum alpha_j - 2 alpha_i + beta)
                   / [Upsilon(2 alpha_i + beta) Upsilon(2 alpha_i + 2 beta - 1/beta)]^(1/2)

    in log-magnitude plus sign form.  Symmetric under permutations of the
    charges.  A negative product under a square root signals charges outside
    the validated regime and raises DomainError.
    """
    _check_beta(beta)
    p = UpsilonParams(beta)
    charges = (args.alpha1, args.alpha2, args.alpha3)
    total = sum(charges)
    log_acc, sign_acc = upsilon_log_sign(2.0 * beta - 1.0 / beta + total, p, quad_spec)
    if sign_acc == 0:
        return 0.0
    log_acc += _log_normalization(beta, quad_spec)
    for alpha_i in charges:
        log_num, sign_num = upsilon_log_sign(total - 2.0 * alpha_i + beta, p, quad_spec)
        if sign_num == 0:
            return 0.0
        log_d1, sign_d1 = upsilon_log_sign(2.0 * alpha_i + beta, p, quad_spec)
        log_d2, sign_d2 = upsilon_log_sign(2.0 * alpha_i + 2.0 * beta - 1.0 / beta, p, quad_spec)
        if sign_d1 == 0 or sign_d2 == 0:
            raise DomainError("Upsilon zero inside a square-rooted denominator")
        if sign_d1 * sign_d2 < 0:
            raise DomainError("negative product under a square root in the structure constant")
        log_acc += log_num - 0.5 * (log_d1 + log_d2)
        sign_acc *= sign_num
    return sign_acc * math.exp(log_acc)


def r_constant(q: float, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """R(q) = C(q) times the structure constant at the triple charge alpha0."""
    params = ModelParams.from_q(q)
    a0 = alpha0(params.beta)
    return c_of_q(q) * im_dozz(DozzArgs(a0, a0, a0), params.beta, quad_spec)
