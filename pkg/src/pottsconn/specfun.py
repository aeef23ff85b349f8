"""Zamolodchikov's Upsilon function and the gamma ratio driving its shift relations.

For 0 < z < Q with Q = beta + 1/beta the function is given by the integral

    ln Upsilon_beta(z) = int_0^inf [ (Q/2 - z)^2 e^{-t}
        - sinh^2((Q/2 - z) t / 2) / (sinh(beta t / 2) sinh(t / (2 beta))) ] dt / t

and is extended to all real z by the shift relations

    Upsilon(z + beta)   = gamma(beta z) * beta^(1 - 2 beta z) * Upsilon(z),
    Upsilon(z + 1/beta) = gamma(z / beta) * beta^(2 z / beta - 1) * Upsilon(z),

with gamma(x) = Gamma(x) / Gamma(1 - x).  The integrand is evaluated in the
algebraically equivalent form

    a^2 * (expm1(-t) - expm1(L(t))) / t,      a = Q/2 - z,
    L(t) = 2 lsinhc(a t / 2) - lsinhc(beta t / 2) - lsinhc(t / (2 beta)),

where lsinhc(x) = log(sinh(x) / x).  This form has no cancellation between the
two terms of the integrand, tends to -a^2 as t -> 0, and decays like
exp(-(Q/2 - |a|) t) for large t, so a truncation point with tail below 1e-18
can be chosen from the exponential envelope alone.  The small-|x| behaviour of
lsinhc is handled by its Taylor series, so no separate series expansion of the
full integrand is needed near t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .errors import ConvergenceError, DomainError

_LOG_PI = math.log(math.pi)

# exp(-43) ~ 2e-19: tail envelope target for the truncated integral.
_TAIL_LOG = 43.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and limits for the adaptive Gauss-Kronrod evaluation."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    t_max: float = 1e4
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.t_max > 0):
            raise DomainError("quadrature tolerances and t_max must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


@dataclass(frozen=True)
class UpsilonParams:
    """Coupling beta > 0 and the derived background charge Q = beta + 1/beta."""

    beta: float
    Q: float = field(init=False)

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        object.__setattr__(self, "Q", self.beta + 1.0 / self.beta)


DEFAULT_QUADRATURE = QuadratureSpec()


def _lsinhc(x: float) -> float:
    """log(sinh(x)/x), an even function, stable for all magnitudes."""
    y = abs(x)
    if y < 1e-300:
        return 0.0
    if y <= 0.1:
        # log(sinh(y)/y) = y^2/6 - y^4/180 + y^6/2835 - y^8/37800 + O(y^10)
        y2 = y * y
        return y2 * (1.0 / 6.0 + y2 * (-1.0 / 180.0 + y2 * (1.0 / 2835.0 - y2 / 37800.0)))
    if y <= 20.0:
        return math.log(math.sinh(y) / y)
    # sinh(y) = e^y (1 - e^{-2y}) / 2 without overflow
    return y - math.log(2.0 * y) + math.log1p(-math.exp(-2.0 * y))


def _integrand(t: float, a: float, beta: float) -> float:
    if t == 0.0:
        return -a * a
    big_l = (
        2.0 * _lsinhc(0.5 * a * t)
        - _lsinhc(0.5 * beta * t)
        - _lsinhc(0.5 * t / beta)
    )
    return a * a * (math.expm1(-t) - math.expm1(big_l)) / t


def ln_upsilon_strip(z: float, p: UpsilonParams, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """ln Upsilon_beta(z) for z in the open strip (0, Q), by adaptive quadrature."""
    q_charge = p.Q
    if not 0.0 < z < q_charge:
        raise DomainError(f"z = {z} outside the open strip (0, {q_charge})")
    a = 0.5 * q_charge - z
    if a == 0.0:
        # integrand vanishes identically at the self-dual point
        return 0.0
    decay = min(1.0, 0.5 * q_charge - abs(a))
    t_up = min(quad_spec.t_max, _TAIL_LOG / decay)
    tail = abs(_integrand(t_up, a, p.beta))
    if tail > quad_spec.abs_tol:
        raise ConvergenceError(
            f"integrand magnitude {tail:.3e} at the truncation point t = {t_up:.3g} "
            f"exceeds abs_tol = {quad_spec.abs_tol:.3e}; increase t_max"
        )
    total = 0.0
    cut = min(1.0, t_up)
    for lo, hi in ((0.0, cut), (cut, t_up)):
        if hi <= lo:
            continue
        out = quad(
            _integrand,
            lo,
            hi,
            args=(a, p.beta),
            epsabs=quad_spec.abs_tol,
            epsrel=quad_spec.rel_tol,
            limit=quad_spec.max_subdivisions,
            full_output=1,
        )
        if len(out) > 3:
            raise ConvergenceError(f"quadrature failed on [{lo}, {hi}]: {out[3]}")
        total += out[0]
    return total


def gamma_ratio(x: float) -> float:
    """gamma(x) = Gamma(x)/Gamma(1-x), via the reflection form Gamma(x)^2 sin(pi x)/pi.

    The reflection form resolves the Gamma(1-x) poles at positive integer x,
    where the ratio vanishes: gamma(1) = 0, gamma(2) = 0, and so on.  At
    nonpositive integers the ratio itself has a pole and a DomainError is
    raised.
    """
    log_mag, sign = _gamma_ratio_parts(x)
    if sign == 0:
        if log_mag == math.inf:
            raise DomainError(f"gamma ratio has a pole at x = {x}")
        return 0.0
    return sign * math.exp(log_mag)


def _gamma_ratio_parts(x: float) -> tuple[float, int]:
    """(log|gamma(x)|, sign); sign 0 encodes a zero (log = -inf) or pole (log = +inf).

    Arguments within a few ulps of an integer are treated as that integer:
    the continuation shifts build x as a product beta*z, and near a pole or
    zero the rounded-off value would be pure cancellation noise.
    """
    nearest = round(x)
    if abs(x - nearest) <= 4.0 * math.ulp(max(1.0, abs(x))):
        x = float(nearest)
    m = math.floor(x)
    if x == m:
        return (-math.inf, 0) if m >= 1 else (math.inf, 0)
    frac = x - m
    log_mag = 2.0 * math.lgamma(x) + math.log(math.sin(math.pi * frac)) - _LOG_PI
    sign = 1 if int(m) % 2 == 0 else -1
    return log_mag, sign


def _shift_coeff_beta(z: float, beta: float) -> tuple[float, int]:
    """Parts of c(z) in Upsilon(z + beta) = c(z) * Upsilon(z)."""
    log_mag, sign = _gamma_ratio_parts(beta * z)
    return log_mag + (1.0 - 2.0 * beta * z) * math.log(beta), sign


def _shift_coeff_inv_beta(z: float, beta: float) -> tuple[float, int]:
    """Parts of c(z) in Upsilon(z + 1/beta) = c(z) * Upsilon(z)."""
    log_mag, sign = _gamma_ratio_parts(z / beta)
    return log_mag + (2.0 * z / beta - 1.0) * math.log(beta), sign


def upsilon_log_sign(z: float, p: UpsilonParams, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> tuple[float, int]:
    """(log|Upsilon_beta(z)|, sign) for real z; sign 0 encodes an exact zero.

    Arguments outside the strip are reduced into it with the larger of the two
    shift steps (beta or 1/beta).  A pole of the gamma ratio met while shifting
    up corresponds to a zero of Upsilon, as does a zero of the gamma ratio met
    while shifting down; both are reported as sign 0.
    """
    beta = p.beta
    q_charge = p.Q
    if beta >= 1.0:
        step, coeff = beta, _shift_coeff_beta
    else:
        step, coeff = 1.0 / beta, _shift_coeff_inv_beta
    log_acc = 0.0
    sign_acc = 1
    while z <= 0.0:
        log_c, sign_c = coeff(z, beta)
        if sign_c == 0:
            if log_c == math.inf:
                return -math.inf, 0
            raise DomainError(
                f"shift relation hits an unresolvable 0/0 at z = {z}"
            )
        log_acc -= log_c
        sign_acc *= sign_c
        z += step
    while z >= q_charge:
        log_c, sign_c = coeff(z - step, beta)
        if sign_c == 0:
            if log_c == -math.inf:
                return -math.inf, 0
            raise DomainError(
                f"shift relation hits an unresolvable pole at z = {z}"
            )
        log_acc += log_c
        sign_acc *= sign_c
        z -= step
    return log_acc + ln_upsilon_strip(z, p, quad_spec), sign_acc


def upsilon(z: float, p: UpsilonParams, quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Upsilon_beta(z) for real z, continued outside the strip by the shift relations.

    Returns exactly 0.0 at the zeros z = -m beta - n/beta and z = Q + m beta + n/beta.
    """
    log_mag, sign = upsilon_log_sign(z, p, quad_spec)
    if sign == 0:
        return 0.0
    return sign * math.exp(log_mag)
