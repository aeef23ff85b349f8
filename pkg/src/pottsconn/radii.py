"""Conformal-radius moment laws for the loop-ensemble interfaces.

All laws are built from

    theta(lambda) = (pi / kappa) * sqrt((4 - kappa)^2 - 8 kappa lambda),

which is real below the radicand zero lambda = (4 - kappa)^2 / (8 kappa) and
purely imaginary above it.  Every closed form below is a ratio of sines and
cosines of multiples of theta that is even in theta, so evaluating the trig
factors in complex arithmetic and taking the real part of the ratio continues
each formula across the radicand zero with no branch bookkeeping; the
imaginary parts cancel to rounding.

Each moment operation returns a MomentValue whose ``finite`` flag encodes the
law's divergence threshold; floating-point infinities never leak out.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class MomentValue:
    """A moment E[R^lambda]: finite flag plus the value when finite."""

    finite: bool
    value: float = math.nan


@dataclass(frozen=True)
class ThetaParams:
    """kappa, lambda, and the derived theta (complex above the radicand zero)."""

    kappa: float
    lam: float
    theta: complex = field(init=False)

    def __post_init__(self):
        radicand = (4.0 - self.kappa) ** 2 - 8.0 * self.kappa * self.lam
        if radicand == 0.0:
            # nudge off the branch point; every consumer is even in theta
            radicand = 1e-30
        theta = (math.pi / self.kappa) * cmath.sqrt(complex(radicand, 0.0))
        object.__setattr__(self, "theta", theta)


def _theta(kappa: float, lam: float) -> complex:
    return ThetaParams(kappa, lam).theta


def _check_kappa(kappa: float, lo: float, hi: float) -> None:
    if not lo < kappa < hi:
        raise DomainError(f"kappa = {kappa} outside ({lo}, {hi})")


def _check_rho(kappa: float, rho: float) -> None:
    if not -2.0 < rho < kappa - 4.0:
        raise DomainError(f"rho = {rho} outside (-2, kappa - 4) for kappa = {kappa}")


def _check_event(event: str) -> None:
    if event not in ("true_loop", "false_loop"):
        raise DomainError(f"event must be 'true_loop' or 'false_loop', got {event!r}")


def moment_r_to_b(kappa: float, lam: float) -> MomentValue:
    """E[R^lambda] for the outermost opposite-color interface seen from a red domain.

    Infinite iff lambda <= 2/kappa + 3 kappa/32 - 1; otherwise
    cos(pi (4 - kappa)/kappa) / cos(theta).
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    if lam <= 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0:
        return MomentValue(False)
    theta = _theta(kappa, lam)
    value = (math.cos(math.pi * (4.0 - kappa) / kappa) / cmath.cos(theta)).real
    return MomentValue(True, value)


def _v_factor(kappa: float, theta: complex) -> complex:
    c = math.cos(math.pi * (4.0 - kappa) / 2.0)
    return cmath.sin((kappa - 1.0) * theta) + 2.0 * c * cmath.sin((1.0 - kappa / 2.0) * theta)


def _u_factor(kappa: float, theta: complex) -> complex:
    c = math.cos(math.pi * (4.0 - kappa) / 2.0)
    return cmath.sin((kappa - 2.0) * theta) + 2.0 * c * cmath.sin((2.0 - kappa / 2.0) * theta)


@lru_cache(maxsize=None)
def lambda0(kappa: float) -> float:
    """The negative moment threshold of the blue-to-red law.

    -lambda0 is the unique root x in (0, 1 - kappa/8 - 3/(2 kappa)) of

        sin((pi (kappa-1)/kappa) s) / sin((pi (2-kappa)/(2 kappa)) s) = -2 cos(pi (4-kappa)/2),

    s = sqrt((4-kappa)^2 + 8 kappa x), located by 60 bisection steps on the
    denominator-free form of the equation followed by 3 Newton polish steps.
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    c = math.cos(math.pi * (4.0 - kappa) / 2.0)

    def theta_of_x(x: float) -> float:
        return (math.pi / kappa) * math.sqrt((4.0 - kappa) ** 2 + 8.0 * kappa * x)

    def v_of_x(x: float) -> float:
        th = theta_of_x(x)
        return math.sin((kappa - 1.0) * th) + 2.0 * c * math.sin((1.0 - kappa / 2.0) * th)

    x_hi = 1.0 - kappa / 8.0 - 1.5 / kappa
    lo, hi = 0.0, x_hi
    if not (v_of_x(lo) > 0.0 > v_of_x(hi)):
        raise RuntimeError(
            "no sign change on (0, 1 - kappa/8 - 3/(2 kappa)); the threshold "
            "equation should have a unique root there"
        )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if v_of_x(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        th = theta_of_x(x)
        s = math.sqrt((4.0 - kappa) ** 2 + 8.0 * kappa * x)
        slope = (
            (kappa - 1.0) * math.cos((kappa - 1.0) * th)
            + 2.0 * c * (1.0 - kappa / 2.0) * math.cos((1.0 - kappa / 2.0) * th)
        ) * 4.0 * math.pi / s
        if slope == 0.0:
            break
        x_new = x - v_of_x(x) / slope
        if 0.0 < x_new < x_hi:
            x = x_new
    th = theta_of_x(x)
    residual = abs(
        math.sin((kappa - 1.0) * th) / math.sin((1.0 - kappa / 2.0) * th) + 2.0 * c
    )
    if residual > 1e-10:
        raise ConvergenceError(f"threshold residual {residual:.3e} above 1e-10")
    return -x


def moment_b_to_r(kappa: float, lam: float) -> MomentValue:
    """E[R^lambda] for the outermost opposite-color interface seen from a blue domain.

    Infinite iff lambda <= lambda0(kappa); otherwise

        1/(2 cos(pi (4-kappa)/kappa)) *
        [sin((kappa-2) theta) + 2 cos(pi (4-kappa)/2) sin((2-kappa/2) theta)] /
        [sin((kappa-1) theta) + 2 cos(pi (4-kappa)/2) sin((1-kappa/2) theta)].
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    if lam <= lambda0(kappa):
        return MomentValue(False)
    theta = _theta(kappa, lam)
    prefactor = 1.0 / (2.0 * math.cos(math.pi * (4.0 - kappa) / kappa))
    value = prefactor * (_u_factor(kappa, theta) / _v_factor(kappa, theta)).real
    return MomentValue(True, value)


def bcle_simple_moment(kappa: float, rho: float, lam: float, event: str) -> MomentValue:
    """Moment restricted to the loop-orientation event, simple-loop ensemble.

    ``event`` selects the clockwise ("true_loop") or counterclockwise
    ("false_loop") branch.  Infinite iff lambda <= kappa/8 - 1.
    """
    _check_kappa(kappa, 2.0, 4.0)
    _check_rho(kappa, rho)
    _check_event(event)
    if lam <= kappa / 8.0 - 1.0:
        return MomentValue(False)
    theta = _theta(kappa, lam)
    den = math.sin(math.pi * (4.0 - kappa) / kappa) * math.sin(math.pi * (kappa - 2.0 * rho - 4.0) / 4.0)
    if event == "true_loop":
        pref = math.sin(math.pi * (4.0 - kappa) / 4.0) * math.sin((2.0 * math.pi / kappa) * (kappa - rho - 4.0)) / den
        ratio = cmath.sin((kappa - 2.0 * rho - 4.0) * theta / 4.0) / cmath.sin(kappa * theta / 4.0)
    else:
        pref = math.sin(math.pi * (4.0 - kappa) / 4.0) * math.sin((2.0 * math.pi / kappa) * (rho + 2.0)) / den
        ratio = cmath.sin((2.0 * rho + 8.0 - kappa) * theta / 4.0) / cmath.sin(kappa * theta / 4.0)
    return MomentValue(True, pref * ratio.real)


def bcle_nonsimple_moment(kappa: float, rho: float, lam: float, event: str) -> MomentValue:
    """Moment restricted to the loop-orientation event, non-simple-loop ensemble.

    The ensemble lives at kappa' = 16/kappa with boundary weight
    rho_B' = kappa' - 4 + (kappa'/4) rho, but the closed forms are expressed
    through kappa and rho directly, and theta is still theta(kappa, lambda).
    Infinite iff lambda <= kappa'/8 - 1 = 2/kappa - 1.
    """
    _check_kappa(kappa, 2.0, 4.0)
    _check_rho(kappa, rho)
    _check_event(event)
    if lam <= 2.0 / kappa - 1.0:
        return MomentValue(False)
    theta = _theta(kappa, lam)
    den = math.sin(math.pi * (4.0 - kappa) / 4.0) * math.sin((2.0 * math.pi / kappa) * (rho + 2.0))
    if event == "true_loop":
        pref = math.sin(math.pi * (4.0 - kappa) / kappa) * math.sin(-math.pi * rho / 2.0) / den
        ratio = cmath.sin((kappa - 2.0 * rho - 4.0) * theta / 4.0) / cmath.sin(theta)
    else:
        pref = math.sin(math.pi * (4.0 - kappa) / kappa) * math.sin(math.pi * (kappa - 2.0 * rho - 4.0) / 4.0) / den
        ratio = cmath.sin((2.0 * rho + 4.0) * theta / 4.0) / cmath.sin(theta)
    return MomentValue(True, pref * ratio.real)


def cle_nonsimple_moment(kappa: float, lam: float) -> MomentValue:
    """E[R^lambda] over the non-nested loop ensemble at kappa' = 16/kappa.

    Infinite iff lambda <= kappa/8 + 3/(2 kappa) - 1 (the carpet threshold for
    kappa'); otherwise cos(pi (4-kappa)/4) / cos(kappa theta / 4).
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    if lam <= kappa / 8.0 + 1.5 / kappa - 1.0:
        return MomentValue(False)
    theta = _theta(kappa, lam)
    value = (math.cos(math.pi * (4.0 - kappa) / 4.0) / cmath.cos(kappa * theta / 4.0)).real
    return MomentValue(True, value)


def _ingredients(kappa: float, rho: float, lam: float):
    st = bcle_simple_moment(kappa, rho, lam, "true_loop")
    sf = bcle_simple_moment(kappa, rho, lam, "false_loop")
    nt = bcle_nonsimple_moment(kappa, rho, lam, "true_loop")
    nf = bcle_nonsimple_moment(kappa, rho, lam, "false_loop")
    ccle = cle_nonsimple_moment(kappa, lam)
    return st, sf, nt, nf, ccle


def fixed_point_moment(kappa: float, rho: float, lam: float) -> MomentValue:
    """The blue-to-red moment assembled from its exploration decomposition.

    With E1 = nt * ccle + nf (the first exploration step), the full moment E
    satisfies E = f + g E where f = st * E1 and g = sf * E1, so E = f/(1 - g)
    whenever every ingredient is finite and g < 1; infinite otherwise.
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    _check_rho(kappa, rho)
    st, sf, nt, nf, ccle = _ingredients(kappa, rho, lam)
    if not (st.finite and sf.finite and nt.finite and nf.finite and ccle.finite):
        return MomentValue(False)
    e1 = nt.value * ccle.value + nf.value
    g = sf.value * e1
    if g >= 1.0:
        return MomentValue(False)
    return MomentValue(True, st.value * e1 / (1.0 - g))


@lru_cache(maxsize=None)
def general_rho_threshold(kappa: float, rho: float) -> float:
    """sup{lambda : g(lambda) = 1} for the exploration fixed point at this rho.

    g diverges as lambda approaches the carpet threshold from above and is
    below 1 at lambda = 0, so 60 bisection steps on g - 1 pin the crossing.
    At rho = 3 kappa/2 - 6 this reproduces lambda0 (to bisection accuracy).
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    _check_rho(kappa, rho)
    t_min = kappa / 8.0 + 1.5 / kappa - 1.0

    def g_minus_1(lam: float) -> float:
        _, sf, nt, nf, ccle = _ingredients(kappa, rho, lam)
        return sf.value * (nt.value * ccle.value + nf.value) - 1.0

    lo = t_min + 1e-9 * max(1.0, abs(t_min))
    hi = 0.0
    if not (g_minus_1(lo) > 0.0 > g_minus_1(hi)):
        raise RuntimeError(
            "no sign change for the fixed-point denominator on the bracket "
            f"({lo}, 0); kappa = {kappa}, rho = {rho}"
        )
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if g_minus_1(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def general_rho_moment(kappa: float, rho: float, lam: float) -> MomentValue:
    """Closed form of the exploration fixed point for arbitrary rho.

    Infinite for lambda at or below the rho-dependent threshold
    sup{lambda : g(lambda) = 1}; otherwise

        sin((2 pi/kappa)(kappa - rho - 4)) / sin((2 pi/kappa)(rho + 2)) *
        [sin(pi (kappa-2 rho-4)/4) sin((kappa+2 rho+4) theta/4)
             - sin(pi (kappa+2 rho-4)/4) sin((kappa-2 rho-4) theta/4)] /
        [sin(pi (kappa-2 rho-4)/4) sin((kappa+2 rho+8) theta/4)
             - sin(pi (kappa+2 rho-4)/4) sin((kappa-2 rho-8) theta/4)].
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    _check_rho(kappa, rho)
    if lam <= general_rho_threshold(kappa, rho):
        return MomentValue(False)
    theta = _theta(kappa, lam)
    s_minus = math.sin(math.pi * (kappa - 2.0 * rho - 4.0) / 4.0)
    s_plus = math.sin(math.pi * (kappa + 2.0 * rho - 4.0) / 4.0)
    pref = math.sin((2.0 * math.pi / kappa) * (kappa - rho - 4.0)) / math.sin(
        (2.0 * math.pi / kappa) * (rho + 2.0)
    )
    num = s_minus * cmath.sin((kappa + 2.0 * rho + 4.0) * theta / 4.0) - s_plus * cmath.sin(
        (kappa - 2.0 * rho - 4.0) * theta / 4.0
    )
    den = s_minus * cmath.sin((kappa + 2.0 * rho + 8.0) * theta / 4.0) - s_plus * cmath.sin(
        (kappa - 2.0 * rho - 8.0) * theta / 4.0
    )
    return MomentValue(True, pref * (num / den).real)


def _h0(kappa: float) -> float:
    """d theta / d lambda at lambda = 0, namely -4 pi / (4 - kappa)."""
    return -4.0 * math.pi / (4.0 - kappa)


def log_moment_r_to_b(kappa: float) -> float:
    """E[log R] for the red-to-blue interface: h(0) tan(4 pi / kappa)."""
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    return _h0(kappa) * math.tan(4.0 * math.pi / kappa)


def log_moment_b_to_r(kappa: float) -> float:
    """E[log R] for the blue-to-red interface.

    With x = kappa pi/2 and y = 4 pi/kappa:
    (1 / (-2 cos y)) * h(0) * (2 sin^2 y - kappa sin^2 x) / sin y.
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    x = kappa * math.pi / 2.0
    y = 4.0 * math.pi / kappa
    sx, sy = math.sin(x), math.sin(y)
    return _h0(kappa) * (2.0 * sy * sy - kappa * sx * sx) / (-2.0 * math.cos(y) * sy)


def c_kappa(kappa: float, method: str) -> float:
    """The universal constant relating the two interface loop measures.

    ``closed_form`` evaluates sqrt(kappa/2) sin(kappa pi/2) / sin(4 pi/kappa);
    ``from_logs`` evaluates sqrt(1 + E[log R_btr] / E[log R_rtb]).  The two
    agree to quadrature-free double precision across (8/3, 4).
    """
    _check_kappa(kappa, 8.0 / 3.0, 4.0)
    if method == "closed_form":
        return math.sqrt(kappa / 2.0) * math.sin(kappa * math.pi / 2.0) / math.sin(4.0 * math.pi / kappa)
    if method == "from_logs":
        log_rtb = log_moment_r_to_b(kappa)
        log_btr = log_moment_b_to_r(kappa)
        return math.sqrt(1.0 + log_btr / log_rtb)
    raise DomainError(f"method must be 'from_logs' or 'closed_form', got {method!r}")
