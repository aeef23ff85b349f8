"""Tests for the conformal-radius moment laws and derived constants.

The lambda0 oracle below is a fresh transcription of the defining
transcendental equation, solved by brute scan plus bisection, sharing no code
with the library's root finder.  Everything else leans on structural
identities: zeroth moments, partition sums, derivative checks, and the
equivalence of the three routes to the blue-to-red moment.
"""

import math

import numpy as np
import pytest

from pottsconn.errors import DomainError
from pottsconn.radii import (
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
from pottsconn.constants import c_of_q, kappa_from_q

KAPPA_GRID = [2.75, 2.9, 3.0, 10.0 / 3.0, 3.6, 3.9]


def lambda0_oracle(kappa, n_scan=1_000_000):
    """Scan-and-bisect solution of the threshold equation.

    -lambda0 = x solves sin(a*s) + 2*cos(c)*sin(b*s) = 0 with
    s = sqrt((4-kappa)^2 + 8*kappa*x), a = pi*(kappa-1)/kappa,
    b = pi*(2-kappa)/(2*kappa), c = pi*(4-kappa)/2, on the open interval
    x in (0, 1 - kappa/8 - 3/(2*kappa)).  Asserts the sign change is unique
    on the scan grid before refining it.
    """
    a = math.pi * (kappa - 1.0) / kappa
    b = math.pi * (2.0 - kappa) / (2.0 * kappa)
    c = math.pi * (4.0 - kappa) / 2.0
    upper = 1.0 - kappa / 8.0 - 1.5 / kappa

    def h(x):
        s = np.sqrt((4.0 - kappa) ** 2 + 8.0 * kappa * x)
        return np.sin(a * s) + 2.0 * math.cos(c) * np.sin(b * s)

    xs = np.linspace(upper * 1e-9, upper * (1.0 - 1e-9), n_scan)
    vals = h(xs)
    flips = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    assert flips.size == 1, f"expected a unique sign change, found {flips.size}"
    lo, hi = xs[flips[0]], xs[flips[0] + 1]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if h(lo) * h(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    return -0.5 * (lo + hi)


class TestLambda0:
    def test_against_scan_oracle(self):
        for kappa in (2.8, 3.0, 3.2, 3.7):
            assert abs(lambda0(kappa) - lambda0_oracle(kappa)) < 1e-9, kappa

    def test_kappa_3_rational_value(self):
        assert abs(lambda0(3.0) - (-5.0 / 96.0)) < 1e-12

    def test_inside_stated_interval(self):
        for kappa in KAPPA_GRID:
            lam = lambda0(kappa)
            assert -(1.0 - kappa / 8.0 - 1.5 / kappa) < lam < 0.0, kappa

    def test_matches_general_rho_threshold(self):
        for kappa in (2.8, 3.0, 3.3, 3.9):
            thr = general_rho_threshold(kappa, 1.5 * kappa - 6.0)
            assert abs(thr - lambda0(kappa)) < 1e-12, kappa


class TestZerothMoments:
    def test_all_laws_return_one(self):
        for kappa in KAPPA_GRID:
            for mv in (
                moment_r_to_b(kappa, 0.0),
                moment_b_to_r(kappa, 0.0),
                cle_nonsimple_moment(kappa, 0.0),
            ):
                assert mv.finite and abs(mv.value - 1.0) < 1e-12, kappa
            for frac in (0.2, 0.5, 0.8):
                rho = -2.0 + frac * (kappa - 2.0)
                for mv in (
                    general_rho_moment(kappa, rho, 0.0),
                    fixed_point_moment(kappa, rho, 0.0),
                ):
                    assert mv.finite and abs(mv.value - 1.0) < 1e-12, (kappa, rho)

    def test_partition_sums(self):
        for kappa in KAPPA_GRID:
            for frac in (0.25, 0.5, 0.75):
                rho = -2.0 + frac * (kappa - 2.0)
                for law in (bcle_simple_moment, bcle_nonsimple_moment):
                    t = law(kappa, rho, 0.0, "true_loop")
                    f = law(kappa, rho, 0.0, "false_loop")
                    assert t.finite and f.finite
                    assert 0.0 < t.value < 1.0 and 0.0 < f.value < 1.0
                    assert abs(t.value + f.value - 1.0) < 1e-10, (kappa, rho)


class TestThresholds:
    def test_r_to_b_flip(self):
        for kappa in KAPPA_GRID:
            thr = 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0
            assert not moment_r_to_b(kappa, thr).finite
            assert not moment_r_to_b(kappa, thr - 1e-6).finite
            assert moment_r_to_b(kappa, thr + 1e-6).finite

    def test_b_to_r_flip_at_lambda0(self):
        for kappa in KAPPA_GRID:
            lam = lambda0(kappa)
            assert not moment_b_to_r(kappa, lam - 1e-6).finite
            assert moment_b_to_r(kappa, lam + 1e-6).finite

    def test_bcle_flips(self):
        for kappa in (2.8, 3.0, 3.5):
            rho = -2.0 + 0.4 * (kappa - 2.0)
            thr_simple = kappa / 8.0 - 1.0
            thr_nonsimple = 2.0 / kappa - 1.0
            for ev in ("true_loop", "false_loop"):
                assert not bcle_simple_moment(kappa, rho, thr_simple, ev).finite
                assert bcle_simple_moment(kappa, rho, thr_simple + 1e-6, ev).finite
                assert not bcle_nonsimple_moment(kappa, rho, thr_nonsimple, ev).finite
                assert bcle_nonsimple_moment(kappa, rho, thr_nonsimple + 1e-6, ev).finite

    def test_cle_flip(self):
        for kappa in KAPPA_GRID:
            thr = kappa / 8.0 + 1.5 / kappa - 1.0
            assert not cle_nonsimple_moment(kappa, thr).finite
            assert cle_nonsimple_moment(kappa, thr + 1e-6).finite

    def test_kappa_3_cle_threshold_value(self):
        assert abs((3.0 / 8.0 + 0.5 - 1.0) - (-0.125)) == 0.0
        assert not cle_nonsimple_moment(3.0, -0.125).finite


class TestMomentValues:
    def test_sign_and_unit_bounds(self):
        for kappa in KAPPA_GRID:
            thr = 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0
            for lam in np.linspace(thr + 0.01, 2.5, 12):
                mv = moment_r_to_b(kappa, float(lam))
                assert mv.finite and mv.value > 0.0
                if lam <= 0.0:
                    assert mv.value >= 1.0
                else:
                    assert mv.value <= 1.0

    def test_monotone_decreasing_in_lambda(self):
        checks = (
            (lambda lam: moment_r_to_b(3.0, lam), lambda0(3.0)),
            (lambda lam: moment_b_to_r(3.0, lam), lambda0(3.0)),
            (lambda lam: cle_nonsimple_moment(3.0, lam), -0.125),
            (lambda lam: general_rho_moment(3.0, -1.2, lam), general_rho_threshold(3.0, -1.2)),
        )
        for law, thr in checks:
            vals = [law(float(lam)).value for lam in np.linspace(thr + 0.01, 2.0, 15)]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_r_to_b_bracket_example(self):
        m = lambda lam: moment_r_to_b(3.0, lam).value
        assert m(0.5) > m(1.0) > m(2.0)

    def test_infinite_carries_nan(self):
        mv = moment_r_to_b(3.0, -1.0)
        assert not mv.finite and math.isnan(mv.value)


class TestDerivationChain:
    def test_three_routes_agree_at_special_rho(self):
        for kappa in (2.8, 3.0, 3.4, 3.9):
            rho = 1.5 * kappa - 6.0
            for lam in (0.1, 0.5, 1.0, 2.0):
                a = fixed_point_moment(kappa, rho, lam).value
                b = general_rho_moment(kappa, rho, lam).value
                c = moment_b_to_r(kappa, lam).value
                assert abs(a - b) < 1e-9 * abs(b), (kappa, lam)
                assert abs(a - c) < 1e-9 * abs(c), (kappa, lam)

    def test_fixed_point_matches_general_rho_off_special(self):
        # the right edge of the rho window is open; -1 at kappa = 3 sits on it
        for kappa, rho, lam in ((3.0, -1.05, 0.7), (3.5, -0.8, 0.3), (2.9, -1.7, 1.4)):
            a = fixed_point_moment(kappa, rho, lam).value
            b = general_rho_moment(kappa, rho, lam).value
            assert abs(a - b) < 1e-9 * abs(b), (kappa, rho, lam)

    def test_fixed_point_denominator_at_threshold(self):
        from pottsconn.radii import _ingredients

        for kappa in (2.8, 3.3, 3.9):
            lam = lambda0(kappa)
            st, sf, nt, nf, ccle = _ingredients(kappa, 1.5 * kappa - 6.0, lam)
            g = sf.value * (nt.value * ccle.value + nf.value)
            assert abs(g - 1.0) < 1e-8, kappa


class TestLogMoments:
    def test_kappa_3_closed_values(self):
        ref = -4.0 * math.sqrt(3.0) * math.pi
        assert abs(log_moment_r_to_b(3.0) - ref) < 1e-12 * abs(ref)
        assert abs(log_moment_b_to_r(3.0) - ref) < 1e-10 * abs(ref)

    def test_negative_on_grid(self):
        for kappa in np.linspace(2.7, 3.99, 50):
            assert log_moment_r_to_b(float(kappa)) < 0.0
            assert log_moment_b_to_r(float(kappa)) < 0.0

    def test_finite_difference(self):
        h = 1e-6
        for kappa in (2.8, 3.0, 10.0 / 3.0, 3.5, 3.9):
            fd = (moment_r_to_b(kappa, h).value - moment_r_to_b(kappa, -h).value) / (2 * h)
            ref = log_moment_r_to_b(kappa)
            assert abs(fd - ref) < 1e-4 * abs(ref), kappa
            fd = (moment_b_to_r(kappa, h).value - moment_b_to_r(kappa, -h).value) / (2 * h)
            ref = log_moment_b_to_r(kappa)
            assert abs(fd - ref) < 1e-4 * abs(ref), kappa


class TestCKappa:
    def test_methods_agree(self):
        for kappa in np.linspace(2.68, 3.99, 50):
            a = c_kappa(float(kappa), "from_logs")
            b = c_kappa(float(kappa), "closed_form")
            assert abs(a - b) < 1e-9 * abs(b), kappa

    def test_matches_c_of_q(self):
        for q in (1.3, 2.0, 2.6, 3.0, 3.8):
            kappa = kappa_from_q(q)
            assert abs(c_kappa(kappa, "closed_form") - c_of_q(q)) < 1e-9 * c_of_q(q)

    def test_kappa_3_is_sqrt2(self):
        assert abs(c_kappa(3.0, "closed_form") - math.sqrt(2.0)) < 1e-12

    def test_window_limits(self):
        assert abs(c_kappa(8.0 / 3.0 + 1e-9, "closed_form") - 1.0) < 1e-6
        assert abs(c_kappa(4.0 - 1e-9, "closed_form") - 2.0 * math.sqrt(2.0)) < 1e-5


class TestContinuationSeam:
    def test_no_jump_across_radicand_zero(self):
        # theta turns imaginary at lam* = (4-kappa)^2/(8*kappa); the even
        # dependence on theta makes every law smooth through the seam
        for kappa in (2.8, 3.0, 3.4, 3.9):
            lam_star = (4.0 - kappa) ** 2 / (8.0 * kappa)
            # small enough that the smooth slope (up to ~60 near kappa = 4)
            # contributes well under the jump bound
            d = 2e-11
            for law in (
                lambda l: moment_r_to_b(kappa, l).value,
                lambda l: moment_b_to_r(kappa, l).value,
                lambda l: cle_nonsimple_moment(kappa, l).value,
            ):
                assert abs(law(lam_star + d) - law(lam_star - d)) < 1e-8, kappa


class TestDomains:
    def test_kappa_windows(self):
        for bad in (2.5, 8.0 / 3.0, 4.0, 4.3):
            with pytest.raises(DomainError):
                moment_r_to_b(bad, 0.5)
            with pytest.raises(DomainError):
                lambda0(bad)
            with pytest.raises(DomainError):
                c_kappa(bad, "closed_form")
        # the bcle laws admit the wider window (2, 4)
        assert bcle_simple_moment(2.5, -1.7, 0.0, "true_loop").finite
        with pytest.raises(DomainError):
            bcle_simple_moment(2.0, -1.7, 0.0, "true_loop")

    def test_rho_window(self):
        for bad_rho in (-2.0, -2.5, 3.0 - 4.0, 0.0):
            with pytest.raises(DomainError):
                general_rho_moment(3.0, bad_rho, 0.5)

    def test_bad_event_and_method(self):
        with pytest.raises(DomainError):
            bcle_simple_moment(3.0, -1.5, 0.0, "maybe_loop")
        with pytest.raises(DomainError):
            c_kappa(3.0, "guesswork")
