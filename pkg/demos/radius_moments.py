"""Walk the conformal-radius moment laws at one kappa.

Shows the normalization at lambda = 0, the finiteness thresholds, the
transcendental threshold lambda0 with its defining identity g(lambda0) = 1,
the equivalence of the three derivation routes, and the log-moment slopes.

Run:  python3 demos/radius_moments.py [kappa]
"""

import math
import sys

from pottsconn import radii


def main(kappa: float):
    rho = 1.5 * kappa - 6.0
    print(f"kappa = {kappa}, special rho = 3 kappa / 2 - 6 = {rho}")

    thr_rb = 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0
    thr_br = radii.lambda0(kappa)
    print(f"thresholds: r_to_b at {thr_rb:.10f}, b_to_r at lambda0 = {thr_br:.10f}")

    _, sf, nt, nf, ccle = radii._ingredients(kappa, rho, thr_br)
    g = sf.value * (nt.value * ccle.value + nf.value)
    print(f"defining identity at lambda0: g - 1 = {g - 1.0:+.2e}")

    print()
    print(f"{'lambda':>8}  {'r_to_b':>12}  {'b_to_r':>12}  {'fixed_point':>12}  {'general_rho':>12}")
    for lam in (thr_br - 0.01, thr_br + 0.01, 0.0, 0.25, 1.0, 2.5):
        cells = [f"{lam:8.4f}"]
        for law in (
            lambda: radii.moment_r_to_b(kappa, lam),
            lambda: radii.moment_b_to_r(kappa, lam),
            lambda: radii.fixed_point_moment(kappa, rho, lam),
            lambda: radii.general_rho_moment(kappa, rho, lam),
        ):
            m = law()
            cells.append(f"{m.value:12.8f}" if m.finite else f"{'infinite':>12}")
        print("  ".join(cells))

    print()
    h = 1e-6
    fd = (radii.moment_b_to_r(kappa, h).value - radii.moment_b_to_r(kappa, -h).value) / (2 * h)
    print(f"E[log R] b_to_r: closed form {radii.log_moment_b_to_r(kappa):.10f}, "
          f"finite difference {fd:.10f}")
    closed = radii.c_kappa(kappa, "closed_form")
    print(f"universal constant: closed form {closed:.12f}, "
          f"from logs {radii.c_kappa(kappa, 'from_logs'):.12f}")


if __name__ == "__main__":
    main(float(sys.argv[1]) if len(sys.argv) > 1 else 3.0)
