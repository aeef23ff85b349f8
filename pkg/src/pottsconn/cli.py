"""Command-line front end.

Subcommands cover the three table reproductions, pointwise formula
evaluation, the deterministic identity suite, and the lattice simulation.
Output formats: aligned text, CSV with a `#`-prefixed provenance header, or
a JSON object with fixed keys {schema_version, command, config, results,
residuals}.  All three echo the fully resolved configuration, never a
timestamp, so identical invocations produce identical bytes.

Exit codes: 0 success, 2 configuration error, 3 verification or convergence
failure, 4 insufficient Monte Carlo statistics.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import constants, radii, verify
from .errors import ConvergenceError, DomainError, InsufficientStatisticsError
from .golden import table1_reference, table2_reference
from .mc.observables import connectivity_ratio, default_triangle
from .mc.samplers import LatticeSim

SCHEMA_VERSION = "1"

_COMMANDS = (
    "table1",
    "table2",
    "dozz",
    "constant",
    "moments",
    "lambda0",
    "logs",
    "ckappa",
    "simulate",
    "verify",
)

_SCALAR = (str, int, float, bool, type(None))


def validate_output(obj: object) -> None:
    """Raise ValueError unless obj matches the emitted JSON schema."""
    if not isinstance(obj, dict):
        raise ValueError("top level must be an object")
    expected = {"schema_version", "command", "config", "results", "residuals"}
    if set(obj) != expected:
        raise ValueError(f"top-level keys must be exactly {sorted(expected)}")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"schema_version must be {SCHEMA_VERSION!r}")
    if obj["command"] not in _COMMANDS:
        raise ValueError(f"unknown command {obj['command']!r}")
    config = obj["config"]
    if not isinstance(config, dict):
        raise ValueError("config must be an object")
    for k, v in config.items():
        if not isinstance(k, str) or not isinstance(v, _SCALAR):
            raise ValueError(f"config entry {k!r} must map a string to a scalar")
    results = obj["results"]
    if not isinstance(results, list):
        raise ValueError("results must be a list")
    keys = None
    for row in results:
        if not isinstance(row, dict):
            raise ValueError("each result row must be an object")
        if keys is None:
            keys = list(row)
        elif list(row) != keys:
            raise ValueError("result rows must share one set of keys, in order")
        for k, v in row.items():
            if not isinstance(k, str) or not isinstance(v, _SCALAR):
                raise ValueError(f"result entry {k!r} must map a string to a scalar")
    residuals = obj["residuals"]
    if not isinstance(residuals, dict):
        raise ValueError("residuals must be an object")
    for k, v in residuals.items():
        if not isinstance(k, str) or not isinstance(v, (int, float)):
            raise ValueError("residuals must map strings to numbers")


# ------------------------------------------------------------- formatting

def _cell(v: object, spec: str | None) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and spec:
        return format(v, spec)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _render(
    command: str,
    config: dict,
    rows: list[dict],
    residuals: dict,
    fmt: str,
    text_formats: dict[str, str] | None = None,
) -> str:
    text_formats = text_formats or {}
    if fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "results": rows,
            "residuals": residuals,
        }
        validate_output(payload)
        return json.dumps(payload, indent=2) + "\n"

    header_lines = [f"# {k} = {_cell(v, None)}" for k, v in config.items()]
    header_lines.insert(0, f"# schema_version = {SCHEMA_VERSION}")
    header_lines.insert(1, f"# command = {command}")
    for k, v in residuals.items():
        header_lines.append(f"# residual {k} = {_cell(v, None)}")

    if fmt == "csv":
        buf = io.StringIO()
        for line in header_lines:
            buf.write(line + "\n")
        if rows:
            writer = csv.writer(buf, lineterminator="\n")
            cols = list(rows[0])
            writer.writerow(cols)
            for row in rows:
                writer.writerow([_cell(row[c], text_formats.get(c)) for c in cols])
        return buf.getvalue()

    # aligned text
    lines = list(header_lines)
    if rows:
        cols = list(rows[0])
        table = [[_cell(row[c], text_formats.get(c)) for c in cols] for row in rows]
        widths = [max(len(c), *(len(r[i]) for r in table)) for i, c in enumerate(cols)]
        lines.append("")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in table:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------- handlers

def run_table1() -> tuple[list[dict], dict]:
    """Recompute the 13-row (kappa, C, structure constant) table with diffs."""
    rows, worst = [], 0.0
    for ref in table1_reference():
        params = constants.ModelParams.from_q(ref.q)
        a0 = constants.alpha0(params.beta)
        kappa = constants.kappa_from_q(ref.q)
        c = constants.c_of_q(ref.q)
        dozz = constants.im_dozz(constants.DozzArgs(a0, a0, a0), params.beta)
        diff = max(
            abs(kappa - ref.kappa), abs(c - ref.c_of_q), abs(dozz - ref.im_dozz)
        )
        worst = max(worst, diff)
        rows.append(
            {"q": ref.q, "kappa": kappa, "c_of_q": c, "im_dozz": dozz, "max_abs_diff": diff}
        )
    return rows, {"max_abs_diff": worst}


def run_table2() -> tuple[list[dict], dict]:
    """Exact connectivity ratio per q against the quoted numerical estimates."""
    rows, worst_abs, worst_sigma = [], 0.0, 0.0
    for ref in table2_reference():
        exact = constants.r_constant(ref.q) / math.sqrt(ref.q)
        diff = abs(exact - ref.exact)
        # the q = 1 estimate is exact and quoted with zero uncertainty
        sigma = abs(exact - ref.ratio_num) / ref.ratio_err if ref.ratio_err > 0 else 0.0
        worst_abs = max(worst_abs, diff)
        worst_sigma = max(worst_sigma, sigma)
        rows.append(
            {
                "q": ref.q,
                "exact": exact,
                "estimate": ref.ratio_num,
                "uncertainty": ref.ratio_err,
                "abs_diff": diff,
                "within_3_sigma": sigma <= 3.0,
            }
        )
    return rows, {"max_abs_diff": worst_abs, "max_sigma_distance": worst_sigma}


def _resolve_model(args: argparse.Namespace) -> tuple[float, float]:
    """(q, kappa) from --q or --kappa, exactly one of which must be given."""
    if (args.q is None) == (args.kappa is None):
        raise DomainError("give exactly one of --q or --kappa")
    if args.q is not None:
        return args.q, constants.kappa_from_q(args.q)
    return constants.q_from_kappa(args.kappa), args.kappa


def _cmd_table1(args) -> tuple[dict, list[dict], dict, int]:
    rows, residuals = run_table1()
    return {}, rows, residuals, 0


def _cmd_table2(args) -> tuple[dict, list[dict], dict, int]:
    rows, residuals = run_table2()
    return {}, rows, residuals, 0


def _cmd_dozz(args):
    q, kappa = _resolve_model(args)
    beta = 2.0 / math.sqrt(kappa)
    a0 = constants.alpha0(beta)
    value = constants.im_dozz(constants.DozzArgs(a0, a0, a0), beta)
    config = {"q": q, "kappa": kappa}
    rows = [{"beta": beta, "alpha0": a0, "im_dozz": value}]
    return config, rows, {}, 0


def _cmd_constant(args):
    q, kappa = _resolve_model(args)
    r = constants.r_constant(q)
    rows = [
        {
            "c_of_q": constants.c_of_q(q),
            "r_constant": r,
            "ratio": r / math.sqrt(q),
        }
    ]
    return {"q": q, "kappa": kappa}, rows, {}, 0


def _cmd_moments(args):
    q, kappa = _resolve_model(args)
    if args.lam is None:
        raise DomainError("--lambda is required for the moments command")
    rho = args.rho if args.rho is not None else 1.5 * kappa - 6.0
    lam = args.lam
    laws = [
        ("r_to_b", radii.moment_r_to_b(kappa, lam), 2.0 / kappa + 3.0 * kappa / 32.0 - 1.0),
        ("b_to_r", radii.moment_b_to_r(kappa, lam), radii.lambda0(kappa)),
        (
            "cle_nonsimple",
            radii.cle_nonsimple_moment(kappa, lam),
            kappa / 8.0 + 1.5 / kappa - 1.0,
        ),
        (
            "bcle_simple_true",
            radii.bcle_simple_moment(kappa, rho, lam, "true_loop"),
            kappa / 8.0 - 1.0,
        ),
        (
            "bcle_simple_false",
            radii.bcle_simple_moment(kappa, rho, lam, "false_loop"),
            kappa / 8.0 - 1.0,
        ),
        (
            "bcle_nonsimple_true",
            radii.bcle_nonsimple_moment(kappa, rho, lam, "true_loop"),
            2.0 / kappa - 1.0,
        ),
        (
            "bcle_nonsimple_false",
            radii.bcle_nonsimple_moment(kappa, rho, lam, "false_loop"),
            2.0 / kappa - 1.0,
        ),
        (
            "fixed_point",
            radii.fixed_point_moment(kappa, rho, lam),
            radii.general_rho_threshold(kappa, rho),
        ),
        (
            "general_rho",
            radii.general_rho_moment(kappa, rho, lam),
            radii.general_rho_threshold(kappa, rho),
        ),
    ]
    rows = [
        {
            "law": name,
            "finite": m.finite,
            "value": m.value if m.finite else None,
            "threshold": thr,
        }
        for name, m, thr in laws
    ]
    config = {"q": q, "kappa": kappa, "rho": rho, "lambda": lam}
    return config, rows, {}, 0


def _cmd_lambda0(args):
    q, kappa = _resolve_model(args)
    if args.rho is not None:
        rho = args.rho
        threshold = radii.general_rho_threshold(kappa, rho)
    else:
        rho = 1.5 * kappa - 6.0
        threshold = radii.lambda0(kappa)
    _, sf, nt, nf, ccle = radii._ingredients(kappa, rho, threshold)
    g = sf.value * (nt.value * ccle.value + nf.value)
    rows = [{"rho": rho, "threshold": threshold}]
    return {"q": q, "kappa": kappa, "rho": rho}, rows, {"g_minus_1": abs(g - 1.0)}, 0


def _cmd_logs(args):
    q, kappa = _resolve_model(args)
    rows = [
        {
            "log_moment_r_to_b": radii.log_moment_r_to_b(kappa),
            "log_moment_b_to_r": radii.log_moment_b_to_r(kappa),
        }
    ]
    return {"q": q, "kappa": kappa}, rows, {}, 0


def _cmd_ckappa(args):
    q, kappa = _resolve_model(args)
    closed = radii.c_kappa(kappa, "closed_form")
    from_logs = radii.c_kappa(kappa, "from_logs")
    via_q = constants.c_of_q(q)
    spread = max(abs(closed - from_logs), abs(closed - via_q))
    rows = [{"closed_form": closed, "from_logs": from_logs, "c_of_q": via_q}]
    return {"q": q, "kappa": kappa}, rows, {"method_spread": spread}, 0


def _cmd_verify(args):
    results = verify.run_all_checks()
    rows = [
        {
            "check": r.name,
            "passed": r.passed,
            "residual": r.residual,
            "tolerance": r.tolerance,
            "detail": r.detail,
        }
        for r in results
    ]
    residuals = {r.name: r.residual for r in results}
    failed = [r.name for r in results if not r.passed]
    return {"checks": len(results), "failed": len(failed)}, rows, residuals, 3 if failed else 0


def _cmd_simulate(args):
    if args.q is None:
        raise DomainError("--q is required for the simulate command")
    sim = LatticeSim(
        L=args.L,
        q=args.q,
        boundary=args.boundary,
        sweeps=args.sweeps,
        thermalization=args.thermalization,
        seed=args.seed,
        batch_count=args.batches,
    )
    points = default_triangle(args.side, args.L)
    result = connectivity_ratio(sim, points, sampler=args.sampler)
    # the red-cluster ratio estimates R(q); dividing by sqrt(q) converts to
    # the undistinguished-spin normalization of the published estimates,
    # since a distinguished-color connection probability is exactly 1/q of
    # the any-color one
    prediction = constants.r_constant(args.q) / math.sqrt(args.q)
    sq = math.sqrt(args.q)
    normalized = result.ratio.mean / sq
    normalized_err = result.ratio.stderr / sq
    abs_err = abs(normalized - prediction)
    sigma = abs_err / normalized_err if normalized_err > 0 else (
        0.0 if abs_err == 0.0 else math.inf
    )

    rows = [
        {"name": "ratio", "value": result.ratio.mean, "stderr": result.ratio.stderr},
        {"name": "ratio_per_sqrt_q", "value": normalized, "stderr": normalized_err},
        {"name": "p3", "value": result.p3.mean, "stderr": result.p3.stderr},
        {"name": "p2_12", "value": result.p2_12.mean, "stderr": result.p2_12.stderr},
        {"name": "p2_23", "value": result.p2_23.mean, "stderr": result.p2_23.stderr},
        {"name": "p2_13", "value": result.p2_13.mean, "stderr": result.p2_13.stderr},
        {"name": "prediction", "value": prediction, "stderr": None},
        {"name": "discrepancy_sigma", "value": sigma, "stderr": None},
    ]
    for key, tau in result.tau_int.items():
        rows.append({"name": f"tau_int_{key}", "value": tau, "stderr": None})

    config = {
        "q": sim.q,
        "L": sim.L,
        "boundary": sim.boundary,
        "sampler": args.sampler,
        "p": sim.p,
        "r": sim.r,
        "sweeps": sim.sweeps,
        "thermalization": sim.thermalization,
        "batches": sim.batch_count,
        "seed": sim.seed,
        "points": ";".join(f"({x},{y})" for x, y in result.points),
    }
    if args.dump_batches:
        with open(args.dump_batches, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["batch_index", "p3", "p2_12", "p2_23", "p2_13"])
            for i, row in enumerate(result.batch_means):
                writer.writerow([i] + [repr(float(v)) for v in row])
    residuals = {"abs_error": abs_err, "discrepancy_sigma": sigma}
    return config, rows, residuals, 0


_TEXT_FORMATS = {
    "table1": {"q": ".2f", "kappa": ".6f", "c_of_q": ".6f", "im_dozz": ".6f", "max_abs_diff": ".3e"},
    "table2": {
        "q": ".2f",
        "exact": ".6f",
        "estimate": ".6f",
        "uncertainty": ".6f",
        "abs_diff": ".3e",
    },
    "verify": {"residual": ".3e", "tolerance": ".3e"},
}

_HANDLERS = {
    "table1": _cmd_table1,
    "table2": _cmd_table2,
    "dozz": _cmd_dozz,
    "constant": _cmd_constant,
    "moments": _cmd_moments,
    "lambda0": _cmd_lambda0,
    "logs": _cmd_logs,
    "ckappa": _cmd_ckappa,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pottsconn",
        description="Exact three-point connectivity of critical Potts spin "
        "clusters: tables, formula evaluation, identity checks, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--format", choices=("csv", "json", "text"), default="text")
        sp.add_argument("--out", metavar="PATH", default=None)

    def add_model(sp):
        sp.add_argument("--q", type=float, default=None, help="Potts q in [1, 4]")
        sp.add_argument("--kappa", type=float, default=None, help="SLE kappa in [8/3, 4]")

    for name, blurb in (
        ("table1", "couplings and structure constants for the 13 reference q values"),
        ("table2", "exact connectivity ratio against quoted numerical estimates"),
        ("verify", "run every deterministic identity check"),
    ):
        sp = sub.add_parser(name, help=blurb)
        add_common(sp)

    for name, blurb in (
        ("dozz", "structure constant at the triple charge alpha0"),
        ("constant", "C(q), R(q), and the normalized ratio R(q)/sqrt(q)"),
        ("logs", "closed-form log-moments of both conformal radii"),
        ("ckappa", "the universal constant by both routes"),
    ):
        sp = sub.add_parser(name, help=blurb)
        add_model(sp)
        add_common(sp)

    sp = sub.add_parser("moments", help="every conformal-radius moment law at one point")
    add_model(sp)
    sp.add_argument("--lambda", dest="lam", type=float, default=None, help="moment order")
    sp.add_argument("--rho", type=float, default=None, help="BCLE boundary weight")
    add_common(sp)

    sp = sub.add_parser("lambda0", help="moment-finiteness threshold")
    add_model(sp)
    sp.add_argument("--rho", type=float, default=None, help="BCLE boundary weight")
    add_common(sp)

    sp = sub.add_parser("simulate", help="desk-scale connectivity-ratio measurement")
    sp.add_argument("--q", type=float, default=None, help="Potts q in [1, 4]")
    sp.add_argument("--L", type=int, default=128, help="linear lattice size")
    sp.add_argument("--side", type=int, default=16, help="probe triangle side")
    sp.add_argument("--sweeps", type=int, default=200_000)
    sp.add_argument("--thermalization", type=int, default=20_000)
    sp.add_argument("--batches", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--boundary", choices=("periodic", "free"), default="periodic")
    sp.add_argument("--sampler", choices=("cm", "sw"), default="cm")
    sp.add_argument("--dump-batches", metavar="PATH", default=None)
    add_common(sp)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        config, rows, residuals, code = handler(args)
    except DomainError as exc:
        print(f"pottsconn: configuration error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"pottsconn: convergence failure: {exc}", file=sys.stderr)
        return 3
    except InsufficientStatisticsError as exc:
        print(f"pottsconn: insufficient statistics: {exc}", file=sys.stderr)
        return 4
    text = _render(
        args.command,
        config,
        rows,
        residuals,
        args.format,
        _TEXT_FORMATS.get(args.command),
    )
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
