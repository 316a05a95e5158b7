"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 quadrature or argument
validation failure, 3 I/O failure, 4 U outside its admissible bound,
5 evaluation outside the ladder table.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import verify as V
from .config import DEFAULT, RunConfig
from .errors import (BoundViolation, QuadratureError, RangeError, SpacingError,
                     TableFormatError, ToleranceError, ZladError)
from .ladder import build_table, load_table, save_table
from .signals import Schedule, ScheduleMode, SignalSpec, schedule
from .transform import TransformReport, z_transform
from .zeta import Backend, local_spectrum, z, z_euler_maclaurin, z_riemann_siegel

EXIT_OK, EXIT_VERIFY, EXIT_QUAD, EXIT_IO, EXIT_UBOUND, EXIT_RANGE = 0, 1, 2, 3, 4, 5
TABLE_ENV = "ZLAD_TABLE"


def _config(args) -> RunConfig:
    changes = {}
    for name in ("kappa", "u_kappa", "z_floor", "rho", "c0", "k_max", "l_bar0"):
        value = getattr(args, name, None)
        if value is not None:
            changes[name] = value
    return DEFAULT.replace(**changes)


def _table(args):
    path = args.table or os.environ.get(TABLE_ENV)
    if not path:
        raise FileNotFoundError(f"no table given; pass --table or set {TABLE_ENV}")
    return load_table(path)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


# ----------------------------------------------------------------- commands ----

def cmd_build_table(args) -> int:
    if args.t_max < DEFAULT.t_floor or args.t_max < 1e3:
        print(f"error: --t-max {args.t_max:g} is below the table floor "
              f"(t_floor={DEFAULT.t_floor:g}, minimum t_max=1000)", file=sys.stderr)
        return EXIT_QUAD
    start = time.perf_counter()
    table = build_table(args.t_max, args.grid_step, args.c0)
    save_table(table, args.out)
    elapsed = time.perf_counter() - start
    print(f"rows={table.rows} t=[{table.t_floor:g}, {table.t_max:g}] "
          f"build_time={elapsed:.1f}s digest={table.digest} -> {args.out}")
    return EXIT_OK


def cmd_eval_z(args) -> int:
    out = []
    for t in V.parse_list(args.t):
        if args.backend == "em":
            ev = z_euler_maclaurin(t)
        elif args.backend == "rs":
            ev = z_riemann_siegel(t, args.n_corrections)
        else:
            ev = z(t, n_corrections=args.n_corrections)
        out.append(ev)
    if args.json:
        data = [{"t": e.t, "z": e.z, "theta": e.theta, "backend": e.backend.value,
                 "err_bound": e.err_bound} for e in out]
        print(json.dumps(data, indent=2))
    else:
        print("t,z,theta,backend,err_bound")
        for e in out:
            print(f"{e.t:.15g},{e.z:.15g},{e.theta:.15g},{e.backend.value},{e.err_bound:.3g}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    spec = local_spectrum(args.x, x_min=args.x_min, omega_mode=args.spectral_omega)
    lines = [f"# spectrum x={spec.x:.15g} tau={spec.tau:.15g} psi={spec.psi:.15g} "
             f"window={spec.window:.15g} remainder_bound={spec.remainder_bound:.6g} "
             f"omega={spec.omega_mode}", "n,amplitude,omega"]
    for n, amp, om in spec.oscillators():
        lines.append(f"{n},{amp:.15g},{om:.15g}")
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_transform(args) -> int:
    cfg = _config(args)
    table = _table(args)
    signal = SignalSpec.parse(args.f)
    report = z_transform(table, signal, args.T, args.U, args.k, cfg,
                         well_conditioned=args.well_conditioned)
    if args.csv:
        text = ",".join(TransformReport.CSV_FIELDS) + "\n"
        text += ",".join("" if v is None else (f"{v:.15g}" if isinstance(v, float) else str(v))
                         for v in report.csv_row()) + "\n"
        _write(args.csv, text)
    if args.json or not args.csv:
        _write(args.json, report.to_json() + "\n")
    return EXIT_OK


def _finish(sweeps, out_dir: str | None) -> int:
    for sw in sweeps:
        print(sw.summary())
        if out_dir:
            _write(os.path.join(out_dir, f"verify-{sw.mode}.csv"), sw.to_csv())
    if out_dir:
        summary = {sw.mode: {"passed": sw.passed,
                             "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                        for c in sw.checks]} for sw in sweeps}
        _write(os.path.join(out_dir, "verify-summary.json"),
               json.dumps(summary, indent=2, sort_keys=False) + "\n")
    return EXIT_OK if all(sw.passed for sw in sweeps) else EXIT_VERIFY


def cmd_verify(args) -> int:
    cfg = _config(args)
    mode = args.mode
    if mode == "spectral":
        return _finish([V.verify_spectral(V.parse_list(args.x_list), args.c_sp)], args.out_dir)
    table = _table(args)
    if mode == "power":
        sw = V.verify_power(table, V.parse_list(args.deltas), V.parse_list(args.T_list),
                            args.U, args.k, cfg)
    elif mode == "shifted":
        sw = V.verify_shifted(table, args.delta, args.L, V.parse_sweep(args.U_sweep), args.k, cfg)
    elif mode == "gaps":
        lo, hi = V.parse_list(args.band)
        sw = V.verify_gaps(table, args.T, args.k, args.U, SignalSpec.parse(args.f),
                           (lo, hi), args.pi == "exact", cfg)
    elif mode == "complementarity":
        lo, hi = V.parse_list(args.band)
        sw = V.verify_complementarity(table, V.parse_list(args.T_list), (lo, hi))
    else:
        return _finish(V.default_suite(table, cfg), args.out_dir)
    return _finish([sw], args.out_dir)


def cmd_schedule(args) -> int:
    if args.mode == ScheduleMode.INTEGER_LADDER.value:
        sched = schedule(args.mode, L=args.L, a=args.a, count=args.count, l_bar0=args.l_bar0)
    else:
        sched = schedule(args.mode, L=V.parse_list(args.L_list), a=V.parse_list(args.a_list),
                         l_bar0=args.l_bar0)
    _write(args.out, sched.to_csv())
    print(f"# {'periodic' if sched.periodic else 'aperiodic'}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------- parser ----

def _common(p, table=True):
    if table:
        p.add_argument("--table", help=f"ladder table path (default: ${TABLE_ENV})")
    p.add_argument("--kappa", type=float)
    p.add_argument("--u-kappa", dest="u_kappa", type=float)
    p.add_argument("--z-floor", dest="z_floor", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zlad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-table", help="build and cache the ladder table")
    p.add_argument("--t-max", dest="t_max", type=float, required=True)
    p.add_argument("--grid-step", dest="grid_step", type=float, default=DEFAULT.grid_step)
    p.add_argument("--c0", type=float, default=DEFAULT.c0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_table)

    p = sub.add_parser("eval-z", help="evaluate Z(t)")
    p.add_argument("--t", required=True, help="comma-separated heights")
    p.add_argument("--backend", choices=("auto", "em", "rs"), default="auto")
    p.add_argument("--n-corrections", dest="n_corrections", type=int,
                   default=DEFAULT.n_corrections)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval_z)

    p = sub.add_parser("spectrum", help="local oscillator spectrum at x")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--x-min", dest="x_min", type=float, default=1e3)
    p.add_argument("--spectral-omega", dest="spectral_omega", choices=("log", "raw"),
                   default="log")
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("transform", help="run the transformation for one signal")
    p.add_argument("--f", required=True, help="const | pow:<delta> | shifted:<delta>:<L>")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--U", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--csv", help="write a CSV row here ('-' for stdout)")
    p.add_argument("--well-conditioned", dest="well_conditioned", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="verification sweeps")
    vsub = p.add_subparsers(dest="mode", required=True)
    q = vsub.add_parser("power")
    q.add_argument("--deltas", default="-1,-0.5,0,2,1000")
    q.add_argument("--T-list", dest="T_list", default="1e4,1e5")
    q.add_argument("--U", type=float, default=0.4)
    q.add_argument("--k", type=int, default=2)
    q = vsub.add_parser("shifted")
    q.add_argument("--delta", type=float, default=1.0)
    q.add_argument("--L", type=float, default=1e5)
    q.add_argument("--U-sweep", dest="U_sweep", default="0.05:0.5:0.05")
    q.add_argument("--k", type=int, default=1)
    q = vsub.add_parser("gaps")
    q.add_argument("--T", type=float, default=1e5)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--U", type=float, default=0.5)
    q.add_argument("--f", default="pow:2")
    q.add_argument("--band", default="0.85,1.15")
    q.add_argument("--pi", choices=("asymptotic", "exact"), default="asymptotic")
    q = vsub.add_parser("complementarity")
    q.add_argument("--T-list", dest="T_list", default="1e4,2e4,5e4,1e5,1.9e5")
    q.add_argument("--band", default="0.85,1.15")
    q = vsub.add_parser("spectral")
    q.add_argument("--x-list", dest="x_list", default="1e3,1e4,1e5")
    q.add_argument("--c-sp", dest="c_sp", type=float, default=V.C_SP)
    vsub.add_parser("all")
    for q in vsub.choices.values():
        _common(q)
        q.add_argument("--out-dir", dest="out_dir", help="directory for per-run CSV output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("schedule", help="emit an (L_n, a_n) schedule")
    p.add_argument("--mode", choices=[m.value for m in ScheduleMode],
                   default=ScheduleMode.INTEGER_LADDER.value)
    p.add_argument("--L", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--L-list", dest="L_list")
    p.add_argument("--a-list", dest="a_list")
    p.add_argument("--l-bar0", dest="l_bar0", type=float, default=DEFAULT.l_bar0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule)
    return parser


# list-valued options whose values may start with '-' (e.g. --deltas -1,0,2)
LIST_OPTIONS = ("--deltas", "--T-list", "--x-list", "--L-list", "--a-list", "--U-sweep", "--t")


def _glue_list_values(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for arg in it:
        if arg in LIST_OPTIONS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_list_values(argv))
    try:
        return args.func(args)
    except BoundViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UBOUND
    except RangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (QuadratureError, ToleranceError, SpacingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUAD
    except (OSError, TableFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ZladError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUAD


if __name__ == "__main__":
    sys.exit(main())
