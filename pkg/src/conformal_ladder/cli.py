"""Command-line front end: ``conformal-ladder run all``, ``conformal-ladder table spectrum`` ..."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .conformal_geometry import SingularMapError, gc_inverse, gc_map, omega, scaled_map, tube_classify
from .modular_thermo import (
    ConvergenceError,
    ThermoParams,
    eisenstein,
    mean_energy_series,
    modular_covariance_residual,
    partition_Z,
    planck_rows,
    stefan_boltzmann,
)
from .suites import (
    OUTPUTS,
    SUITES,
    TABLES,
    ConfigError,
    SuiteConfig,
    emit_table,
    jsonable,
    render_report,
    render_rows,
    run_suite,
    write_output,
)
from .vertex import TWO_POINT_Z1, ConvergenceError as VertexConvergenceError
from .vertex import two_point_vev, vertex_norm_sq


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--e-max", type=int, default=8, help="Fock-space cutoff (maximal conformal energy)")
    p.add_argument("--series-order", type=int, default=200, help="q-series truncation order")
    p.add_argument(
        "--tolerance", type=float, default=1e-10,
        help="threshold for roundoff-level checks without a fixed acceptance tolerance",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for sampled properties")
    p.add_argument("--output", choices=OUTPUTS, default="json")
    p.add_argument("--out-file", default=None, metavar="PATH")
    p.add_argument("--no-timing", action="store_true", help="drop timing fields (byte-stable output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conformal-ladder", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a verification suite")
    p.add_argument("suite_name", nargs="?", default=None, help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("--suite", dest="suite_flag", default=None)
    _common(p)

    p = sub.add_parser("table", help="emit a data table")
    p.add_argument("kind", choices=TABLES)
    p.add_argument("--helicity", type=int, default=None, help="spectrum: restrict to one helicity")
    p.add_argument("--k-max", type=int, default=8, help="h_polynomials: largest k")
    p.add_argument("--R", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=20)
    _common(p)

    p = sub.add_parser("qseries", help="emit Z, mean energy or Eisenstein coefficients")
    p.add_argument("which", choices=("Z", "mean-energy", "G"))
    p.add_argument("--weight", type=int, default=4)
    _common(p)

    p = sub.add_parser("modular-check", help="modular covariance residual of G_2k")
    p.add_argument("--weight", type=int, default=4)
    p.add_argument("--tau", type=complex, default=2j, help="e.g. 0.3+1.1j")
    p.add_argument("--gamma", type=int, nargs=4, default=(0, -1, 1, 0), metavar=("A", "B", "C", "D"))
    p.add_argument("--order", type=int, default=600)
    _common(p)

    p = sub.add_parser("planck", help="per-mode Planck table, total and Stefan-Boltzmann ratio")
    p.add_argument("--R", type=float, default=10.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=20)
    _common(p)

    p = sub.add_parser("geometry", help="classify a compact-picture point or map a Minkowski point")
    p.add_argument("action", choices=("classify", "map", "inverse", "scaled"))
    p.add_argument("coords", type=complex, nargs=4)
    p.add_argument("--R", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("vertex-scan", help="two-point and norm residuals over a grid of |z2|")
    p.add_argument("--radii", type=float, nargs="+", default=[0.05, 0.1, 0.2, 0.3])
    p.add_argument("--direction", type=complex, nargs=4, default=(0.6, 0, 0, 0.8))
    _common(p)
    return parser


def _config(args, suite: str = "all") -> SuiteConfig:
    return SuiteConfig(
        suite=suite,
        e_max=args.e_max,
        series_order=args.series_order,
        tolerance=args.tolerance,
        seed=args.seed,
        output=args.output,
    ).validate()


def _emit_rows(rows, args) -> None:
    write_output(render_rows(rows, args.output), args.out_file, sys.stdout.write)


def _cmd_run(args) -> int:
    if args.suite_name and args.suite_flag and args.suite_name != args.suite_flag:
        raise ConfigError("conflicting suite names")
    cfg = _config(args, args.suite_flag or args.suite_name or "all")
    report = run_suite(cfg)
    write_output(render_report(report, cfg.output, timing=not args.no_timing), args.out_file, sys.stdout.write)
    return report.exit_code


def _cmd_table(args) -> int:
    cfg = _config(args)
    kw = {}
    if args.kind == "spectrum":
        kw["helicity"] = args.helicity
    elif args.kind == "h_polynomials":
        kw["k_max"] = args.k_max
    elif args.kind == "planck_modes":
        kw["params"] = ThermoParams(R=args.R, beta=args.beta)
        kw["n_max"] = args.n_max
    text = emit_table(args.kind, cfg, **kw)
    write_output(text, args.out_file, sys.stdout.write)
    return 0


def _cmd_qseries(args) -> int:
    cfg = _config(args)
    n = cfg.series_order
    if args.which == "Z":
        s = partition_Z(n)
    elif args.which == "mean-energy":
        s = mean_energy_series(n)
    else:
        s = eisenstein(args.weight, n).coeffs
    _emit_rows([{"n": i, "coefficient": s[i]} for i in range(n + 1)], args)
    return 0


def _cmd_modular(args) -> int:
    _config(args)
    res = modular_covariance_residual(args.weight, args.tau, args.gamma, args.order)
    ok = res < 1e-6
    _emit_rows(
        [{"weight": args.weight, "tau": args.tau, "gamma": list(args.gamma), "order": args.order,
          "residual": res, "status": "pass" if ok else "fail"}],
        args,
    )
    return 0 if ok else 1


def _cmd_planck(args) -> int:
    _config(args)
    params = ThermoParams(R=args.R, beta=args.beta)
    rows = planck_rows(params, args.n_max)
    sb = stefan_boltzmann(params)
    if args.output == "json":
        payload = {
            "modes": rows,
            "total": sum(r["term"] for r in rows),
            "stefan_boltzmann": {"value": sb.value, "ratio": sb.ratio, "tail_bound": sb.tail_bound, "n_max": sb.n_max},
        }
        write_output(json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n", args.out_file, sys.stdout.write)
    else:
        rows = rows + [{"n": "total", "nu": "", "term": sum(r["term"] for r in rows)},
                       {"n": "sb_ratio", "nu": "", "term": sb.ratio}]
        _emit_rows(rows, args)
    return 0


def _cmd_geometry(args) -> int:
    _config(args)
    v = np.array(args.coords, dtype=complex)
    if args.action == "classify":
        row = {"z": list(v), "class": tube_classify(v).value}
    elif args.action == "map":
        z = gc_map(v)
        row = {"x": list(v), "z": list(z), "omega": complex(omega(v)), "class": tube_classify(z).value}
    elif args.action == "inverse":
        row = {"z": list(v), "x": list(gc_inverse(v))}
    else:
        row = {"x": list(v), "R": args.R, "z": list(scaled_map(v, args.R))}
    _emit_rows([row], args)
    return 0


def _cmd_vertex_scan(args) -> int:
    cfg = _config(args)
    d = np.array(args.direction, dtype=complex)
    d = d / np.sqrt(np.sum(np.abs(d) ** 2))
    rows = []
    ok = True
    for r in args.radii:
        z2 = r * d
        tp = two_point_vev(TWO_POINT_Z1, z2, cfg.e_max, tol=None)
        nm = vertex_norm_sq(z2, cfg.e_max, tol=None)
        ok &= tp.relative_residual < 1e-8 and nm.relative_residual < 1e-8
        rows.append({
            "radius": r,
            "two_point": tp.series,
            "two_point_residual": tp.relative_residual,
            "norm": nm.series.real,
            "norm_residual": nm.relative_residual,
        })
    _emit_rows(rows, args)
    return 0 if ok else 1


COMMANDS = {
    "run": _cmd_run,
    "table": _cmd_table,
    "qseries": _cmd_qseries,
    "modular-check": _cmd_modular,
    "planck": _cmd_planck,
    "geometry": _cmd_geometry,
    "vertex-scan": _cmd_vertex_scan,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ValueError, SingularMapError, ConvergenceError, VertexConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
