"""``pathgrad`` command line.

Exit status: 0 success, 1 usage or input error, 2 tolerance breach or
non-convergence, 3 numerical failure (domain guard, stalled descent).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path as FsPath

import numpy as np

from . import scenarios
from .constraints import ConstraintError, holonomic_check, isoperimetric_check, sphere, write_report_csv
from .flow import FlowError, FlowOptions, descend, write_trace_csv
from .lagrangian import DomainError, bilinear_density, builtin, builtin_names, uniform_density
from .pathspace import Direction, FixedEndpointPath, PathError, read_path_csv, write_path_csv
from .svg import SvgSpec
from .variation import DEFAULT_FD_STEP, el_path, fd_directional, pair_gradient

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lagrangian(args):
    params = {}
    if getattr(args, "gravity", None) is not None:
        params["g"] = args.gravity
    if getattr(args, "density", None):
        params["density"] = bilinear_density() if args.density == "bilinear" else uniform_density()
    try:
        return builtin(args.lagrangian, **params)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _read(path_file, lag=None):
    p = read_path_csv(path_file)
    if lag is not None and p.dim != lag.dim:
        raise UsageError(f"{path_file}: path has dimension {p.dim}, Lagrangian {lag.name} needs {lag.dim}")
    return p


def cmd_list(args):
    for entry in scenarios.list_scenarios():
        flags = []
        if entry["constrained"]:
            flags.append("constrained")
        if entry["analysis_only"]:
            flags.append("analysis-only")
        tag = f" [{', '.join(flags)}]" if flags else ""
        print(f"{entry['id']:<14} {entry['description']}{tag}")
    return EXIT_OK


def _write_scenario(report: scenarios.ScenarioReport, out: FsPath, fmt: str, spec: SvgSpec):
    out.mkdir(parents=True, exist_ok=True)
    sid = report.scenario.id
    if fmt == "report":
        (out / f"{sid}.txt").write_text(report.text())
    elif fmt == "svg":
        (out / f"{sid}.svg").write_text(report.svg(spec))
    else:
        for name, p in report.paths.items():
            write_path_csv(p, out / f"{sid}_{name}_path.csv")
            write_path_csv(report.el[name].path, out / f"{sid}_{name}_el.csv")
        for name, e in report.el_m.items():
            write_path_csv(e.path, out / f"{sid}_{name}_el_m.csv")
        for name, rep in report.constraint_reports.items():
            write_report_csv(rep, out / f"{sid}_{name}_constraint.csv")
        for name, tr in report.flows.items():
            write_trace_csv(tr, out / f"{sid}_flow_{name}_trace.csv")
            write_path_csv(tr.final.path, out / f"{sid}_flow_{name}_final.csv")


def cmd_scenario(args):
    if args.all == bool(args.id):
        raise UsageError("give a scenario id or --all")
    wanted = scenarios.ids() if args.all else [args.id]
    for sid in wanted:
        if sid not in scenarios.ids():
            raise UsageError(f"unknown scenario {sid!r}; choose from {', '.join(scenarios.ids())}")
    spec = SvgSpec(args.width, args.height, args.margin, args.arrow_count, args.arrow_scale)
    out = FsPath(args.out)

    def one(sid):
        report = scenarios.run(sid, args.grid_points, flows=not args.no_flow)
        _write_scenario(report, out / sid if args.all else out, args.format, spec)
        return report

    with ThreadPoolExecutor(max_workers=4 if args.all else 1) as pool:
        reports = list(pool.map(one, wanted))
    status = EXIT_OK
    for r in reports:
        for c in r.checks:
            if c.gating and not c.passed:
                print(f"{r.scenario.id}: {c.line()}", file=sys.stderr)
        print(f"{r.scenario.id}: {'PASS' if r.passed else 'FAIL'}")
        if not r.passed:
            status = EXIT_TOLERANCE
    return status


def cmd_el(args):
    lag = _lagrangian(args)
    gamma = _read(args.path, lag)
    el = el_path(lag, gamma)
    write_path_csv(el.path, args.out)
    print(f"interior_residual={float(np.max(np.linalg.norm(el.samples[1:-1], axis=1)))!r}")
    print(f"action={el.source_action!r}")
    return EXIT_OK


def cmd_pair(args):
    lag = _lagrangian(args)
    gamma = _read(args.path, lag)
    eta_path = _read(args.direction, lag)
    if eta_path.grid != gamma.grid:
        raise UsageError("path and direction must share the same grid")
    try:
        eta = Direction(eta_path)
    except PathError as exc:
        raise UsageError(f"{args.direction}: {exc}") from None
    paired = pair_gradient(el_path(lag, gamma), eta)
    fd = fd_directional(lag, gamma, eta, args.fd_step)
    print(f"pair_gradient={paired!r}")
    print(f"fd_directional={fd!r}")
    print(f"difference={abs(paired - fd)!r}")
    return EXIT_OK


def cmd_descend(args):
    lag = _lagrangian(args)
    gamma = _read(args.path, lag)
    opts = FlowOptions(
        direction="maximize" if args.maximize else "minimize",
        metric=args.metric,
        tol=args.tol,
        max_iters=args.max_iters,
        initial_step=args.initial_step,
    )
    try:
        trace = descend(lag, FixedEndpointPath(gamma), opts)
    except FlowError as exc:
        if exc.trace is not None and args.trace:
            write_trace_csv(exc.trace, args.trace)
        write_path_csv(exc.snapshot.path, args.out)
        print(f"error: {exc}; last iterate written to {args.out}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.trace:
        write_trace_csv(trace, args.trace)
    write_path_csv(trace.final.path, args.out)
    print(f"iterations={trace.iterations} converged={trace.converged}")
    print(f"action={trace.final_action!r} residual={trace.final_residual!r}")
    return EXIT_OK if trace.converged else EXIT_TOLERANCE


def cmd_constraint_check(args):
    lag = _lagrangian(args)
    gamma = _read(args.path, lag)
    if (args.g_builtin is None) == (args.m_lagrangian is None):
        raise UsageError("give exactly one of --g-builtin or --m-lagrangian")
    if args.g_builtin is not None:
        con = sphere(radius=float(np.sqrt(args.level)), dim=gamma.dim)
        con = type(con)(con.g, con.grad_g, args.level, con.name)
        report = holonomic_check(lag, con, gamma)
    else:
        try:
            lag_m = builtin(args.m_lagrangian)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        report = isoperimetric_check(lag, lag_m, gamma, args.value)
    if args.out:
        write_report_csv(report, args.out)
    if report.kind == "isoperimetric":
        print(f"lambda={report.lam!r}")
    else:
        lam = report.lambda_values
        print(f"lambda_min={float(lam.min())!r} lambda_max={float(lam.max())!r}")
    print(f"residual_norm={report.residual_norm!r}")
    if report.constraint_violation is not None:
        print(f"constraint_violation={report.constraint_violation!r}")
    if args.tol is not None and report.residual_norm > args.tol:
        return EXIT_TOLERANCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pathgrad", description="Euler-Lagrange paths as gradients of action functionals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def lagrangian_args(sp):
        sp.add_argument("--lagrangian", required=True, help=f"one of: {', '.join(builtin_names())}")
        sp.add_argument("--gravity", type=float, default=None, help="g for the projectile Lagrangian")
        sp.add_argument("--density", choices=("uniform", "bilinear"), default=None, help="regression density")
        sp.add_argument("--path", required=True, help="path CSV (t,x1,...,xN)")

    sp = sub.add_parser("list", help="list scenarios")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("scenario", help="run a worked example end to end")
    sp.add_argument("id", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--grid-points", type=int, default=None, help="number of grid intervals m")
    sp.add_argument("--out", default="scenario_out")
    sp.add_argument("--format", choices=("csv", "svg", "report"), default="report")
    sp.add_argument("--no-flow", action="store_true", help="skip gradient-flow runs")
    sp.add_argument("--width", type=int, default=640)
    sp.add_argument("--height", type=int, default=480)
    sp.add_argument("--margin", type=int, default=40)
    sp.add_argument("--arrow-count", type=int, default=None)
    sp.add_argument("--arrow-scale", type=float, default=None)
    sp.set_defaults(func=cmd_scenario)

    sp = sub.add_parser("el", help="compute the Euler-Lagrange path of a path CSV")
    lagrangian_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_el)

    sp = sub.add_parser("pair", help="compare <EL, eta> with a finite-difference directional derivative")
    lagrangian_args(sp)
    sp.add_argument("--direction", required=True)
    sp.add_argument("--fd-step", type=float, default=DEFAULT_FD_STEP)
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("descend", help="gradient flow with pinned endpoints")
    lagrangian_args(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--max-iters", type=int, default=5000)
    sp.add_argument("--metric", choices=("h1", "l2"), default="h1")
    sp.add_argument("--initial-step", type=float, default=None)
    sp.add_argument("--maximize", action="store_true")
    sp.add_argument("--trace", default=None, help="trace CSV (iter,action,residual)")
    sp.add_argument("--out", default="descent_final.csv", help="final path CSV")
    sp.set_defaults(func=cmd_descend)

    sp = sub.add_parser("constraint-check", help="multiplier check for a constrained stationary path")
    lagrangian_args(sp)
    sp.add_argument("--g-builtin", choices=("sphere",), default=None)
    sp.add_argument("--level", type=float, default=1.0)
    sp.add_argument("--m-lagrangian", default=None)
    sp.add_argument("--value", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None, help="exit 2 if the residual exceeds this")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_constraint_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, PathError, ConstraintError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
