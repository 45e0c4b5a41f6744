"""Command-line front end: ``solve``, ``roots`` and ``bench``.

Exit codes: 0 success, 1 input or solver failure, 2 degenerate/ambiguous
attitude (``solve``) or no real root (``roots``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import bench, report
from .errors import DegenerateEigenvector, NoRealRoot, WahbaError
from .obsfile import read_observations
from .problem import QuarticCoeffs
from .quartic import quartic_roots
from .solvers import SOLVERS, NewtonConfig, SolverReport, newton_max_root


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DEGENERATE = 2


def _solver_list(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise argparse.ArgumentTypeError("solver list is empty")
    for n in names:
        if n not in SOLVERS:
            raise argparse.ArgumentTypeError(f"unknown solver {n!r} (choose from {', '.join(SOLVERS)})")
    return names


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wahba", description="Closed-form attitude determination and benchmark."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve Wahba's problem for an observation file")
    p.add_argument("input", type=Path)
    p.add_argument("--solvers", type=_solver_list, default=list(bench.DEFAULT_SOLVERS))
    p.add_argument("--weighting", choices=("inverse_variance", "equal"), default="inverse_variance")
    p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("roots", help="real roots of x^4 + a x^3 + b x^2 + c x + d")
    for name in "abcd":
        p.add_argument(name, type=_finite_float)
    p.add_argument("--newton", action="store_true", help="also print a Newton trace")
    p.add_argument("--x0", type=_finite_float, default=1.0)
    p.add_argument("--tol", type=_finite_float, default=NewtonConfig.tol)
    p.add_argument("--max-iterations", type=_positive_int, default=NewtonConfig.max_iterations)

    p = sub.add_parser("bench", help="Monte Carlo reproduction of the 12-case study")
    p.add_argument("--case", default="all", help="case id 1-12 or 'all'")
    p.add_argument("--trials", type=_positive_int, default=bench.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=bench.DEFAULT_SEED)
    p.add_argument("--solvers", type=_solver_list, default=list(bench.DEFAULT_SOLVERS))
    p.add_argument("--format", choices=("csv", "json", "table"), default="table")
    p.add_argument("--output", type=Path)
    p.add_argument("--weighting", choices=("equal", "inverse_variance"), default=bench.DEFAULT_WEIGHTING)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall times (not reproducible)")
    return parser


def _fmt(x: float) -> str:
    return repr(float(x))


def _report_dict(r: SolverReport) -> dict:
    return {
        "solver": r.solver,
        "lambda_max": r.lambda_max,
        "quaternion": None if r.quaternion is None else r.quaternion.as_array().tolist(),
        "attitude": None if r.attitude is None else r.attitude.tolist(),
        "loss": r.loss,
        "iterations": r.iterations,
        "eigenvalue_gap": r.eigenvalue_gap,
        "ambiguous": r.ambiguous,
        "wall_time_ns": r.wall_time_ns,
    }


def _report_text(r: SolverReport, out) -> None:
    print(f"[{r.solver}]", file=out)
    print(f"  lambda_max     {_fmt(r.lambda_max)}", file=out)
    if r.quaternion is not None:
        q = ", ".join(_fmt(v) for v in r.quaternion.as_array())
        print(f"  quaternion     [{q}]  (x, y, z, w)", file=out)
        print("  attitude", file=out)
        for row in r.attitude:
            print("    " + "  ".join(_fmt(v) for v in row), file=out)
    else:
        print("  quaternion     undetermined (repeated largest eigenvalue)", file=out)
    print(f"  loss           {_fmt(r.loss)}", file=out)
    print(f"  iterations     {r.iterations}", file=out)
    print(f"  eigenvalue_gap {_fmt(r.eigenvalue_gap)}", file=out)
    print(f"  ambiguous      {r.ambiguous}", file=out)
    print(f"  wall_time_ns   {r.wall_time_ns}", file=out)


def cmd_solve(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        obs = read_observations(args.input, args.weighting)
    except FileNotFoundError:
        print(f"error: {args.input}: no such file", file=err)
        return EXIT_FAILURE
    except WahbaError as exc:
        print(f"error: {args.input}: {exc}", file=err)
        return EXIT_FAILURE

    reports, status = [], EXIT_OK
    for name in args.solvers:
        try:
            r = SOLVERS[name](obs)
        except DegenerateEigenvector as exc:
            r = exc.report
            status = max(status, EXIT_DEGENERATE)
            if r is None:
                print(f"error: {name}: {exc}", file=err)
                continue
        except WahbaError as exc:
            print(f"error: {name}: {exc}", file=err)
            return EXIT_FAILURE
        if r.ambiguous:
            status = max(status, EXIT_DEGENERATE)
        reports.append(r)

    if args.format == "json":
        json.dump([_report_dict(r) for r in reports], out, indent=2)
        out.write("\n")
    else:
        for r in reports:
            _report_text(r, out)
    return status


def cmd_roots(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    qc = QuarticCoeffs(args.a, args.b, args.c, args.d)
    status = EXIT_OK
    try:
        rs = quartic_roots(qc)
        print("roots " + " ".join(_fmt(x) for x in rs.roots), file=out)
        print(f"max_root {_fmt(max(rs.roots))}", file=out)
        if any(rs.complex_pair):
            print("complex conjugate pair(s) omitted", file=out)
    except NoRealRoot as exc:
        print(f"error: {exc}", file=err)
        status = EXIT_DEGENERATE
    except WahbaError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_FAILURE

    if args.newton:
        trace: list[float] = []
        cfg = NewtonConfig(x0=args.x0, tol=args.tol, max_iterations=args.max_iterations)
        try:
            root, iterations = newton_max_root(qc, cfg, trace)
        except WahbaError as exc:
            for k, x in enumerate(trace):
                print(f"newton {k} {_fmt(x)}", file=out)
            print(f"error: {exc}", file=err)
            return EXIT_FAILURE
        for k, x in enumerate(trace):
            print(f"newton {k} {_fmt(x)}", file=out)
        print(f"newton_root {_fmt(root)}", file=out)
        print(f"newton_iterations {iterations}", file=out)
    return status


def _parse_cases(text: str) -> list[int] | None:
    if text.strip().lower() == "all":
        return None
    ids = []
    for part in text.split(","):
        cid = int(part)
        bench.get_case(cid)
        ids.append(cid)
    return ids


def cmd_bench(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        cases = _parse_cases(args.case)
    except ValueError:
        print(f"error: invalid case {args.case!r}; use 1-12 or 'all'", file=err)
        return EXIT_FAILURE

    result = bench.run_all(
        trials=args.trials,
        base_seed=args.seed,
        solvers=args.solvers,
        cases=cases,
        weighting=args.weighting,
        workers=args.workers,
    )
    render = {"csv": report.to_csv, "json": report.to_json, "table": report.to_table}[args.format]
    text = render(result, timing=args.timing)
    if args.output is not None:
        args.output.write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": cmd_solve, "roots": cmd_roots, "bench": cmd_bench}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
