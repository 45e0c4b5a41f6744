"""CSV / JSON / text rendering of benchmark results.

Floats are written with ``repr``, the shortest string that round-trips, so a
parsed CSV reproduces the in-memory statistics exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .bench import BenchmarkReport, CaseStats, paper_comparison

CSV_COLUMNS = (
    "case",
    "solver",
    "trials",
    "mean_phi_deg",
    "std_phi_deg",
    "mean_lambda",
    "failures",
    "mean_time_ns",
    "paper_phi_deg",
    "paper_rel_diff",
    "paper_flag",
)


def _num(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else ""


def _row(s: CaseStats, timing: bool) -> dict:
    ref, rel, flag = paper_comparison(s)
    return {
        "case": str(s.case),
        "solver": s.solver,
        "trials": str(s.trials),
        "mean_phi_deg": _num(s.mean_phi_deg),
        "std_phi_deg": _num(s.std_phi_deg),
        "mean_lambda": _num(s.mean_lambda),
        "failures": str(s.failures),
        "mean_time_ns": _num(s.mean_time_ns) if timing else "",
        "paper_phi_deg": _num(ref),
        "paper_rel_diff": _num(rel),
        "paper_flag": "1" if flag else "0",
    }


def to_csv(report: BenchmarkReport, timing: bool = False) -> str:
    """CSV text; wall times are left blank unless ``timing`` is set."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for s in report.stats:
        writer.writerow(_row(s, timing))
    return buf.getvalue()


def _float_or_nan(text: str) -> float:
    return float(text) if text else math.nan


def parse_csv(text: str) -> list[CaseStats]:
    return [
        CaseStats(
            case=int(row["case"]),
            solver=row["solver"],
            trials=int(row["trials"]),
            mean_phi_deg=_float_or_nan(row["mean_phi_deg"]),
            std_phi_deg=_float_or_nan(row["std_phi_deg"]),
            mean_lambda=_float_or_nan(row["mean_lambda"]),
            failures=int(row["failures"]),
            mean_time_ns=_float_or_nan(row["mean_time_ns"]),
        )
        for row in csv.DictReader(io.StringIO(text))
    ]


def _json_num(x: float):
    return float(x) if math.isfinite(x) else None


def to_json(report: BenchmarkReport, timing: bool = False) -> str:
    rows = []
    for s in report.stats:
        ref, rel, flag = paper_comparison(s)
        rows.append(
            {
                "case": s.case,
                "solver": s.solver,
                "trials": s.trials,
                "mean_phi_deg": _json_num(s.mean_phi_deg),
                "std_phi_deg": _json_num(s.std_phi_deg),
                "mean_lambda": _json_num(s.mean_lambda),
                "failures": s.failures,
                "mean_time_ns": _json_num(s.mean_time_ns) if timing else None,
                "paper_phi_deg": _json_num(ref),
                "paper_rel_diff": _json_num(rel),
                "paper_flag": flag,
            }
        )
    doc = {
        "trials": report.trials,
        "base_seed": report.base_seed,
        "weighting": report.weighting,
        "stats": rows,
    }
    if timing:
        doc["solver_mean_time_ns"] = report.solver_times()
    return json.dumps(doc, indent=2) + "\n"


def to_table(report: BenchmarkReport, timing: bool = False) -> str:
    head = f"{'case':>4}  {'solver':<9}  {'mean phi (deg)':>15}  {'std':>11}  {'paper':>15}  {'diff':>8}  {'fail':>4}"
    if timing:
        head += f"  {'time (us)':>9}"
    lines = [head, "-" * len(head)]
    for s in report.stats:
        ref, rel, flag = paper_comparison(s)
        line = (
            f"{s.case:>4}  {s.solver:<9}  {s.mean_phi_deg:>15.9g}  {s.std_phi_deg:>11.4g}  "
            f"{ref:>15.9g}  {rel:>+7.2%}{'*' if flag else ' '}  {s.failures:>4}"
        )
        if timing:
            line += f"  {s.mean_time_ns / 1e3:>9.1f}"
        lines.append(line)
    lines.append(f"trials={report.trials} seed={report.base_seed} weighting={report.weighting}")
    lines.append("* differs from the tabulated mean by more than 10%")
    if timing:
        for solver, ns in report.solver_times().items():
            lines.append(f"mean solve time {solver}: {ns / 1e3:.1f} us")
    return "\n".join(lines) + "\n"
