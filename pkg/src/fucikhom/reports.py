"""Deterministic serialization of reports: JSON, CSV and gnuplot scripts.

Floats are always written with 17 significant digits, which round-trips
every IEEE double exactly. Key order is the order fields are built in, so
identical inputs give byte-identical files.

CSV layout: one header row, data rows, then ``# key=value`` footer lines
whose values are JSON. Footers sit at the end so gnuplot can read the
header with ``set key autotitle columnhead``.
"""

from __future__ import annotations

import json
import math

from .fucik1d import CurvePoint, Partition
from .homrates import RateRecord, SweepReport


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = "%.17g" % x
    if not any(ch in s for ch in ".eEn"):
        s += ".0"
    return s


def dumps(obj, indent=2, _level=0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent) for v in obj) + "]"
        items = ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + items + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            pad + json.dumps(str(k)) + ": " + dumps(v, indent, _level + 1) for k, v in obj.items()
        )
        return "{\n" + items + "\n" + end + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _compact(obj) -> str:
    return " ".join(dumps(obj, indent=0).split("\n"))


def _loads(text):
    return json.loads(text)


# -- dict views -------------------------------------------------------------


def estimate_to_dict(est) -> dict:
    return {
        "lambda": float(est.lam),
        "method": est.method,
        "residual": float(est.residual),
        "evaluations": int(est.evaluations),
    }


def point_to_dict(pt: CurvePoint) -> dict:
    return {
        "k": pt.k,
        "sign": pt.sign,
        "s": pt.s,
        "alpha": pt.alpha,
        "beta": pt.beta,
        "c": pt.c,
        "breakpoints": [float(t) for t in pt.partition.breakpoints],
        "outside_stated_validity": pt.outside_stated_validity,
    }


def record_to_dict(rec: RateRecord) -> dict:
    return {
        "eps": rec.eps,
        "measured_gap": rec.measured_gap,
        "bound": rec.bound,
        "ratio": rec.ratio,
        "bound_stated": rec.bound_stated,
        "degenerate": rec.degenerate,
    }


def report_to_dict(rep: SweepReport) -> dict:
    return {
        "quantity": rep.quantity,
        "fitted_order": rep.fitted_order,
        "max_ratio": rep.max_ratio,
        "records": [record_to_dict(r) for r in rep.records],
        "metadata": rep.metadata,
    }


# -- CSV: eigenvalue sweep ----------------------------------------------------

EIG_COLUMNS = ["eps", "gap", "bound", "ratio", "degenerate"]


def eig_report_to_csv(rep: SweepReport) -> str:
    lines = [",".join(EIG_COLUMNS)]
    for r in rep.records:
        lines.append(
            ",".join([fmt_float(r.eps), fmt_float(r.measured_gap), fmt_float(r.bound),
                      fmt_float(r.ratio), str(int(r.degenerate))])
        )
    lines.append("# fitted_order=" + _compact(rep.fitted_order))
    lines.append("# quantity=" + _compact(rep.quantity))
    lines.append("# metadata=" + _compact(rep.metadata))
    return "\n".join(lines) + "\n"


def _split_csv(text):
    rows, footer = [], {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    for ln in lines[1:]:
        if ln.startswith("#"):
            key, _, value = ln[1:].strip().partition("=")
            footer[key] = _loads(value)
        else:
            rows.append(dict(zip(header, ln.split(","))))
    return header, rows, footer


def eig_report_from_csv(text: str) -> SweepReport:
    _, rows, footer = _split_csv(text)
    records = [
        RateRecord(
            eps=float(r["eps"]), measured_gap=float(r["gap"]), bound=float(r["bound"]),
            ratio=float(r["ratio"]), bound_stated=None, degenerate=bool(int(r["degenerate"])),
        )
        for r in rows
    ]
    return SweepReport(footer["quantity"], records, footer["fitted_order"], footer["metadata"])


# -- CSV: Fucik sweep ------------------------------------------------------------

FUCIK_COLUMNS = [
    "eps", "gap_alpha", "bound_alpha", "ratio_alpha", "gap_beta", "bound_beta", "ratio_beta",
    "bound_alpha_stated", "bound_beta_stated", "degenerate_alpha", "degenerate_beta",
]


def fucik_reports_to_csv(alpha: SweepReport, beta: SweepReport) -> str:
    lines = [",".join(FUCIK_COLUMNS)]
    for a, b in zip(alpha.records, beta.records):
        vals = [a.eps, a.measured_gap, a.bound, a.ratio, b.measured_gap, b.bound, b.ratio,
                a.bound_stated, b.bound_stated]
        lines.append(
            ",".join([fmt_float(v) for v in vals] + [str(int(a.degenerate)), str(int(b.degenerate))])
        )
    lines.append("# fitted_order_alpha=" + _compact(alpha.fitted_order))
    lines.append("# fitted_order_beta=" + _compact(beta.fitted_order))
    lines.append("# metadata_alpha=" + _compact(alpha.metadata))
    lines.append("# metadata_beta=" + _compact(beta.metadata))
    return "\n".join(lines) + "\n"


def fucik_reports_from_csv(text: str):
    _, rows, footer = _split_csv(text)
    out = []
    for q in ("alpha", "beta"):
        records = [
            RateRecord(
                eps=float(r["eps"]),
                measured_gap=float(r[f"gap_{q}"]),
                bound=float(r[f"bound_{q}"]),
                ratio=float(r[f"ratio_{q}"]),
                bound_stated=float(r[f"bound_{q}_stated"]),
                degenerate=bool(int(r[f"degenerate_{q}"])),
            )
            for r in rows
        ]
        out.append(SweepReport(q, records, footer[f"fitted_order_{q}"], footer[f"metadata_{q}"]))
    return tuple(out)


# -- CSV: curve --------------------------------------------------------------------


def curve_to_csv(points, metadata) -> str:
    nb = len(points[0].partition.breakpoints)
    cols = ["s", "alpha", "beta", "c"] + [f"t{i}" for i in range(nb)]
    lines = [",".join(cols)]
    for pt in points:
        vals = [pt.s, pt.alpha, pt.beta, pt.c] + list(pt.partition.breakpoints)
        lines.append(",".join(fmt_float(float(v)) for v in vals))
    lines.append("# k=" + _compact(points[0].k))
    lines.append("# sign=" + _compact(points[0].sign))
    lines.append("# outside_stated_validity=" + _compact(points[0].outside_stated_validity))
    lines.append("# metadata=" + _compact(metadata))
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str):
    header, rows, footer = _split_csv(text)
    tcols = [c for c in header if c.startswith("t")]
    points = [
        CurvePoint(
            k=footer["k"], sign=footer["sign"], s=float(r["s"]), c=float(r["c"]),
            alpha=float(r["alpha"]), beta=float(r["beta"]),
            partition=Partition(tuple(float(r[c]) for c in tcols), footer["sign"]),
            outside_stated_validity=footer["outside_stated_validity"],
        )
        for r in rows
    ]
    return points, footer["metadata"]


# -- gnuplot ------------------------------------------------------------------------


def curve_plot_script(csv_name, k, sign):
    return "\n".join([
        "# gnuplot script: Fucik eigencurve, beta against alpha",
        'set datafile separator ","',
        "set key autotitle columnhead",
        'set xlabel "alpha"',
        'set ylabel "beta"',
        f'set title "C_{k}^{sign}"',
        "set grid",
        f'plot "{csv_name}" using 2:3 with linespoints title "C_{k}^{sign}"',
        "",
    ])


def sweep_plot_script(csv_name, kind):
    lines = [
        "# gnuplot script: homogenization gaps and bounds against eps (log-log)",
        'set datafile separator ","',
        "set key autotitle columnhead",
        "set logscale xy",
        'set xlabel "eps"',
        'set ylabel "gap"',
        "set grid",
    ]
    if kind == "sweep-eig":
        lines.append(
            f'plot "{csv_name}" using 1:2 with linespoints title "measured gap", '
            f'"" using 1:3 with lines title "bound"'
        )
    else:
        lines.append(
            f'plot "{csv_name}" using 1:2 with linespoints title "alpha gap", '
            f'"" using 1:3 with lines title "alpha bound", '
            f'"" using 1:5 with linespoints title "beta gap", '
            f'"" using 1:6 with lines title "beta bound"'
        )
    lines.append("")
    return "\n".join(lines)
