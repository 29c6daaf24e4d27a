"""Serialise an AnalysisReport to JSON, CSV tables and a Markdown summary.

All files are UTF-8 with LF line endings. Floats are written with ``repr``,
the shortest form that parses back to the same double. Apart from the
provenance timestamp, output is byte-identical for identical input.
"""
import csv
import io
import json
import os
from pathlib import Path

from .errors import IoError
from .pipeline import CAVEAT
from .trend import TrendEstimate


def _num(x):
    return repr(float(x))


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def trends_csv(report):
    return _csv(
        ("region_id", "slope", "intercept", "n_points"),
        [(t.region, _num(t.slope), _num(t.intercept), t.n_points) for t in report.trends],
    )


def grouping_csv(report):
    slopes = {t.region: t.slope for t in report.trends}
    return _csv(
        ("region_id", "slope", "threshold", "group"),
        [(r, _num(slopes[r]), _num(report.threshold), report.grouping.label(r))
         for r in report.regions],
    )


def correlations_csv(report):
    table = report.correlations
    return _csv(
        ("region_id", *table.factors),
        [(r, *(_num(v) for v in row)) for r, row in zip(table.regions, table.rows)],
    )


def breaks_csv(report):
    rows = []
    for f, b in report.breaks.items():
        column = report.correlations.column(f)
        for r, v, lab in zip(report.correlations.regions, column, b.labels):
            rows.append((f, r, _num(v), lab))
    return _csv(("factor", "region_id", "correlation", "class"), rows)


def tests_csv(report):
    rows = []
    for f, t in report.tests.items():
        perm = t.permutation
        rows.append((
            f, _num(t.t2), _num(t.f_stat), t.df1, t.df2, _num(t.p_value), t.verdict.value,
            _num(t.alpha), t.n1, t.n2, _num(t.ridge_lambda),
            _num(perm.p_hat) if perm else "",
            perm.n_permutations if perm else "",
            str(perm.exact).lower() if perm else "",
        ))
    return _csv(
        ("factor", "t2", "f_stat", "df1", "df2", "p_value", "verdict", "alpha", "n1", "n2",
         "ridge_lambda", "perm_p_hat", "perm_n", "perm_exact"),
        rows,
    )


def to_json_dict(report):
    d = {"provenance": report.provenance, "caveat": CAVEAT,
         "panel": {"regions": list(report.regions), "years": list(report.years)}}
    if report.trends is not None:
        d["trends"] = [
            {"region": t.region, "slope": t.slope, "intercept": t.intercept, "n_points": t.n_points}
            for t in report.trends
        ]
    if report.grouping is not None:
        g = report.grouping
        d["threshold"] = report.threshold
        d["grouping"] = {
            "threshold": g.threshold,
            "increasing": [r for r in report.regions if r in g.increasing],
            "non_increasing": [r for r in report.regions if r in g.non_increasing],
        }
    if report.correlations is not None:
        c = report.correlations
        d["correlations"] = {
            "target": c.target,
            "factors": list(c.factors),
            "rows": [{"region": r, **dict(zip(c.factors, row))} for r, row in zip(c.regions, c.rows)],
        }
    if report.breaks:
        d["breaks"] = {
            f: {
                "k": b.k,
                "boundaries": list(b.boundaries),
                "boundary_rule": "midpoint between adjacent classes; equal values go to the lower class",
                "sdcm": b.sdcm,
                "labels": dict(zip(report.correlations.regions, b.labels)),
            }
            for f, b in report.breaks.items()
        }
    if report.tests:
        d["tests"] = {f: t.to_dict() for f, t in report.tests.items()}
    return d


def report_json(report):
    return json.dumps(to_json_dict(report), indent=2, ensure_ascii=False) + "\n"


def _fmt(x, spec=".4g"):
    return format(float(x), spec)


def report_md(report):
    cfg = report.config
    lines = [
        "# Heat panel analysis",
        "",
        f"- generated: {report.provenance.get('timestamp', '')}",
        f"- tool version: {report.provenance.get('version', '')}",
        f"- regions: {len(report.regions)}; years: {report.years[0]}-{report.years[-1]} "
        f"({len(report.years)})",
        f"- target: `{cfg.target}`; factors: {', '.join(f'`{f}`' for f in cfg.factors)}",
        "",
    ]
    if report.trends is not None:
        lines += ["## Trends", "", "| region | slope / yr | mean |", "|---|---|---|"]
        lines += [f"| {t.region} | {_fmt(t.slope)} | {_fmt(t.intercept)} |"
                  for t in sorted(report.trends, key=lambda t: t.slope)]
        lines.append("")
    if report.grouping is not None:
        g = report.grouping
        lines += [
            "## Grouping",
            "",
            f"Threshold {_fmt(report.threshold, '.6g')} "
            f"({'median of trends' if cfg.threshold == 'median' else 'fixed'}); "
            "slope > threshold is increasing.",
            "",
            f"- increasing ({len(g.increasing)}): "
            + ", ".join(r for r in report.regions if r in g.increasing),
            f"- non-increasing ({len(g.non_increasing)}): "
            + ", ".join(r for r in report.regions if r in g.non_increasing),
            "",
        ]
    if report.correlations is not None:
        c = report.correlations
        lines += ["## Correlation with target", "",
                  "| region | " + " | ".join(c.factors) + " |",
                  "|---|" + "---|" * len(c.factors)]
        lines += [f"| {r} | " + " | ".join(f"{v:.3f}" for v in row) + " |"
                  for r, row in zip(c.regions, c.rows)]
        lines.append("")
    if report.breaks:
        lines += ["## Natural breaks of correlations", ""]
        for f, b in report.breaks.items():
            cuts = ", ".join(f"{x:.4f}" for x in b.boundaries) or "none"
            lines.append(f"- `{f}` (k={b.k}): cuts {cuts}; SDCM {_fmt(b.sdcm)}")
        lines.append("")
    if report.tests:
        lines += ["## Hotelling T² tests", "",
                  "| factor | T² | F | df | p-value | permutation p | verdict |",
                  "|---|---|---|---|---|---|---|"]
        for f, t in report.tests.items():
            perm = t.permutation
            perm_s = "-" if perm is None else f"{perm.p_hat:.4f}{' (exact)' if perm.exact else ''}"
            lines.append(
                f"| {f} | {_fmt(t.t2, '.6g')} | {_fmt(t.f_stat, '.6g')} | ({t.df1}, {t.df2}) "
                f"| {_fmt(t.p_value)} | {perm_s} | {t.verdict.value} |"
            )
        lines += ["", f"alpha = {cfg.alpha}; ridge = {cfg.ridge_lambda}; "
                      f"standardized = {str(cfg.standardize).lower()}", ""]
    lines += ["## Caveat", "", CAVEAT, ""]
    return "\n".join(lines)


def render_files(report, formats):
    """Mapping of file name to text for the requested formats."""
    files = {}
    if "json" in formats:
        files["report.json"] = report_json(report)
    if "csv" in formats:
        if report.trends is not None:
            files["trends.csv"] = trends_csv(report)
        if report.grouping is not None:
            files["grouping.csv"] = grouping_csv(report)
        if report.correlations is not None:
            files["correlations.csv"] = correlations_csv(report)
        if report.tests:
            files["tests.csv"] = tests_csv(report)
        if report.breaks:
            files["breaks.csv"] = breaks_csv(report)
    if "md" in formats:
        files["report.md"] = report_md(report)
    return files


def emit_report(report, formats, output_dir):
    """Write the requested formats into ``output_dir``; returns written paths."""
    out = Path(output_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in render_files(report, formats).items():
            path = out / name
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            written.append(path)
    except OSError as exc:
        raise IoError(f"cannot write report to {exc.filename or os.fspath(out)}: {exc.strerror}") from exc
    return written


def read_trends_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            TrendEstimate(r["region_id"], float(r["slope"]), float(r["intercept"]), int(r["n_points"]))
            for r in csv.DictReader(fh)
        ]
