"""
CSV and SVG artifacts of a benchmark.

    runs.csv              solver_id, problem_id, n, f0, f_fin, NF, status
    traces.csv            solver_id, problem_id, eval, best_f
    profiles_tol{E}.csv   solver_id, log2_ratio, fraction_solved
    profiles_tol{E}.svg   one step polyline per solver

Reals are written with ``repr`` so they parse back exactly; absent values
are empty cells.
"""

import csv
import io
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .benchmark import RunRecord
from .constants import PROFILE_CSV_HEADER, RUNS_CSV_HEADER, TRACES_CSV_HEADER
from .exceptions import OutputError
from .profiles import ProfileCurve

logger = logging.getLogger(__name__)

SVG_WIDTH = 640
SVG_HEIGHT = 480
SVG_MARGIN = 60
SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


@dataclass
class RunRow:
    """
    One parsed line of runs.csv.
    """

    solver_id: str
    problem_id: str
    n: int
    f0: float
    f_fin: Optional[float]
    nf: Optional[int]
    status: str


def _format_real(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def _parse_real(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def _parse_int(text: str) -> Optional[int]:
    return None if text == "" else int(text)


def _write_rows(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _read_rows(text: str, header: Sequence[str]) -> List[Dict[str, str]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    if tuple(reader.fieldnames) != tuple(header):
        raise ValueError(f"Unexpected CSV header {reader.fieldnames}, expected {list(header)}")
    return list(reader)


def format_runs(records: Sequence[RunRecord]) -> str:
    rows = [
        (
            r.solver_id,
            r.problem_id,
            str(r.n),
            _format_real(r.f0),
            _format_real(r.f_fin),
            "" if r.nf is None else str(r.nf),
            r.status,
        )
        for r in records
    ]
    return _write_rows(RUNS_CSV_HEADER, rows)


def parse_runs(text: str) -> List[RunRow]:
    return [
        RunRow(
            solver_id=row["solver_id"],
            problem_id=row["problem_id"],
            n=int(row["n"]),
            f0=float(row["f0"]),
            f_fin=_parse_real(row["f_fin"]),
            nf=_parse_int(row["NF"]),
            status=row["status"],
        )
        for row in _read_rows(text, RUNS_CSV_HEADER)
    ]


def format_traces(records: Sequence[RunRecord]) -> str:
    rows = [
        (r.solver_id, r.problem_id, str(index), _format_real(value))
        for r in records
        for index, value in r.trace
    ]
    return _write_rows(TRACES_CSV_HEADER, rows)


def parse_traces(text: str) -> Dict[Tuple[str, str], List[Tuple[int, float]]]:
    traces: Dict[Tuple[str, str], List[Tuple[int, float]]] = {}
    for row in _read_rows(text, TRACES_CSV_HEADER):
        key = (row["solver_id"], row["problem_id"])
        traces.setdefault(key, []).append((int(row["eval"]), float(row["best_f"])))
    return traces


def parse_records(runs_text: str, traces_text: str) -> List[RunRecord]:
    """
    Rebuild run records from the contents of runs.csv and traces.csv.
    """
    traces = parse_traces(traces_text)
    return [
        RunRecord(
            solver_id=row.solver_id,
            problem_id=row.problem_id,
            n=row.n,
            f0=row.f0,
            trace=traces.get((row.solver_id, row.problem_id), []),
            status=row.status,
        )
        for row in parse_runs(runs_text)
    ]


def format_profile(curves: Sequence[ProfileCurve]) -> str:
    rows = [
        (curve.solver_id, _format_real(ratio), _format_real(fraction))
        for curve in curves
        for ratio, fraction in curve.points
    ]
    return _write_rows(PROFILE_CSV_HEADER, rows)


def parse_profile(text: str) -> List[ProfileCurve]:
    curves: Dict[str, ProfileCurve] = {}
    for row in _read_rows(text, PROFILE_CSV_HEADER):
        curve = curves.setdefault(row["solver_id"], ProfileCurve(row["solver_id"]))
        curve.points.append((float(row["log2_ratio"]), float(row["fraction_solved"])))
    return list(curves.values())


def render_profile_svg(curves: Sequence[ProfileCurve], tol: float) -> str:
    """
    Draw the profiles as step functions on a log2 ratio axis.

    Returns
    -------
    str
        An SVG 1.1 document with exactly one ``polyline`` per curve.
    """
    ratios = [ratio for curve in curves for ratio, _ in curve.points]
    x_max = max(ratios, default=0.0)
    x_max = x_max * 1.1 if x_max > 0 else 1.0
    plot_w = SVG_WIDTH - 2 * SVG_MARGIN
    plot_h = SVG_HEIGHT - 2 * SVG_MARGIN

    def sx(ratio: float) -> float:
        return SVG_MARGIN + plot_w * ratio / x_max

    def sy(fraction: float) -> float:
        return SVG_HEIGHT - SVG_MARGIN - plot_h * fraction

    x0, y0 = SVG_MARGIN, SVG_HEIGHT - SVG_MARGIN
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SVG_WIDTH}" height="{SVG_HEIGHT}">',
        f'<title>Performance profile, tol = {tol:.0e}</title>',
        f'<line x1="{x0}" y1="{y0}" x2="{SVG_WIDTH - SVG_MARGIN}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{SVG_MARGIN}" stroke="black"/>',
        f'<text x="{SVG_WIDTH / 2}" y="{SVG_HEIGHT - 15}" text-anchor="middle">'
        f"Relative cost (log2 of evaluation ratio)</text>",
        f'<text x="15" y="{SVG_HEIGHT / 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {SVG_HEIGHT / 2})">Fraction of problems solved</text>',
        f'<text x="{x0 - 5}" y="{y0}" text-anchor="end">0</text>',
        f'<text x="{x0 - 5}" y="{SVG_MARGIN}" text-anchor="end">1</text>',
        f'<text x="{sx(x_max)}" y="{y0 + 18}" text-anchor="end">{x_max:.3g}</text>',
    ]
    for i, curve in enumerate(curves):
        color = SVG_COLORS[i % len(SVG_COLORS)]
        coords = [(sx(0.0), sy(0.0))]
        fraction = 0.0
        for ratio, value in curve.points:
            coords.append((sx(ratio), sy(fraction)))
            coords.append((sx(ratio), sy(value)))
            fraction = value
        coords.append((sx(x_max), sy(fraction)))
        points = " ".join(f"{x:.2f},{y:.2f}" for x, y in coords)
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{points}"/>'
        )
        parts.append(
            f'<text x="{SVG_WIDTH - SVG_MARGIN}" y="{SVG_MARGIN + 18 * (i + 1)}" '
            f'text-anchor="end" fill="{color}">{escape(curve.solver_id)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def profile_basename(tol: float) -> str:
    return f"profiles_tol{tol:.0e}"


def _write(path: str, content: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(content)
    except OSError as e:
        raise OutputError(path, str(e)) from e


def emit_outputs(
    records: Sequence[RunRecord],
    curves: Mapping[float, Sequence[ProfileCurve]],
    out_dir: str,
) -> List[str]:
    """
    Write the benchmark artifacts into out_dir.

    Parameters
    ----------
    records : Sequence[RunRecord]
        All runs.
    curves : Mapping[float, Sequence[ProfileCurve]]
        Profiles keyed by tolerance.
    out_dir : str
        Target directory, created if needed.

    Returns
    -------
    List[str]
        Paths written. Without records only headers-only CSV files are
        written and no SVG.

    Raises
    ------
    OutputError
        If the directory or a file cannot be written.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise OutputError(out_dir, str(e)) from e

    written = []
    runs_path = os.path.join(out_dir, "runs.csv")
    _write(runs_path, format_runs(records))
    written.append(runs_path)
    traces_path = os.path.join(out_dir, "traces.csv")
    _write(traces_path, format_traces(records))
    written.append(traces_path)

    for tol, tol_curves in curves.items():
        base = os.path.join(out_dir, profile_basename(tol))
        _write(base + ".csv", format_profile(tol_curves if records else []))
        written.append(base + ".csv")
        if records and tol_curves:
            _write(base + ".svg", render_profile_svg(tol_curves, tol))
            written.append(base + ".svg")
    logger.info(f"Wrote {len(written)} files to {out_dir}")
    return written

