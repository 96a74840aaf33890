"""SVG figures and tabular reports.

All output is plain text built with fixed number formatting, so identical
input always gives identical bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .scoring import MAX_HEXAGON_AREA, DescriptiveStats, EfficiencySummary, descriptive_stats
from .stats import FitModel, RankSizeFit
from .survey import DEFAULT_SCHEMA, N_QUESTIONS, WF_MAX, ContractViolation, WfVector

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
MARKERS = ("triangle-up", "triangle-down", "diamond", "circle", "square")


def _f(x: float) -> str:
    return f"{x:.6f}"


@dataclass(frozen=True)
class RadarSubject:
    label: str
    wf: WfVector
    style: Optional[str] = None  # stroke colour; palette colour when None


@dataclass(frozen=True)
class ChartSpec:
    title: str
    subjects: tuple[RadarSubject, ...]
    axis_labels: tuple[str, ...] = DEFAULT_SCHEMA.short_names
    size_px: tuple[int, int] = (420, 420)
    scale_max: float = WF_MAX

    def __post_init__(self):
        if len(self.axis_labels) != N_QUESTIONS:
            raise ContractViolation(f"a radar chart needs {N_QUESTIONS} axis labels")
        if self.scale_max != WF_MAX:
            raise ContractViolation("radar charts use the fixed 0-4 WF scale")
        w, h = self.size_px
        if w <= 0 or h <= 0:
            raise ContractViolation("chart size must be positive")

    @property
    def geometry(self) -> tuple[float, float, float]:
        """Centre x, centre y and plot radius in pixels."""
        w, h = self.size_px
        top = 30.0
        radius = min(w, h - top) / 2 - 55
        if radius <= 0:
            raise ContractViolation("chart too small")
        return w / 2, top + (h - top) / 2, radius


def radar_vertices(wf: Sequence[float], cx: float, cy: float, radius: float) -> list[tuple[float, float]]:
    """Pixel vertices: axis 1 points up, later axes follow clockwise."""
    pts = []
    for i, v in enumerate(wf):
        theta = math.pi / 2 - i * math.pi / 3
        r = v / WF_MAX * radius
        pts.append((cx + r * math.cos(theta), cy - r * math.sin(theta)))
    return pts


def _points_attr(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


def render_radar_svg(spec: ChartSpec) -> str:
    w, h = spec.size_px
    cx, cy, radius = spec.geometry
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f"<title>{escape(spec.title)}</title>",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<text class="title" x="{_f(w / 2)}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(spec.title)}</text>',
        '<g class="grid" fill="none" stroke="#bbbbbb" stroke-width="0.8">',
    ]
    for level in range(1, int(WF_MAX) + 1):
        ring = radar_vertices([level] * N_QUESTIONS, cx, cy, radius)
        out.append(f'<polygon class="gridline" data-level="{level}" points="{_points_attr(ring)}"/>')
    out.append("</g>")
    out.append('<g class="axes" stroke="#888888" stroke-width="0.8" font-family="sans-serif" font-size="10">')
    tips = radar_vertices([WF_MAX] * N_QUESTIONS, cx, cy, radius)
    label_tips = radar_vertices([WF_MAX * 1.18] * N_QUESTIONS, cx, cy, radius)
    for i, ((x, y), (lx, ly), label) in enumerate(zip(tips, label_tips, spec.axis_labels), start=1):
        anchor = "middle" if abs(lx - cx) < 1e-6 else ("start" if lx > cx else "end")
        out.append(f'<line class="axis" data-axis="{i}" x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(x)}" y2="{_f(y)}"/>')
        out.append(
            f'<text class="axis-label" x="{_f(lx)}" y="{_f(ly + 4)}" text-anchor="{anchor}" '
            f'stroke="none" fill="#333333">{i}. {escape(label)}</text>'
        )
    out.append("</g>")
    out.append('<g class="subjects" stroke-width="1.6" fill-opacity="0.12">')
    for k, subject in enumerate(spec.subjects):
        colour = subject.style or PALETTE[k % len(PALETTE)]
        pts = radar_vertices(list(subject.wf), cx, cy, radius)
        out.append(
            f'<polygon class="subject" data-label={quoteattr(subject.label)} '
            f'stroke={quoteattr(colour)} fill={quoteattr(colour)} points="{_points_attr(pts)}"/>'
        )
    out.append("</g>")
    if len(spec.subjects) > 1:
        out.append('<g class="legend" font-family="sans-serif" font-size="10">')
        for k, subject in enumerate(spec.subjects):
            colour = subject.style or PALETTE[k % len(PALETTE)]
            y = 40 + 14 * k
            out.append(f'<rect x="8" y="{y - 8}" width="10" height="10" fill={quoteattr(colour)}/>')
            out.append(f'<text x="22" y="{y + 1}">{escape(subject.label)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _marker_path(kind: str, x: float, y: float, s: float = 4.5) -> str:
    if kind == "triangle-up":
        pts = [(x, y - s), (x + s, y + s * 0.8), (x - s, y + s * 0.8)]
    elif kind == "triangle-down":
        pts = [(x, y + s), (x + s, y - s * 0.8), (x - s, y - s * 0.8)]
    elif kind == "diamond":
        pts = [(x, y - s), (x + s, y), (x, y + s), (x - s, y)]
    elif kind == "square":
        pts = [(x - s, y - s), (x + s, y - s), (x + s, y + s), (x - s, y + s)]
    else:
        return (f"M {_f(x - s)} {_f(y)} A {_f(s)} {_f(s)} 0 1 0 {_f(x + s)} {_f(y)} "
                f"A {_f(s)} {_f(s)} 0 1 0 {_f(x - s)} {_f(y)} Z")
    return "M " + " L ".join(f"{_f(px)} {_f(py)}" for px, py in pts) + " Z"


def render_rank_size_svg(
    fit_pairs: Sequence[tuple[RankSizeFit, RankSizeFit]],
    labels: Sequence[str],
    title: str = "Rank-size",
    size_px: tuple[int, int] = (560, 400),
    y_label: str = "value",
) -> str:
    """Scatter of (rank, value) per group with its power-law and linear fits.

    Each pair is (power fit, linear fit) of the same group, in either order.
    """
    if not fit_pairs:
        raise ContractViolation("no groups to plot")
    if len(labels) != len(fit_pairs):
        raise ContractViolation("one label per group is required")
    pairs = []
    for a, b in fit_pairs:
        by_model = {a.model: a, b.model: b}
        if set(by_model) != {FitModel.POWER, FitModel.LINEAR} or a.ranked_values != b.ranked_values:
            raise ContractViolation("each pair must hold the power and linear fit of one series")
        pairs.append((by_model[FitModel.POWER], by_model[FitModel.LINEAR]))

    w, h = size_px
    left, right, top, bottom = 60.0, 120.0, 34.0, 44.0
    max_rank = max(len(p.ranks) for p, _ in pairs)
    curve_max = max(
        max(max(p.ranked_values), float(np.max(p.predict(np.linspace(1, len(p.ranks), 60)))),
            float(np.max(lin.predict(np.array([1.0, len(lin.ranks)])))))
        for p, lin in pairs
    )
    curve_min = min(
        min(min(p.ranked_values), float(np.min(lin.predict(np.array([1.0, len(lin.ranks)])))))
        for p, lin in pairs
    )
    y_hi = math.ceil(curve_max / 10) * 10 if curve_max > 0 else 1.0
    y_lo = min(0.0, math.floor(curve_min / 10) * 10)
    x_lo, x_hi = 0.0, float(max_rank + 1)

    def px(rank):
        return left + (rank - x_lo) / (x_hi - x_lo) * (w - left - right)

    def py(value):
        return h - bottom - (value - y_lo) / (y_hi - y_lo) * (h - top - bottom)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
        f'<text class="title" x="{_f(w / 2)}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(title)}</text>',
        '<g class="frame" stroke="#444444" stroke-width="1" font-family="sans-serif" font-size="10">',
        f'<line x1="{_f(px(x_lo))}" y1="{_f(py(y_lo))}" x2="{_f(px(x_hi))}" y2="{_f(py(y_lo))}"/>',
        f'<line x1="{_f(px(x_lo))}" y1="{_f(py(y_lo))}" x2="{_f(px(x_lo))}" y2="{_f(py(y_hi))}"/>',
    ]
    for rank in range(1, max_rank + 1):
        out.append(f'<text x="{_f(px(rank))}" y="{_f(py(y_lo) + 14)}" text-anchor="middle" '
                   f'stroke="none">{rank}</text>')
    for k in range(6):
        v = y_lo + (y_hi - y_lo) * k / 5
        out.append(f'<text x="{_f(px(x_lo) - 6)}" y="{_f(py(v) + 3)}" text-anchor="end" '
                   f'stroke="none">{v:g}</text>')
    out.append(f'<text x="{_f((left + w - right) / 2)}" y="{h - 8}" text-anchor="middle" '
               f'stroke="none">rank</text>')
    out.append(f'<text x="14" y="{_f((top + h - bottom) / 2)}" text-anchor="middle" stroke="none" '
               f'transform="rotate(-90 14 {_f((top + h - bottom) / 2)})">{escape(y_label)}</text>')
    out.append("</g>")

    for k, ((power, linear), label) in enumerate(zip(pairs, labels)):
        colour = PALETTE[k % len(PALETTE)]
        marker = MARKERS[k % len(MARKERS)]
        n = len(power.ranks)
        out.append(f'<g class="group" data-group={quoteattr(label)} data-marker="{marker}">')
        lin_pts = [(px(r), py(float(linear.predict(r)))) for r in range(1, n + 1)]
        out.append(f'<polyline class="fit linear" fill="none" stroke={quoteattr(colour)} '
                   f'stroke-width="1.2" points="{_points_attr(lin_pts)}"/>')
        grid = np.linspace(1.0, float(n), 60)
        pow_pts = [(px(r), py(float(v))) for r, v in zip(grid, power.predict(grid))]
        out.append(f'<polyline class="fit power" fill="none" stroke={quoteattr(colour)} '
                   f'stroke-width="1.2" stroke-dasharray="5,3" points="{_points_attr(pow_pts)}"/>')
        for r, v in zip(power.ranks, power.ranked_values):
            x, y = px(r), py(v)
            out.append(f'<path class="point" data-rank="{r}" data-x="{_f(x)}" data-y="{_f(y)}" '
                       f'fill={quoteattr(colour)} d="{_marker_path(marker, x, y)}"/>')
        out.append("</g>")
        ly = top + 10 + 40 * k
        lx = w - right + 12
        out.append(f'<g class="legend" font-family="sans-serif" font-size="10">'
                   f'<path fill={quoteattr(colour)} d="{_marker_path(marker, lx, ly)}"/>'
                   f'<text x="{_f(lx + 9)}" y="{_f(ly + 3)}">{escape(label)}</text>'
                   f'<text x="{_f(lx + 9)}" y="{_f(ly + 15)}">lin R2 {linear.r_squared:.3f}</text>'
                   f'<text x="{_f(lx + 9)}" y="{_f(ly + 27)}">pow R2 {power.r_squared:.3f}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


TABLE_COLUMNS = ("WF1", "WF2", "WF3", "WF4", "WF5", "WF6", "Sum", "Average", "E1 / %",
                 "Area (AU)", "E2 / %")
# body precision, mean precision, sd precision per numeric column
_BODY = (None,) * 6 + (1, 2, 2, 1, 2)
_MEAN = (2,) * 6 + (2, 3, 3, 2, 2)
_SD = (3,) * 6 + (3, 4, 3, 3, 3)
_SCALE_MAX = (WF_MAX,) * 6 + (6 * WF_MAX, WF_MAX, 100.0, MAX_HEXAGON_AREA, 100.0)
_MAX_PREC = (None,) * 6 + (1, 2, 2, 2, 2)


def _fmt(value: Optional[float], precision: Optional[int]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if precision is None:
        text = f"{value:.2f}".rstrip("0").rstrip(".")
        return text
    return f"{value:.{precision}f}"


def _row_values(s: EfficiencySummary) -> list[Optional[float]]:
    wf = list(s.wf) if s.wf is not None else [None] * N_QUESTIONS
    return wf + [s.sum_wf, s.mean_wf, s.e1_percent, s.hexagon_area_au, s.e2_percent]


def column_stats(summaries: Sequence[EfficiencySummary]) -> list[Optional[DescriptiveStats]]:
    """Descriptive statistics per table column; None where a column is empty."""
    rows = [_row_values(s) for s in summaries]
    out = []
    for col in zip(*rows):
        vals = [v for v in col if v is not None and not (isinstance(v, float) and math.isnan(v))]
        out.append(descriptive_stats(vals) if vals else None)
    return out


def table_rows(
    summaries: Sequence[EfficiencySummary],
    stats: Optional[Sequence[Optional[DescriptiveStats]]] = None,
) -> list[list[str]]:
    """Header, one row per subject, then the Mean/SD/CV/Max footer.

    The Max row shows the scale maximum (all WFs equal to 4), as in the
    published tables.
    """
    if not summaries:
        raise ContractViolation("table needs at least one subject")
    stats = column_stats(summaries) if stats is None else list(stats)
    rows = [["Subject", *TABLE_COLUMNS]]
    for s in summaries:
        rows.append([s.subject_id] + [_fmt(v, p) for v, p in zip(_row_values(s), _BODY)])
    rows.append(["Mean"] + [_fmt(st.mean if st else None, p) for st, p in zip(stats, _MEAN)])
    rows.append(["SD"] + [_fmt(st.sd if st else None, p) for st, p in zip(stats, _SD)])
    rows.append(["CV"] + [_fmt(st.cv if st else None, 3) for st in stats])
    rows.append(["Max"] + [_fmt(v, p) for v, p in zip(_SCALE_MAX, _MAX_PREC)])
    return rows


def format_rows(rows: Sequence[Sequence[str]], fmt: str = "md") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    if fmt != "md":
        raise ContractViolation(f"unknown table format {fmt!r}")
    lines = ["| " + " | ".join(rows[0]) + " |", "|" + "---|" * len(rows[0])]
    lines += ["| " + " | ".join(r) + " |" for r in rows[1:]]
    return "\n".join(lines) + "\n"


def emit_table(
    summaries: Sequence[EfficiencySummary],
    stats: Optional[Sequence[Optional[DescriptiveStats]]] = None,
    fmt: str = "md",
) -> str:
    """Render summaries in the published table layout as Markdown or CSV."""
    return format_rows(table_rows(summaries, stats), fmt)


# ---------------------------------------------------------------- analysis output


def _r(value: Optional[float], prec: int = 3) -> str:
    return "n/a" if value is None else f"{value:.{prec}f}"


def analysis_tables(report) -> dict[str, list[list[str]]]:
    """Named tables (header first) describing an AnalysisReport."""
    tables = {}
    rows = [["group", "a", "b", "n", "r", "strong"]]
    for group, matrix in report.correlations.items():
        for (a, b), res in matrix.items():
            rows.append([group, a, b, str(len(report.groups[group])),
                         _r(res.r if res else None), "" if res is None else str(res.strong).lower()])
    tables["correlations"] = rows

    rows = [["group", "n", "tau_b", "concordant", "discordant", "ties_x", "ties_y", "ties_both"]]
    for group, c in report.coherence.items():
        rows.append([group, str(c.n), _r(c.tau_b), str(c.concordant), str(c.discordant),
                     str(c.ties_x), str(c.ties_y), str(c.ties_both)])
    tables["coherence"] = rows

    rows = [["measure", "group_a", "group_b", "n1", "n2", "U", "z", "p", "significant"]]
    for measure, tests in report.group_tests.items():
        for (a, b), t in tests.items():
            rows.append([measure.upper(), a, b, str(t.n1), str(t.n2), f"{t.u_statistic:.1f}",
                         _r(t.z), _r(t.p_two_sided, 4), str(t.significant).lower()])
    tables["mannwhitney"] = rows

    rows = [["group", "measure", "n", "power_amplitude", "power_exponent", "power_r2",
             "linear_intercept", "linear_slope", "linear_r2", "linear_r2_ge_power_r2"]]
    for (group, measure), (pw, lin) in report.fits.items():
        rows.append([group, measure.upper(), str(len(pw.ranks)), _r(pw.params[0], 4),
                     _r(pw.params[1], 4), _r(pw.r_squared, 4), _r(lin.params[0], 4),
                     _r(lin.params[1], 4), _r(lin.r_squared, 4),
                     str(lin.r_squared >= pw.r_squared).lower()])
    tables["rank_size"] = rows
    return tables


def write_analysis(report, outdir: Path, fmt: str = "md") -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ext = "md" if fmt == "md" else "csv"
    written = []
    for name, rows in analysis_tables(report).items():
        path = outdir / f"{name}.{ext}"
        path.write_text(format_rows(rows, fmt) if len(rows) > 1 or fmt == "csv"
                        else f"No {name} results.\n", encoding="utf-8")
        written.append(path)
    notes = outdir / "notes.txt"
    notes.write_text("".join(f"{n}\n" for n in report.notes), encoding="utf-8")
    written.append(notes)
    for measure in report.measures:
        groups = [g for (g, m) in report.fits if m == measure]
        if not groups:
            continue
        svg = render_rank_size_svg(
            [report.fits[(g, measure)] for g in groups], groups,
            title=f"Rank-size law for {measure.upper()}", y_label=f"{measure.upper()} / %",
        )
        path = outdir / f"rank_size_{measure}.svg"
        path.write_text(svg, encoding="utf-8")
        written.append(path)
    return written
