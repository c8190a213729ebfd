"""CSV, SVG and JSON emission for run reports. All output is byte-deterministic."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

import numpy as np

from .dynamics import RabiModel
from .experiment import RunReport
from .measurement import SurvivalCurve

CSV_HEADER = "tau,P0,P1,P2"
SIGNIFICANT_DIGITS = 12

SVG_WIDTH, SVG_HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 150, 30, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def format_number(x: float) -> str:
    """Decimal notation rounded to 12 significant digits, trailing zeros trimmed."""
    x = float(x)
    if x == 0.0:
        return "0"
    return np.format_float_positional(x, precision=SIGNIFICANT_DIGITS, unique=False,
                                      fractional=False, trim="-")


def curve_csv(curve: SurvivalCurve, t_poincare: float | None = None) -> str:
    """
    CSV text for one curve. Passing ``t_poincare`` appends a raw-time
    column ``t``.
    """
    header = CSV_HEADER + (",t" if t_poincare is not None else "")
    lines = [header]
    for i in range(len(curve)):
        row = [curve.tau[i], curve.p0[i], curve.p1[i], curve.p2[i]]
        if t_poincare is not None:
            row.append(curve.tau[i] * t_poincare)
        lines.append(",".join(format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def read_curve_csv(path: str | Path) -> SurvivalCurve:
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith(CSV_HEADER):
        raise ValueError(f"{path}: missing '{CSV_HEADER}' header")
    rows = np.array([[float(v) for v in line.split(",")[:4]] for line in lines[1:]]).reshape(-1, 4)
    return SurvivalCurve(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3], label=Path(path).stem)


def curve_filename(curve: SurvivalCurve) -> str:
    return "free.csv" if curve.n is None else f"n{curve.n}.csv"


def _ordered(curves: Iterable[SurvivalCurve]) -> list[SurvivalCurve]:
    return sorted(curves, key=lambda c: -1 if c.n is None else c.n)


def render_svg(curves: Iterable[SurvivalCurve], tau_max: float) -> str:
    """P0 against tau: solid free curve, dashed measured curves with a legend."""
    curves = _ordered(curves)
    plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(tau: float) -> float:
        return MARGIN_LEFT + plot_w * tau / tau_max

    def sy(p: float) -> float:
        return MARGIN_TOP + plot_h * (1.0 - p)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black"/>',
    ]
    for k in range(5):
        tau = tau_max * k / 4
        x = sx(tau)
        out.append(f'<line x1="{x:.2f}" y1="{sy(0):.2f}" x2="{x:.2f}" y2="{sy(0) + 5:.2f}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{sy(0) + 19:.2f}" text-anchor="middle">{format_number(round(tau, 6))}</text>')
        p = k / 4
        y = sy(p)
        out.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{MARGIN_LEFT}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{format_number(p)}</text>')
    out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{SVG_HEIGHT - 15}" text-anchor="middle">'
               f'tau = t / T_P</text>')
    out.append(f'<text x="20" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:.2f})">P0(tau)</text>')

    legend_x = MARGIN_LEFT + plot_w + 15
    for i, curve in enumerate(curves):
        free = curve.n is None
        color = "black" if free else PALETTE[(i - 1) % len(PALETTE)]
        dash = "" if free else ' stroke-dasharray="6,4"'
        width = "2" if free else "1.5"
        points = " ".join(f"{sx(t):.2f},{sy(p):.2f}" for t, p in zip(curve.tau, curve.p0))
        if points:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{points}"/>')
        y = MARGIN_TOP + 10 + 18 * i
        label = "free" if free else f"n = {curve.n}"
        out.append(f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 30}" y2="{y}" stroke="{color}" '
                   f'stroke-width="{width}"{dash}/>')
        out.append(f'<text x="{legend_x + 36}" y="{y + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_outputs(report: RunReport, csv_dir: str | Path | None = None, svg_path: str | Path | None = None,
                 report_path: str | Path | None = None, raw_time: bool = False) -> list[Path]:
    """Write the requested files; returns the paths written, in order."""
    written = []
    t_p = None
    if raw_time:
        t_p = RabiModel(report.config["omega01"], report.config["omega12"]).t_poincare
    if csv_dir is not None:
        directory = Path(csv_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for curve in _ordered(report.curves):
            path = directory / curve_filename(curve)
            path.write_bytes(curve_csv(curve, t_p).encode())
            written.append(path)
    if svg_path is not None:
        path = Path(svg_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(render_svg(report.curves, report.config["tau_max"]).encode())
        written.append(path)
    if report_path is not None:
        path = Path(report_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes((json.dumps(report.to_dict(), indent=2) + "\n").encode())
        written.append(path)
    return written
