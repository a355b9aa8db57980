"""CSV and SVG emission.

CSV files are comma separated with LF line endings and a header row.  Real
numbers are written with 12 significant digits in scientific notation,
booleans as ``true``/``false`` and NaN as ``nan``, so identical inputs give
byte-identical files.  Column order follows the field order of the row
dataclass (see ``SweepRow``, ``BandwidthRow`` and ``PopulationRow``).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import fields
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import ConfigError, OutputError
from .experiments import SweepResult

#: Colors follow the convention blue = push-pull, red = on-off.
SCHEME_COLORS = {"push-pull": "#1f4fbf", "on-off": "#c62828"}
POINT_RADIUS = 2.5
C_PI_RADIUS = 2 * POINT_RADIUS
AXIS_MARGIN = 0.05

SVG_WIDTH = 640
SVG_HEIGHT = 480
_PLOT = (70, 20, 170, 50)  # left, top, right, bottom padding in pixels


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return "nan"
        return f"{float(v):.11e}"
    if isinstance(v, (complex, np.complexfloating)):
        raise ConfigError("complex values must be split into real and imaginary columns")
    return str(v)


def table_text(columns: list[str], rows) -> str:
    """CSV text for ``rows`` (sequences in column order)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _write(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def result_csv(result: SweepResult) -> str:
    names = [f.name for f in fields(result.row_type)]
    return table_text(names, ([getattr(r, n) for n in names] for r in result.rows))


def emit_csv(result: SweepResult, path) -> Path:
    """Write ``result`` as CSV; an empty result yields the header only."""
    return _write(path, result_csv(result))


def reflectivity_table(rs, phases=None) -> tuple[list[str], list]:
    """Columns omega, Re/Im/|r| and phases for both ground states."""
    cols = ["omega", "re_r1", "im_r1", "abs_r1", "re_r2", "im_r2", "abs_r2"]
    data = [rs.grid.samples, rs.r1.real, rs.r1.imag, np.abs(rs.r1), rs.r2.real, rs.r2.imag, np.abs(rs.r2)]
    if phases is not None:
        cols += ["theta1", "theta2", "delta_phase_raw", "delta_phase"]
        data += [phases.theta1, phases.theta2, phases.delta_phase_raw, phases.delta_phase]
    return cols, list(zip(*(a.tolist() for a in data)))


def emit_reflectivity_csv(rs, path, phases=None) -> Path:
    cols, rows = reflectivity_table(rs, phases)
    return _write(path, table_text(cols, rows))


def trajectory_table(traj) -> tuple[list[str], list]:
    cols = ["t", "re_a_in", "im_a_in", "re_psi_c", "im_psi_c", "re_psi_e", "im_psi_e", "re_b_out", "im_b_out", "pop_e"]
    data = [traj.times]
    for a in (traj.a_in, traj.psi_c, traj.psi_e, traj.b_out):
        data += [a.real, a.imag]
    data.append(traj.excited_population())
    if traj.psi_q is not None:
        cols += ["re_psi_q", "im_psi_q"]
        data += [traj.psi_q.real, traj.psi_q.imag]
    return cols, list(zip(*(np.asarray(a).tolist() for a in data)))


def emit_trajectory_csv(traj, path) -> Path:
    cols, rows = trajectory_table(traj)
    return _write(path, table_text(cols, rows))


def _axis_range(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    span = hi - lo
    if span == 0:
        span = abs(lo) if lo else 1.0
    return lo - AXIS_MARGIN * span, hi + AXIS_MARGIN * span


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * step:
        out.append(round(v, 12))
        v += step
    return out


def svg_text(result: SweepResult, title: str | None = None) -> str:
    """Parametric plot of F_ave against P_herald_ave, one trajectory per (scheme, kappa_j).

    C_pi points are drawn with twice the ordinary marker radius.
    """
    if not {"F_ave", "P_herald_ave"} <= {f.name for f in fields(result.row_type)}:
        raise ConfigError(f"{result.row_type.__name__} rows carry no (P_herald_ave, F_ave) pairs to plot")
    groups = {}
    for r in result.rows:
        if math.isfinite(r.F_ave) and math.isfinite(r.P_herald_ave):
            groups.setdefault((r.scheme, r.kappa_j), []).append(r)
    left, top, right, bottom = _PLOT
    pw, ph = SVG_WIDTH - left - right, SVG_HEIGHT - top - bottom
    title = escape(title or result.name)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="11">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if not groups:
        out.append(f'<text x="{left + pw / 2}" y="{top + ph / 2}" text-anchor="middle">no data</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    xs = np.array([r.P_herald_ave for g in groups.values() for r in g])
    ys = np.array([r.F_ave for g in groups.values() for r in g])
    x0, x1 = _axis_range(xs)
    y0, y1 = _axis_range(ys)

    def X(v):
        return left + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return top + (y1 - v) / (y1 - y0) * ph

    for v in _ticks(x0, x1):
        out.append(f'<line x1="{X(v):.2f}" y1="{top + ph}" x2="{X(v):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{X(v):.2f}" y="{top + ph + 16}" text-anchor="middle">{v:g}</text>')
    for v in _ticks(y0, y1):
        out.append(f'<line x1="{left - 4}" y1="{Y(v):.2f}" x2="{left}" y2="{Y(v):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{Y(v) + 4:.2f}" text-anchor="end">{v:g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{SVG_HEIGHT - 12}" text-anchor="middle">heralding probability P_herald_ave</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2}" text-anchor="middle" transform="rotate(-90 16 {top + ph / 2})">'
        "average fidelity F_ave</text>"
    )

    dashes = ["", "6 3", "2 2", "8 3 2 3", "1 3"]
    legend_y = top + 10
    for i, ((scheme, kj), rows) in enumerate(groups.items()):
        color = SCHEME_COLORS.get(scheme, "black")
        dash = dashes[sorted({k for _, k in groups}).index(kj) % len(dashes)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        pts = " ".join(f"{X(r.P_herald_ave):.2f},{Y(r.F_ave):.2f}" for r in rows)
        label = escape(f"{scheme}, kappa_j = {kj:g}")
        out.append(f'<g class="trajectory" data-scheme="{scheme}" data-kappa-j="{kj:g}">')
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        for r in rows:
            cpi = bool(getattr(r, "is_c_pi", False))
            rad = C_PI_RADIUS if cpi else POINT_RADIUS
            cls = ' class="c-pi"' if cpi else ""
            out.append(f'<circle{cls} cx="{X(r.P_herald_ave):.2f}" cy="{Y(r.F_ave):.2f}" r="{rad:g}" fill="{color}"/>')
        out.append("</g>")
        lx = left + pw + 12
        ly = legend_y + 16 * i
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(result: SweepResult, path, title: str | None = None) -> Path:
    return _write(path, svg_text(result, title))
