"""Static SVG chart: mean Hamming distance vs observation probability.

The chart is rendered directly as SVG markup (no plotting library), which
keeps the output a deterministic function of the CSV bytes: one
``<polyline class="series">`` per method through the per-pd means, with
standard-error bars drawn as ``<line class="errbar">`` elements.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

from .errors import CsvSchemaError, DegenerateInputError
from .experiment import CSV_HEADER

__all__ = ["SeriesPoint", "load_hd_table", "aggregate_series", "render_chart", "plot_csv"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_WIDTH, _HEIGHT = 640, 420
_MARGIN_LEFT, _MARGIN_RIGHT = 70, 150
_MARGIN_TOP, _MARGIN_BOTTOM = 30, 60


@dataclass(frozen=True)
class SeriesPoint:
    pd: float
    mean_hd: float
    stderr_hd: float


def load_hd_table(text: str) -> list[tuple[str, float, int]]:
    """Parse a results CSV into (method, pd, hd) rows, schema-checked."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CsvSchemaError("empty file, expected a header row")

    expected = CSV_HEADER.split(",")
    got = lines[0].split(",")
    for index, want in enumerate(expected):
        if index >= len(got) or got[index] != want:
            found = got[index] if index < len(got) else "<missing>"
            raise CsvSchemaError(f"column {index + 1}: expected {want!r}, got {found!r}")
    if len(got) > len(expected):
        raise CsvSchemaError(f"column {len(expected) + 1}: unexpected extra column {got[len(expected)]!r}")

    pd_col = expected.index("pd")
    method_col = expected.index("method")
    hd_col = expected.index("hd")

    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(expected):
            raise CsvSchemaError(f"line {lineno}: expected {len(expected)} fields, got {len(fields)}")
        try:
            rows.append((fields[method_col], float(fields[pd_col]), int(fields[hd_col])))
        except ValueError as exc:
            raise CsvSchemaError(f"line {lineno}: {exc}") from None
    return rows


def aggregate_series(rows: list[tuple[str, float, int]]) -> list[tuple[str, list[SeriesPoint]]]:
    """Group hd values by (method, pd): mean and standard error per point."""
    if not rows:
        raise DegenerateInputError("CSV contains no data rows")
    grouped: dict[str, dict[float, list[int]]] = {}
    for method, pd, hd in rows:
        grouped.setdefault(method, {}).setdefault(pd, []).append(hd)

    series = []
    for method in sorted(grouped):
        points = []
        for pd in sorted(grouped[method]):
            values = grouped[method][pd]
            k = len(values)
            mean = sum(values) / k
            if k > 1:
                var = sum((v - mean) ** 2 for v in values) / (k - 1)
                stderr = math.sqrt(var / k)
            else:
                stderr = 0.0
            points.append(SeriesPoint(pd=pd, mean_hd=mean, stderr_hd=stderr))
        series.append((method, points))
    return series


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def render_chart(series: list[tuple[str, list[SeriesPoint]]]) -> str:
    """Render aggregated series as a standalone SVG document."""
    pds = [p.pd for _, points in series for p in points]
    tops = [p.mean_hd + p.stderr_hd for _, points in series for p in points]
    x_lo, x_hi = min(pds), max(pds)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.05, x_hi + 0.05
    y_lo, y_hi = 0.0, max(max(tops) * 1.1, 1.0)

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(value: float) -> float:
        return _MARGIN_LEFT + (value - x_lo) / (x_hi - x_lo) * plot_w

    def sy(value: float) -> float:
        return _MARGIN_TOP + plot_h - (value - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]

    x0, y0 = _MARGIN_LEFT, _MARGIN_TOP + plot_h
    x1, y1 = _MARGIN_LEFT + plot_w, _MARGIN_TOP
    out.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')

    for tick in _ticks(x_lo, x_hi):
        px = sx(tick)
        out.append(f'<line x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" y2="{y0 + 5}" stroke="black"/>')
        out.append(
            f'<text x="{px:.2f}" y="{y0 + 20}" font-size="12" text-anchor="middle">{tick:.2f}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        py = sy(tick)
        out.append(f'<line x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{py + 4:.2f}" font-size="12" text-anchor="end">{tick:.1f}</text>'
        )
    out.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 15}" font-size="13" '
        f'text-anchor="middle">observation probability pd</text>'
    )
    out.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.2f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.2f})">mean Hamming distance</text>'
    )

    for index, (method, points) in enumerate(series):
        color = _PALETTE[index % len(_PALETTE)]
        coords = " ".join(f"{sx(p.pd):.2f},{sy(p.mean_hd):.2f}" for p in points)
        for p in points:
            px, lo, hi = sx(p.pd), sy(p.mean_hd - p.stderr_hd), sy(p.mean_hd + p.stderr_hd)
            out.append(
                f'<line class="errbar" x1="{px:.2f}" y1="{lo:.2f}" x2="{px:.2f}" y2="{hi:.2f}" '
                f'stroke="{color}"/>'
            )
            for py in (lo, hi):
                out.append(
                    f'<line class="errbar" x1="{px - 4:.2f}" y1="{py:.2f}" x2="{px + 4:.2f}" '
                    f'y2="{py:.2f}" stroke="{color}"/>'
                )
        out.append(f'<polyline class="series" fill="none" stroke="{color}" points="{coords}"/>')
        for p in points:
            out.append(
                f'<circle cx="{sx(p.pd):.2f}" cy="{sy(p.mean_hd):.2f}" r="3" fill="{color}"/>'
            )
        ly = _MARGIN_TOP + 10 + 20 * index
        lx = _MARGIN_LEFT + plot_w + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}" font-size="12">{method}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(csv_path, out_path):
    """Read a results CSV and write the chart; no file is written on error."""
    with open(csv_path, "r", encoding="ascii") as fh:
        rows = load_hd_table(fh.read())
    svg = render_chart(aggregate_series(rows))

    out_path = os.fspath(out_path)
    directory = os.path.dirname(out_path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".haprtr-", suffix=".svg")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(svg)
        os.replace(tmp_path, out_path)
    except BaseException:
        os.unlink(tmp_path)
        raise
