"""Deterministic SVG plots: median metric curves with IQR bands vs N.

The writer emits plain hand-assembled SVG so identical inputs always yield
byte-identical files. One file per (metric, family, dims) combination; the
x axis is log-scaled over the sample-count grid.
"""

from __future__ import annotations

import math
import os

import numpy as np

PLOT_METRICS = ("ness", "jsd", "evidence_mse", "wall_time_seconds")
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf", "#7f7f7f")

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 36, 48


def _quartiles(values):
    vals = np.asarray([v for v in values if math.isfinite(v)], dtype=float)
    if vals.size == 0:
        return None
    return (float(np.percentile(vals, 25)), float(np.median(vals)),
            float(np.percentile(vals, 75)))


def _collect(rows, metric, family, dims, method, counts):
    """Per-N quartiles for one method, skipping Ns with no finite data."""
    out = []
    for n in counts:
        stats = _quartiles([
            getattr(r, metric) for r in rows
            if r.method == method and r.family == family and r.dims == dims
            and r.n == n and r.error is None
        ])
        if stats is not None:
            out.append((n, *stats))
    return out


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    """Maps (log2 N, metric value) into pixel coordinates."""

    def __init__(self, counts, y_max):
        self.x_lo = math.log2(min(counts))
        self.x_hi = math.log2(max(counts))
        if self.x_hi == self.x_lo:
            self.x_hi += 1.0
        self.y_hi = y_max if y_max > 0 else 1.0

    def x(self, n):
        frac = (math.log2(n) - self.x_lo) / (self.x_hi - self.x_lo)
        return MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)

    def y(self, value):
        frac = min(value / self.y_hi, 1.0)
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)


def _svg_document(title, counts, series):
    """Assemble one SVG; ``series`` maps method -> [(n, q1, med, q3), ...]."""
    y_max = max((q3 for pts in series.values() for (_, _, _, q3) in pts),
                default=1.0)
    frame = _Frame(counts, y_max * 1.05)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    axis_y = HEIGHT - MARGIN_B
    parts.append(f'<line x1="{MARGIN_L}" y1="{axis_y}" x2="{WIDTH - MARGIN_R}" '
                 f'y2="{axis_y}" stroke="black"/>')
    parts.append(f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
                 f'y2="{axis_y}" stroke="black"/>')
    for n in counts:
        x = _fmt(frame.x(n))
        parts.append(f'<line x1="{x}" y1="{axis_y}" x2="{x}" '
                     f'y2="{axis_y + 4}" stroke="black"/>')
        parts.append(f'<text x="{x}" y="{axis_y + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{n}</text>')
    parts.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">N (log scale)</text>')
    for i in range(5):
        val = frame.y_hi * i / 4
        y = _fmt(frame.y(val))
        parts.append(f'<line x1="{MARGIN_L - 4}" y1="{y}" x2="{MARGIN_L}" '
                     f'y2="{y}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_L - 8}" y="{y}" text-anchor="end" '
                     f'dominant-baseline="middle" font-family="sans-serif" '
                     f'font-size="11">{val:.3g}</text>')
    for idx, (method, pts) in enumerate(series.items()):
        if not pts:
            continue
        color = PALETTE[idx % len(PALETTE)]
        upper = [(frame.x(n), frame.y(q3)) for (n, _, _, q3) in pts]
        lower = [(frame.x(n), frame.y(q1)) for (n, q1, _, _) in reversed(pts)]
        band = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in upper + lower)
        parts.append(f'<polygon points="{band}" fill="{color}" '
                     f'fill-opacity="0.15" stroke="none"/>')
        line = " ".join(f"{_fmt(frame.x(n))},{_fmt(frame.y(med))}"
                        for (n, _, med, _) in pts)
        parts.append(f'<polyline points="{line}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN_T + 14 * idx + 6
        lx = WIDTH - MARGIN_R - 130
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly + 4}" '
                     f'font-family="sans-serif" font-size="11">{method}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plots(rows, out_dir, spec) -> list:
    """Write one SVG per metric and (family, dims) cell; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for family in spec.families:
        for dims in spec.dims:
            for metric in PLOT_METRICS:
                series = {
                    method: _collect(rows, metric, family, dims, method,
                                     spec.sample_counts)
                    for method in spec.methods
                }
                if not any(series.values()):
                    continue
                title = f"{metric} vs N ({family}, {dims}D)"
                doc = _svg_document(title, spec.sample_counts, series)
                path = os.path.join(out_dir, f"{metric}_{family}_{dims}d.svg")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(doc)
                paths.append(path)
    return paths
