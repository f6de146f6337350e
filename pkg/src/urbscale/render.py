"""Deterministic SVG emission for fractal spectra and planning planes.

No plotting library: elements are written in a fixed order with fixed
number formatting so identical inputs give byte-identical documents,
which keeps golden-file tests meaningful.
"""

from __future__ import annotations

import math

import numpy as np

#: Fixed ordered palette for spectrum bands, low area -> high area
#: (light yellow to dark red).
SPECTRUM_PALETTE = (
    "#ffffcc",
    "#ffeda0",
    "#fed976",
    "#feb24c",
    "#fd8d3c",
    "#fc4e2a",
    "#e31a1c",
    "#bd0026",
    "#800026",
)

#: Anchor colors for the plane heatmap ramp, interpolated linearly
#: (dark violet -> blue -> teal -> green -> yellow).
HEATMAP_STOPS = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def ramp_color(t: float) -> str:
    """Hex color at position t in [0, 1] of the heatmap ramp."""
    t = min(max(t, 0.0), 1.0)
    for (t0, c0), (t1, c1) in zip(HEATMAP_STOPS, HEATMAP_STOPS[1:]):
        if t <= t1:
            f = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            rgb = [round(a + (b - a) * f) for a, b in zip(c0, c1)]
            return "#{:02x}{:02x}{:02x}".format(*rgb)
    return "#{:02x}{:02x}{:02x}".format(*HEATMAP_STOPS[-1][1])


def spectrum_svg(bands, width: int = 720, height: int = 180) -> str:
    """Render spectrum bands as colored squares on a log density axis.

    ``bands`` is an ordered sequence with ``density_rhoj`` and ``color_bin``
    attributes (see :class:`urbscale.scaling.SpectrumBand`).
    """
    if not bands:
        raise ValueError("no bands to render")
    margin = 40.0
    side = 28.0
    logs = [math.log10(b.density_rhoj) for b in bands]
    lo, hi = min(logs), max(logs)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    span = width - 2 * margin

    def xpos(lg: float) -> float:
        return margin + (lg - lo) / (hi - lo) * span

    y = height / 2.0 - side / 2.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{_fmt(margin)}" y1="{_fmt(y + side + 12)}" '
        f'x2="{_fmt(width - margin)}" y2="{_fmt(y + side + 12)}" '
        'stroke="#333333" stroke-width="1"/>',
    ]
    for band in bands:
        x = xpos(math.log10(band.density_rhoj)) - side / 2.0
        color = SPECTRUM_PALETTE[band.color_bin]
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(side)}" '
            f'height="{_fmt(side)}" fill="{color}" stroke="#333333" '
            'stroke-width="0.5"/>'
        )
        label = f"{band.density_rhoj:.3g}"
        parts.append(
            f'<text x="{_fmt(x + side / 2.0)}" y="{_fmt(y + side + 26)}" '
            f'font-size="9" text-anchor="middle" fill="#333333">{label}</text>'
        )
    parts.append(
        f'<text x="{_fmt(width / 2.0)}" y="{_fmt(height - 4)}" font-size="11" '
        'text-anchor="middle" fill="#333333">population density (km^-2, log scale)'
        "</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _contour_segments(grid: np.ndarray, level: float):
    """Marching squares: line segments where the grid crosses ``level``.

    Cells are visited row-major; saddle cases are resolved by the cell-center
    average, so the output ordering is deterministic.
    """
    segs = []

    def interp(va, vb, pa, pb):
        f = 0.5 if vb == va else (level - va) / (vb - va)
        return (pa[0] + (pb[0] - pa[0]) * f, pa[1] + (pb[1] - pa[1]) * f)

    gt = grid > level
    case = (
        gt[:-1, :-1].astype(np.int8)
        | (gt[:-1, 1:].astype(np.int8) << 1)
        | (gt[1:, 1:].astype(np.int8) << 2)
        | (gt[1:, :-1].astype(np.int8) << 3)
    )
    for i, j in np.argwhere((case != 0) & (case != 15)):
        idx = int(case[i, j])
        v00, v10 = grid[i, j], grid[i, j + 1]
        v01, v11 = grid[i + 1, j], grid[i + 1, j + 1]
        p00, p10, p01, p11 = (j, i), (j + 1, i), (j, i + 1), (j + 1, i + 1)
        top = interp(v00, v10, p00, p10)
        bottom = interp(v01, v11, p01, p11)
        left = interp(v00, v01, p00, p01)
        right = interp(v10, v11, p10, p11)
        if idx in (1, 14):
            segs.append((left, top))
        elif idx in (2, 13):
            segs.append((top, right))
        elif idx in (3, 12):
            segs.append((left, right))
        elif idx in (4, 11):
            segs.append((right, bottom))
        elif idx in (6, 9):
            segs.append((top, bottom))
        elif idx in (7, 8):
            segs.append((left, bottom))
        else:  # 5, 10: saddle
            center = (v00 + v10 + v01 + v11) / 4.0
            if (center > level) == (idx == 5):
                segs.append((left, top))
                segs.append((right, bottom))
            else:
                segs.append((left, bottom))
                segs.append((top, right))
    return segs


def heatmap_svg(
    grid: np.ndarray,
    x_axis: np.ndarray,
    y_axis: np.ndarray,
    n_contours: int = 8,
    cell: float = 6.0,
    title: str = "",
) -> str:
    """Heatmap of ``grid[iy, ix]`` with contour lines.

    Colors come from :func:`ramp_color` scaled between the grid min and max;
    a constant grid maps everything to the low end of the ramp.
    """
    grid = np.asarray(grid, dtype=np.float64)
    ny, nx = grid.shape
    margin = 30.0
    width = nx * cell + 2 * margin
    height = ny * cell + 2 * margin
    zmin = float(grid.min())
    zmax = float(grid.max())
    spread = zmax - zmin

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(width / 2.0)}" y="16" font-size="12" '
            f'text-anchor="middle" fill="#333333">{title}</text>'
        )
    for iy in range(ny):
        # SVG y grows downward; row 0 (smallest y value) drawn at the bottom
        ypix = margin + (ny - 1 - iy) * cell
        for ix in range(nx):
            t = 0.0 if spread == 0.0 else (grid[iy, ix] - zmin) / spread
            parts.append(
                f'<rect x="{_fmt(margin + ix * cell)}" y="{_fmt(ypix)}" '
                f'width="{_fmt(cell)}" height="{_fmt(cell)}" '
                f'fill="{ramp_color(t)}"/>'
            )
    if spread > 0.0 and n_contours > 0:
        levels = np.linspace(zmin, zmax, n_contours + 2)[1:-1]
        for level in levels:
            for (xa, ya), (xb, yb) in _contour_segments(grid, float(level)):
                x1 = margin + (xa + 0.5) * cell
                y1 = margin + (ny - 1 - ya + 0.5 - 1) * cell + cell
                x2 = margin + (xb + 0.5) * cell
                y2 = margin + (ny - 1 - yb + 0.5 - 1) * cell + cell
                parts.append(
                    f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                    f'y2="{_fmt(y2)}" stroke="#222222" stroke-width="0.7"/>'
                )
    parts.append(
        f'<text x="{_fmt(margin)}" y="{_fmt(height - 8)}" font-size="10" '
        f'fill="#333333">x: [{x_axis[0]:.4g}, {x_axis[-1]:.4g}]  '
        f'y: [{y_axis[0]:.4g}, {y_axis[-1]:.4g}]  '
        f'z: [{zmin:.4g}, {zmax:.4g}]</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
