"""Minimal SVG heatmaps, written by hand so output bytes are reproducible.

Diverging scale centered at zero: blue for negative, white for zero, red for
positive, saturating at the largest absolute cell value.
"""
from __future__ import annotations

_NEG = (33, 102, 172)
_MID = (247, 247, 247)
_POS = (178, 24, 43)


def _color(t: float) -> str:
    t = max(-1.0, min(1.0, t))
    anchor = _POS if t >= 0.0 else _NEG
    f = abs(t)
    rgb = tuple(round(m + (a - m) * f) for m, a in zip(_MID, anchor))
    return "#%02x%02x%02x" % rgb


def render_heatmap(mu_grid, mu_sigma_grid, values, title: str) -> str:
    """SVG text for a matrix indexed values[i_mu][i_mu_sigma].

    mu runs along x, mu_sigma along y (increasing upward).
    """
    n_x, n_y = len(mu_grid), len(mu_sigma_grid)
    left, top, plot_w, plot_h = 70.0, 34.0, 560.0, 440.0
    width, height = left + plot_w + 24.0, top + plot_h + 52.0
    cw, ch = plot_w / n_x, plot_h / n_y

    flat = [v for row in values for v in row]
    vmax = max((abs(v) for v in flat), default=0.0) or 1.0
    vmin_val, vmax_val = min(flat), max(flat)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="20" font-family="sans-serif" font-size="14" '
        f'text-anchor="middle">{title}</text>',
    ]
    for i in range(n_x):
        for j in range(n_y):
            x = left + i * cw
            y = top + plot_h - (j + 1) * ch  # larger mu_sigma sits higher
            out.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw + 0.5:.2f}" height="{ch + 0.5:.2f}" '
                f'fill="{_color(values[i][j] / vmax)}"/>'
            )

    def _xpos(i: int) -> float:
        return left + (i + 0.5) * cw

    def _ypos(j: int) -> float:
        return top + plot_h - (j + 0.5) * ch

    ticks_x = sorted({0, n_x // 2, n_x - 1})
    ticks_y = sorted({0, n_y // 2, n_y - 1})
    for i in ticks_x:
        out.append(
            f'<text x="{_xpos(i):.1f}" y="{top + plot_h + 16:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{mu_grid[i]:.3g}</text>'
        )
    for j in ticks_y:
        out.append(
            f'<text x="{left - 6:.1f}" y="{_ypos(j) + 4:.1f}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{mu_sigma_grid[j]:.3g}</text>'
        )
    out.append(
        f'<text x="{left + plot_w / 2:.1f}" y="{top + plot_h + 36:.1f}" '
        f'font-family="sans-serif" font-size="12" text-anchor="middle">mu</text>'
    )
    out.append(
        f'<text x="16" y="{top + plot_h / 2:.1f}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 16 {top + plot_h / 2:.1f})">mu_sigma</text>'
    )
    out.append(
        f'<text x="{left + plot_w + 18:.1f}" y="{top + plot_h + 36:.1f}" '
        f'font-family="sans-serif" font-size="10" text-anchor="end">'
        f'min {vmin_val:.3g}, max {vmax_val:.3g}, scale +/-{vmax:.3g}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
