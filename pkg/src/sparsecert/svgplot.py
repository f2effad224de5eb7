"""Dependency-free SVG line charts of recovery rate versus alpha.

The output is a pure function of the aggregate rows: coordinates are printed
with fixed precision and series are emitted in sorted key order, so identical
inputs give identical bytes.
"""

from __future__ import annotations

WIDTH, HEIGHT = 760, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 244, 28, 52

_PALETTE = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#e377c2",
]


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_recovery_svg(rows: list[dict]) -> str:
    """Render rate-vs-alpha curves, one series per (method, p, rho multiplier)."""
    if not rows:
        raise ValueError("no data rows to plot")
    alphas = sorted({r["alpha"] for r in rows})
    a_min, a_max = alphas[0], alphas[-1]
    if a_max == a_min:
        a_min -= 0.5
        a_max += 0.5
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(alpha: float) -> float:
        return MARGIN_L + (alpha - a_min) / (a_max - a_min) * plot_w

    def sy(rate: float) -> float:
        return MARGIN_T + (1.0 - rate) * plot_h

    groups: dict[tuple[int, float], list[dict]] = {}
    for r in rows:
        groups.setdefault((r["p"], r["rho_multiplier"]), []).append(r)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    # axes
    x0, y0 = MARGIN_L, MARGIN_T + plot_h
    out.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>'
    )
    out.append(f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        yy = sy(frac)
        out.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(yy)}" x2="{x0}" y2="{_fmt(yy)}" stroke="black"/>'
        )
        out.append(
            f'<text x="{x0 - 8}" y="{_fmt(yy + 4)}" font-size="11" text-anchor="end" '
            f'font-family="monospace">{frac:g}</text>'
        )
        if frac > 0.0:
            out.append(
                f'<line x1="{x0}" y1="{_fmt(yy)}" x2="{x0 + plot_w}" y2="{_fmt(yy)}" '
                f'stroke="#dddddd"/>'
            )
    ticks = alphas if len(alphas) <= 15 else alphas[:: max(1, len(alphas) // 12)]
    for alpha in ticks:
        xx = sx(alpha)
        out.append(
            f'<line x1="{_fmt(xx)}" y1="{y0}" x2="{_fmt(xx)}" y2="{y0 + 4}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(xx)}" y="{y0 + 18}" font-size="11" text-anchor="middle" '
            f'font-family="monospace">{alpha:g}</text>'
        )
    out.append(
        f'<text x="{x0 + plot_w // 2}" y="{HEIGHT - 14}" font-size="12" '
        f'text-anchor="middle" font-family="monospace">alpha</text>'
    )
    out.append(
        f'<text x="16" y="{MARGIN_T + plot_h // 2}" font-size="12" text-anchor="middle" '
        f'font-family="monospace" transform="rotate(-90 16 {MARGIN_T + plot_h // 2})">'
        f"recovery rate</text>"
    )

    legend_y = MARGIN_T + 8
    for gi, key in enumerate(sorted(groups)):
        p, mult = key
        color = _PALETTE[gi % len(_PALETTE)]
        pts = sorted(groups[key], key=lambda r: r["alpha"])
        for method, dash in (("dcl", ""), ("pwg", ' stroke-dasharray="6 3"')):
            coords = [(sx(r["alpha"]), sy(r[f"{method}_rate"])) for r in pts]
            if len(coords) > 1:
                path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in coords)
                out.append(
                    f'<polyline points="{path}" fill="none" stroke="{color}" '
                    f'stroke-width="1.8"{dash}/>'
                )
            for x, y in coords:
                out.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="{color}"/>'
                )
            lx = WIDTH - MARGIN_R + 16
            out.append(
                f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 28}" y2="{legend_y}" '
                f'stroke="{color}" stroke-width="1.8"{dash}/>'
            )
            out.append(
                f'<text x="{lx + 34}" y="{legend_y + 4}" font-size="11" '
                f'font-family="monospace">{method} p={p} rho={mult:g}*sqrt(n)</text>'
            )
            legend_y += 18
    out.append("</svg>")
    return "\n".join(out) + "\n"
