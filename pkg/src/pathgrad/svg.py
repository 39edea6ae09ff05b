"""Minimal SVG rendering of path polylines and -EL arrows."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f4fd1", "#c81e1e", "#1b8a3a", "#8a3ab9", "#c87a1e")


@dataclass(frozen=True)
class SvgSpec:
    width_px: int = 640
    height_px: int = 480
    margin_px: int = 40
    arrow_count: int | None = None  # None: scenario default
    arrow_scale: float | None = None

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0 or self.margin_px < 0:
            raise ValueError("SVG dimensions must be positive")
        if 2 * self.margin_px >= min(self.width_px, self.height_px):
            raise ValueError("margin too large for the canvas")
        if self.arrow_count is not None and self.arrow_count < 2:
            raise ValueError("arrow_count must be at least 2")
        if self.arrow_scale is not None and not self.arrow_scale > 0:
            raise ValueError("arrow_scale must be positive")


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render(
    title: str,
    polylines: dict[str, np.ndarray],
    arrows: dict[str, list[tuple[np.ndarray, np.ndarray]]],
    spec: SvgSpec = SvgSpec(),
    axis_labels: tuple[str, str] = ("x", "y"),
) -> str:
    """Polylines are ``(n, 2)`` point arrays; arrows map a path name to (base, tip) pairs."""
    pts = [p for p in polylines.values()]
    pts += [np.array([b, t]) for group in arrows.values() for b, t in group]
    allp = np.vstack(pts) if pts else np.zeros((1, 2))
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    lo = lo - 0.05 * span
    span = span * 1.1
    w = spec.width_px - 2 * spec.margin_px
    hgt = spec.height_px - 2 * spec.margin_px
    scale = min(w / span[0], hgt / span[1])

    def xy(p):
        x = spec.margin_px + (p[0] - lo[0]) * scale
        y = spec.height_px - spec.margin_px - (p[1] - lo[1]) * scale
        return _fmt(x), _fmt(y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width_px}" height="{spec.height_px}" '
        f'viewBox="0 0 {spec.width_px} {spec.height_px}">',
        f"<title>{escape(title)}</title>",
        "<defs>",
        '<marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="context-stroke"/></marker>',
        "</defs>",
        f'<rect x="0" y="0" width="{spec.width_px}" height="{spec.height_px}" fill="white"/>',
    ]
    # axes through the origin when it is in view
    ox, oy = xy(np.array([0.0, 0.0]))
    out.append(
        f'<g class="axes" stroke="#999" stroke-width="1">'
        f'<line x1="{spec.margin_px}" y1="{oy}" x2="{spec.width_px - spec.margin_px}" y2="{oy}"/>'
        f'<line x1="{ox}" y1="{spec.margin_px}" x2="{ox}" y2="{spec.height_px - spec.margin_px}"/></g>'
    )
    out.append(
        f'<text x="{spec.width_px - spec.margin_px}" y="{spec.height_px - 8}" font-size="12">'
        f"{escape(axis_labels[0])}</text>"
        f'<text x="8" y="{spec.margin_px - 8}" font-size="12">{escape(axis_labels[1])}</text>'
    )
    for name, p in polylines.items():
        d = " ".join(",".join(xy(q)) for q in p)
        out.append(
            f'<polyline class="path" data-name="{escape(name)}" fill="none" stroke="black" '
            f'stroke-width="1.5" points="{d}"/>'
        )
        lx, ly = xy(p[len(p) // 2])
        out.append(f'<text x="{lx}" y="{ly}" font-size="12" dy="-6">{escape(name)}</text>')
    for j, (name, group) in enumerate(arrows.items()):
        color = PALETTE[j % len(PALETTE)]
        out.append(f'<g class="arrows" data-path="{escape(name)}" stroke="{color}" stroke-width="1.5">')
        for base, tip in group:
            x1, y1 = xy(base)
            x2, y2 = xy(tip)
            out.append(f'<line class="arrow" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" marker-end="url(#head)"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
