"""Deterministic SVG rendering: rectangular cladogram above the map.

SVG y grows downward, so model coordinates (y up) are flipped.  External
modes draw the leaders; internal mode drops them and color-matches each site
cross with a disc at the leaf anchor instead, cycling a 12-color palette.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Geophylogeny, LeaderType
from .tree import LeafOrder

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1b9e77", "#d95f02",
)

SCALE = 8  # pixels per map unit


def _fmt(x) -> str:
    return f"{float(x):.2f}"


def render_svg(g: Geophylogeny, order, mode: str = "s") -> str:
    """`mode` is "s", "po" or "internal"."""
    if mode not in ("s", "po", "internal"):
        raise ValueError(f"unknown render mode {mode!r}")
    if not isinstance(order, LeafOrder):
        order = LeafOrder.from_order(g.tree, order)
    tree = g.tree
    n = tree.n

    # tree band above ytop: one level per internal depth
    level: dict[int, int] = {}
    for v in reversed(range(len(tree._children))):
        if tree.is_leaf(v):
            level[v] = 0
        else:
            x, y = tree.children(v)
            level[v] = 1 + max(level[x], level[y])
    levels = max(level.values()) if level else 0
    step = max(g.height / 10, Fraction(2))
    top = g.ytop + step * (levels + 1)

    def sy(y) -> str:  # model y -> svg y
        return _fmt((top - y) * SCALE)

    def sx(x) -> str:
        return _fmt(x * SCALE)

    pos = order.position
    leaf_x = {lab: g.positions[pos[lab] - 1] for lab in pos}

    out = []
    w = _fmt(g.width * SCALE)
    h = _fmt(top * SCALE)
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
    )
    out.append(
        f'<rect x="0" y="{sy(g.height)}" width="{w}" '
        f'height="{_fmt(g.height * SCALE)}" fill="#eef6fb" stroke="#88a"/>'
    )

    color = {
        lab: PALETTE[i % len(PALETTE)]
        for i, lab in enumerate(sorted(g.sites))
    }

    # leaders below the anchors
    if mode != "internal":
        ltype = LeaderType.parse(mode)
        for lab in sorted(g.sites):
            for (x1, y1), (x2, y2) in g.leader_segments(lab, pos[lab], ltype):
                out.append(
                    f'<line x1="{sx(x1)}" y1="{sy(y1)}" x2="{sx(x2)}" '
                    f'y2="{sy(y2)}" stroke="#555" stroke-width="1" '
                    f'class="leader" data-leaf="{lab}"/>'
                )

    # sites as crosses
    for lab in sorted(g.sites):
        x, y = g.sites[lab]
        stroke = color[lab] if mode == "internal" else "#c33"
        px, py = float(x * SCALE), float((top - y) * SCALE)
        out.append(
            f'<path d="M {px - 3:.2f} {py:.2f} H {px + 3:.2f} '
            f'M {px:.2f} {py - 3:.2f} V {py + 3:.2f}" stroke="{stroke}" '
            f'stroke-width="1.5" class="site" data-leaf="{lab}"/>'
        )

    # rectangular cladogram: vertical drop per child, horizontal bar per vertex
    vx: dict[int, Fraction] = {}
    vy: dict[int, Fraction] = {}
    for v in reversed(range(len(tree._children))):
        if tree.is_leaf(v):
            vx[v] = leaf_x[tree.label(v)]
            vy[v] = g.ytop
        else:
            a, b = tree.children(v)
            vx[v] = (vx[a] + vx[b]) / 2
            vy[v] = g.ytop + step * level[v]
    for v in tree.internal:
        a, b = tree.children(v)
        out.append(
            f'<line x1="{sx(vx[a])}" y1="{sy(vy[v])}" x2="{sx(vx[b])}" '
            f'y2="{sy(vy[v])}" stroke="#333" stroke-width="1.2" '
            f'class="edge" data-vertex="{tree.vertex_name(v)}"/>'
        )
        for c in (a, b):
            out.append(
                f'<line x1="{sx(vx[c])}" y1="{sy(vy[v])}" x2="{sx(vx[c])}" '
                f'y2="{sy(vy[c])}" stroke="#333" stroke-width="1.2"/>'
            )

    # anchors and labels
    for lab in sorted(g.sites):
        x = leaf_x[lab]
        fill = color[lab] if mode == "internal" else "#333"
        out.append(
            f'<circle cx="{sx(x)}" cy="{sy(g.ytop)}" r="2.5" fill="{fill}" '
            f'class="anchor" data-leaf="{lab}"/>'
        )
        out.append(
            f'<text x="{sx(x)}" y="{_fmt((top - g.ytop) * SCALE - 6)}" '
            f'font-size="9" text-anchor="middle" font-family="sans-serif">'
            f"{lab}</text>"
        )

    out.append("</svg>")
    return "\n".join(out)
