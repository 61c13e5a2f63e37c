"""Deterministic culture renders: ASCII (canonical golden format) and SVG.

A rectangular window of the plane is drawn with symbols as shading, colony
borders as heavy lines between cells belonging to different colonies (in the
true lift, so a colony touching its own lattice translate still shows a
border), and brain cells marked.
"""

from __future__ import annotations

SHADES = {0: " ", 1: ".", 2: ":", 3: "#"}


def _cell_info(culture, x, g):
    cid, tbrain = culture.colony_of_cell(g)
    sym = x.value_at(g)
    return (cid, tbrain), sym


def ascii_render(culture, x, width=18, height=8, x0=0, y0=0, spec=None):
    """Text render of the window [x0, x0+width) x [y0, y0+height).

    Cell interiors show the symbol's shade (by alphabet position) twice plus
    a brain mark; borders between different colonies are drawn with # walls,
    shared-colony walls stay open.
    """
    if x.lattice.dim == 1:
        return _ascii_render_1d(culture, x, width, x0, spec)
    alph = spec.alphabet.symbols if spec else sorted({v for v in x.values.values()})

    def shade(sym):
        return SHADES.get(alph.index(sym) if sym in alph else 3, "#")

    lines = []
    # rows are drawn top (largest y) first
    for j in range(y0 + height - 1, y0 - 1, -1):
        top = []
        mid = []
        for i in range(x0, x0 + width):
            here, sym = _cell_info(culture, x, (i, j))
            above, _ = _cell_info(culture, x, (i, j + 1))
            left, _ = _cell_info(culture, x, (i - 1, j))
            cid, tbrain = here
            brain_here = (i, j) == tbrain
            top.append("+" + ("###" if here != above else "   "))
            body = shade(sym) + ("@" if brain_here else shade(sym)) + shade(sym)
            mid.append(("#" if here != left else " ") + body)
        top.append("+")
        right, _ = _cell_info(culture, x, (x0 + width, j))
        mid.append("#" if here != right else " ")
        lines.append("".join(top))
        lines.append("".join(mid))
    bottom = []
    for i in range(x0, x0 + width):
        here, _ = _cell_info(culture, x, (i, y0))
        below, _ = _cell_info(culture, x, (i, y0 - 1))
        bottom.append("+" + ("###" if here != below else "   "))
    bottom.append("+")
    lines.append("".join(bottom))
    return "\n".join(lines) + "\n"


def _ascii_render_1d(culture, x, width, x0, spec):
    alph = spec.alphabet.symbols if spec else sorted({v for v in x.values.values()})
    syms = []
    walls = []
    for i in range(x0, x0 + width):
        here, _ = _cell_info(culture, x, (i,))
        left, _ = _cell_info(culture, x, (i - 1,))
        cid, tbrain = here
        mark = "@" if (i,) == tbrain else " "
        sym = x.value_at((i,))
        body = str(alph.index(sym) if sym in alph else "?") + mark
        walls.append("|" if here != left else " ")
        syms.append(body)
    out = []
    for w, b in zip(walls, syms):
        out.append(w + b)
    here, _ = _cell_info(culture, x, (x0 + width - 1,))
    right, _ = _cell_info(culture, x, (x0 + width,))
    out.append("|" if here != right else " ")
    return "".join(out) + "\n"


def svg_render(culture, x, width=18, height=8, x0=0, y0=0, spec=None, cell=24):
    """SVG version of the same window; geometry derived from the ASCII data."""
    if x.lattice.dim == 1:
        height = 1
        cells = [(i, 0) for i in range(x0, x0 + width)]
        pos = lambda g: (g[0],)
    else:
        cells = [(i, j) for j in range(y0, y0 + height) for i in range(x0, x0 + width)]
        pos = lambda g: g
    alph = spec.alphabet.symbols if spec else sorted({v for v in x.values.values()})
    fills = ["#ffffff", "#bfbfbf", "#606060", "#202020"]
    parts = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width * cell}" height="{height * cell}">'
    )
    for i, j in cells:
        g = pos((i, j))
        sym = x.value_at(g)
        idx = alph.index(sym) if sym in alph else 3
        px = (i - x0) * cell
        py = (height - 1 - (j - y0)) * cell
        parts.append(
            f'<rect x="{px}" y="{py}" width="{cell}" height="{cell}" fill="{fills[min(idx, 3)]}" stroke="#dddddd" stroke-width="1"/>'
        )
    # colony borders
    for i, j in cells:
        g = pos((i, j))
        here, _ = _cell_info(culture, x, g)
        px = (i - x0) * cell
        py = (height - 1 - (j - y0)) * cell
        right, _ = _cell_info(culture, x, pos((i + 1, j)))
        if here != right:
            parts.append(
                f'<line x1="{px + cell}" y1="{py}" x2="{px + cell}" y2="{py + cell}" stroke="#000000" stroke-width="3"/>'
            )
        left, _ = _cell_info(culture, x, pos((i - 1, j)))
        if here != left:
            parts.append(
                f'<line x1="{px}" y1="{py}" x2="{px}" y2="{py + cell}" stroke="#000000" stroke-width="3"/>'
            )
        if x.lattice.dim == 2:
            up, _ = _cell_info(culture, x, (i, j + 1))
            if here != up:
                parts.append(
                    f'<line x1="{px}" y1="{py}" x2="{px + cell}" y2="{py}" stroke="#000000" stroke-width="3"/>'
                )
            down, _ = _cell_info(culture, x, (i, j - 1))
            if here != down:
                parts.append(
                    f'<line x1="{px}" y1="{py + cell}" x2="{px + cell}" y2="{py + cell}" stroke="#000000" stroke-width="3"/>'
                )
        cid, tbrain = here
        if g == tbrain:
            cx, cy = px + cell // 2, py + cell // 2
            parts.append(f'<circle cx="{cx}" cy="{cy}" r="{cell // 5}" fill="#1f5fbf"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
