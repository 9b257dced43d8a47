"""Static SVG line chart of worst-case excess risk against sample size."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")
W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 30, 50


def _series(reports):
    series = {}
    bounds = {}
    for r in reports:
        if r is None:
            continue
        key = (r.d, float(r.gamma))
        series.setdefault((r.learner, key), []).append((r.m, float(r.worst)))
        bounds.setdefault(key, {})[r.m] = (float(r.intermediate_bound), float(r.theorem1_bound))
    return series, bounds


def render_svg(reports, title="worst-case excess risk vs m"):
    series, bounds = _series(reports)
    pts = [p for s in series.values() for p in s]
    pts += [(m, v) for b in bounds.values() for m, vs in b.items() for v in vs]
    pts = [(m, v) for m, v in pts if v > 0]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'font-family="sans-serif" font-size="11">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<text x="{LEFT}" y="18" font-size="13">{escape(title)}</text>']
    if not pts:
        out.append(f'<text x="{LEFT}" y="{H // 2}">no positive values to plot</text></svg>')
        return "\n".join(out)

    ms = [m for m, _ in pts]
    lo_m, hi_m = math.log2(min(ms)), math.log2(max(ms))
    vs = [math.log10(v) for _, v in pts]
    lo_v, hi_v = math.floor(min(vs)), math.ceil(max(vs))
    if hi_m == lo_m:
        hi_m += 1
    if hi_v == lo_v:
        hi_v += 1

    def px(m, v):
        x = LEFT + (math.log2(m) - lo_m) / (hi_m - lo_m) * (W - LEFT - RIGHT)
        y = H - BOTTOM - (math.log10(v) - lo_v) / (hi_v - lo_v) * (H - TOP - BOTTOM)
        return f"{x:.1f},{y:.1f}"

    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" '
               f'height="{H - TOP - BOTTOM}" fill="none" stroke="#444"/>')
    for e in range(lo_v, hi_v + 1):
        y = px(2 ** lo_m, 10 ** e).split(",")[1]
        out.append(f'<text x="{LEFT - 6}" y="{y}" text-anchor="end">1e{e}</text>')
    for m in sorted(set(ms)):
        x = px(m, 10 ** lo_v).split(",")[0]
        out.append(f'<text x="{x}" y="{H - BOTTOM + 16}" text-anchor="middle">{m}</text>')
    out.append(f'<text x="{(W - RIGHT + LEFT) // 2}" y="{H - 12}" text-anchor="middle">m</text>')

    legend_y = TOP + 10
    k = 0
    for (name, (d, g)), s in sorted(series.items()):
        s = sorted(p for p in s if p[1] > 0)
        if not s:
            continue
        color = PALETTE[k % len(PALETTE)]
        k += 1
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                   f'points="{" ".join(px(m, v) for m, v in s)}"/>')
        out.append(f'<text x="{W - RIGHT + 8}" y="{legend_y}" fill="{color}">'
                   f'{escape(name)} d={d} g={g:.3g}</text>')
        legend_y += 14
    for (d, g), b in sorted(bounds.items()):
        for j, (label, dash) in enumerate((("intermediate", "6,3"), ("theorem", "2,3"))):
            s = sorted((m, vs[j]) for m, vs in b.items() if vs[j] > 0)
            if not s:
                continue
            out.append(f'<polyline fill="none" stroke="#000" stroke-dasharray="{dash}" '
                       f'points="{" ".join(px(m, v) for m, v in s)}"/>')
            out.append(f'<text x="{W - RIGHT + 8}" y="{legend_y}">{label} bound d={d} g={g:.3g}</text>')
            legend_y += 14
    out.append("</svg>")
    return "\n".join(out)
