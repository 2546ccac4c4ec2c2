"""Self-contained SVG boxplots of lambda_sharp per experiment cell.

One panel per (m, d, theta1_star), one box per n_p. Each box gets a short
horizontal red segment at that cell's lambda_Liu and the proportion of
replications with lambda_sharp > lambda_Liu above the panel. Elements carry
``data-*`` attributes so the output can be checked without rendering.
"""

import math
from xml.sax.saxutils import escape

import numpy as np

PANEL_W, PANEL_H = 260, 200
MARGIN_TOP, MARGIN_BOTTOM, MARGIN_LEFT = 40, 34, 46
COLS = 4


def _fmt(x):
    return f"{x:.4g}"


def _panels(records):
    panels = {}
    for rec in records:
        key = (rec.m, rec.d, rec.theta1_star)
        panels.setdefault(key, {}).setdefault(rec.n_p, []).append(rec)
    return panels


def emit_summary_plot(records, out_svg):
    records = list(records)
    if not records:
        raise ValueError("no records to plot")
    panels = _panels(records)
    n_rows = math.ceil(len(panels) / COLS)
    width = PANEL_W * min(COLS, len(panels))
    height = PANEL_H * n_rows
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">']
    plot_h = PANEL_H - MARGIN_TOP - MARGIN_BOTTOM
    plot_w = PANEL_W - MARGIN_LEFT - 10

    for idx, ((m, d, t1s), by_np) in enumerate(sorted(panels.items())):
        ox, oy = PANEL_W * (idx % COLS), PANEL_H * (idx // COLS)
        values = [r.lambda_sharp for recs in by_np.values() for r in recs if not r.failed]
        top = max(values + [recs[0].lambda_liu for recs in by_np.values()]) * 1.1 or 1.0

        def y(v, top=top, oy=oy):
            return oy + MARGIN_TOP + plot_h * (1.0 - v / top)

        out.append(f'<g class="panel" data-m="{m}" data-d="{d}" data-theta1-star="{_fmt(t1s)}" '
                   f'data-ymax="{float(top)!r}">')
        out.append(f'<text x="{ox + PANEL_W / 2}" y="{oy + 12}" text-anchor="middle">'
                   f'm={m}, d={d}, theta1*={_fmt(t1s)}</text>')
        x0, y0 = ox + MARGIN_LEFT, oy + MARGIN_TOP
        out.append(f'<rect x="{x0}" y="{y0}" width="{plot_w}" height="{plot_h}" '
                   'fill="none" stroke="#888"/>')
        for tick in (0.0, top / 2, top):
            out.append(f'<text x="{x0 - 4}" y="{y(tick) + 3:.2f}" text-anchor="end">'
                       f'{_fmt(tick)}</text>')
        slot = plot_w / len(by_np)
        for j, (n_p, recs) in enumerate(sorted(by_np.items())):
            cx = x0 + slot * (j + 0.5)
            half = slot * 0.25
            ok = [r for r in recs if not r.failed]
            liu = recs[0].lambda_liu
            ratio = n_p / math.log(m)
            out.append(f'<text x="{cx:.2f}" y="{oy + PANEL_H - MARGIN_BOTTOM + 14}" '
                       f'text-anchor="middle">{ratio:.0f}</text>')
            if ok:
                vals = np.array([r.lambda_sharp for r in ok])
                lo, q1, med, q3, hi = np.percentile(vals, [0, 25, 50, 75, 100])
                prop = sum(r.exceeds for r in ok) / len(ok)
                out.append(f'<g class="box" data-n-p="{n_p}" data-median="{float(med)!r}">')
                out.append(f'<line x1="{cx:.2f}" x2="{cx:.2f}" y1="{y(lo):.2f}" '
                           f'y2="{y(hi):.2f}" stroke="black"/>')
                out.append(f'<rect x="{cx - half:.2f}" y="{y(q3):.2f}" width="{2 * half:.2f}" '
                           f'height="{max(y(q1) - y(q3), 0.5):.2f}" fill="#cde" stroke="black"/>')
                out.append(f'<line x1="{cx - half:.2f}" x2="{cx + half:.2f}" y1="{y(med):.2f}" '
                           f'y2="{y(med):.2f}" stroke="black" stroke-width="2"/>')
                out.append('</g>')
                out.append(f'<text class="exceed" x="{cx:.2f}" y="{y0 - 6}" '
                           f'text-anchor="middle" data-n-p="{n_p}" data-proportion="{float(prop)!r}">'
                           f'{prop:.2f}</text>')
            out.append(f'<line class="lambda-liu" data-n-p="{n_p}" data-value="{float(liu)!r}" '
                       f'x1="{cx - 1.6 * half:.2f}" x2="{cx + 1.6 * half:.2f}" '
                       f'y1="{y(liu):.4f}" y2="{y(liu):.4f}" stroke="red"/>')
        out.append(f'<text x="{ox + PANEL_W / 2}" y="{oy + PANEL_H - 4}" '
                   f'text-anchor="middle">{escape("n_p / ln m")}</text>')
        out.append('</g>')
    out.append('</svg>')
    with open(out_svg, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
    return out_svg
