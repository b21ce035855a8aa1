"""CSV, JSON and SVG writers for rate regions and reports."""

import csv
import io
import json
import math
from xml.sax.saxutils import escape

import numpy as np

UNITS = "bits_per_channel_use"
REGION_HEADER = ("R1_bits", "R2_bits")
SWEEP_HEADER = ("P1", "thm6_bits", "csum_bits", "c2_bits", "best_bits", "best_tag")


def _num(x):
    # repr of a Python float is the shortest string that round-trips exactly
    return repr(float(x))


def region_csv(region):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REGION_HEADER)
    for r1, r2 in region.points():
        w.writerow((_num(r1), _num(r2)))
    return buf.getvalue()


def read_region_csv(text):
    """Parse :func:`region_csv` output back into an ``(n, 2)`` float array."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != REGION_HEADER:
        raise ValueError(f"expected header {','.join(REGION_HEADER)}")
    return np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)


def region_json(region, bound, params, grid):
    doc = {
        "params": {"p1": params.p1, "p2": params.p2, "q": params.q},
        "bound": bound,
        "grid": grid,
        "units": UNITS,
        "frontier": [[float(a), float(b)] for a, b in region.points()],
    }
    if "applicable" in region.meta:
        doc["applicable"] = bool(region.meta["applicable"])
    return json.dumps(doc, indent=2) + "\n"


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for p1, hb in rows:
        w.writerow((_num(p1), _num(hb.thm6), _num(hb.csum), _num(hb.c2), _num(hb.value), hb.tag))
    return buf.getvalue()


def sweep_json(rows, p2, q):
    doc = {
        "p2": p2,
        "q": q,
        "units": UNITS,
        "rows": [dict(zip(SWEEP_HEADER, (float(p1), hb.thm6, hb.csum, hb.c2, hb.value, hb.tag)))
                 for p1, hb in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _ticks(hi, n=5):
    if hi <= 0:
        return [0.0]
    raw = hi / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    return [i * step for i in range(int(hi / step + 1e-9) + 1)]


def region_svg(region, title, width=480, height=360):
    """Standalone SVG: frontier polyline (with the vertical drop) and two labelled axes."""
    pts = region.points()
    pts = np.vstack([pts, [[region.r1_extent, 0.0]]])
    margin = 56
    xmax = max(float(pts[:, 0].max()), 1e-9) * 1.05
    ymax = max(float(pts[:, 1].max()), 1e-9) * 1.05
    pw, ph = width - 2 * margin, height - 2 * margin

    def sx(x):
        return margin + pw * x / xmax

    def sy(y):
        return height - margin - ph * y / ymax

    poly = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in pts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" '
        'stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
    ]
    for t in _ticks(xmax):
        x = sx(t)
        out.append(f'<line x1="{x:.3f}" y1="{height - margin}" x2="{x:.3f}" '
                   f'y2="{height - margin + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.3f}" y="{height - margin + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(ymax):
        y = sy(t)
        out.append(f'<line x1="{margin - 4}" y1="{y:.3f}" x2="{margin}" y2="{y:.3f}" stroke="black"/>')
        out.append(f'<text x="{margin - 6}" y="{y + 4:.3f}" text-anchor="end">{t:g}</text>')
    out += [
        f'<text x="{width / 2}" y="{height - 14}" text-anchor="middle">R1 (bits/ch. use)</text>',
        f'<text x="16" y="{height / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {height / 2})">R2 (bits/ch. use)</text>',
        f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{poly}"/>',
        "</svg>",
    ]
    return "\n".join(out) + "\n"
