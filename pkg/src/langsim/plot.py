"""Self-contained SVG scatter plots of similarity against transfer score."""

from xml.sax.saxutils import escape

import numpy as np

from .stats import PairedSample

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 72, 24, 40, 64
N_TICKS = 5


def _range(v):
    lo, hi = float(np.min(v)), float(np.max(v))
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def scatter_svg(sample: PairedSample, x_label: str, y_label: str, title: str = "") -> str:
    """Render ``sample`` as SVG text.

    Points whose label has ``source == target`` are drawn as squares, all
    others as circles. Output depends only on the inputs.
    """
    x0, x1 = _range(sample.x)
    y0, y1 = _range(sample.y)
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def px(v):
        return LEFT + (v - x0) / (x1 - x0) * pw

    def py(v):
        return TOP + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="{TOP / 2 + 5:.2f}" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')
    for k in range(N_TICKS):
        xv = x0 + (x1 - x0) * k / (N_TICKS - 1)
        yv = y0 + (y1 - y0) * k / (N_TICKS - 1)
        xp, yp = px(xv), py(yv)
        out.append(f'<line x1="{xp:.2f}" y1="{TOP + ph}" x2="{xp:.2f}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{xp:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{xv:.3f}</text>')
        out.append(f'<line x1="{LEFT - 5}" y1="{yp:.2f}" x2="{LEFT}" y2="{yp:.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{yp + 4:.2f}" text-anchor="end">{yv:.3f}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 16}" text-anchor="middle">{escape(x_label)}</text>')
    cy = TOP + ph / 2
    out.append(f'<text x="18" y="{cy:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {cy:.2f})">{escape(y_label)}</text>')

    labels = sample.labels or [None] * sample.n
    for xv, yv, lab in zip(sample.x, sample.y, labels):
        cx, cyp = px(xv), py(yv)
        tip = ""
        if lab is not None:
            tip = f"<title>{escape(lab[0])}-&gt;{escape(lab[1])}</title>"
        if lab is not None and lab[0] == lab[1]:
            out.append(f'<rect class="diagonal" x="{cx - 4:.2f}" y="{cyp - 4:.2f}" width="8" '
                       f'height="8" fill="#d62728">{tip}</rect>')
        else:
            out.append(f'<circle class="transfer" cx="{cx:.2f}" cy="{cyp:.2f}" r="3.5" '
                       f'fill="#1f77b4">{tip}</circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
