"""Static SVG pictures of characteristic sets.

The unit square is drawn on a 500 x 500 canvas with the second coordinate
pointing up.  The L-region is shaded, the forbidden band is hatched and
V is drawn as thick strokes with filled (closed) or hollow (open) ends.
"""

from __future__ import annotations

from fractions import Fraction

from .regions import CharacteristicProfile, MonotoneRegion, Segment

SIZE = 500
PAD = 40


def _f(v: float) -> str:
    return f"{float(v):.6g}"


def _xy(pt) -> tuple[str, str]:
    a, b = pt
    return _f(PAD + SIZE * float(a)), _f(PAD + SIZE * (1 - float(b)))


def _left_of_chain(chain, c) -> bool:
    for a, b in zip(chain, chain[1:]):
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cross < 0:
            return False
    return True


def region_polygon(region: MonotoneRegion) -> list:
    """Vertices of the closure of ``region`` as a counter-clockwise polygon."""
    one, zero = Fraction(1), Fraction(0)
    if region.empty:
        return []
    if region.whole:
        return [(zero, zero), (one, zero), (one, one), (zero, one)]
    chain = list(region.vertices)
    corners = [(one, one), (zero, one), (zero, zero)]
    poly = chain + [c for c in corners if c not in chain and _left_of_chain(chain, c)]
    return poly


def _polygon(points, **attrs) -> str:
    pts = " ".join(",".join(_xy(p)) for p in points)
    return f'<polygon points="{pts}"{_attrs(attrs)}/>'


def _attrs(attrs) -> str:
    return "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())


def _segment(s: Segment) -> list[str]:
    x1, y1 = _xy(s.start)
    x2, y2 = _xy(s.end)
    out = []
    if s.start != s.end:
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="5"/>')
    for (x, y), closed in (((x1, y1), s.start_closed), ((x2, y2), s.end_closed)):
        fill = "black" if closed else "white"
        out.append(f'<circle cx="{x}" cy="{y}" r="5" fill="{fill}" stroke="black" stroke-width="1.5"/>')
    return out


def profile_svg(profile: CharacteristicProfile, title: str = "") -> str:
    """SVG document for a profile."""
    total = SIZE + 2 * PAD
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {total} {total}" '
        f'width="{total}" height="{total}">',
        '<defs><pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" '
        'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" '
        'stroke="#999999" stroke-width="2"/></pattern></defs>',
    ]
    if title:
        parts.append(f'<title>{title}</title>')
    poly = region_polygon(profile.L)
    if poly:
        parts.append(_polygon(poly, fill="#cfe0f3", stroke="none"))
    band = [(0, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), 1), (0, 1)]
    parts.append(_polygon(band, fill="url(#hatch)", stroke="none"))
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    parts.append(_polygon(sq, fill="none", stroke="black", stroke_width="1.5"))
    x1, y1 = _xy((0, 0))
    x2, y2 = _xy((1, 1))
    parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#666666" '
                 'stroke-dasharray="6,4" stroke-width="1"/>')
    for s in profile.V:
        parts.extend(_segment(s))
    lx, ly = _xy((Fraction(1, 2), 0))
    parts.append(f'<text x="{lx}" y="{_f(float(ly) + 28)}" text-anchor="middle" '
                 'font-family="serif" font-size="18">1/p</text>')
    tx, ty = _xy((0, Fraction(1, 2)))
    parts.append(f'<text x="{_f(float(tx) - 22)}" y="{ty}" text-anchor="middle" '
                 'font-family="serif" font-size="18">1/q</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
