"""Exact geometry of monotone convex regions in the (1/p, 1/q) unit square.

Every coordinate is a :class:`fractions.Fraction`.  A region is stored by
its lower-right boundary chain; the region itself is everything of the open
square lying on the upper-left side of that chain.  Edges and interior
vertices of the chain carry their own closed/excluded flags, which is how
boundary segments such as V-sets are told apart from the open parts of a
boundary.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

ZERO = Fraction(0)
HALF = Fraction(1, 2)
ONE = Fraction(1)

Pt = tuple  # (Fraction, Fraction); may lie on the boundary of the square


class _Infinity(enum.Enum):
    INFINITY = "inf"

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity.INFINITY


class Location(str, enum.Enum):
    """Classification returned by :func:`contains`.

    ``BOUNDARY`` is only reported for boundary points that belong to the
    region; a point on an excluded edge is ``OUTSIDE``.
    """

    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def as_rational(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings and floats to a Fraction.

    Floats are snapped to the simplest rational with denominator at most
    10**6 when that rational is within 1e-12; otherwise the exact binary
    value is kept.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ValueError:
            return as_rational(float(text))
    if isinstance(value, float):
        exact = Fraction(value)
        snapped = exact.limit_denominator(10**6)
        return snapped if abs(snapped - exact) <= Fraction(1, 10**12) else exact
    return Fraction(value)


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _pt(x, y) -> Pt:
    return (as_rational(x), as_rational(y))


def in_open_square(x: Fraction, y: Fraction) -> bool:
    return 0 < x < 1 and 0 < y < 1


def phi(point: Pt) -> Pt:
    """Duality involution (a, b) -> (1 - b, 1 - a)."""
    a, b = point
    return (1 - b, 1 - a)


@dataclass(frozen=True, order=True)
class Q2Point:
    """A point (1/p, 1/q) of the open unit square."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = as_rational(self.alpha), as_rational(self.beta)
        if not in_open_square(a, b):
            raise ValueError(f"({a}, {b}) is not in the open unit square")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_exponents(cls, p, q) -> "Q2Point":
        return cls(1 / as_rational(p), 1 / as_rational(q))

    @property
    def xy(self) -> Pt:
        return (self.alpha, self.beta)

    @property
    def exponents(self) -> tuple[Fraction, Fraction]:
        return (1 / self.alpha, 1 / self.beta)

    def dual(self) -> "Q2Point":
        return Q2Point(*phi(self.xy))


def _cross(o: Pt, a: Pt, b: Pt) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_closed_segment(a: Pt, b: Pt, x: Pt) -> bool:
    if _cross(a, b, x) != 0:
        return False
    return (min(a[0], b[0]) <= x[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= x[1] <= max(a[1], b[1]))


def _on_square_side(a: Pt, b: Pt) -> bool:
    return ((a[0] == b[0] and a[0] in (0, 1))
            or (a[1] == b[1] and a[1] in (0, 1)))


def _lerp(a: Pt, b: Pt, t: Fraction) -> Pt:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _mid(a: Pt, b: Pt) -> Pt:
    return ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)


# ---------------------------------------------------------------------------
# segments (pieces of V-sets)


@dataclass(frozen=True)
class Segment:
    """A straight piece of the closed square with per-endpoint inclusion.

    A degenerate segment (``start == end``) is a single point.  Endpoints on
    the boundary of the square are never part of the open square, so they
    are always normalised to excluded.
    """

    start: Pt
    end: Pt
    start_closed: bool = True
    end_closed: bool = True

    def __post_init__(self):
        s, e = _pt(*self.start), _pt(*self.end)
        sc, ec = bool(self.start_closed), bool(self.end_closed)
        if e < s:
            s, e, sc, ec = e, s, ec, sc
        for x in s + e:
            if not 0 <= x <= 1:
                raise ValueError("segment leaves the closed unit square")
        if not in_open_square(*s):
            sc = False
        if not in_open_square(*e):
            ec = False
        if s == e:
            sc = ec = sc and ec
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)
        object.__setattr__(self, "start_closed", sc)
        object.__setattr__(self, "end_closed", ec)

    @classmethod
    def point(cls, p) -> "Segment":
        xy = p.xy if isinstance(p, Q2Point) else _pt(*p)
        return cls(xy, xy, True, True)

    @property
    def degenerate(self) -> bool:
        return self.start == self.end

    @property
    def is_empty(self) -> bool:
        return self.degenerate and not self.start_closed

    def at(self, t: Fraction) -> Pt:
        return _lerp(self.start, self.end, t)

    def contains_point(self, x: Pt) -> bool:
        if not _on_closed_segment(self.start, self.end, x):
            return False
        if x == self.start:
            return self.start_closed
        if x == self.end:
            return self.end_closed
        return in_open_square(*x)

    def dual(self) -> "Segment":
        return Segment(phi(self.end), phi(self.start), self.end_closed, self.start_closed)

    def slope(self):
        dx = self.end[0] - self.start[0]
        dy = self.end[1] - self.start[1]
        if dx == 0 and dy == 0:
            return None
        return INFINITY if dx == 0 else dy / dx


def _line_param_hits(a: Pt, b: Pt, p: Pt, q: Pt) -> list[Fraction]:
    """Parameters t in [0, 1] where segment a->b meets the line through p, q.

    If the segment lies on that line, the projections of p and q are
    returned instead.
    """
    d = (b[0] - a[0], b[1] - a[1])
    c0 = _cross(p, q, a)
    c1 = _cross(p, q, b)
    if c0 == c1:
        if c0 != 0:
            return []
        # collinear: project p and q onto the segment
        axis = 0 if d[0] != 0 else 1
        if d[axis] == 0:
            return []
        return [(p[axis] - a[axis]) / d[axis], (q[axis] - a[axis]) / d[axis]]
    return [c0 / (c0 - c1)]


_SQUARE_SIDES = (((0, 0), (1, 0)), ((1, 0), (1, 1)), ((1, 1), (0, 1)), ((0, 1), (0, 0)))
_SQUARE_SIDES = tuple((_pt(*a), _pt(*b)) for a, b in _SQUARE_SIDES)


def pieces_where(seg: Segment, member: Callable[[Pt], bool],
                 cut_lines: Iterable[tuple[Pt, Pt]] = (),
                 cut_params: Iterable[Fraction] = ()) -> list[Segment]:
    """Maximal sub-pieces of ``seg`` on which ``member`` holds.

    ``member`` must be constant on every open sub-interval between the
    breakpoints generated by ``cut_lines`` (lines given by two points) and
    ``cut_params``; square sides are always cut.
    """
    if seg.is_empty:
        return []
    a, b = seg.start, seg.end

    def ok(x: Pt, t: Fraction) -> bool:
        if t == 0 and not seg.start_closed:
            return False
        if t == 1 and not seg.end_closed:
            return False
        return in_open_square(*x) and member(x)

    if seg.degenerate:
        return [seg] if ok(a, ZERO) else []
    ts = {ZERO, ONE}
    for p, q in list(cut_lines) + list(_SQUARE_SIDES):
        ts.update(_line_param_hits(a, b, p, q))
    ts.update(cut_params)
    ts = sorted(t for t in ts if 0 <= t <= 1)
    # alternating list: point, open interval, point, ...
    marks: list[tuple[Fraction, Fraction, bool]] = []
    for i, t in enumerate(ts):
        marks.append((t, t, ok(seg.at(t), t)))
        if i + 1 < len(ts):
            m = (t + ts[i + 1]) / 2
            marks.append((t, ts[i + 1], ok(seg.at(m), m)))
    out: list[Segment] = []
    i = 0
    while i < len(marks):
        if not marks[i][2]:
            i += 1
            continue
        j = i
        while j + 1 < len(marks) and marks[j + 1][2]:
            j += 1
        t0, t1 = marks[i][0], marks[j][1]
        start_closed = marks[i][0] == marks[i][1]
        end_closed = marks[j][0] == marks[j][1]
        out.append(Segment(seg.at(t0), seg.at(t1), start_closed, end_closed))
        i = j + 1
    return out


def covered_by(seg: Segment, pieces: Sequence[Segment]) -> bool:
    """True iff every point of ``seg`` lies in the union of ``pieces``."""
    if seg.is_empty:
        return True
    cuts = []
    for p in pieces:
        cuts.append((p.start, (p.start[0] + 1, p.start[1] + 2)))
        cuts.append((p.end, (p.end[0] + 1, p.end[1] + 2)))
    rest = pieces_where(seg, lambda x: not any(p.contains_point(x) for p in pieces), cuts)
    return not rest


def _line_key(s: Segment):
    (x0, y0), (x1, y1) = s.start, s.end
    a, b = y1 - y0, x0 - x1
    c = a * x0 + b * y0
    scale = a if a != 0 else b
    return (a / scale, b / scale, c / scale)


def normalize_pieces(pieces: Iterable[Segment]) -> tuple[Segment, ...]:
    """Merge overlapping or touching collinear pieces; sort the result."""
    pieces = [p for p in pieces if not p.is_empty]
    groups: dict = {}
    points = []
    for p in pieces:
        if p.degenerate:
            points.append(p)
        else:
            groups.setdefault(_line_key(p), []).append(p)
    for p in points:
        x = p.start
        for key, g in groups.items():
            if _cross(g[0].start, g[0].end, x) == 0:
                g.append(p)
                break
        else:
            groups.setdefault(("point", x), []).append(p)
    out: list[Segment] = []
    for g in groups.values():
        out.extend(_merge_collinear(g))
    return tuple(sorted(out, key=lambda s: (s.start, s.end)))


def _merge_collinear(group: list[Segment]) -> list[Segment]:
    # intervals along lexicographic order of points on a common line
    items = sorted(group, key=lambda s: (s.start, not s.start_closed))
    merged: list[Segment] = []
    for s in items:
        if not merged:
            merged.append(s)
            continue
        m = merged[-1]
        touch = s.start < m.end or (s.start == m.end and (s.start_closed or m.end_closed))
        if not touch:
            merged.append(s)
            continue
        if s.end > m.end:
            end, end_closed = s.end, s.end_closed
        elif s.end == m.end:
            end, end_closed = m.end, m.end_closed or s.end_closed
        else:
            end, end_closed = m.end, m.end_closed
        start_closed = m.start_closed or (s.start == m.start and s.start_closed)
        merged[-1] = Segment(m.start, end, start_closed, end_closed)
    return merged


# ---------------------------------------------------------------------------
# regions


class PointSet:
    """Rational points stored as integers over one common denominator.

    Build once and pass to :func:`contains_many` to test many regions
    against the same points without repeated rational conversion.
    """

    def __init__(self, points: Iterable):
        pts = [p.xy if isinstance(p, Q2Point) else p for p in points]
        self.points = [p if type(p[0]) is Fraction and type(p[1]) is Fraction else _pt(*p)
                       for p in pts]
        raw = [(x.numerator, x.denominator, y.numerator, y.denominator) for x, y in self.points]
        try:
            nd = np.array(raw, dtype=np.int64).reshape(-1, 4)
            den = math.lcm(1, *np.unique(nd[:, [1, 3]]).tolist())
            small = den < 10**9
        except OverflowError:
            small = False
        if small:
            self.X = nd[:, 0] * (den // nd[:, 1])
            self.Y = nd[:, 2] * (den // nd[:, 3])
        else:
            den = math.lcm(1, *(d for r in raw for d in (r[1], r[3])))
            self.X = np.array([a * (den // b) for a, b, _, _ in raw], dtype=object)
            self.Y = np.array([c * (den // d) for _, _, c, d in raw], dtype=object)
        self.den = den
        self.in_square = (self.X > 0) & (self.X < den) & (self.Y > 0) & (self.Y < den)

    def __len__(self) -> int:
        return len(self.points)

    def scaled(self, factor: int) -> tuple[np.ndarray, np.ndarray]:
        """Numerators over ``den * factor``, promoted to Python ints if large."""
        bound = self.den * factor
        if self.X.dtype != object and bound * bound < 2**62:
            return self.X * factor, self.Y * factor
        return self.X.astype(object) * factor, self.Y.astype(object) * factor


@dataclass(frozen=True)
class MonotoneRegion:
    """Monotone convex subset of the open unit square.

    ``vertices`` is the lower-right boundary chain, running from the left or
    bottom side of the square to its top or right side with nondecreasing
    slopes.  ``edge_closed[i]`` says whether the relative interior of edge
    ``i`` belongs to the region, ``vertex_closed[j]`` whether interior vertex
    ``j + 1`` does (default: both neighbouring edges closed).
    """

    vertices: tuple = ()
    edge_closed: tuple = ()
    vertex_closed: tuple = ()
    whole: bool = False
    empty: bool = False

    def __post_init__(self):
        verts = tuple(_pt(*v) for v in self.vertices)
        if self.whole or self.empty:
            if self.whole and self.empty:
                raise ValueError("region cannot be both whole and empty")
            if verts:
                raise ValueError("whole/empty regions carry no chain")
            object.__setattr__(self, "vertices", ())
            object.__setattr__(self, "edge_closed", ())
            object.__setattr__(self, "vertex_closed", ())
            return
        if len(verts) < 2:
            raise ValueError("a proper region needs a chain of at least two vertices")
        edges = tuple(bool(c) for c in self.edge_closed)
        if len(edges) != len(verts) - 1:
            raise ValueError("edge_closed must have one flag per edge")
        vflags = tuple(bool(c) for c in self.vertex_closed)
        if not vflags:
            vflags = tuple(edges[i] and edges[i + 1] for i in range(len(edges) - 1))
        if len(vflags) != len(verts) - 2:
            raise ValueError("vertex_closed must have one flag per interior vertex")
        _check_chain(verts)
        verts, edges, vflags = _merge_chain(verts, edges, vflags)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edge_closed", edges)
        object.__setattr__(self, "vertex_closed", vflags)

    @classmethod
    def whole_square(cls) -> "MonotoneRegion":
        return cls(whole=True)

    @classmethod
    def empty_region(cls) -> "MonotoneRegion":
        return cls(empty=True)

    @property
    def edges(self) -> list[tuple[Pt, Pt]]:
        v = self.vertices
        return [(v[i], v[i + 1]) for i in range(len(v) - 1)]

    def boundary_pieces(self, closed_only: bool = False) -> tuple[Segment, ...]:
        """Boundary of the region relative to the open square, as segments."""
        out = []
        n = len(self.vertices)
        for i, (a, b) in enumerate(self.edges):
            if closed_only and not self.edge_closed[i]:
                continue
            sc = i > 0 and self.vertex_closed[i - 1] if closed_only else i > 0
            ec = i < n - 2 and self.vertex_closed[i] if closed_only else i < n - 2
            out.append(Segment(a, b, sc, ec))
        if closed_only:
            for j, c in enumerate(self.vertex_closed):
                if c and not self.edge_closed[j] and not self.edge_closed[j + 1]:
                    out.append(Segment.point(self.vertices[j + 1]))
        return normalize_pieces(out)

    def locate(self, x: Pt) -> Location:
        """Classification of an arbitrary rational point (outside the open
        square counts as OUTSIDE)."""
        if not in_open_square(*x):
            return Location.OUTSIDE
        if self.empty:
            return Location.OUTSIDE
        if self.whole:
            return Location.INSIDE
        on_boundary = False
        for a, b in self.edges:
            c = _cross(a, b, x)
            if c < 0:
                return Location.OUTSIDE
            if c == 0:
                on_boundary = True
        if not on_boundary:
            return Location.INSIDE
        verts = self.vertices
        for j in range(1, len(verts) - 1):
            if verts[j] == x:
                return Location.BOUNDARY if self.vertex_closed[j - 1] else Location.OUTSIDE
        for i, (a, b) in enumerate(self.edges):
            if _on_closed_segment(a, b, x):
                return Location.BOUNDARY if self.edge_closed[i] else Location.OUTSIDE
        # on an edge line but beyond its extent: a strictly convex chain
        # never allows this inside the square
        return Location.OUTSIDE

    def locate_many(self, points) -> list[Location]:
        """``locate`` for many points at once.

        ``points`` is a sequence of points or a prepared :class:`PointSet`;
        the half-plane tests are exact integer arithmetic and points on an
        edge line fall back to :meth:`locate`.
        """
        ps = points if isinstance(points, PointSet) else PointSet(points)
        out = [Location.OUTSIDE] * len(ps)
        if not len(ps) or self.empty:
            return out
        if self.whole:
            return [Location.INSIDE if s else Location.OUTSIDE for s in ps.in_square]
        den = math.lcm(*(c.denominator for v in self.vertices for c in v))
        scale = math.lcm(den, ps.den)
        X, Y = ps.scaled(scale // ps.den)
        neg = np.zeros(len(ps), dtype=bool)
        zero = np.zeros(len(ps), dtype=bool)
        for a, b in self.edges:
            ax, ay, bx, by = (int(c * scale) for c in (*a, *b))
            c = (bx - ax) * (Y - ay) - (by - ay) * (X - ax)
            neg |= c < 0
            zero |= c == 0
        for i in np.flatnonzero(ps.in_square & ~neg & ~zero):
            out[i] = Location.INSIDE
        for i in np.flatnonzero(ps.in_square & ~neg & zero):
            out[i] = self.locate(ps.points[i])
        return out

    def member(self, x: Pt) -> bool:
        return self.locate(x) is not Location.OUTSIDE

    def cut_lines(self) -> list[tuple[Pt, Pt]]:
        lines = list(self.edges)
        for v in self.vertices:
            lines.append((v, (v[0] + 1, v[1] + 2)))
        return lines


def _check_chain(verts: tuple) -> None:
    for v in verts:
        if not (0 <= v[0] <= 1 and 0 <= v[1] <= 1):
            raise ValueError(f"chain vertex {v} outside the closed square")
    first, last = verts[0], verts[-1]
    if not (first[0] == 0 or first[1] == 0):
        raise ValueError("chain must start on the left or bottom side")
    if not (last[0] == 1 or last[1] == 1):
        raise ValueError("chain must end on the top or right side")
    for i in range(len(verts) - 1):
        dx = verts[i + 1][0] - verts[i][0]
        dy = verts[i + 1][1] - verts[i][1]
        if dx < 0 or dy < 0 or (dx == 0 and dy == 0):
            raise ValueError("chain must be monotone (nondecreasing in both coordinates)")
    for i in range(len(verts) - 2):
        if _cross(verts[i], verts[i + 1], verts[i + 2]) < 0:
            raise ValueError("chain is not convex (slopes must be nondecreasing)")
    for a, b in zip(verts, verts[1:]):
        if _on_square_side(a, b):
            raise ValueError("chain edges must not run along the square boundary")


def _merge_chain(verts, edges, vflags):
    verts, edges, vflags = list(verts), list(edges), list(vflags)
    j = 1
    while j < len(verts) - 1:
        collinear = _cross(verts[j - 1], verts[j], verts[j + 1]) == 0
        if collinear and edges[j - 1] == edges[j] == vflags[j - 1]:
            del verts[j]
            del edges[j]
            del vflags[j - 1]
        else:
            j += 1
    return tuple(verts), tuple(edges), tuple(vflags)


def _clip_square(halfplanes: Iterable[tuple[Pt, Pt]]) -> list[Pt]:
    """Unit square cut by closed half-planes {x : cross(p, q, x) >= 0}."""
    poly = [_pt(0, 0), _pt(1, 0), _pt(1, 1), _pt(0, 1)]
    for p, q in halfplanes:
        if not poly:
            break
        out: list[Pt] = []
        n = len(poly)
        for i in range(n):
            cur, nxt = poly[i], poly[(i + 1) % n]
            c_cur, c_nxt = _cross(p, q, cur), _cross(p, q, nxt)
            if c_cur >= 0:
                out.append(cur)
            if (c_cur > 0 and c_nxt < 0) or (c_cur < 0 and c_nxt > 0):
                out.append(_lerp(cur, nxt, c_cur / (c_cur - c_nxt)))
        poly = out
    return _clean_polygon(poly)


def _clean_polygon(poly: list[Pt]) -> list[Pt]:
    pts: list[Pt] = []
    for v in poly:
        if not pts or pts[-1] != v:
            pts.append(v)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if _cross(a, b, c) == 0:
                del pts[i]
                changed = True
                break
    return pts


def _area2(poly: list[Pt]) -> Fraction:
    s = ZERO
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        s += a[0] * b[1] - a[1] * b[0]
    return s


def _chain_of_polygon(poly: list[Pt]):
    """Chain vertices of a CCW convex polygon, or 'whole' / 'empty'."""
    if len(poly) < 3 or _area2(poly) <= 0:
        return "empty"
    n = len(poly)
    is_chain = [not _on_square_side(poly[i], poly[(i + 1) % n]) for i in range(n)]
    if not any(is_chain):
        return "whole"
    start = next(i for i in range(n) if is_chain[i] and not is_chain[i - 1])
    chain = [poly[start]]
    i = start
    while is_chain[i]:
        chain.append(poly[(i + 1) % n])
        i = (i + 1) % n
        if i == start:
            break
    return chain


def _build(chain, member: Callable[[Pt], bool], breakpoints: Iterable[Pt] = ()) -> MonotoneRegion:
    """Region with the given chain geometry and flags read off ``member``."""
    if chain == "empty":
        return MonotoneRegion.empty_region()
    if chain == "whole":
        return MonotoneRegion.whole_square()
    bps = set(breakpoints)
    verts: list[Pt] = [chain[0]]
    for a, b in zip(chain, chain[1:]):
        inner = [x for x in bps if x != a and x != b and _on_closed_segment(a, b, x)]
        inner.sort()
        verts.extend(inner)
        verts.append(b)
    edges = tuple(member(_mid(a, b)) for a, b in zip(verts, verts[1:]))
    vflags = tuple(member(v) for v in verts[1:-1])
    return MonotoneRegion(tuple(verts), edges, vflags)


def region_from_chain(points: Sequence, closed: bool = True) -> MonotoneRegion:
    verts = tuple(_pt(*p) for p in points)
    return MonotoneRegion(verts, (closed,) * (len(verts) - 1))


def with_flags(region: MonotoneRegion, closed: bool) -> MonotoneRegion:
    if region.whole or region.empty:
        return region
    n = len(region.vertices)
    return MonotoneRegion(region.vertices, (closed,) * (n - 1), (closed,) * (n - 2))


def interior(region: MonotoneRegion) -> MonotoneRegion:
    return with_flags(region, False)


def closure(region: MonotoneRegion) -> MonotoneRegion:
    """Closure relative to the open square."""
    return with_flags(region, True)


def _hull(points: list[Pt]) -> list[Pt]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Pt] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Pt] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def monotone_closure(points: Iterable) -> MonotoneRegion:
    """Smallest monotone convex region containing the given points."""
    pts = [p.xy if isinstance(p, Q2Point) else Q2Point(*p).xy for p in points]
    if not pts:
        return MonotoneRegion.empty_region()
    cloud = [_pt(0, 1)]
    for a, b in pts:
        cloud += [(a, b), (ZERO, b), (a, ONE)]
    return _build(_chain_of_polygon(_hull(cloud)), lambda x: True)


def contains(region: MonotoneRegion, p) -> Location:
    xy = p.xy if isinstance(p, Q2Point) else Q2Point(*p).xy
    return region.locate(xy)


def contains_many(region: MonotoneRegion, points: Iterable) -> list[Location]:
    """``contains`` over many points (or a :class:`PointSet`), exactly."""
    return region.locate_many(points)


def dual_region(region: MonotoneRegion) -> MonotoneRegion:
    """Image of the region under (a, b) -> (1 - b, 1 - a)."""
    if region.whole or region.empty:
        return region
    verts = tuple(phi(v) for v in reversed(region.vertices))
    return MonotoneRegion(verts, tuple(reversed(region.edge_closed)),
                          tuple(reversed(region.vertex_closed)))


def intersect(a: MonotoneRegion, b: MonotoneRegion) -> MonotoneRegion:
    if a.empty or b.empty:
        return MonotoneRegion.empty_region()
    if a.whole:
        return b
    if b.whole:
        return a
    poly = _clip_square(a.edges + b.edges)
    return _build(_chain_of_polygon(poly), lambda x: a.member(x) and b.member(x),
                  a.vertices + b.vertices)


def intersect_all(regions: Iterable[MonotoneRegion]) -> MonotoneRegion:
    out = MonotoneRegion.whole_square()
    for r in regions:
        out = intersect(out, r)
    return out


def is_subset(a: MonotoneRegion, b: MonotoneRegion) -> bool:
    return intersect(a, b) == a


def clip_segment(seg: Segment, region: MonotoneRegion) -> list[Segment]:
    """Pieces of ``seg`` that lie in ``region``."""
    return pieces_where(seg, region.member, region.cut_lines())


def subtract_pieces(region: MonotoneRegion, pieces: Sequence[Segment]) -> MonotoneRegion:
    """``region`` minus a union of boundary pieces.

    Raises ValueError if a piece reaches into the interior, because the
    difference would no longer be a region.
    """
    if region.empty or not pieces:
        return region
    for piece in pieces:
        for sub in clip_segment(piece, region):
            probe = sub.start if sub.degenerate else sub.at(HALF)
            if region.locate(probe) is Location.INSIDE:
                raise ValueError("cannot remove a piece that meets the interior")
    if region.whole:
        return region
    bps = [p.start for p in pieces] + [p.end for p in pieces]
    return _build(list(region.vertices),
                  lambda x: region.member(x) and not any(p.contains_point(x) for p in pieces),
                  bps)


# ---------------------------------------------------------------------------
# lines of the family used for V-sets


@dataclass(frozen=True)
class LineEll:
    """Affine line of nonnegative slope, seen inside the unit square."""

    slope: object
    anchor: Pt

    def __post_init__(self):
        if self.slope is not INFINITY:
            k = as_rational(self.slope)
            if k < 0:
                raise ValueError("slope must be nonnegative or INFINITY")
            object.__setattr__(self, "slope", k)
        anchor = self.anchor.xy if isinstance(self.anchor, Q2Point) else _pt(*self.anchor)
        object.__setattr__(self, "anchor", anchor)

    @classmethod
    def through(cls, p, slope) -> "LineEll":
        return cls(slope, p)

    @classmethod
    def horizontal(cls, beta) -> "LineEll":
        return cls(0, (0, beta))

    @classmethod
    def vertical(cls, alpha) -> "LineEll":
        return cls(INFINITY, (alpha, 0))

    @property
    def direction(self) -> Pt:
        return (ZERO, ONE) if self.slope is INFINITY else (ONE, self.slope)

    @property
    def clipped(self):
        """Endpoints of the line inside the closed square (or None)."""
        a, d = self.anchor, self.direction
        lo, hi = None, None
        for axis in (0, 1):
            if d[axis] == 0:
                if not 0 <= a[axis] <= 1:
                    return None
                continue
            t0, t1 = sorted(((0 - a[axis]) / d[axis], (1 - a[axis]) / d[axis]))
            lo = t0 if lo is None else max(lo, t0)
            hi = t1 if hi is None else min(hi, t1)
        if lo is None or lo > hi:
            return None
        p = (a[0] + lo * d[0], a[1] + lo * d[1])
        q = (a[0] + hi * d[0], a[1] + hi * d[1])
        return (p, q)

    def meets_open_square(self) -> bool:
        c = self.clipped
        return c is not None and c[0] != c[1] and in_open_square(*_mid(*c))

    def segment(self) -> Segment:
        p, q = self.clipped
        return Segment(p, q, False, False)

    def alpha_intercept(self) -> Fraction:
        """Value of alpha where the line meets beta = 0."""
        a = self.anchor
        if self.slope is INFINITY:
            return a[0]
        if self.slope == 0:
            raise ValueError("horizontal lines have no alpha intercept")
        return a[0] - a[1] / self.slope

    def left_region(self, closed: bool = True) -> MonotoneRegion:
        """The side of the line containing the upper-left band, with or
        without the line itself."""
        if not self.meets_open_square():
            raise ValueError("line does not cross the open square")
        p, q = self.clipped
        return MonotoneRegion((p, q), (closed,))

    def dual(self) -> "LineEll":
        p, q = self.clipped
        p2, q2 = phi(q), phi(p)
        if self.slope is INFINITY:
            return LineEll(0, p2)
        if self.slope == 0:
            return LineEll(INFINITY, p2)
        return LineEll(1 / self.slope, p2)


def in_family(line: LineEll) -> bool:
    """Membership in the family of lines whose left side carries L and S."""
    if not line.meets_open_square():
        return False
    if line.slope is INFINITY:
        return line.anchor[0] > HALF
    if line.slope == 0:
        return line.anchor[1] < HALF
    p, q = line.clipped
    gp, gq = p[1] - p[0], q[1] - q[0]
    return gp <= 0 and gq <= 0 and not (gp == 0 and gq == 0)


# ---------------------------------------------------------------------------
# interpolation


def interpolation_point(p0, q0, p1, q1, theta) -> Q2Point:
    """(1/p_theta, 1/q_theta) with 1/p_theta = theta/p0 + (1 - theta)/p1."""
    p0, q0, p1, q1, theta = (as_rational(v) for v in (p0, q0, p1, q1, theta))
    if not 0 < theta < 1:
        raise ValueError("theta must lie strictly between 0 and 1")
    for e in (p0, q0, p1, q1):
        if e <= 1:
            raise ValueError("exponents must be finite and > 1")
    return Q2Point(theta / p0 + (1 - theta) / p1, theta / q0 + (1 - theta) / q1)


def extrapolation_applicable(p0, q0, p1, q1) -> bool:
    """Whether the compact extrapolation rule applies to the two endpoints."""
    p0, q0, p1, q1 = (as_rational(v) for v in (p0, q0, p1, q1))
    for e in (p0, q0, p1, q1):
        if e <= 1:
            raise ValueError("exponents must be finite and > 1")
    if p0 == p1 or q0 == q1:
        raise ValueError("the rule needs p0 != p1 and q0 != q1")
    m = min(q0 / p0, q1 / p1)
    if m <= 1:
        return True
    return (q1 - q0) / (p1 - p0) < 0


# ---------------------------------------------------------------------------
# characteristic profiles


@dataclass(frozen=True)
class CharacteristicProfile:
    """The sets L, K, S (regions) and V (boundary pieces) of an operator."""

    L: MonotoneRegion
    K: MonotoneRegion
    S: MonotoneRegion
    V: tuple = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "V", normalize_pieces(self.V))

    def dual(self) -> "CharacteristicProfile":
        return CharacteristicProfile(dual_region(self.L), dual_region(self.K),
                                     dual_region(self.S), tuple(s.dual() for s in self.V),
                                     dict(self.metadata))

    def v_contains(self, x: Pt) -> bool:
        return any(s.contains_point(x) for s in self.V)


def s_closure(profile: CharacteristicProfile) -> CharacteristicProfile:
    """Enlarge S by every open segment joining a point of S to a point of L."""
    S, L = profile.S, profile.L
    if S.empty or L.empty:
        return profile
    if L.whole:
        return replace(profile, S=MonotoneRegion.whole_square())
    lines = {}
    for a, b in L.edges:
        line = LineEll(INFINITY, a) if a[0] == b[0] else LineEll((b[1] - a[1]) / (b[0] - a[0]), a)
        full = line.segment()
        J = clip_segment(Segment(full.start, full.end, True, True), S)
        I = clip_segment(Segment(full.start, full.end, True, True), L)
        lines[(a, b)] = (J, I)

    def member(x: Pt) -> bool:
        if S.member(x):
            return True
        loc = L.locate(x)
        if loc is Location.INSIDE:
            return True
        if loc is Location.OUTSIDE:
            return False
        for (a, b), (J, I) in lines.items():
            if _cross(a, b, x) != 0 or not J:
                continue
            for piece in I:
                if piece.contains_point(x) and x != piece.start and x != piece.end:
                    return True
        return False

    bps = list(L.vertices)
    for J, _ in lines.values():
        for piece in J:
            bps += [piece.start, piece.end]
    return replace(profile, S=_build(list(L.vertices), member, bps))


R_TRIANGLE = "alpha < beta < 1/2"


def _in_band(x: Pt) -> bool:
    return 0 < x[0] <= HALF <= x[1] < 1


_BAND_CUTS = [((HALF, ZERO), (HALF, ONE)), ((ZERO, HALF), (ONE, HALF)),
              ((ZERO, ZERO), (ONE, ONE))]


def validate_profile(profile: CharacteristicProfile) -> list[str]:
    """Structural violations of a profile; an empty list means consistent."""
    L, K, S, V = profile.L, profile.K, profile.S, profile.V
    out: list[str] = []
    if not is_subset(K, S):
        out.append("K is not contained in S")
    if not is_subset(S, L):
        out.append("S is not contained in L")
    if not S.empty:
        iL, iK, iS = interior(L), interior(K), interior(S)
        if not (iL == iK == iS):
            out.append("L, K and S do not share the same interior although S is nonempty")
    chain = L.boundary_pieces()
    for piece in V:
        off = pieces_where(piece, lambda x: not any(c.contains_point(x) for c in chain),
                           L.cut_lines())
        if off:
            out.append(f"V piece {_fmt_seg(piece)} is not on the boundary of L")
    for piece in V:
        if pieces_where(piece, _in_band, _BAND_CUTS):
            out.append(f"V piece {_fmt_seg(piece)} meets the band 0<alpha<=1/2<=beta<1")
    out += _ray_violations(V)
    return out


def _ray_violations(V: Sequence[Segment]) -> list[str]:
    out = []
    for piece in V:
        upper_left = pieces_where(piece, lambda x: x[0] < x[1] <= HALF, _BAND_CUTS)
        for sub in upper_left:
            if not sub.degenerate and sub.start[1] != sub.end[1]:
                out.append(f"V piece {_fmt_seg(sub)} in alpha<beta<=1/2 is not horizontal")
                continue
            b0 = sub.end[1]
            ray = Segment((ZERO, b0), sub.end, False, sub.end_closed)
            if not covered_by(ray, V):
                out.append(f"V misses the horizontal ray to the left of {_fmt_pt(sub.end)}")
        lower_right = pieces_where(piece, lambda x: HALF <= x[0] < x[1], _BAND_CUTS)
        for sub in lower_right:
            if not sub.degenerate and sub.start[0] != sub.end[0]:
                out.append(f"V piece {_fmt_seg(sub)} in 1/2<=alpha<beta is not vertical")
                continue
            ray = Segment(sub.start, (sub.start[0], ONE), sub.start_closed, False)
            if not covered_by(ray, V):
                out.append(f"V misses the vertical ray above {_fmt_pt(sub.start)}")
    return out


def check_duality(profile: CharacteristicProfile, adjoint: CharacteristicProfile) -> list[str]:
    """Violations of the duality relations between T and its adjoint."""
    out = []
    if dual_region(profile.L) != adjoint.L:
        out.append("L of the adjoint is not the mirror image of L")
    outside_r = []
    for piece in profile.V:
        outside_r += pieces_where(piece, lambda x: not (x[0] < x[1] < HALF), _BAND_CUTS)
    for piece in outside_r:
        if not covered_by(piece.dual(), adjoint.V):
            out.append(f"mirror image of V piece {_fmt_seg(piece)} is missing from V of the adjoint")
    return out


def _fmt_pt(x: Pt) -> str:
    return f"({x[0]}, {x[1]})"


def _fmt_seg(s: Segment) -> str:
    if s.degenerate:
        return _fmt_pt(s.start)
    lb = "[" if s.start_closed else "("
    rb = "]" if s.end_closed else ")"
    return f"{lb}{_fmt_pt(s.start)}, {_fmt_pt(s.end)}{rb}"


# ---------------------------------------------------------------------------
# JSON


def _pt_json(x: Pt) -> list[str]:
    return [format_rational(x[0]), format_rational(x[1])]


def region_to_json(region: MonotoneRegion) -> dict:
    out = {
        "vertices": [_pt_json(v) for v in region.vertices],
        "edge_closed": list(region.edge_closed),
        "whole": region.whole,
        "empty": region.empty,
    }
    e = region.edge_closed
    default = [e[i] and e[i + 1] for i in range(len(e) - 1)]
    if list(region.vertex_closed) != default:
        out["vertex_closed"] = list(region.vertex_closed)
    return out


def region_from_json(data: dict) -> MonotoneRegion:
    if not isinstance(data, dict):
        raise ValueError("region JSON must be an object")
    return MonotoneRegion(
        tuple(_pt(*v) for v in data.get("vertices", [])),
        tuple(data.get("edge_closed", [])),
        tuple(data.get("vertex_closed", [])),
        bool(data.get("whole", False)),
        bool(data.get("empty", False)),
    )


def segment_to_json(s: Segment) -> dict:
    return {"start": _pt_json(s.start), "end": _pt_json(s.end),
            "start_closed": s.start_closed, "end_closed": s.end_closed}


def segment_from_json(data: dict) -> Segment:
    return Segment(_pt(*data["start"]), _pt(*data["end"]),
                   bool(data.get("start_closed", True)), bool(data.get("end_closed", True)))


def profile_to_json(profile: CharacteristicProfile) -> dict:
    return {
        "L": region_to_json(profile.L),
        "K": region_to_json(profile.K),
        "S": region_to_json(profile.S),
        "v_segments": [segment_to_json(s) for s in profile.V],
        "metadata": _json_safe(profile.metadata),
    }


def profile_from_json(data: dict) -> CharacteristicProfile:
    return CharacteristicProfile(
        region_from_json(data["L"]), region_from_json(data["K"]), region_from_json(data["S"]),
        tuple(segment_from_json(s) for s in data.get("v_segments", [])),
        dict(data.get("metadata", {})),
    )


def _json_safe(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, Q2Point):
        return _pt_json(obj.xy)
    return obj
