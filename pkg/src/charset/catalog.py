"""Symbolic descriptors of the operators whose characteristic sets are known.

``profile(spec)`` returns the exact :class:`CharacteristicProfile` of a
descriptor.  Sums follow the intersection rule for positive operators with
dyadic weights; adjoints are mirror images under (a, b) -> (1 - b, 1 - a).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .regions import (
    HALF,
    INFINITY,
    ONE,
    ZERO,
    CharacteristicProfile,
    LineEll,
    MonotoneRegion,
    Q2Point,
    Segment,
    as_rational,
    clip_segment,
    format_rational,
    in_family,
    intersect_all,
    interior,
    normalize_pieces,
    region_from_chain,
    subtract_pieces,
)


class OperatorSpec:
    """Base class of operator descriptors."""

    kind = "abstract"
    positive = True

    def to_json(self) -> dict:
        raise NotImplementedError


def _rat_in(value, lo, hi, name):
    x = as_rational(value)
    if not lo < x < hi:
        raise ValueError(f"{name}={x} must lie in ({lo}, {hi})")
    return x


@dataclass(frozen=True)
class Inclusion(OperatorSpec):
    """Formal inclusion L_inf -> L_1 of a finite measure space."""

    kind = "inclusion"

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Multiplication(OperatorSpec):
    """Multiplication by a nonnegative g in L_r."""

    r: Fraction
    kind = "multiplication"

    def __post_init__(self):
        r = as_rational(self.r)
        if r <= 1:
            raise ValueError("r must exceed 1")
        object.__setattr__(self, "r", r)

    def to_json(self):
        return {"kind": self.kind, "r": format_rational(self.r)}


@dataclass(frozen=True)
class Averaging(OperatorSpec):
    """f -> sum_k mu(A_k)^(alpha-1) (int_{A_k} f) chi_{A_k}."""

    alpha: Fraction
    kind = "averaging"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _rat_in(self.alpha, 0, 1, "alpha"))

    def to_json(self):
        return {"kind": self.kind, "alpha": format_rational(self.alpha)}


@dataclass(frozen=True)
class RiemannLiouville(OperatorSpec):
    """Fractional integral of order alpha on (0, 1)."""

    alpha: Fraction
    kind = "riemann-liouville"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _rat_in(self.alpha, 0, 1, "alpha"))

    def to_json(self):
        return {"kind": self.kind, "alpha": format_rational(self.alpha)}


@dataclass(frozen=True)
class RieszPotential(OperatorSpec):
    """Kernel |t - u|^(-lam) from Lebesgue (0, 1) onto an alpha-regular set."""

    lam: Fraction
    alpha: Fraction
    kind = "riesz"

    def __post_init__(self):
        object.__setattr__(self, "lam", _rat_in(self.lam, 0, 1, "lambda"))
        object.__setattr__(self, "alpha", _rat_in(self.alpha, 0, 1, "alpha"))

    @property
    def segment_end(self) -> Fraction:
        """Right end of the V-segment: min(1, (1 - lam)/(1 - alpha))."""
        return min(ONE, (1 - self.lam) / (1 - self.alpha))

    def v_beta(self, x) -> Fraction:
        return (as_rational(x) - 1 + self.lam) / self.alpha

    def to_json(self):
        return {"kind": self.kind, "lambda": format_rational(self.lam),
                "alpha": format_rational(self.alpha)}


@dataclass(frozen=True)
class RademacherHorizontal(OperatorSpec):
    """f -> sum_n (int f r_n) f_n with (f_n) disjoint normalized in L_q0."""

    q0: Fraction
    kind = "rademacher-horizontal"
    positive = False

    def __post_init__(self):
        q0 = as_rational(self.q0)
        if not q0 > 2:
            raise ValueError("q0 must exceed 2 (1/q0 < 1/2)")
        object.__setattr__(self, "q0", q0)

    def to_json(self):
        return {"kind": self.kind, "q0": format_rational(self.q0)}


@dataclass(frozen=True)
class RademacherVertical(OperatorSpec):
    """f -> sum_n (int f g_n) r_n with (g_n) disjoint normalized in L_p0'."""

    p0: Fraction
    kind = "rademacher-vertical"
    positive = False

    def __post_init__(self):
        p0 = as_rational(self.p0)
        if not 1 < p0 < 2:
            raise ValueError("p0 must lie in (1, 2) (1/p0 > 1/2)")
        object.__setattr__(self, "p0", p0)

    def to_json(self):
        return {"kind": self.kind, "p0": format_rational(self.p0)}


@dataclass(frozen=True)
class WeightedSum(OperatorSpec):
    """sum_n 2^(-n) T_n.

    ``disjoint`` marks the construction in which each summand acts on its
    own piece of a split measure space; only then may non-positive summands
    take part.
    """

    terms: tuple
    disjoint: bool = False
    kind = "sum"

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("a weighted sum needs at least one term")
        object.__setattr__(self, "terms", terms)

    @property
    def positive(self):
        return all(t.positive for t in self.terms)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1, 2**n) for n in range(1, len(self.terms) + 1))

    def to_json(self):
        return {"kind": self.kind, "disjoint": self.disjoint,
                "terms": [t.to_json() for t in self.terms]}


@dataclass(frozen=True)
class Adjoint(OperatorSpec):
    inner: OperatorSpec
    kind = "adjoint"

    @property
    def positive(self):
        return self.inner.positive

    def to_json(self):
        return {"kind": self.kind, "of": self.inner.to_json()}


def spec_from_json(data: dict) -> OperatorSpec:
    kind = data.get("kind")
    if kind == "inclusion":
        return Inclusion()
    if kind == "multiplication":
        return Multiplication(data["r"])
    if kind == "averaging":
        return Averaging(data["alpha"])
    if kind == "riemann-liouville":
        return RiemannLiouville(data["alpha"])
    if kind == "riesz":
        return RieszPotential(data["lambda"], data["alpha"])
    if kind == "rademacher-horizontal":
        return RademacherHorizontal(data["q0"])
    if kind == "rademacher-vertical":
        return RademacherVertical(data["p0"])
    if kind == "sum":
        return WeightedSum(tuple(spec_from_json(t) for t in data["terms"]),
                           bool(data.get("disjoint", False)))
    if kind == "adjoint":
        return Adjoint(spec_from_json(data["of"]))
    raise ValueError(f"unknown operator kind {kind!r}")


# ---------------------------------------------------------------------------
# profiles


def _segment_profile(chain, v_segment: Segment, open_tail: bool = False) -> CharacteristicProfile:
    """L = S = closed region left of ``chain``, K = its interior, V = segment.

    With ``open_tail`` the last chain edge is excluded from L and S.
    """
    n = len(chain)
    edges = [True] * (n - 1)
    if open_tail:
        edges[-1] = False
    L = MonotoneRegion(tuple(chain), tuple(edges))
    return CharacteristicProfile(L, interior(L), L, (v_segment,))


def _empty_ks(L: MonotoneRegion) -> CharacteristicProfile:
    empty = MonotoneRegion.empty_region()
    return CharacteristicProfile(L, empty, empty, ())


def profile(spec: OperatorSpec) -> CharacteristicProfile:
    """Exact characteristic sets of a catalog operator."""
    if isinstance(spec, Inclusion):
        return _empty_ks(region_from_chain([(ZERO, ZERO), (ONE, ONE)]))
    if isinstance(spec, Multiplication):
        c = 1 / spec.r
        return _empty_ks(region_from_chain([(ZERO, c), (1 - c, ONE)]))
    if isinstance(spec, (Averaging, RiemannLiouville)):
        a = spec.alpha
        chain = [(a, ZERO), (ONE, 1 - a)]
        return _segment_profile(chain, Segment(*chain, False, False))
    if isinstance(spec, RieszPotential):
        x1 = spec.segment_end
        start, end = (1 - spec.lam, ZERO), (x1, spec.v_beta(x1))
        v = Segment(start, end, False, False)
        if x1 == 1:
            return _segment_profile([start, end], v)
        # the segment stops on the diagonal; boundedness beyond it is not claimed
        return _segment_profile([start, end, (x1, ONE)], v, open_tail=True)
    if isinstance(spec, RademacherHorizontal):
        b = 1 / spec.q0
        chain = [(ZERO, b), (ONE, b)]
        return _segment_profile(chain, Segment(*chain, False, False))
    if isinstance(spec, RademacherVertical):
        a = 1 / spec.p0
        chain = [(a, ZERO), (a, ONE)]
        return _segment_profile(chain, Segment(*chain, False, False))
    if isinstance(spec, Adjoint):
        return profile(spec.inner).dual()
    if isinstance(spec, WeightedSum):
        return sum_profile(spec.terms, disjoint=spec.disjoint)
    raise TypeError(f"not an operator spec: {spec!r}")


def sum_profile(specs: Sequence[OperatorSpec], disjoint: bool = False) -> CharacteristicProfile:
    """Profile of sum_n 2^(-n) T_n.

    L and S are intersections, V = (union of V_n) intersected with S, and
    K = S minus V.  The rule needs positive summands unless the summands
    act on disjoint pieces of the measure space (``disjoint=True``).
    """
    specs = tuple(specs)
    if not specs:
        raise ValueError("empty sum")
    if not disjoint:
        bad = [s.kind for s in specs if not s.positive]
        if bad:
            raise ValueError(f"sum rule needs positive summands; got {', '.join(bad)}")
    parts = [profile(s) for s in specs]
    L = intersect_all(p.L for p in parts)
    S = intersect_all(p.S for p in parts)
    V = []
    for p in parts:
        for piece in p.V:
            V += clip_segment(piece, S)
    V = normalize_pieces(V)
    K = subtract_pieces(S, V)
    meta = {
        "weights": [format_rational(w) for w in
                    (Fraction(1, 2**n) for n in range(1, len(specs) + 1))],
        "uniform_norm_bound": "assumed, not checked",
    }
    if disjoint:
        meta["construction"] = "summands on disjoint parts of the measure space"
    return CharacteristicProfile(L, K, S, V, meta)


def dual_spec(spec: OperatorSpec) -> OperatorSpec:
    if isinstance(spec, Adjoint):
        return spec.inner
    return Adjoint(spec)


# ---------------------------------------------------------------------------
# lines, polygons, curves


def line_operator(line: LineEll) -> OperatorSpec:
    """An operator whose V-set is exactly ``line`` inside the open square."""
    if not in_family(line):
        raise ValueError(f"line {line} is not in the admissible family")
    k = line.slope
    if k is INFINITY:
        return RademacherVertical(1 / line.anchor[0])
    if k == 0:
        return RademacherHorizontal(1 / line.anchor[1])
    a0 = line.alpha_intercept()
    if k == 1:
        return RiemannLiouville(a0)
    if k > 1:
        return RieszPotential(1 - a0, 1 / k)
    return Adjoint(line_operator(line.dual()))


def _slope_key(k):
    return (1, 0) if k is INFINITY else (0, k)


def polygon_operator(lines: Sequence[LineEll]) -> WeightedSum:
    """Weighted sum whose V-set is the boundary of the intersection of the
    left sides of ``lines`` (slopes strictly increasing)."""
    lines = list(lines)
    if not lines:
        raise ValueError("need at least one line")
    for line in lines:
        if not in_family(line):
            raise ValueError(f"line {line} is not in the admissible family")
    keys = [_slope_key(l.slope) for l in lines]
    if any(a >= b for a, b in zip(keys, keys[1:])):
        raise ValueError("slopes must be strictly increasing")
    disjoint = any(l.slope is INFINITY or l.slope == 0 for l in lines)
    return WeightedSum(tuple(line_operator(l) for l in lines), disjoint)


def curve_operator(samples: Sequence[tuple]) -> tuple[WeightedSum, CharacteristicProfile]:
    """Operator built from tangent lines at sample points of a convex curve.

    Each sample is ``(point, slope)``.  The returned profile is exact for the
    finite sum; ``metadata["certified_points"]`` lists the sample points,
    which are the points of V lying on the curve itself.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample point")
    lines = []
    points = []
    for point, slope in samples:
        pt = point if isinstance(point, Q2Point) else Q2Point(*point)
        line = LineEll.through(pt, slope)
        if not in_family(line):
            raise ValueError(f"tangent at {pt.xy} with slope {slope} is not admissible")
        lines.append(line)
        points.append(pt)
    order = sorted(range(len(lines)), key=lambda i: _slope_key(lines[i].slope))
    spec = polygon_operator([lines[i] for i in order])
    prof = profile(spec)
    for pt in points:
        if not prof.v_contains(pt.xy):
            raise ValueError(f"sample {pt.xy} is not on the boundary; points must lie on a convex curve")
    meta = dict(prof.metadata)
    meta["certified_points"] = [pt for pt in sorted(points)]
    return spec, CharacteristicProfile(prof.L, prof.K, prof.S, prof.V, meta)


def reference_specs() -> list[OperatorSpec]:
    """A spread of catalog operators covering every kind."""
    F = Fraction
    riesz = RieszPotential(F(1, 2), F(1, 2))
    return [
        Inclusion(),
        Multiplication(2),
        Averaging(F(1, 3)),
        RiemannLiouville(F(1, 4)),
        riesz,
        RieszPotential(F(3, 10), F(3, 5)),
        RieszPotential(F(1, 4), F(1, 3)),
        RieszPotential(F(1, 2), F(1, 4)),
        RademacherHorizontal(F(5, 2)),
        RademacherVertical(F(10, 7)),
        Adjoint(riesz),
        Adjoint(RademacherHorizontal(3)),
        WeightedSum((Adjoint(riesz), riesz)),
        polygon_operator([LineEll.horizontal(F(1, 10)), LineEll(F(1, 2), (F(2, 5), F(1, 10))),
                          LineEll(2, (F(13, 20), F(1, 5))), LineEll.vertical(F(9, 10))]),
    ]
