"""Numerical experiments around Riesz potentials onto Cantor sets and the
subspace constructions built from Rademacher and stable sequences.

Every experiment returns plain dataclasses and can be turned into a
:class:`Report`, whose JSON form is deterministic given config and seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .catalog import RieszPotential, profile
from .discrete import (
    KernelMatrix,
    adjoint,
    conjugate,
    discrete_space,
    lp_norm,
    opnorm_pq,
    riesz_matrix,
    weak_quasinorm,
)
from .fractal import DiscreteMeasureSpace, cantor_build, interval_grid
from .regions import Location, Q2Point, as_rational, closure, format_rational

DEFAULT_SEED = 20240917
BOUNDED_BELOW = 0.02
UNBOUNDED_ABOVE = 0.08
STABLE_CLIP = 1e6


def task_seed(seed: int, index: int) -> int:
    """Independent per-task seed derived from a master seed."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def default_m_rule(n: int) -> int:
    return 4 * 2**n


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    experiment: str
    config: dict
    seed: int
    results: list
    classification: str

    def to_json(self) -> str:
        return json.dumps(_plain(asdict(self)), indent=2, sort_keys=True) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


# ---------------------------------------------------------------------------
# boundedness


@dataclass
class GrowthReport:
    point: tuple
    levels: list
    atoms: list
    norms: list
    converged: list
    fitted_exponent: float
    classification: str

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "atoms", "norm"])
        for n, a, v in zip(self.levels, self.atoms, self.norms):
            w.writerow([n, a, repr(v)])
        return buf.getvalue()


def classify_growth(exponent: float | None) -> str:
    if exponent is None or not math.isfinite(exponent):
        return "inconclusive"
    if exponent < BOUNDED_BELOW:
        return "bounded"
    if exponent > UNBOUNDED_ABOVE:
        return "unbounded"
    return "inconclusive"


def growth_exponent(atoms: Sequence[float], norms: Sequence[float]) -> float | None:
    """Least-squares slope of log(norm) against log(atom count)."""
    if len(atoms) < 3:
        return None
    return float(np.polyfit(np.log(atoms), np.log(norms), 1)[0])


def bump_starts(T: KernelMatrix, center: float) -> list[np.ndarray]:
    """Indicators of source cells within dyadic distances of ``center``."""
    d = np.abs(T.source.atoms - center)
    starts = []
    h = 0.5
    while h >= T.source.cell_diameter / 2:
        v = (d < h).astype(float)
        if v.any():
            starts.append(v)
        h /= 2
    return starts


def boundedness_scan(lam, alpha, points: Iterable, levels: Sequence[int] = range(4, 10),
                     m_rule=default_m_rule, seed: int = DEFAULT_SEED, tol: float = 1e-8,
                     max_iter: int = 10_000, restarts: int = 8,
                     jobs: int = 1) -> list[GrowthReport]:
    """Operator-norm growth of the discretised Riesz potential at each point.

    At level ``n`` the operator maps an ``m_rule(n)``-cell grid on (0, 1)
    to the level-``n`` Cantor set of dimension ``alpha``.  A bounded
    operator shows a flat norm sequence; an unbounded one grows like a
    power of the atom count.  Points run on ``jobs`` threads; each
    (point, level) task has its own derived seed.
    """
    lam, alpha = float(lam), float(alpha)
    pts = [pt if isinstance(pt, Q2Point) else Q2Point(*pt) for pt in points]
    levels = list(levels)
    mats = {}
    for n in levels:
        target = cantor_build(alpha, n)
        mats[n] = riesz_matrix(lam, m_rule(n), target)
    def scan(i, pt):
        p, q = 1.0 / float(pt.alpha), 1.0 / float(pt.beta)
        norms, conv, atoms = [], [], []
        for j, n in enumerate(levels):
            T = mats[n]
            center = T.target.atoms[np.argmin(np.abs(T.target.atoms - 0.5))]
            res = opnorm_pq(T, p, q, tol=tol, max_iter=max_iter, restarts=restarts,
                            seed=task_seed(seed, i * 1000 + j),
                            initial=bump_starts(T, center))
            norms.append(res.value)
            conv.append(res.converged)
            atoms.append(T.target.size)
        slope = growth_exponent(atoms, norms)
        return GrowthReport((pt.alpha, pt.beta), levels, atoms, norms, conv,
                            slope, classify_growth(slope))

    if jobs > 1 and len(pts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(scan, range(len(pts)), pts))
    return [scan(i, pt) for i, pt in enumerate(pts)]


def predicted_class(lam, alpha, point) -> str | None:
    """'bounded' inside L, 'unbounded' outside its closure, else None."""
    prof = profile(RieszPotential(lam, alpha))
    xy = point.xy if isinstance(point, Q2Point) else tuple(as_rational(v) for v in point)
    if prof.L.locate(xy) is Location.INSIDE:
        return "bounded"
    if closure(prof.L).locate(xy) is Location.OUTSIDE:
        return "unbounded"
    return None


def boundedness_report(lam, alpha, points, levels=range(4, 10), seed=DEFAULT_SEED,
                       **kw) -> Report:
    reps = boundedness_scan(lam, alpha, points, levels, seed=seed, **kw)
    classes = {r.classification for r in reps}
    overall = classes.pop() if len(classes) == 1 else "mixed"
    config = {"lambda": as_rational(lam), "alpha": as_rational(alpha),
              "levels": list(levels), "m_rule": "4*2^n",
              "thresholds": [BOUNDED_BELOW, UNBOUNDED_ABOVE]}
    return Report("riesz-bounded", config, seed, [asdict(r) for r in reps], overall)


# ---------------------------------------------------------------------------
# non-compactness witness


def aligned_grid(breaks: Iterable[float], m: int) -> DiscreteMeasureSpace:
    """Lebesgue cells on (0, 1) from a uniform ``m``-grid refined at ``breaks``."""
    pts = np.union1d(np.arange(m + 1) / m, np.asarray(list(breaks), dtype=float))
    pts = pts[(pts >= 0) & (pts <= 1)]
    lefts, widths = pts[:-1], np.diff(pts)
    keep = widths > 1e-15
    lefts, widths = lefts[keep], widths[keep]
    return DiscreteMeasureSpace(lefts + widths / 2, widths, float(widths.max()), 1.0, lefts)


def riesz_matrix_on(lam: float, source: DiscreteMeasureSpace,
                    target: DiscreteMeasureSpace) -> KernelMatrix:
    """Cell-averaged Riesz kernel from an arbitrary cell partition of (0, 1)."""
    from .discrete import cell_kernel_integral

    t = target.atoms[:, None]
    a = source.lefts[None, :]
    b = (source.lefts + source.weights)[None, :]
    A = cell_kernel_integral(t, a, b, lam) / source.weights[None, :]
    return KernelMatrix(A, source, target, float(lam))


@dataclass
class WitnessReport:
    lam: float
    alpha: float
    inv_p: float
    inv_q: float
    t0: float
    level: int
    k_values: list
    input_norms: list
    witness_norms: list
    pointwise_min: list
    pointwise_bound: list
    ball_masses: list
    lower_bound_hat: float
    skipped: list = field(default_factory=list)

    @property
    def spread(self) -> float:
        return max(self.witness_norms) / min(self.witness_norms)


def witness_test(lam, alpha, inv_p, k_values: Sequence[int] = (4, 8, 16, 32),
                 level: int | None = None, m: int | None = None) -> WitnessReport:
    """Images of ``f_k = k**(1/p) * chi(B_k)`` restricted to the fractal ball.

    ``B_k = (t0 - 1/(2k), t0 + 1/(2k))`` with ``t0`` the atom nearest 1/2;
    the source cells are refined so every ``B_k`` is a union of cells.  The
    default level makes the Cantor cells at least 16 times finer than the
    smallest ball.
    """
    lam, alpha, inv_p = float(lam), float(alpha), float(inv_p)
    inv_q = (inv_p - 1 + lam) / alpha
    if not 0 < inv_q < 1:
        raise ValueError("point is not on the open V-segment")
    p, q = 1 / inv_p, 1 / inv_q
    ks = sorted(int(k) for k in k_values)
    beta = 2.0 ** (-1 / alpha)
    if level is None:
        level = max(1, math.ceil(math.log(32 * max(ks)) / math.log(1 / beta)))
    target = cantor_build(alpha, level)
    if m is None:
        m = 4 * 2**level
    t0 = float(target.atoms[np.argmin(np.abs(target.atoms - 0.5))])
    usable, skipped = [], []
    for k in ks:
        half = 1 / (2 * k)
        if t0 - half <= 0 or t0 + half >= 1 or target.cell_diameter * 16 > 2 * half:
            skipped.append(k)
        else:
            usable.append(k)
    breaks = [t0 + s / (2 * k) for k in usable for s in (-1, 1)]
    src = aligned_grid(breaks, m)
    T = riesz_matrix_on(lam, src, target)
    in_norms, w_norms, pmin, pbound, masses = [], [], [], [], []
    for k in usable:
        half = 1 / (2 * k)
        inside = (src.lefts >= t0 - half - 1e-15) & (src.lefts + src.weights <= t0 + half + 1e-15)
        f = np.where(inside, k ** inv_p, 0.0)
        g = T.matvec(f)
        ball = np.abs(target.atoms - t0) < half
        in_norms.append(lp_norm(f, p, src.weights))
        w_norms.append(lp_norm(np.where(ball, g, 0.0), q, target.weights))
        pmin.append(float(g[ball].min()))
        pbound.append(k ** (lam + inv_p - 1))
        masses.append(float(target.weights[ball].sum()))
    return WitnessReport(lam, alpha, inv_p, inv_q, t0, level, usable, in_norms, w_norms,
                         pmin, pbound, masses, float(min(w_norms)), skipped)


def witness_report(lam, alpha, inv_p, k_values=(4, 8, 16, 32), seed=DEFAULT_SEED, **kw) -> Report:
    w = witness_test(lam, alpha, inv_p, k_values, **kw)
    ok = (w.lower_bound_hat > 0
          and all(abs(x - 1) <= 1e-10 for x in w.input_norms)
          and all(a >= 0.95 * b for a, b in zip(w.pointwise_min, w.pointwise_bound)))
    config = {"lambda": as_rational(lam), "alpha": as_rational(alpha),
              "inv_p": as_rational(inv_p), "k": list(k_values)}
    res = asdict(w)
    res["spread"] = w.spread
    return Report("witness", config, seed, [res], "non-compact" if ok else "inconclusive")


# ---------------------------------------------------------------------------
# weak type


def dyadic_intervals(depth: int) -> list[tuple[int, int]]:
    """All dyadic intervals ``[j 2^-d, (j+1) 2^-d)`` with ``d <= depth``."""
    return [(d, j) for d in range(depth + 1) for j in range(2**d)]


@dataclass
class WeakTypeReport:
    lam: float
    alpha: float
    x: float
    q1: float
    level: int
    family_depth: int
    ratios: list
    sup_ratio: float
    pointwise_constant: float


def weak_type_scan(lam, alpha, x, level: int, family_depth: int | None = None,
                   m: int | None = None) -> WeakTypeReport:
    """``||T chi_A||_{q1,inf} / mu(A)**x`` over dyadic intervals ``A``.

    Also returns the empirical constant of ``|T chi_A| <= C mu(A)**(1-lam)``.
    """
    lam, alpha, x = float(lam), float(alpha), float(x)
    hi = min(1.0, (1 - lam) / (1 - alpha))
    if not 1 - lam < x < hi:
        raise ValueError(f"x must lie in ({1 - lam}, {hi})")
    q1 = alpha / (x - 1 + lam)
    if m is None:
        m = 4 * 2**level
    depth = int(math.log2(m)) if family_depth is None else family_depth
    if 2**depth > m or m % 2**depth:
        raise ValueError("family depth finer than the source grid")
    target = cantor_build(alpha, level)
    T = riesz_matrix(lam, m, target)
    fam = dyadic_intervals(depth)
    cum = np.concatenate([np.zeros((target.size, 1)),
                          np.cumsum(T.entries * T.source.weights[None, :], axis=1)], axis=1)
    ratios, cpoint = [], 0.0
    for d, j in fam:
        lo, hi_ = j * m // 2**d, (j + 1) * m // 2**d
        g = cum[:, hi_] - cum[:, lo]
        mu = 2.0**-d
        ratios.append(weak_quasinorm(g, q1, target.weights) / mu**x)
        cpoint = max(cpoint, float(g.max()) / mu ** (1 - lam))
    return WeakTypeReport(lam, alpha, x, q1, level, depth, ratios, float(max(ratios)), cpoint)


def weak_type_report(lam, alpha, x, levels=(6, 8), seed=DEFAULT_SEED) -> Report:
    reps = [weak_type_scan(lam, alpha, x, n) for n in levels]
    sups = [r.sup_ratio for r in reps]
    cps = [r.pointwise_constant for r in reps]
    stable = max(sups) / min(sups) < 2 and max(cps) / min(cps) < 2
    results = []
    for r in reps:
        d = asdict(r)
        d.pop("ratios")
        results.append(d)
    config = {"lambda": as_rational(lam), "alpha": as_rational(alpha), "x": as_rational(x),
              "levels": list(levels)}
    return Report("weak-type", config, seed, results, "stable" if stable else "unstable")


# ---------------------------------------------------------------------------
# duality


@dataclass
class DualityResult:
    p: float
    q: float
    norm: float
    adjoint_norm: float
    gap: float

    @property
    def relative_gap(self) -> float:
        return self.gap / self.norm if self.norm else self.gap


def duality_check(T: KernelMatrix, p, q, tol: float = 1e-10, seed: int = DEFAULT_SEED,
                  restarts: int = 8) -> DualityResult:
    """``||T||_{p->q}`` against ``||T*||_{q'->p'}``."""
    p, q = float(p), float(q)
    a = opnorm_pq(T, p, q, tol=tol, restarts=restarts, seed=seed).value
    b = opnorm_pq(adjoint(T), conjugate(q), conjugate(p), tol=tol, restarts=restarts,
                  seed=seed).value
    return DualityResult(p, q, a, b, abs(a - b))


def random_positive_kernel(rng: np.random.Generator, n: int = 3) -> KernelMatrix:
    src = discrete_space(rng.random(n) + 0.1)
    tgt = discrete_space(rng.random(n) + 0.1)
    return KernelMatrix(rng.random((n, n)) + 0.01, src, tgt)


DUALITY_EXPONENTS = ((4 / 3, 3.0), (2.0, 4.0), (3.0, 1.5))


def duality_report(instances: int = 20, seed: int = DEFAULT_SEED, riesz_level: int = 3) -> Report:
    rng = np.random.default_rng(seed)
    kernels = [("random", random_positive_kernel(rng)) for _ in range(instances)]
    kernels.append(("riesz", riesz_matrix(0.5, 4 * 2**riesz_level, cantor_build(0.5, riesz_level))))
    results, worst = [], 0.0
    for i, (name, T) in enumerate(kernels):
        for p, q in DUALITY_EXPONENTS:
            d = duality_check(T, p, q, seed=task_seed(seed, i))
            worst = max(worst, d.relative_gap)
            results.append({"instance": i, "kind": name, **asdict(d)})
    config = {"instances": instances, "exponents": [list(e) for e in DUALITY_EXPONENTS],
              "riesz_level": riesz_level, "max_relative_gap": worst}
    return Report("duality", config, seed, results, "consistent" if worst <= 1e-4 else "gap")


# ---------------------------------------------------------------------------
# Rademacher realisations


def rademacher_matrix(m: int, cells: int | None = None) -> np.ndarray:
    """Rows ``r_1..r_m`` sampled on ``cells`` dyadic cells (default ``2**m``)."""
    cells = 2**m if cells is None else cells
    if cells < 2**m:
        raise ValueError("need at least 2**m cells")
    j = np.arange(cells)
    level = int(math.log2(cells))
    bits = (j[None, :] >> (level - np.arange(1, m + 1)[:, None])) & 1
    return 1.0 - 2.0 * bits


def rademacher_operator(kind: str, exponent, m: int) -> KernelMatrix:
    """Finite realisation of the two Rademacher factorisation operators.

    ``kind="horizontal"``: ``f -> sum_n (int f r_n) f_n`` from ``2**m``
    dyadic cells to ``m`` disjoint blocks, ``f_n`` normalised in
    ``L_exponent``.  ``kind="vertical"``: ``f -> sum_n (int f g_n) r_n`` with
    ``g_n`` disjoint and normalised in the conjugate of ``exponent``.
    """
    if not 1 <= m <= 12:
        raise ValueError("m must lie in 1..12")
    e = float(exponent)
    R = rademacher_matrix(m)
    dyadic = interval_grid(2**m)
    blocks = discrete_space(np.full(m, 1.0 / m))
    if kind == "horizontal":
        # (Tf)_n = m**(1/e) * sum_j r_n(j) f_j w_j
        return KernelMatrix(R * m ** (1 / e), dyadic, blocks)
    if kind == "vertical":
        ec = conjugate(e)
        # (Tf)(j) = sum_n r_n(j) * m**(1/ec) * f_n / m
        return KernelMatrix(R.T * m ** (1 / ec), blocks, dyadic)
    raise ValueError("kind must be 'horizontal' or 'vertical'")


def rademacher_table(p: float, N_max: int = 64, cells_log2: int = 16) -> list[dict]:
    """``||sum_{n<=N} r_n||_p / sqrt(N)`` for N = 2, 4, ..., N_max.

    Exact dyadic Rademachers when ``N_max <= cells_log2``; otherwise random
    signs with a fixed seed stand in for the independent sequence.
    """
    rows = []
    if N_max <= cells_log2:
        R = rademacher_matrix(N_max, 2**N_max)
    else:
        R = np.random.default_rng(0).choice([-1.0, 1.0], size=(N_max, 2**cells_log2))
    w = np.full(R.shape[1], 1.0 / R.shape[1])
    N = 2
    while N <= N_max:
        rows.append({"N": N, "ratio": lp_norm(R[:N].sum(axis=0), p, w) / math.sqrt(N)})
        N *= 2
    return rows


# ---------------------------------------------------------------------------
# stable variates and subspaces


def stable_sample(s: float, count: int, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Symmetric ``s``-stable variates by the Chambers-Mallows-Stuck transform.

    The scale is that of ``exp(-|t|**s)`` as characteristic function, so
    ``s = 2`` gives a normal law with variance 2.  Values are clipped at
    ``+-1e6``.
    """
    if not 1 < s <= 2:
        raise ValueError("s must lie in (1, 2]")
    rng = np.random.default_rng(seed)
    V = rng.uniform(-np.pi / 2, np.pi / 2, count)
    W = rng.exponential(1.0, count)
    X = np.sin(s * V) / np.cos(V) ** (1 / s) * (np.cos(V - s * V) / W) ** ((1 - s) / s)
    return np.clip(X, -STABLE_CLIP, STABLE_CLIP)


@dataclass
class SubspaceReport:
    case: str
    p: float
    q: float
    s: float
    m: int
    trials: int
    cells: int
    ratio_band: tuple
    image_norms: list
    regularity_hat: float
    pairing_max: list


def _half_split(cells: int, m: int) -> list[np.ndarray]:
    return np.array_split(np.arange(cells // 2), m)


def subspace_experiment(case: str, p: float, m: int, q: float | None = None,
                        s: float | None = None, trials: int = 200,
                        seed: int = DEFAULT_SEED, families: int = 200) -> SubspaceReport:
    """Norm equivalence and regularity for ``x_n = g_n + r_n``.

    ``case="p-gt-2"``: ``g_n`` are disjoint normalised bumps on [0, 1/2],
    ``T`` restricts to [0, 1/2] and ``q = p``.  ``case="q-le-p-le-s"``:
    ``g_n`` are disjoint bumps when ``s == p`` and i.i.d. ``s``-stable
    samples otherwise, ``T`` restricts to [1/2, 1].  ``r_n`` are
    Rademacher functions on [1/2, 1].
    """
    if not 1 <= m <= 64:
        raise ValueError("m must lie in 1..64")
    rng = np.random.default_rng(seed)
    if case == "p-gt-2":
        if not p > 2:
            raise ValueError("this case needs p > 2")
        q, s = p, 2.0
    elif case == "q-le-p-le-s":
        if q is None or s is None or not (1 <= q <= p <= s < 2):
            raise ValueError("this case needs q <= p <= s < 2")
    else:
        raise ValueError("case must be 'p-gt-2' or 'q-le-p-le-s'")
    exact = m <= 16
    half_log2 = max(m, 10) if exact else 16
    half = 2**half_log2
    cells = 2 * half
    w = np.full(cells, 1.0 / cells)
    X = np.zeros((m, cells))
    if exact:
        X[:, half:] = rademacher_matrix(m, half)
    else:
        X[:, half:] = rng.choice([-1.0, 1.0], size=(m, half))
    disjoint = case == "p-gt-2" or s == p
    if disjoint:
        for n, idx in enumerate(_half_split(cells, m)):
            X[n, idx] = 1.0
            X[n, :half] /= lp_norm(X[n, :half], p, w[:half])
    else:
        for n in range(m):
            g = stable_sample(s, half, seed=task_seed(seed, 10_000 + n))
            X[n, :half] = g / lp_norm(g, p, w[:half])
    left = np.zeros(cells, dtype=bool)
    left[:half] = True
    keep = left if case == "p-gt-2" else ~left
    TX = np.where(keep[None, :], X, 0.0)

    lo, hi = np.inf, 0.0
    for _ in range(trials):
        a = rng.standard_normal(m)
        r = lp_norm(a @ X, p, w) / np.sum(np.abs(a) ** s) ** (1 / s)
        lo, hi = min(lo, r), max(hi, r)
    image = [lp_norm(TX[n], q, w) for n in range(m)]
    reg = 0.0
    for _ in range(families):
        size = int(rng.integers(1, m + 1))
        idx = rng.choice(m, size=size, replace=False)
        c = rng.standard_normal(size)
        num = lp_norm(np.max(np.abs(c[:, None] * TX[idx]), axis=0), q, w)
        den = lp_norm(np.max(np.abs(c[:, None] * X[idx]), axis=0), p, w)
        reg = max(reg, num / den)
    t = (np.arange(cells) + 0.5) / cells
    dictionary = np.array([np.cos(np.pi * k * t) for k in range(32)])
    pair = np.abs(X @ (dictionary * w).T).max(axis=1)
    return SubspaceReport(case, p, q, s, m, trials, cells, (float(lo), float(hi)),
                          image, float(reg), [float(v) for v in pair])


def subspace_report(case, p, m, q=None, s=None, trials=200, seed=DEFAULT_SEED) -> Report:
    r = subspace_experiment(case, p, m, q, s, trials, seed)
    ok = r.ratio_band[0] > 0 and r.regularity_hat <= 1 + 1e-9
    config = {"case": case, "p": p, "q": r.q, "s": r.s, "m": m, "trials": trials}
    return Report("subspace", config, seed, [asdict(r)], "consistent" if ok else "violated")
