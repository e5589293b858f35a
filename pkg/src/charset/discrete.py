"""Norms, kernel matrices and p -> q operator norms on discrete measure spaces."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fractal import DiscreteMeasureSpace, interval_grid


@dataclass(frozen=True, eq=False)
class WeightedFunction:
    """Values attached to the atoms of a space."""

    values: np.ndarray
    space: DiscreteMeasureSpace

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.space.size,):
            raise ValueError(f"expected {self.space.size} values, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def __mul__(self, c):
        return WeightedFunction(c * self.values, self.space)

    __rmul__ = __mul__

    def __add__(self, other):
        if other.space is not self.space:
            raise ValueError("functions live on different spaces")
        return WeightedFunction(self.values + other.values, self.space)


def _check_p(p):
    if not p >= 1 or not np.isfinite(p):
        raise ValueError(f"exponent must satisfy 1 <= p < inf, got {p}")


def _values_weights(f, weights):
    if isinstance(f, WeightedFunction):
        return f.values, f.space.weights
    if weights is None:
        raise ValueError("weights are required for a bare array")
    return np.asarray(f, dtype=float), np.asarray(weights, dtype=float)


def lp_norm(f, p, weights=None) -> float:
    """``(sum |f_i|**p w_i)**(1/p)``."""
    _check_p(p)
    v, w = _values_weights(f, weights)
    a = np.abs(v)
    top = a.max(initial=0.0)
    if top == 0:
        return 0.0
    # rescale to avoid overflow for large p
    return float(top * np.sum((a / top) ** p * w) ** (1.0 / p))


def weak_quasinorm(f, p, weights=None) -> float:
    """Exact ``sup_t t * mu(|f| >= t)**(1/p)`` for a discrete function."""
    _check_p(p)
    v, w = _values_weights(f, weights)
    a = np.abs(v)
    order = np.argsort(-a, kind="stable")
    a, w = a[order], w[order]
    cum = np.cumsum(w)
    if a.size == 0:
        return 0.0
    return float(np.max(a * cum ** (1.0 / p)))


def _antiderivative(x, t, lam):
    d = x - t
    return np.sign(d) * np.abs(d) ** (1.0 - lam) / (1.0 - lam)


def cell_kernel_integral(t, a, b, lam):
    """``int_a^b |t - u|**(-lam) du`` in closed form; broadcasts."""
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    t, a, b = (np.asarray(v, dtype=float) for v in (t, a, b))
    if np.any(b <= a):
        raise ValueError("need a < b")
    out = _antiderivative(b, t, lam) - _antiderivative(a, t, lam)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """Discrete integral operator ``(Tf)_i = sum_j A[i, j] f_j w_j``.

    ``entries`` has shape (target size, source size); ``w`` are the source
    weights.
    """

    entries: np.ndarray
    source: DiscreteMeasureSpace
    target: DiscreteMeasureSpace
    lam: float | None = None

    def __post_init__(self):
        A = np.asarray(self.entries, dtype=float)
        if A.shape != (self.target.size, self.source.size):
            raise ValueError(f"entries shape {A.shape} does not match "
                             f"({self.target.size}, {self.source.size})")
        if not np.all(np.isfinite(A)):
            raise ValueError("entries must be finite")
        A.setflags(write=False)
        object.__setattr__(self, "entries", A)

    @property
    def shape(self):
        return self.entries.shape

    @property
    def nonnegative(self) -> bool:
        return bool(np.all(self.entries >= 0))

    @classmethod
    def from_operator_matrix(cls, M, source, target):
        """Wrap a plain matrix ``M`` acting as ``f -> M @ f``."""
        M = np.asarray(M, dtype=float)
        return cls(M / source.weights[None, :], source, target)

    def matvec(self, values: np.ndarray) -> np.ndarray:
        return self.entries @ (values * self.source.weights)

    def rmatvec(self, values: np.ndarray) -> np.ndarray:
        """Adjoint action on raw values on the target."""
        return self.entries.T @ (values * self.target.weights)


def discrete_space(weights, atoms=None) -> DiscreteMeasureSpace:
    """Space with given weights; atoms default to evenly spaced points."""
    w = np.asarray(weights, dtype=float)
    n = w.size
    if atoms is None:
        atoms = (np.arange(n) + 0.5) / n
    return DiscreteMeasureSpace(atoms, w, 1.0 / n, 1.0, np.asarray(atoms) - 0.5 / n)


def riesz_matrix(lam: float, m: int, target: DiscreteMeasureSpace) -> KernelMatrix:
    """Cell-averaged kernel ``|t - u|**(-lam)`` from an ``m``-cell grid on (0, 1)."""
    src = interval_grid(m)
    t = target.atoms[:, None]
    a = src.lefts[None, :]
    b = src.rights[None, :]
    A = cell_kernel_integral(t, a, b, lam) / src.weights[None, :]
    return KernelMatrix(A, src, target, float(lam))


def apply(T: KernelMatrix, f) -> WeightedFunction:
    if isinstance(f, WeightedFunction):
        if f.space.size != T.source.size:
            raise ValueError("function does not live on the source space")
        f = f.values
    f = np.asarray(f, dtype=float)
    if f.shape != (T.source.size,):
        raise ValueError(f"expected {T.source.size} values, got shape {f.shape}")
    return WeightedFunction(T.matvec(f), T.target)


def adjoint(T: KernelMatrix) -> KernelMatrix:
    """Operator with ``sum (Tf) g v = sum f (T* g) w``."""
    return KernelMatrix(T.entries.T, T.target, T.source, T.lam)


def conjugate(p: float) -> float:
    return p / (p - 1.0)


@dataclass(frozen=True, eq=False)
class OpNormResult:
    """Certified lower bound for a p -> q operator norm with its witness."""

    value: float
    witness: np.ndarray
    iterations: int
    converged: bool
    restarts: int

    def __float__(self):
        return self.value


def _ratio(T, f, p, q):
    nf = lp_norm(f, p, T.source.weights)
    if nf == 0:
        return 0.0
    return lp_norm(T.matvec(f), q, T.target.weights) / nf


def _signed_power(x, e):
    return np.sign(x) * np.abs(x) ** e


def _iterate(T, f, p, q, tol, max_iter):
    w = T.source.weights
    f = f / lp_norm(f, p, w)
    r = _ratio(T, f, p, q)
    best_f, best_r = f, r
    for it in range(1, max_iter + 1):
        g = T.matvec(f)
        top = np.abs(g).max()
        if top == 0:
            return best_f, best_r, it, True
        u = T.rmatvec(_signed_power(g / top, q - 1.0))
        utop = np.abs(u).max()
        if utop == 0:
            return best_f, best_r, it, True
        f_new = _signed_power(u / utop, 1.0 / (p - 1.0))
        f_new /= lp_norm(f_new, p, w)
        r_new = _ratio(T, f_new, p, q)
        if r_new > best_r:
            best_f, best_r = f_new, r_new
        done = abs(r_new - r) <= tol * max(abs(r_new), 1e-300)
        f, r = f_new, r_new
        if done:
            return best_f, best_r, it, True
    return best_f, best_r, max_iter, False


def opnorm_pq(T: KernelMatrix, p: float, q: float, tol: float = 1e-8,
              max_iter: int = 10_000, restarts: int = 8, seed: int = 0,
              initial=()) -> OpNormResult:
    """Estimate ``||T||_{p->q}`` by dual-exponent power iteration.

    Starts from the constant function, every vector in ``initial`` and
    ``restarts`` random positive vectors; the best Rayleigh ratio is
    returned with its witness.  The value is a lower bound attained by the
    witness.
    """
    if not (1 < p < np.inf and 1 < q < np.inf):
        raise ValueError("need 1 < p, q < inf")
    rng = np.random.default_rng(seed)
    n = T.source.size
    starts = [np.ones(n)] + [np.asarray(v, dtype=float) for v in initial]
    starts += [rng.random(n) + 1e-3 for _ in range(restarts)]
    best = None
    total = 0
    for f0 in starts:
        if not np.any(f0):
            continue
        f, r, its, ok = _iterate(T, f0, p, q, tol, max_iter)
        total += its
        if best is None or r > best[1]:
            best = (f, r, ok)
    f, r, ok = best
    return OpNormResult(float(r), f, total, ok, restarts)


def grid_opnorm(T: KernelMatrix, p: float, q: float, resolution: int = 4000) -> float:
    """Brute-force ``||T||_{p->q}`` over unit directions of a 2- or 3-atom source.

    Two atoms: all angles in [0, pi).  Three atoms: the nonnegative octant,
    which suffices for nonnegative kernels.
    """
    n = T.source.size
    if n == 2:
        th = np.linspace(0.0, np.pi, resolution, endpoint=False)
        F = np.stack([np.cos(th), np.sin(th)], axis=1)
    elif n == 3:
        if not T.nonnegative:
            raise ValueError("three-atom oracle needs a nonnegative kernel")
        k = int(np.sqrt(resolution * 50))
        a, b = np.meshgrid(np.linspace(0, np.pi / 2, k), np.linspace(0, np.pi / 2, k))
        F = np.stack([np.cos(a) * np.sin(b), np.sin(a) * np.sin(b), np.cos(b)], axis=-1).reshape(-1, 3)
    else:
        raise ValueError("grid oracle supports sources with 2 or 3 atoms")
    ws, wt = T.source.weights, T.target.weights
    G = F @ (T.entries * ws[None, :]).T
    num = np.sum(np.abs(G) ** q * wt, axis=1) ** (1 / q)
    den = np.sum(np.abs(F) ** p * ws, axis=1) ** (1 / p)
    return float(np.max(num / den))
