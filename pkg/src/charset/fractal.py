"""Finite-resolution Cantor sets with their natural measure.

A symmetric two-branch Cantor set of dimension ``alpha`` keeps, at every
step, the two outer pieces of relative length ``beta = 2**(-1/alpha)``.
At level ``n`` the set is represented by the midpoints of its ``2**n``
generation intervals, each carrying mass ``2**-n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MIDDLE_THIRDS = math.log(2) / math.log(3)


@dataclass(frozen=True)
class CantorSpec:
    """Dimension, contraction ratio and level of a Cantor construction."""

    alpha: float
    level: int
    beta: float | None = None

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if int(self.level) != self.level or self.level < 1:
            raise ValueError("level must be a positive integer")
        beta = 2.0 ** (-1.0 / alpha)
        if self.beta is not None and abs(self.beta - beta) > 1e-12 * beta:
            raise ValueError(f"beta={self.beta} does not match 2**(-1/alpha)={beta}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "level", int(self.level))
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True, eq=False)
class DiscreteMeasureSpace:
    """Atoms on (0, 1) with positive weights, sitting in cells of equal size.

    Attributes
    ----------
    atoms : ndarray
        Strictly increasing positions.
    weights : ndarray
        Positive masses.
    cell_diameter : float
        Length of the cell around each atom.
    dimension : float
        Regularity exponent of the measure (1 for Lebesgue grids).
    lefts : ndarray
        Left ends of the cells; ``lefts + cell_diameter`` are the right ends.
    """

    atoms: np.ndarray
    weights: np.ndarray
    cell_diameter: float
    dimension: float
    lefts: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 1 or atoms.shape != weights.shape:
            raise ValueError("atoms and weights must be 1-d arrays of equal length")
        if atoms.size and np.any(np.diff(atoms) <= 0):
            raise ValueError("atoms must be strictly increasing")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        for name, arr in (("atoms", atoms), ("weights", weights),
                          ("lefts", np.asarray(self.lefts, dtype=float))):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return self.atoms.size

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def rights(self) -> np.ndarray:
        return self.lefts + self.cell_diameter

    def __len__(self):
        return self.size


def cantor_lefts(beta: float, n: int) -> np.ndarray:
    """Left ends of the level-``n`` intervals, sorted."""
    lefts = np.zeros(1)
    for k in range(n):
        lefts = np.concatenate([lefts, lefts + (1 - beta) * beta**k])
    return np.sort(lefts)


def cantor_build(alpha: float, n: int) -> DiscreteMeasureSpace:
    """Level-``n`` Cantor set of dimension ``alpha`` with its natural measure."""
    spec = CantorSpec(alpha, n)
    diam = spec.beta**n
    lefts = cantor_lefts(spec.beta, n)
    weights = np.full(lefts.size, 2.0**-n)
    return DiscreteMeasureSpace(lefts + diam / 2, weights, diam, spec.alpha, lefts)


def interval_grid(m: int) -> DiscreteMeasureSpace:
    """Lebesgue measure on (0, 1) split into ``m`` equal cells."""
    if m < 1:
        raise ValueError("m must be positive")
    lefts = np.arange(m) / m
    return DiscreteMeasureSpace(lefts + 0.5 / m, np.full(m, 1.0 / m), 1.0 / m, 1.0, lefts)


def ball_mass(space: DiscreteMeasureSpace, x, r):
    """Mass of the open ball ``|y - x| < r``; vectorised over ``x`` and ``r``."""
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    cum = np.concatenate([[0.0], np.cumsum(space.weights)])
    lo = np.searchsorted(space.atoms, x - r, side="right")
    hi = np.searchsorted(space.atoms, x + r, side="left")
    out = cum[hi] - cum[lo]
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class AhlforsEstimate:
    c_hat: float
    C_hat: float
    samples: int
    radii: tuple

    @property
    def ratio(self) -> float:
        return self.C_hat / self.c_hat


def dyadic_radii(min_radius: float) -> np.ndarray:
    """Radii ``2**-j`` in ``[min_radius, 1]``."""
    jmax = int(math.floor(math.log2(1.0 / min_radius) + 1e-12))
    return 2.0 ** -np.arange(jmax + 1)


def ahlfors_constants(space: DiscreteMeasureSpace, sample_count: int = 10_000,
                      seed: int = 0, min_radius: float | None = None) -> AhlforsEstimate:
    """Empirical lower and upper regularity constants.

    Centres are atoms drawn uniformly, radii are dyadic in
    ``[min_radius, 1]`` (default: the cell diameter), and the constants are
    the extreme values of ``ball_mass / r**dimension``.
    """
    if min_radius is None:
        min_radius = space.cell_diameter
    radii = dyadic_radii(min_radius)
    rng = np.random.default_rng(seed)
    x = space.atoms[rng.integers(0, space.size, sample_count)]
    r = radii[rng.integers(0, radii.size, sample_count)]
    ratios = ball_mass(space, x, r) / r**space.dimension
    return AhlforsEstimate(float(ratios.min()), float(ratios.max()), sample_count, tuple(radii))


@dataclass(frozen=True)
class CoverEstimate:
    s: float
    delta: float
    value: float
    level: int


def hausdorff_sum(spec: CantorSpec, s: float, m: int) -> CoverEstimate:
    """Sum of ``diam**s`` over the natural level-``m`` cover.

    Evaluated as ``2**(m*(1 - s/alpha))``, which equals ``2**m * beta**(m*s)``
    and is exactly 1 when ``s == alpha``.
    """
    if m < 1 or s <= 0:
        raise ValueError("need m >= 1 and s > 0")
    value = 2.0 ** (m * (1.0 - s / spec.alpha))
    return CoverEstimate(float(s), spec.beta**m, value, int(m))
