import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charset.fractal import (
    MIDDLE_THIRDS,
    CantorSpec,
    ahlfors_constants,
    ball_mass,
    cantor_build,
    hausdorff_sum,
    interval_grid,
)


def recursive_cantor(beta, n):
    """Intervals of the level-n construction by explicit recursion."""
    if n == 0:
        return [(0.0, 1.0)]
    out = []
    for a, b in recursive_cantor(beta, n - 1):
        L = b - a
        out += [(a, a + beta * L), (b - beta * L, b)]
    return sorted(out)


class TestSpec:
    def test_beta(self):
        assert CantorSpec(0.5, 3).beta == 0.25
        assert math.isclose(CantorSpec(MIDDLE_THIRDS, 1).beta, 1 / 3, rel_tol=1e-12)

    def test_reconcile(self):
        CantorSpec(0.5, 2, beta=0.25)
        with pytest.raises(ValueError):
            CantorSpec(0.5, 2, beta=0.3)

    def test_ranges(self):
        with pytest.raises(ValueError):
            CantorSpec(1.0, 2)
        with pytest.raises(ValueError):
            CantorSpec(0.5, 0)


class TestCantor:
    def test_middle_thirds_level_one(self):
        s = cantor_build(MIDDLE_THIRDS, 1)
        np.testing.assert_allclose(s.atoms, [1 / 6, 5 / 6], rtol=1e-14)
        np.testing.assert_array_equal(s.weights, [0.5, 0.5])
        assert math.isclose(s.cell_diameter, 1 / 3, rel_tol=1e-14)

    def test_quarter_level_two(self):
        s = cantor_build(0.5, 2)
        assert s.size == 4
        assert s.atoms[0] == 1 / 32
        np.testing.assert_array_equal(s.weights, 0.25)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, MIDDLE_THIRDS, 0.9])
    def test_two_atoms_at_level_one(self, alpha):
        s = cantor_build(alpha, 1)
        assert s.size == 2 and s.total_mass == 1.0

    @pytest.mark.parametrize("alpha,n", [(0.5, 5), (MIDDLE_THIRDS, 6), (0.8, 4)])
    def test_matches_recursion(self, alpha, n):
        s = cantor_build(alpha, n)
        ref = recursive_cantor(s.cell_diameter ** (1 / n), n)
        np.testing.assert_allclose(s.lefts, [a for a, _ in ref], atol=1e-14)
        np.testing.assert_allclose(s.rights, [b for _, b in ref], atol=1e-14)

    @pytest.mark.parametrize("n", [1, 4, 7])
    def test_refinement(self, n):
        coarse, fine = cantor_build(0.5, n), cantor_build(0.5, n + 1)
        for a, b in zip(coarse.lefts, coarse.rights):
            inside = (fine.atoms > a) & (fine.atoms < b)
            assert inside.sum() == 2
            assert fine.weights[inside].sum() == pytest.approx(2.0**-n)
        assert fine.total_mass == pytest.approx(1.0, abs=1e-12)


class TestBallMass:
    s = cantor_build(MIDDLE_THIRDS, 8)

    def test_left_copy(self):
        assert ball_mass(self.s, 0.0, 1 / 3 + 1e-9) == pytest.approx(0.5)

    def test_everything(self):
        assert ball_mass(self.s, 0.3, 1.0) == pytest.approx(1.0)
        assert ball_mass(self.s, 0.3, 5.0) == pytest.approx(1.0)

    def test_single_atom(self):
        x = self.s.atoms[17]
        gap = np.diff(self.s.atoms).min()
        assert ball_mass(self.s, x, gap / 2) == self.s.weights[17]

    def test_open_ball(self):
        g = interval_grid(4)
        assert ball_mass(g, 0.125, 0.25) == 0.25

    @given(st.floats(0, 1), st.floats(1e-4, 1), st.floats(1e-4, 1))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_r(self, x, r1, r2):
        lo, hi = sorted((r1, r2))
        assert ball_mass(self.s, x, lo) <= ball_mass(self.s, x, hi)

    def test_brute_force(self):
        rng = np.random.default_rng(3)
        for x, r in rng.random((50, 2)):
            expect = self.s.weights[np.abs(self.s.atoms - x) < r].sum()
            assert ball_mass(self.s, x, r) == pytest.approx(expect)


class TestAhlfors:
    def test_middle_thirds(self):
        est = ahlfors_constants(cantor_build(MIDDLE_THIRDS, 10), 10_000, seed=1)
        assert 0 < est.c_hat <= est.C_hat
        assert est.ratio < 100

    def test_unit_radius(self):
        s = cantor_build(0.5, 6)
        est = ahlfors_constants(s, 2000, seed=0, min_radius=1.0)
        assert est.c_hat == est.C_hat == 1.0

    def test_lebesgue_grid(self):
        g = interval_grid(512)
        est = ahlfors_constants(g, 5000, seed=0, min_radius=2 * g.cell_diameter)
        assert 0.5 <= est.c_hat <= est.C_hat <= 2.0

    def test_deterministic(self):
        s = cantor_build(0.5, 6)
        assert ahlfors_constants(s, 500, seed=4) == ahlfors_constants(s, 500, seed=4)


class TestHausdorffSum:
    spec = CantorSpec(MIDDLE_THIRDS, 12)

    @pytest.mark.parametrize("m", range(1, 13))
    def test_critical_exponent(self, m):
        est = hausdorff_sum(self.spec, MIDDLE_THIRDS, m)
        assert est.value == 1.0
        assert est.delta == pytest.approx(3.0**-m)

    def test_above_and_below(self):
        above = [hausdorff_sum(self.spec, 0.7, m).value for m in range(1, 13)]
        below = [hausdorff_sum(self.spec, 0.5, m).value for m in range(1, 13)]
        assert np.all(np.diff(above) < 0) and np.all(np.diff(below) > 0)
        assert above[-1] == pytest.approx(2**12 * 3 ** (-0.7 * 12), rel=1e-12)
        assert below[-1] == pytest.approx(2**12 * 3 ** (-0.5 * 12), rel=1e-12)

    def test_rejects(self):
        with pytest.raises(ValueError):
            hausdorff_sum(self.spec, 0.5, 0)
