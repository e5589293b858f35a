import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from charset.discrete import (
    KernelMatrix,
    WeightedFunction,
    adjoint,
    apply,
    cell_kernel_integral,
    conjugate,
    discrete_space,
    grid_opnorm,
    lp_norm,
    opnorm_pq,
    riesz_matrix,
    weak_quasinorm,
)
from charset.fractal import cantor_build, interval_grid

vectors = st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=20)
exponents = st.floats(1.0, 8.0)


def positive_weights(n, seed=0):
    return np.random.default_rng(seed).random(n) + 0.1


class TestNorms:
    def test_constant(self):
        g = interval_grid(8)
        for p in (1, 1.5, 3):
            assert lp_norm(WeightedFunction(np.ones(8), g), p) == pytest.approx(1.0)
            assert weak_quasinorm(WeightedFunction(np.ones(8), g), p) == pytest.approx(1.0)

    def test_two_atoms(self):
        assert lp_norm([2, 0], 2, [0.5, 0.5]) == pytest.approx(np.sqrt(2))

    def test_weak_example(self):
        assert weak_quasinorm([3, 1], 2, [0.1, 0.5]) == pytest.approx(3 / np.sqrt(10))

    def test_reject_small_p(self):
        with pytest.raises(ValueError):
            lp_norm([1.0], 0.5, [1.0])

    @given(vectors, exponents, st.floats(-5, 5))
    @settings(max_examples=100, deadline=None)
    def test_homogeneous(self, v, p, c):
        w = positive_weights(len(v))
        assert lp_norm(np.multiply(c, v), p, w) == pytest.approx(abs(c) * lp_norm(v, p, w), rel=1e-10, abs=1e-300)

    @given(vectors, exponents)
    @settings(max_examples=100, deadline=None)
    def test_chebyshev(self, v, p):
        w = positive_weights(len(v))
        assert weak_quasinorm(v, p, w) <= lp_norm(v, p, w) * (1 + 1e-12)

    @given(vectors, exponents)
    @settings(max_examples=50, deadline=None)
    def test_weak_against_threshold_scan(self, v, p):
        w = positive_weights(len(v))
        a = np.abs(v)
        best = max(t * w[a >= t].sum() ** (1 / p) for t in a) if a.any() else 0.0
        assert weak_quasinorm(v, p, w) == pytest.approx(best, rel=1e-12)


class TestCellIntegral:
    def test_closed_form(self):
        assert cell_kernel_integral(0.5, 0, 0.25, 0.5) == pytest.approx(2 * (np.sqrt(0.5) - 0.5))

    def test_endpoint(self):
        assert cell_kernel_integral(0.2, 0.2, 0.7, 0.3) == pytest.approx(0.5**0.7 / 0.7)

    def test_centered(self):
        whole = cell_kernel_integral(0.5, 0.25, 0.75, 0.4)
        half = cell_kernel_integral(0.5, 0.5, 0.75, 0.4)
        assert whole == pytest.approx(2 * half)

    @pytest.mark.parametrize("t,a,b,lam", [(0.3, 0.0, 1.0, 0.5), (0.9, 0.1, 0.4, 0.7),
                                           (0.05, 0.05, 0.5, 0.2), (0.5, 0.4, 0.45, 0.9)])
    def test_quadrature(self, t, a, b, lam):
        points = [t] if a < t < b else None
        ref, _ = integrate.quad(lambda u: abs(t - u) ** -lam, a, b, points=points, limit=200)
        assert cell_kernel_integral(t, a, b, lam) == pytest.approx(ref, rel=1e-8)

    def test_rejects(self):
        with pytest.raises(ValueError):
            cell_kernel_integral(0.5, 0, 1, 1.0)


class TestRieszMatrix:
    def test_single_entry(self):
        T = riesz_matrix(0.5, 1, discrete_space([1.0], [0.5]))
        assert T.entries[0, 0] == pytest.approx(2 * np.sqrt(2))

    def test_finite_and_nonnegative(self):
        T = riesz_matrix(0.9, 64, cantor_build(0.5, 5))
        assert T.nonnegative and np.all(np.isfinite(T.entries))

    def test_monotone_in_lambda(self):
        target = cantor_build(0.5, 3)
        a = riesz_matrix(0.3, 32, target).entries
        b = riesz_matrix(0.6, 32, target).entries
        near = np.abs(target.atoms[:, None] - interval_grid(32).atoms[None, :]) < 1 / 64
        assert np.all(b[near] > a[near])

    def test_row_sums(self):
        lam = 0.5
        target = cantor_build(0.5, 4)
        T = riesz_matrix(lam, 64, target)
        rows = apply(T, np.ones(64)).values
        t = target.atoms
        exact = (t ** (1 - lam) + (1 - t) ** (1 - lam)) / (1 - lam)
        np.testing.assert_allclose(rows, exact, rtol=1e-12)
        assert np.all(rows <= 2 / (1 - lam))

    def test_indicator_image(self):
        target = cantor_build(0.5, 3)
        T = riesz_matrix(0.4, 16, target)
        f = np.zeros(16)
        f[3:7] = 1
        expect = cell_kernel_integral(target.atoms, 3 / 16, 7 / 16, 0.4)
        np.testing.assert_allclose(apply(T, f).values, expect, rtol=1e-12)


class TestApplyAdjoint:
    T = riesz_matrix(0.5, 32, cantor_build(0.5, 4))

    def test_zero(self):
        assert not apply(self.T, np.zeros(32)).values.any()

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(self.T, np.ones(5))

    def test_linear(self):
        rng = np.random.default_rng(0)
        f, g = rng.standard_normal((2, 32))
        lhs = apply(self.T, 2 * f - 3 * g).values
        rhs = 2 * apply(self.T, f).values - 3 * apply(self.T, g).values
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)

    def test_pairing(self):
        rng = np.random.default_rng(1)
        f = rng.standard_normal(32)
        g = rng.standard_normal(16)
        Tf = apply(self.T, f).values
        Tsg = apply(adjoint(self.T), g).values
        lhs = np.sum(Tf * g * self.T.target.weights)
        rhs = np.sum(f * Tsg * self.T.source.weights)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_double_adjoint(self):
        np.testing.assert_array_equal(adjoint(adjoint(self.T)).entries, self.T.entries)


def random_kernel(rng, n=2):
    return KernelMatrix(rng.random((n, n)) + 0.01, discrete_space(rng.random(n) + 0.1),
                        discrete_space(rng.random(n) + 0.1))


class TestOpNorm:
    def test_scalar(self):
        s = discrete_space([1.0])
        T = KernelMatrix([[3.0]], s, s)
        for p, q in [(2, 2), (1.5, 4), (4, 1.5)]:
            assert opnorm_pq(T, p, q).value == pytest.approx(3.0)

    def test_identity(self):
        s = discrete_space([0.5, 0.5])
        eye = KernelMatrix.from_operator_matrix(np.eye(2), s, s)
        assert opnorm_pq(eye, 4, 2).value == pytest.approx(1.0)
        assert opnorm_pq(eye, 2, 4).value == pytest.approx(2**0.25, rel=1e-9)
        assert grid_opnorm(eye, 2, 4) == pytest.approx(2**0.25, rel=1e-9)

    def test_witness_certifies(self):
        rng = np.random.default_rng(2)
        T = random_kernel(rng, 3)
        res = opnorm_pq(T, 1.5, 3)
        f = res.witness
        ratio = lp_norm(T.matvec(f), 3, T.target.weights) / lp_norm(f, 1.5, T.source.weights)
        assert ratio == pytest.approx(res.value, rel=1e-14)
        assert res.converged

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("p,q", [(4 / 3, 3), (2, 4), (3, 1.5), (1.2, 1.1)])
    def test_grid_oracle_2x2(self, seed, p, q):
        T = random_kernel(np.random.default_rng(seed))
        est = opnorm_pq(T, p, q).value
        ref = grid_opnorm(T, p, q, 20_000)
        assert est <= ref * (1 + 1e-8)
        assert est == pytest.approx(ref, rel=1e-6)

    @pytest.mark.parametrize("seed", range(5))
    def test_grid_oracle_3x3(self, seed):
        T = random_kernel(np.random.default_rng(100 + seed), 3)
        est = opnorm_pq(T, 2, 3).value
        ref = grid_opnorm(T, 2, 3)
        assert est >= ref * (1 - 1e-4)

    @pytest.mark.parametrize("seed", range(5))
    def test_domination(self, seed):
        rng = np.random.default_rng(seed)
        T = random_kernel(rng, 3)
        bigger = KernelMatrix(T.entries + rng.random((3, 3)), T.source, T.target)
        assert opnorm_pq(T, 2, 3).value <= opnorm_pq(bigger, 2, 3).value + 1e-8

    @pytest.mark.parametrize("p,q", [(4 / 3, 3), (2, 4), (3, 1.5)])
    def test_duality(self, p, q):
        T = random_kernel(np.random.default_rng(7), 3)
        a = opnorm_pq(T, p, q).value
        b = opnorm_pq(adjoint(T), conjugate(q), conjugate(p)).value
        assert a == pytest.approx(b, rel=1e-6)

    def test_unconverged_flag(self):
        T = riesz_matrix(0.5, 64, cantor_build(0.5, 4))
        res = opnorm_pq(T, 1.5, 3, tol=0, max_iter=3, restarts=0)
        assert not res.converged and res.value > 0

    def test_rejects_endpoints(self):
        T = random_kernel(np.random.default_rng(0))
        with pytest.raises(ValueError):
            opnorm_pq(T, 1, 2)
