from fractions import Fraction as F

import numpy as np
import pytest

from charset.discrete import KernelMatrix, discrete_space, lp_norm, riesz_matrix
from charset.fractal import cantor_build
from charset.verification import (
    GrowthReport,
    Report,
    aligned_grid,
    boundedness_scan,
    classify_growth,
    duality_check,
    dyadic_intervals,
    growth_exponent,
    predicted_class,
    rademacher_matrix,
    rademacher_operator,
    rademacher_table,
    stable_sample,
    subspace_experiment,
    task_seed,
    weak_type_scan,
    witness_test,
)


class TestGrowth:
    def test_thresholds(self):
        assert classify_growth(0.0) == "bounded"
        assert classify_growth(0.05) == "inconclusive"
        assert classify_growth(0.2) == "unbounded"
        assert classify_growth(None) == "inconclusive"

    def test_fit(self):
        atoms = [16, 32, 64, 128]
        assert growth_exponent(atoms, [a**0.25 for a in atoms]) == pytest.approx(0.25)
        assert growth_exponent(atoms[:2], [1, 1]) is None

    def test_inside_is_bounded(self):
        (rep,) = boundedness_scan(0.5, 0.5, [(F(1, 4), F(3, 4))], levels=range(3, 7))
        assert rep.classification == "bounded"
        assert rep.atoms == [8, 16, 32, 64]

    def test_on_segment_not_unbounded(self):
        (rep,) = boundedness_scan(0.5, 0.5, [(F(7, 10), F(2, 5))], levels=range(3, 7))
        assert rep.classification != "unbounded"

    def test_predictions(self):
        assert predicted_class(0.5, 0.5, (F(7, 10), F(1, 2))) == "bounded"
        assert predicted_class(0.5, 0.5, (F(7, 10), F(3, 10))) == "unbounded"
        assert predicted_class(0.5, 0.5, (F(7, 10), F(2, 5))) is None

    def test_csv(self):
        rep = GrowthReport((F(1, 2), F(1, 2)), [4, 5], [16, 32], [1.0, 1.5], [True, True], None, "inconclusive")
        assert rep.csv().splitlines() == ["level,atoms,norm", "4,16,1.0", "5,32,1.5"]

    def test_jobs_do_not_change_results(self):
        pts = [(F(1, 4), F(3, 4)), (F(7, 10), F(1, 2))]
        a = boundedness_scan(0.5, 0.5, pts, levels=range(3, 6), seed=5)
        b = boundedness_scan(0.5, 0.5, pts, levels=range(3, 6), seed=5, jobs=2)
        assert a == b


class TestWitness:
    def test_aligned_grid(self):
        g = aligned_grid([0.3, 0.31], 8)
        assert g.total_mass == pytest.approx(1.0)
        assert 0.3 in g.lefts and 0.31 in g.lefts

    def test_small_run(self):
        w = witness_test(0.5, 0.5, 0.7, k_values=(4, 8))
        assert np.allclose(w.input_norms, 1.0, atol=1e-12)
        assert all(a >= b for a, b in zip(w.pointwise_min, w.pointwise_bound))
        assert w.lower_bound_hat > 0
        assert w.inv_q == pytest.approx(0.4)

    def test_off_segment_rejected(self):
        with pytest.raises(ValueError):
            witness_test(0.5, 0.5, 0.4)

    def test_skips_unresolved(self):
        w = witness_test(0.5, 0.5, 0.7, k_values=(4, 1024), level=5)
        assert w.skipped == [1024] and w.k_values == [4]


class TestWeakType:
    def test_family(self):
        fam = dyadic_intervals(2)
        assert len(fam) == 7 and fam[0] == (0, 0)

    def test_q1(self):
        r = weak_type_scan(0.5, 0.5, 0.75, level=4)
        assert r.q1 == pytest.approx(2.0)
        assert np.all(np.isfinite(r.ratios))

    def test_whole_interval(self):
        r = weak_type_scan(0.5, 0.5, 0.75, level=4, family_depth=0)
        assert len(r.ratios) == 1

    def test_range(self):
        with pytest.raises(ValueError):
            weak_type_scan(0.5, 0.5, 0.5, level=4)
        with pytest.raises(ValueError):
            weak_type_scan(0.5, 0.5, 1.0, level=4)


class TestDuality:
    def test_identity(self):
        s = discrete_space([0.5, 0.5])
        eye = KernelMatrix.from_operator_matrix(np.eye(2), s, s)
        d = duality_check(eye, 2, 4)
        assert d.norm == pytest.approx(2**0.25) and d.gap < 1e-9

    def test_random_2x2(self):
        rng = np.random.default_rng(0)
        T = KernelMatrix(rng.random((2, 2)), discrete_space([0.3, 0.7]), discrete_space([0.6, 0.4]))
        assert duality_check(T, 4 / 3, 3).gap < 1e-6

    def test_riesz(self):
        T = riesz_matrix(0.5, 32, cantor_build(0.5, 3))
        d = duality_check(T, 2, 4)
        assert d.relative_gap < 1e-4


class TestRademacher:
    def test_rows(self):
        R = rademacher_matrix(3)
        assert R.shape == (3, 8)
        np.testing.assert_array_equal(R @ R.T / 8, np.eye(3))

    def test_horizontal(self):
        T = rademacher_operator("horizontal", F(5, 2), 5)
        R = rademacher_matrix(5)
        img = T.matvec(R[0])
        assert img[0] == pytest.approx(5 ** 0.4)
        assert np.all(img[1:] == 0)
        assert lp_norm(img, 2.5, T.target.weights) == pytest.approx(1.0)
        assert not T.matvec(np.ones(32)).any()

    def test_vertical(self):
        T = rademacher_operator("vertical", F(10, 7), 4)
        g = np.zeros(4)
        g[2] = 4 ** (1 - 1 / T.target.size)  # any vector works; check structure
        out = T.matvec(np.eye(4)[1])
        np.testing.assert_allclose(np.abs(out), np.abs(out[0]))

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            rademacher_operator("diagonal", 3, 3)

    def test_khintchine(self):
        rows = rademacher_table(4, 8)
        assert [r["N"] for r in rows] == [2, 4, 8]
        assert all(1 <= r["ratio"] <= 3**0.25 for r in rows)


class TestStable:
    def test_gaussian_variance(self):
        assert 1.9 <= np.var(stable_sample(2, 100_000, seed=0)) <= 2.1

    def test_symmetric(self):
        assert abs(np.mean(stable_sample(1.5, 100_000, seed=0))) < 0.05

    def test_deterministic(self):
        np.testing.assert_array_equal(stable_sample(1.3, 100, 9), stable_sample(1.3, 100, 9))

    def test_range(self):
        with pytest.raises(ValueError):
            stable_sample(1.0, 10)

    def test_clip(self):
        assert np.abs(stable_sample(1.05, 100_000, seed=1)).max() <= 1e6


class TestSubspace:
    def test_p_gt_2(self):
        r = subspace_experiment("p-gt-2", 4, 8, trials=20)
        np.testing.assert_allclose(r.image_norms, 1.0, rtol=1e-12)
        assert r.regularity_hat <= 1 + 1e-9
        assert r.q == 4 and r.s == 2

    def test_disjoint_branch(self):
        r = subspace_experiment("q-le-p-le-s", 1.2, 8, q=1.1, s=1.2, trials=20)
        np.testing.assert_allclose(r.image_norms, 0.5 ** (1 / 1.1), rtol=1e-12)
        assert 0.25 <= r.ratio_band[0] <= r.ratio_band[1] <= 4

    def test_stable_branch(self):
        r = subspace_experiment("q-le-p-le-s", 1.2, 8, q=1.1, s=1.6, trials=20)
        assert r.ratio_band[0] > 0
        assert r.regularity_hat <= 1 + 1e-9

    def test_random_sign_branch(self):
        r = subspace_experiment("p-gt-2", 3, 24, trials=10)
        assert r.cells == 2**17
        np.testing.assert_allclose(r.image_norms, 1.0, rtol=1e-12)

    def test_constraints(self):
        with pytest.raises(ValueError):
            subspace_experiment("p-gt-2", 1.5, 4)
        with pytest.raises(ValueError):
            subspace_experiment("q-le-p-le-s", 1.2, 4, q=1.3, s=1.5)
        with pytest.raises(ValueError):
            subspace_experiment("p-gt-2", 4, 65)


class TestReports:
    def test_task_seed(self):
        assert task_seed(1, 2) == task_seed(1, 2) != task_seed(1, 3)

    def test_json_deterministic(self):
        rep = Report("x", {"a": F(1, 3), "b": np.float64(0.5)}, 1, [np.arange(3)], "ok")
        text = rep.to_json()
        assert '"1/3"' in text and text == rep.to_json()
