import numpy as np
import pytest

from trajkit.barycenter import (
    GmmModel,
    dba,
    euclidean_barycenter,
    fit_gmm,
    gmr,
    soft_dtw_barycenter,
)
from trajkit.dtw import dtw_squared, soft_dtw
from trajkit.errors import InvalidArgumentError


class TestEuclideanBarycenter:
    def test_identical_sequences(self, rng):
        s = rng.normal(size=(8, 2))
        res = euclidean_barycenter([s, s, s])
        assert np.allclose(res.curve, s)

    def test_midpoint(self):
        res = euclidean_barycenter([np.zeros(3), np.full(3, 2.0)])
        assert np.allclose(res.curve[:, 0], [1, 1, 1])

    def test_matches_per_index_oracle(self, rng):
        seqs = [rng.normal(size=(12, 3)) for _ in range(5)]
        res = euclidean_barycenter(seqs)
        for i in range(12):
            expected = sum(s[i] for s in seqs) / 5
            assert np.allclose(res.curve[i], expected, atol=1e-12)

    def test_permutation_invariant(self, rng):
        seqs = [rng.normal(size=(6, 2)) for _ in range(4)]
        a = euclidean_barycenter(seqs).curve
        b = euclidean_barycenter(seqs[::-1]).curve
        assert np.allclose(a, b, rtol=0, atol=1e-12)

    def test_unequal_lengths_rejected(self):
        with pytest.raises(InvalidArgumentError):
            euclidean_barycenter([np.zeros(3), np.zeros(4)])


class TestDba:
    def test_identical_sequences_fixed_point(self, rng):
        s = rng.normal(size=(10, 2))
        res = dba([s, s, s])
        assert np.allclose(res.curve, s, atol=1e-12)

    def test_symmetric_pair(self):
        res = dba([np.zeros(2), np.full(2, 2.0)])
        assert np.allclose(res.curve[:, 0], [1, 1])

    def test_objective_beats_every_member_medoid(self, rng):
        # Independent check with the exhaustive-path oracle on short demos.
        import math

        from test_dtw import enumerate_paths

        def oracle_sq(a, b):
            best = math.inf
            for path in enumerate_paths(len(a), len(b)):
                cost = sum(float(np.sum((a[i] - b[j]) ** 2)) for i, j in path)
                best = min(best, cost)
            return best

        for _ in range(10):
            seqs = [rng.normal(size=(int(rng.integers(3, 6)), 1)) for _ in range(3)]
            res = dba(seqs, max_iters=30)

            def total(center):
                return sum(oracle_sq(np.asarray(center), s) for s in seqs)

            best_member = min(total(s) for s in seqs)
            assert total(res.curve) <= best_member + 1e-9

    def test_objective_non_increasing(self, rng):
        seqs = [rng.normal(size=(8, 1)) for _ in range(4)]
        values = []
        center = seqs[0]
        for _ in range(6):
            res = dba(seqs, init=center, max_iters=1)
            values.append(sum(dtw_squared(res.curve, s).distance for s in seqs))
            center = res.curve
        assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))

    def test_respects_init_length(self, rng):
        seqs = [rng.normal(size=(9, 1)) for _ in range(3)]
        res = dba(seqs, init=rng.normal(size=(5, 1)))
        assert res.curve.shape[0] == 5


class TestSoftDtwBarycenter:
    def test_single_member_attractor(self, rng):
        x = rng.normal(size=(7, 1))
        res = soft_dtw_barycenter([x], gamma=0.1, length=7, max_iters=100)
        start = soft_dtw(np.mean([x], axis=0), x, 0.1)[0]
        final = soft_dtw(res.curve, x, 0.1)[0]
        assert final <= start + 1e-12

    def test_identical_members_already_converged(self, rng):
        x = rng.normal(size=(6, 2))
        res = soft_dtw_barycenter([x, x], gamma=0.1, length=6, max_iters=50)
        init_obj = 2 * soft_dtw(x, x, 0.1)[0]
        final_obj = sum(soft_dtw(res.curve, m, 0.1)[0] for m in (x, x))
        assert final_obj <= init_obj + 1e-6

    def test_offset_constants_meet_in_the_middle(self):
        seqs = [np.zeros(3), np.full(3, 2.0)]
        res = soft_dtw_barycenter(seqs, gamma=1.0, length=3, max_iters=200)
        assert np.allclose(res.curve[:, 0], [1, 1, 1], atol=1e-3)
        # grid search over constant candidates confirms 1.0 is the best constant
        def objective(c):
            cand = np.full(3, c)
            return sum(soft_dtw(cand, s, 1.0)[0] for s in seqs)

        grid = np.linspace(0.0, 2.0, 81)
        assert grid[np.argmin([objective(c) for c in grid])] == pytest.approx(1.0, abs=0.026)

    def test_unsupported_step_rule(self):
        with pytest.raises(InvalidArgumentError):
            soft_dtw_barycenter([np.zeros(3)], step_rule="fixed")

    def test_invalid_gamma(self):
        with pytest.raises(InvalidArgumentError):
            soft_dtw_barycenter([np.zeros(3)], gamma=0.0)


class TestFitGmm:
    def test_g1_matches_sample_moments(self, rng):
        data = rng.normal(size=(200, 2))
        model = fit_gmm(data, 1, seed=0)
        assert np.allclose(model.means[0], data.mean(axis=0), atol=1e-9)
        expected_cov = np.cov(data.T, bias=True) + 1e-6 * np.eye(2)
        assert np.allclose(model.covariances[0], expected_cov, atol=1e-9)

    def test_separated_clusters_recovered(self, rng):
        c1 = rng.normal([-10, -10], 0.5, size=(250, 2))
        c2 = rng.normal([10, 10], 0.5, size=(250, 2))
        model = fit_gmm(np.vstack([c1, c2]), 2, seed=3)
        means = model.means[np.argsort(model.means[:, 0])]
        assert np.allclose(means[0], c1.mean(axis=0), atol=1e-3)
        assert np.allclose(means[1], c2.mean(axis=0), atol=1e-3)

    def test_weights_sum_to_one(self, rng):
        for g in (1, 2, 4):
            model = fit_gmm(rng.normal(size=(120, 2)), g, seed=g)
            assert model.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_log_likelihood_non_decreasing(self, rng):
        for seed in range(5):
            data = np.vstack(
                [rng.normal(-2, 1, size=(80, 2)), rng.normal(2, 1, size=(80, 2))]
            )
            _, history = fit_gmm(data, 3, seed=seed, return_history=True)
            diffs = np.diff(history)
            assert np.all(diffs >= -1e-10 * np.maximum(np.abs(history[:-1]), 1.0))

    def test_degenerate_data_flagged(self):
        with pytest.warns(UserWarning):
            model = fit_gmm(np.ones((30, 2)), 2, seed=0)
        assert model.degenerate
        assert np.allclose(model.means, 1.0)

    def test_deterministic_given_seed(self, rng):
        data = rng.normal(size=(150, 3))
        m1 = fit_gmm(data, 3, seed=11)
        m2 = fit_gmm(data, 3, seed=11)
        assert np.array_equal(m1.means, m2.means)
        assert np.array_equal(m1.covariances, m2.covariances)

    def test_too_few_samples_rejected(self):
        with pytest.raises(InvalidArgumentError):
            fit_gmm(np.zeros((5, 2)), 2, seed=0)


class TestGmmModel:
    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            GmmModel(weights=[0.5, 0.6], means=np.zeros((2, 2)), covariances=np.tile(np.eye(2), (2, 1, 1)))
        with pytest.raises(InvalidArgumentError):
            GmmModel(weights=[1.0], means=np.zeros((1, 2)), covariances=[[[1.0, 2.0], [2.0, 1.0]]])

    def test_json_roundtrip(self, rng):
        model = fit_gmm(rng.normal(size=(100, 2)), 2, seed=5)
        restored = GmmModel.from_json(model.to_json())
        assert np.array_equal(restored.weights, model.weights)
        assert np.array_equal(restored.means, model.means)
        assert np.array_equal(restored.covariances, model.covariances)


class TestGmr:
    def test_closed_form_conditional(self):
        model = GmmModel(
            weights=[1.0], means=[[0.0, 0.0]], covariances=[[[1.0, 0.5], [0.5, 1.0]]]
        )
        res = gmr(model, [1.0])
        assert res.curve[0, 0] == pytest.approx(0.5, abs=1e-12)
        assert res.variance[0, 0, 0] == pytest.approx(0.75, abs=1e-12)

    def test_affine_in_query_for_single_component(self, rng):
        model = fit_gmm(rng.normal(size=(100, 2)), 1, seed=0)
        q = np.array([-1.0, 0.0, 1.0, 2.0])
        out = gmr(model, q).curve[:, 0]
        slopes = np.diff(out) / np.diff(q)
        assert np.allclose(slopes, slopes[0], atol=1e-12)

    def test_query_at_separated_component_mean(self, rng):
        c1 = rng.normal([-10, -5], 0.3, size=(300, 2))
        c2 = rng.normal([10, 5], 0.3, size=(300, 2))
        model = fit_gmm(np.vstack([c1, c2]), 2, seed=1)
        idx = int(np.argmax(model.means[:, 0]))
        res = gmr(model, [model.means[idx, 0]])
        assert res.curve[0, 0] == pytest.approx(model.means[idx, 1], abs=1e-6)

    def test_noiseless_line_recovered(self):
        x = np.linspace(0, 1, 300)
        model = fit_gmm(np.column_stack([x, 2 * x]), 1, seed=0)
        out = gmr(model, x).curve[:, 0]
        assert np.abs(out - 2 * x).max() < 1e-4

    def test_underflow_fallback_flagged(self, rng):
        model = fit_gmm(rng.normal(size=(100, 2)), 2, seed=0)
        res = gmr(model, [1e300])
        assert "nearest-component-fallback" in res.flags

    def test_convex_combination_of_component_predictions(self, rng):
        c1 = rng.normal([-1, -1], 0.4, size=(150, 2))
        c2 = rng.normal([1, 1], 0.4, size=(150, 2))
        model = fit_gmm(np.vstack([c1, c2]), 2, seed=2)
        q = np.array([0.0])
        preds = []
        for comp in range(2):
            cov = model.covariances[comp]
            gain = cov[1, 0] / cov[0, 0]
            preds.append(model.means[comp, 1] + gain * (q[0] - model.means[comp, 0]))
        out = gmr(model, q).curve[0, 0]
        assert min(preds) - 1e-9 <= out <= max(preds) + 1e-9


class TestIdenticalSequencesFixedPoint:
    def test_all_methods_return_the_member(self, rng):
        s = rng.normal(size=(20, 2))
        seqs = [s, s, s]
        assert np.allclose(euclidean_barycenter(seqs).curve, s, atol=1e-6)
        assert np.allclose(dba(seqs).curve, s, atol=1e-6)
        assert np.allclose(
            soft_dtw_barycenter(seqs, gamma=0.01, length=20).curve, s, atol=1e-6
        )
