import numpy as np
import pytest

from windxai import (
    ConfigurationError,
    MinMaxScaler,
    PiecewiseLinearModel,
    PiecewisePolynomialModel,
    SegmentSpec,
    evaluate_rmse,
    load_model,
    save_model,
)
from windxai.scada import BASE_FEATURES, FeatureMatrix


def make_matrix(raw, targets):
    """Feature matrix over raw (v, rho, ti) rows with a fixed scaler."""
    scaler = MinMaxScaler(minimums=np.array([0.0, 1.0, 0.0]),
                          maximums=np.array([25.0, 1.4, 0.5]),
                          feature_names=BASE_FEATURES)
    return FeatureMatrix(rows=scaler.transform(np.asarray(raw, dtype=float)),
                         targets=np.asarray(targets, dtype=float),
                         feature_names=BASE_FEATURES, scaler=scaler)


def segmented_sample(rng, n=600):
    v = rng.uniform(0.5, 24.5, n)
    rho = rng.uniform(1.05, 1.35, n)
    ti = rng.uniform(0.02, 0.4, n)
    return np.column_stack([v, rho, ti])


class TestSegments:
    def test_default_boundaries(self):
        assert SegmentSpec().boundaries == (0.0, 4.0, 6.0, 8.0, 10.0, 12.0, 25.0)

    def test_routing_above_last_boundary(self):
        spec = SegmentSpec()
        assert spec.route(np.array([30.0]))[0] == spec.n_segments - 1
        assert spec.route(np.array([0.5]))[0] == 0
        # boundary values belong to the lower segment
        assert spec.route(np.array([4.0]))[0] == 0
        assert spec.route(np.array([4.01]))[0] == 1

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            SegmentSpec((0.0, 4.0, 4.0, 8.0))
        with pytest.raises(ConfigurationError):
            SegmentSpec((1.0, 4.0))


class TestPiecewiseLinear:
    def test_exact_recovery_on_segmentwise_linear_data(self, rng):
        raw = segmented_sample(rng)
        spec = SegmentSpec()
        seg = spec.route(raw[:, 0])
        coef = rng.uniform(-1.0, 1.0, size=(spec.n_segments, 4)) * 100.0
        targets = np.array([
            coef[s] @ np.array([1.0, *row]) for s, row in zip(seg, raw)])
        fm = make_matrix(raw, targets)
        model = PiecewiseLinearModel().fit(fm)
        assert evaluate_rmse(model, fm) < 1e-8

    def test_single_segment_equals_global_ols(self, rng):
        raw = segmented_sample(rng)
        targets = 5.0 * raw[:, 0] - 30.0 * raw[:, 1] + rng.normal(0, 5, len(raw))
        fm = make_matrix(raw, targets)
        model = PiecewiseLinearModel(SegmentSpec((0.0, 25.0))).fit(fm)
        basis = np.column_stack([np.ones(len(raw)), fm.rows])
        beta, *_ = np.linalg.lstsq(basis, targets, rcond=None)
        assert np.allclose(model.predict(fm.rows), basis @ beta, atol=1e-8)

    def test_rank_deficient_segment_falls_back_to_mean(self):
        # Two identical rows in one segment cannot support a 4-parameter fit.
        raw = [[2.0, 1.2, 0.1], [2.0, 1.2, 0.1],
               [5.0, 1.2, 0.1], [5.5, 1.25, 0.15], [5.2, 1.31, 0.2],
               [5.7, 1.22, 0.12], [5.9, 1.28, 0.18]]
        targets = [100.0, 120.0, 300.0, 330.0, 310.0, 320.0, 340.0]
        fm = make_matrix(raw, targets)
        model = PiecewiseLinearModel(SegmentSpec((0.0, 4.0, 25.0))).fit(fm)
        assert 0 in model.metadata["fallback_segments"]
        pred = model.predict(fm.rows[:2])
        assert np.allclose(pred, 110.0)


class TestPiecewisePolynomial:
    def test_unregularized_recovery_of_generating_polynomial(self, rng):
        raw = segmented_sample(rng)
        fm0 = make_matrix(raw, np.zeros(len(raw)))
        ppr = PiecewisePolynomialModel(l2_penalty=0.0)
        ppr._feature_names = fm0.feature_names
        basis = ppr._basis(fm0.rows)
        assert basis.shape[1] == 10  # cubic wind basis for three features
        spec = SegmentSpec()
        seg = spec.route(raw[:, 0])
        coef = rng.uniform(-1.0, 1.0, size=(spec.n_segments, 10)) * 50.0
        targets = np.array([coef[s] @ b for s, b in zip(seg, basis)])
        fm = make_matrix(raw, targets)
        model = PiecewisePolynomialModel(l2_penalty=0.0).fit(fm)
        assert evaluate_rmse(model, fm) < 1e-7

    def test_infinite_ridge_limit_is_intercept(self, rng):
        raw = segmented_sample(rng)
        targets = 800.0 + 100.0 * np.sin(raw[:, 0])
        fm = make_matrix(raw, targets)
        model = PiecewisePolynomialModel(l2_penalty=1e14).fit(fm)
        spec = SegmentSpec()
        seg = spec.route(raw[:, 0])
        pred = model.predict(fm.rows)
        for s in range(spec.n_segments):
            members = seg == s
            if members.sum() == 0:
                continue
            assert np.allclose(pred[members], targets[members].mean(), atol=0.5)

    def test_degree_one_reproduces_plr_coefficients(self, rng):
        raw = segmented_sample(rng)
        targets = (20.0 * raw[:, 0] + 400.0 * raw[:, 1] - 900.0 * raw[:, 2]
                   + rng.normal(0.0, 10.0, len(raw)))
        fm = make_matrix(raw, targets)
        plr = PiecewiseLinearModel().fit(fm)
        ppr = PiecewisePolynomialModel(l2_penalty=0.0, degree=1).fit(fm)
        for a, b in zip(plr._coefficients, ppr._coefficients):
            assert a is not None and b is not None
            assert np.allclose(a, b, atol=1e-8)

    def test_mild_ridge_close_to_ols_on_smooth_data(self, rng):
        raw = segmented_sample(rng, n=900)
        targets = 1000.0 * (raw[:, 0] / 25.0) ** 3 + rng.normal(0, 5, 900)
        fm = make_matrix(raw, targets)
        ridge = PiecewisePolynomialModel(l2_penalty=0.01).fit(fm)
        ols = PiecewisePolynomialModel(l2_penalty=0.0).fit(fm)
        gap = ridge.predict(fm.rows) - ols.predict(fm.rows)
        assert float(np.sqrt(np.mean(gap ** 2))) < 5.0


class TestEvaluateRmse:
    class _Constant:
        def __init__(self, value):
            self.value = value

        def predict(self, rows):
            return np.full(rows.shape[0], self.value)

    def test_perfect_predictor(self, rng):
        raw = segmented_sample(rng, n=50)
        targets = raw[:, 0] * 10.0
        fm = make_matrix(raw, targets)

        class Echo:
            def predict(self, rows):
                return targets

        assert evaluate_rmse(Echo(), fm) == 0.0

    def test_constant_at_mean_gives_std(self, rng):
        raw = segmented_sample(rng, n=200)
        targets = rng.uniform(0.0, 2000.0, 200)
        fm = make_matrix(raw, targets)
        rmse = evaluate_rmse(self._Constant(targets.mean()), fm)
        assert rmse == pytest.approx(float(np.std(targets)), rel=1e-12)

    def test_constant_offset(self, rng):
        raw = segmented_sample(rng, n=80)
        targets = raw[:, 0] * 10.0
        fm = make_matrix(raw, targets)

        class Offset:
            def predict(self, rows):
                return targets + 10.0

        assert evaluate_rmse(Offset(), fm) == pytest.approx(10.0, rel=1e-12)


class TestSerialization:
    def test_segmented_round_trip(self, rng, tmp_path):
        raw = segmented_sample(rng)
        targets = 900.0 * (raw[:, 0] / 25.0) ** 2 + 50.0 * raw[:, 2]
        fm = make_matrix(raw, targets)
        for model in (PiecewiseLinearModel().fit(fm),
                      PiecewisePolynomialModel().fit(fm)):
            path = tmp_path / f"{model.kind}.json"
            save_model(model, path)
            loaded = load_model(path)
            assert np.array_equal(loaded.predict(fm.rows), model.predict(fm.rows))

    def test_unknown_file_rejected(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text('{"format": "something-else"}')
        with pytest.raises(ConfigurationError):
            load_model(path)
