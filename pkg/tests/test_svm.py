import numpy as np
import pytest

from common.errors import ConfigError, DimMismatch, SingleClassDataset
from dataset import Dataset, Label, LabeledSample
from svm import (
    SvmModel,
    SvmTrainConfig,
    svm_decision,
    svm_objective,
    svm_predict,
    svm_predict_many,
    svm_train,
)


def build(points, labels):
    return Dataset([LabeledSample(f"p{i}", p, l) for i, (p, l) in enumerate(zip(points, labels))])


def separable_points(seed=0, per_class=10):
    rng = np.random.default_rng(seed)
    drones = rng.uniform(-1, 1, size=(per_class, 2)) + 3.0
    birds = rng.uniform(-1, 1, size=(per_class, 2)) - 3.0
    labels = [Label.DRONE] * per_class + [Label.BIRD] * per_class
    return build(np.vstack([drones, birds]), labels)


class TestDecision:
    @pytest.mark.parametrize('w, b, x, expected', [
        ((1, 0), 0.0, (2, 0), 2.0),
        ((0, 0), 0.0, (3, -7), 0.0),
        ((1, 1), -1.0, (0.5, 0.5), 0.0),
    ])
    def test_values(self, w, b, x, expected):
        assert svm_decision(SvmModel(w, b), x) == expected

    def test_sign_rule(self):
        assert svm_predict(SvmModel((1.0,), 1.0), (1.0,)) is Label.DRONE
        assert svm_predict(SvmModel((1.0,), 0.0), (-0.5,)) is Label.BIRD
        assert svm_predict(SvmModel((1.0,), 0.0), (0.0,)) is Label.DRONE

    def test_positive_scaling_keeps_predictions(self):
        rng = np.random.default_rng(1)
        m = SvmModel(rng.normal(size=4), 0.3)
        scaled = SvmModel(m.w * 7.5, m.b * 7.5)
        for x in rng.normal(size=(50, 4)):
            assert svm_predict(m, x) is svm_predict(scaled, x)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            svm_decision(SvmModel((1.0, 2.0)), (1.0,))
        with pytest.raises(DimMismatch):
            svm_predict_many(SvmModel((1.0, 2.0)), np.zeros((3, 1)))

    def test_many_matches_single(self):
        rng = np.random.default_rng(4)
        m = SvmModel(rng.normal(size=3), -0.2)
        xs = rng.normal(size=(40, 3))
        assert svm_predict_many(m, xs) == [svm_predict(m, x) for x in xs]


class TestTrain:
    def test_two_symmetric_points(self):
        m = svm_train(build([(-1, 0), (1, 0)], [Label.BIRD, Label.DRONE]))
        assert abs(m.w[1]) < 1e-6
        assert svm_predict(m, (-1, 0)) is Label.BIRD
        assert svm_predict(m, (1, 0)) is Label.DRONE
        assert svm_predict(m, (0.5, 0)) is Label.DRONE

    def test_separable_set(self):
        ds = separable_points()
        m = svm_train(ds)
        margins = ds.labels * (ds.matrix() @ m.w + m.b)
        assert margins.min() > 0
        assert all(svm_predict(m, s.features) is s.label for s in ds)

    def test_separable_set_far_from_origin(self):
        ds = separable_points(seed=1)
        shifted = Dataset([LabeledSample(s.id, s.features + 40.0, s.label) for s in ds])
        m = svm_train(shifted)
        margins = shifted.labels * (shifted.matrix() @ m.w + m.b)
        assert margins.min() > 0

    def test_default_run_leaves_zero_model_behind(self):
        ds = separable_points(seed=5)
        m = svm_train(ds)
        # w = 0, b = 0 scores exactly 1.0
        assert m.history[-1] < 0.5
        assert m.history[-1] < svm_objective(SvmModel(np.zeros(2), 0.0), ds, SvmTrainConfig().lam)

    def test_duplicated_samples(self):
        ds = separable_points(seed=2)
        doubled = Dataset(ds.samples + [LabeledSample(s.id + 'x', s.features, s.label) for s in ds])
        a, b = svm_train(ds), svm_train(doubled)
        np.testing.assert_allclose(a.w, b.w, atol=1e-9)
        assert a.b == pytest.approx(b.b, abs=1e-9)

    def test_label_flip(self):
        ds = separable_points(seed=3)
        flipped = Dataset([LabeledSample(s.id, s.features, -int(s.label)) for s in ds])
        cfg = SvmTrainConfig(seed=5)
        a, b = svm_train(ds, cfg), svm_train(flipped, cfg)
        for s in ds:
            assert svm_decision(b, s.features) == pytest.approx(-svm_decision(a, s.features), abs=1e-9)

    def test_objective_non_increasing(self):
        ds = separable_points(seed=4)
        m = svm_train(ds)
        history = m.history
        assert len(history) == SvmTrainConfig().epochs
        for t in range(len(history) - 10):
            assert history[t + 10] <= history[t] + 1e-12
        assert history[-1] == pytest.approx(svm_objective(m, ds, SvmTrainConfig().lam))

    def test_deterministic(self):
        ds = separable_points(seed=6)
        a, b = svm_train(ds, SvmTrainConfig(seed=1)), svm_train(ds, SvmTrainConfig(seed=1))
        np.testing.assert_array_equal(a.w, b.w)
        assert a.b == b.b

    def test_single_class(self):
        with pytest.raises(SingleClassDataset):
            svm_train(build([(0, 1), (1, 0)], [Label.DRONE, Label.DRONE]))

    @pytest.mark.parametrize('kwargs', [{'lam': 0.0}, {'epochs': 0}, {'lr0': -1.0}])
    def test_invalid_config(self, kwargs):
        with pytest.raises(ConfigError):
            SvmTrainConfig(**kwargs)
