import numpy as np
import pytest

from common.errors import ConfigError, SingleClassDataset
from cnn import CnnTrainConfig, EpochLog, cnn_backward, cnn_predict_many, cnn_train, run_gradcheck
from cnn.trainer import _should_stop
from dataset import Dataset, Label, LabeledSample, generate_synthetic


def small_corpus(per_class, size=32, seed=11):
    return generate_synthetic(per_class, size, seed, threads=0)


class TestGradcheck:
    def test_analytic_gradients_match(self):
        result = run_gradcheck()
        assert result.checked == 2 * 9 + 2 + 4 * 32 + 4 + 2 * 4 + 2
        assert result.passed, (result.worst_parameter, result.worst_index, result.max_relative_error)
        assert result.max_relative_error < 1e-4

    def test_repeatable(self):
        assert run_gradcheck().max_relative_error == run_gradcheck().max_relative_error

    def test_perturbed_gradient_is_caught(self):
        def skewed(m, cache, target):
            grads = cnn_backward(m, cache, target)
            grads['conv1.weights'] = grads['conv1.weights'] * 1.5
            return grads

        result = run_gradcheck(backward=skewed)
        assert not result.passed
        assert result.worst_parameter == 'conv1.weights'


class TestTrainer:
    def test_config_validation(self):
        with pytest.raises(ConfigError):
            CnnTrainConfig(conv_channels=(8,))
        with pytest.raises(ConfigError):
            CnnTrainConfig(momentum=1.0)
        assert CnnTrainConfig(conv_channels=[4, 8, 8, 8]).depth == 4

    def test_early_stop_rule(self):
        assert not _should_stop([1.0] * 5)
        assert _should_stop([1.0] * 6)
        assert not _should_stop([1.0, 1.0, 1.0, 1.0, 1.0, 0.9])

    def test_epoch_line(self):
        line = EpochLog(3, 0.5, 0.75, 1.25).line(80)
        assert line == 'epoch 3/80 loss=0.500000 accuracy=0.7500 time=1.25s'

    def test_log_length_and_callback(self):
        seen = []
        cfg = CnnTrainConfig(epochs=3, batch=8, conv_channels=(2, 4), fc_hidden=8, seed=2)
        _, log = cnn_train(small_corpus(6), cfg, on_epoch=seen.append)
        assert [e.epoch for e in log] == [1, 2, 3]
        assert seen == log

    def test_same_seed_same_run(self):
        ds = small_corpus(5)
        cfg = CnnTrainConfig(epochs=3, batch=4, conv_channels=(2, 4), fc_hidden=8, seed=9)
        m1, log1 = cnn_train(ds, cfg)
        m2, log2 = cnn_train(ds, cfg)
        assert [e.loss for e in log1] == [e.loss for e in log2]
        for (_, a), (_, b) in zip(m1.parameters(), m2.parameters()):
            np.testing.assert_array_equal(a, b)

    def test_single_class_rejected(self):
        ds = Dataset([LabeledSample(f"d{i}", np.zeros((8, 8)), Label.DRONE) for i in range(3)])
        with pytest.raises(SingleClassDataset):
            cnn_train(ds, CnnTrainConfig(epochs=1, conv_channels=(2, 2)))

    def test_overfits_twenty_samples(self):
        ds = small_corpus(10, size=64)
        cfg = CnnTrainConfig(epochs=200, seed=1)
        model, log = cnn_train(ds, cfg)
        assert max(e.accuracy for e in log) >= 0.99
        assert log[-1].loss < log[0].loss
        preds = cnn_predict_many(model, ds.tensors())
        assert sum(p is s.label for p, s in zip(preds, ds)) >= 19
