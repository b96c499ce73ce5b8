"""Full-size runs on the default 64px synthetic corpus (pytest -m slow)."""

from dataclasses import replace

import pytest

from cnn import cnn_train
from dataset import FeatureMode, featurize_dataset, generate_synthetic, split_train_test
from metrics import evaluate
from pipeline import build_run_config, rank_line, run_bench, train_classifier

pytestmark = pytest.mark.slow

SEEDS = (7, 8, 9, 10, 11)


def majority(flags) -> bool:
    flags = list(flags)
    return sum(flags) * 2 > len(flags)


@pytest.fixture(scope='module')
def corpus_250():
    return generate_synthetic(250, 64, seed=7, threads=0)


@pytest.fixture(scope='module')
def bench_rows(corpus_250):
    return dict(run_bench(corpus_250, build_run_config('svm'), SEEDS, threads=0))


def row(rows, name, params=None):
    return next(r for r in rows if r.classifier == name and (params is None or r.params == params))


class TestDefaultBench:
    def test_ranking(self, bench_rows):
        ranks = [rank_line(seed, rows) for seed, rows in bench_rows.items()]
        assert majority(line.endswith('rank=CNN>SVM>KNN') for line in ranks), ranks

    def test_cnn_accuracy(self, bench_rows):
        accuracies = [row(rows, 'cnn').accuracy for rows in bench_rows.values()]
        assert majority(a >= 0.90 for a in accuracies), accuracies

    def test_svm_beats_chance_by_a_margin(self, bench_rows):
        accuracies = [row(rows, 'svm').accuracy for rows in bench_rows.values()]
        assert all(a > 0.75 for a in accuracies), accuracies

    def test_deeper_longer_cell(self, bench_rows):
        shallow = [row(rows, 'cnn-grid', 'depth=2;epochs=60') for rows in bench_rows.values()]
        deep = [row(rows, 'cnn-grid', 'depth=3;epochs=80') for rows in bench_rows.values()]
        assert majority(d.accuracy >= s.accuracy for s, d in zip(shallow, deep))
        assert all(d.wall_time_ms > s.wall_time_ms for s, d in zip(shallow, deep))


def test_svm_on_thousand_images():
    cfg = build_run_config('svm')
    ds = featurize_dataset(generate_synthetic(500, 64, seed=7, threads=0), FeatureMode.HOG, cfg.hog)
    train, test = split_train_test(ds, cfg.split)
    clf = train_classifier(train, cfg)
    _, rep = evaluate(clf.predict_dataset(test), [s.label for s in test.samples], test.ids)
    assert rep.accuracy > 0.75


def test_cnn_loss_falls_over_eighty_epochs(corpus_250):
    cfg = build_run_config('cnn')
    train, _ = split_train_test(corpus_250, cfg.split)
    _, log = cnn_train(train, replace(cfg.cnn, early_stop=False))
    assert len(log) == 80
    assert log[-1].loss < log[0].loss
