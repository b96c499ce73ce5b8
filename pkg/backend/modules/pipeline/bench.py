"""
Classifier benchmark.

For every seed the corpus is split once; KNN, SVM and the configured CNN
are trained on that split, followed by the CNN depth x epochs grid. Each
cell is self-contained, so cells may run on a thread pool; rows always
come back in the fixed (seed, cell) order.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Sequence, Tuple

from common.utils import thread_count
from config import settings
from dataset import Dataset, FeatureMode, check_disjoint, featurize_dataset, split_train_test
from metrics import BenchRow, evaluate

from .models import train_classifier
from .runconfig import RunConfig

logger = logging.getLogger(__name__)

RANKED = ('cnn', 'svm', 'knn')


@dataclass(frozen=True)
class BenchCell:
    name: str
    params: str
    config: RunConfig


def params_text(cfg: RunConfig) -> str:
    """Short description of the settings that distinguish one CSV row from another."""
    if cfg.classifier == 'knn':
        return f"k={cfg.k};features={cfg.feature_mode.value}"
    if cfg.classifier == 'svm':
        return f"lambda={cfg.svm.lam!r};epochs={cfg.svm.epochs};features={cfg.feature_mode.value}"
    return f"depth={cfg.cnn.depth};epochs={cfg.cnn.epochs}"


def flat_mode(base: RunConfig) -> FeatureMode:
    """Feature mode used by the KNN and SVM cells."""
    return FeatureMode.HOG if base.feature_mode is FeatureMode.TENSOR else base.feature_mode


def cells_for_seed(base: RunConfig, seed: int) -> List[BenchCell]:
    knn = replace(base, classifier='knn', seed=seed, feature_mode=flat_mode(base),
                  svm=replace(base.svm, seed=seed), cnn=replace(base.cnn, seed=seed))
    svm = replace(knn, classifier='svm')
    cnn = replace(knn, classifier='cnn', feature_mode=FeatureMode.TENSOR)
    cells = [BenchCell(cfg.classifier, params_text(cfg), cfg) for cfg in (knn, svm, cnn)]
    for depth in settings.BENCH_DEPTHS:
        for epochs in settings.BENCH_EPOCHS:
            grid = replace(cnn, cnn=replace(cnn.cnn, conv_channels=settings.DEPTH_CHANNELS[depth],
                                            epochs=epochs, early_stop=False))
            cells.append(BenchCell('cnn-grid', params_text(grid), grid))
    for cell in cells:
        cell.config.validate()
    return cells


def run_cell(cell: BenchCell, splits: Dict[FeatureMode, Tuple[Dataset, Dataset]],
             on_epoch: Callable = None) -> BenchRow:
    train, test = splits[cell.config.feature_mode]
    check_disjoint(train.ids, test.ids)
    started = time.perf_counter()
    clf = train_classifier(train, cell.config, on_epoch=on_epoch)
    preds = clf.predict_dataset(test)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    cm, rep = evaluate(preds, [s.label for s in test.samples], test.ids)
    logger.info(f"seed={cell.config.seed} {cell.name} [{cell.params}] {rep.summary()}")
    return BenchRow.from_report(cell.name, cell.config.seed, cell.params, cm, rep,
                                int(round(elapsed_ms)))


def rank_line(seed: int, rows: Sequence[BenchRow]) -> str:
    """e.g. 'seed=7 rank=CNN>SVM>KNN'; equal accuracies are joined with '='."""
    by_name = {row.classifier: row for row in rows if row.classifier in RANKED}
    ordered = sorted(
        (name for name in RANKED if name in by_name),
        key=lambda name: -(by_name[name].accuracy if by_name[name].accuracy is not None else -1.0),
    )
    text = ordered[0].upper() if ordered else ''
    for prev, name in zip(ordered, ordered[1:]):
        sep = '=' if by_name[prev].accuracy == by_name[name].accuracy else '>'
        text += sep + name.upper()
    return f"seed={seed} rank={text}"


def run_bench(tensors: Dataset, base: RunConfig, seeds: Sequence[int],
              threads: int = None) -> List[Tuple[int, List[BenchRow]]]:
    """
    Run every benchmark cell for each seed

    Args:
        tensors: Tensor-mode dataset (features for KNN/SVM are derived from it)
        base: Run configuration shared by all cells
        seeds: Split/initialisation seeds
        threads: Worker threads; defaults to AVDB_THREADS

    Returns:
        [(seed, rows)] in seed order, rows in cell order
    """
    feature_sets = {
        FeatureMode.TENSOR: tensors,
        flat_mode(base): featurize_dataset(tensors, flat_mode(base), base.hog),
    }

    jobs = []
    for seed in seeds:
        splits = {mode: split_train_test(ds, replace(base, seed=seed).split)
                  for mode, ds in feature_sets.items()}
        for cell in cells_for_seed(base, seed):
            jobs.append((seed, cell, splits))

    def job(entry):
        _, cell, splits = entry
        return run_cell(cell, splits)

    workers = thread_count(threads)
    if workers > 0:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, jobs))
    else:
        rows = [job(entry) for entry in jobs]

    results = []
    for seed in seeds:
        results.append((seed, [row for (s, _, _), row in zip(jobs, rows) if s == seed]))
    return results
