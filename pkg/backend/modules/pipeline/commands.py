"""
Command implementations behind the `gen`, `train`, `eval`, `bench`,
`gradcheck` and `detect` subcommands.

Each returns the process exit code. Failures surface as AvdbError
subclasses whose `exit_code` the entry point turns into the process
status.
"""

import logging
import time
from dataclasses import replace
from typing import Callable, Dict, Iterable, Optional

from cnn import cnn_backward, run_gradcheck
from common.errors import UsageError
from config import settings
from dataset import Dataset, check_disjoint, generate_synthetic, load_directory, split_train_test
from imagecore import read_image
from metrics import BenchRow, append_csv_row, evaluate

from .bench import params_text, rank_line, run_bench
from .container import load_model, save_model
from .detector import detect
from .models import train_classifier
from .runconfig import RunConfig, build_run_config, parse_inline, read_config_source

logger = logging.getLogger(__name__)


def gather_entries(config_source: Optional[str] = None,
                   overrides: Iterable[str] = ()) -> Dict[str, str]:
    """--config (file or inline string) first, then each --set key=value."""
    entries = read_config_source(config_source)
    for item in overrides:
        entries.update(parse_inline(item))
    return entries


def load_for(cfg: RunConfig, data: str, threads: Optional[int] = None) -> Dataset:
    return load_directory(data, cfg.image_size, cfg.feature_mode, cfg.hog, threads=threads)


def cmd_gen(out: str, count: int, size: int, seed: int = settings.DEFAULT_SEED,
            threads: Optional[int] = None) -> int:
    if count < 1:
        raise UsageError(f"--count must be at least 1 (got {count})")
    if size < 32:
        raise UsageError(f"--size must be at least 32 (got {size})")
    try:
        ds = generate_synthetic(count, size, seed, out_dir=out, threads=threads)
    except OSError as e:
        raise UsageError(f"cannot write to {out}: {e}") from e
    print(f"wrote {len(ds)} images ({count} per class, {size}x{size}, seed {seed}) to {out}")
    return 0


def cmd_train(model: str, data: str, out: str,
              config_source: Optional[str] = None,
              overrides: Iterable[str] = (),
              threads: Optional[int] = None) -> int:
    cfg = build_run_config(model, gather_entries(config_source, overrides))
    ds = load_for(cfg, data, threads)
    ds.require_both_classes()
    train, test = split_train_test(ds, cfg.split)
    logger.info(f"Split {len(ds)} samples into {len(train)} train / {len(test)} test (seed {cfg.seed})")

    def on_epoch(entry):
        print(entry.line(cfg.cnn.epochs), flush=True)

    clf = train_classifier(train, cfg, on_epoch=on_epoch)
    path = save_model(out, clf)
    print(clf.summary())
    print(f"saved {clf.kind} model to {path}")
    return 0


def cmd_eval(model_file: str, data: str, csv_path: str,
             image_size: Optional[int] = None,
             threads: Optional[int] = None) -> int:
    clf = load_model(model_file)
    cfg = clf.config
    # a different size is honoured so the dimension check below can reject it
    run_cfg = cfg if image_size is None else replace(cfg, image_size=image_size)
    ds = load_for(run_cfg, data, threads)
    _, test = split_train_test(ds, cfg.split)
    clf.check_dataset(test)
    if clf.kind == 'knn':
        # the stored rows carry their ids, so a changed data directory is caught here
        check_disjoint(clf.model.ids, test.ids)

    started = time.perf_counter()
    preds = clf.predict_dataset(test)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    cm, rep = evaluate(preds, [s.label for s in test.samples], test.ids)

    row = BenchRow.from_report(clf.kind, cfg.seed, params_text(cfg), cm, rep, int(round(elapsed_ms)))
    append_csv_row(csv_path, row)
    print(f"tp={cm.tp} tn={cm.tn} fp={cm.fp} fn={cm.fn}")
    print(rep.summary())
    print("misclassified: " + (' '.join(rep.misclassified_ids) or '-'))
    return 0


def cmd_bench(data: str, seeds: int, csv_path: str,
              config_source: Optional[str] = None,
              overrides: Iterable[str] = (),
              first_seed: int = settings.DEFAULT_SEED,
              threads: Optional[int] = None) -> int:
    if seeds < 1:
        raise UsageError(f"--seeds must be at least 1 (got {seeds})")
    base = build_run_config('svm', gather_entries(config_source, overrides))
    tensors = load_directory(data, base.image_size, 'tensor', threads=threads)
    tensors.require_both_classes()

    seed_list = [first_seed + i for i in range(seeds)]
    for seed, rows in run_bench(tensors, base, seed_list, threads=threads):
        for row in rows:
            append_csv_row(csv_path, row)
            print(','.join(row.values()))
        print(rank_line(seed, rows))
    return 0


def cmd_gradcheck(seed: int = settings.GRADCHECK_SEED, backward: Callable = cnn_backward) -> int:
    result = run_gradcheck(seed, backward=backward)
    print(f"checked {result.checked} parameters, max relative error {result.max_relative_error:.3e}")
    if result.passed:
        return 0
    index = ','.join(str(i) for i in result.worst_index)
    print(f"gradient check failed: {result.worst_parameter}[{index}] exceeds {result.tolerance:g}")
    return 1


def cmd_detect(model_file: str, image: str, window: Optional[int] = None,
               stride: Optional[int] = None, keep_birds: bool = False) -> int:
    clf = load_model(model_file)
    frame = read_image(image)
    window = window or clf.config.image_size
    stride = stride or max(1, window // 2)
    found = detect(clf, frame, window, stride, keep_birds=keep_birds)
    for detection in found:
        print(detection.line())
    logger.info(f"{len(found)} windows reported in {image}")
    return 0
