import math
from typing import Iterable, Tuple

import numpy as np

from common.errors import DatasetError, EmptyDataset

from .samples import Dataset, Label, SplitSpec


def train_count(fraction: float, class_count: int) -> int:
    # rounding first keeps products like 0.7 * 10 from landing just under an integer
    return int(math.floor(round(fraction * class_count, 9)))


def split_train_test(ds: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    """Stratified, seeded train/test split.

    Each class is shuffled with numpy's PCG64 generator seeded by spec.seed
    (drone indices first, then bird), and the first floor(fraction x count)
    go to training. Both halves keep the dataset's original order.
    """
    if len(ds) == 0:
        raise EmptyDataset("cannot split an empty dataset")

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    labels = ds.labels
    train_idx, test_idx = [], []
    for label in (Label.DRONE, Label.BIRD):
        members = np.flatnonzero(labels == int(label))
        shuffled = rng.permutation(members)
        n_train = train_count(spec.train_fraction, members.size)
        train_idx.extend(shuffled[:n_train].tolist())
        test_idx.extend(shuffled[n_train:].tolist())

    return ds.subset(sorted(train_idx)), ds.subset(sorted(test_idx))


def check_disjoint(train_ids: Iterable[str], test_ids: Iterable[str]):
    """Raise DatasetError when any evaluated id was also trained on."""
    overlap = set(train_ids) & set(test_ids)
    if overlap:
        raise DatasetError(f"train/test leakage: {sorted(overlap)[:5]}")
