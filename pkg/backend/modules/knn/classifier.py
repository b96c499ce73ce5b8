"""
Brute-force k-nearest-neighbour classifier.

Distances are squared Euclidean. Neighbours are ranked by distance, then
by training index; a tied vote goes to the label of the nearest neighbour.
"""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from common.errors import ConfigError, DimMismatch, EmptyDataset, KTooLarge
from dataset import Dataset, Label


@dataclass(frozen=True)
class KnnModel:
    k: int
    features: np.ndarray
    labels: np.ndarray
    ids: List[str] = field(default_factory=list)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def __len__(self) -> int:
        return self.features.shape[0]


def knn_fit(ds: Dataset, k: int) -> KnnModel:
    if len(ds) == 0:
        raise EmptyDataset("cannot fit KNN on an empty dataset")
    if k < 1:
        raise ConfigError("k must be >= 1")
    if k > len(ds):
        raise KTooLarge(f"k={k} exceeds the {len(ds)} training samples")
    features = ds.matrix().copy()
    features.setflags(write=False)
    labels = ds.labels.copy()
    labels.setflags(write=False)
    return KnnModel(k=k, features=features, labels=labels, ids=ds.ids)


def _neighbours(m: KnnModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != m.feature_dim:
        raise DimMismatch(f"query has {x.size} features, model expects {m.feature_dim}")
    diff = m.features - x
    distances = np.einsum('ij,ij->i', diff, diff)
    # lexsort: last key is primary -> distance first, index second
    order = np.lexsort((np.arange(distances.size), distances))
    return order[:m.k]


def knn_predict(m: KnnModel, x) -> Label:
    nearest = _neighbours(m, x)
    votes = m.labels[nearest]
    drone = int(np.count_nonzero(votes == int(Label.DRONE)))
    bird = votes.size - drone
    if drone == bird:
        return Label(int(votes[0]))
    return Label.DRONE if drone > bird else Label.BIRD


def knn_vote_fraction(m: KnnModel, x) -> float:
    """Fraction of the k neighbours voting Drone."""
    votes = m.labels[_neighbours(m, x)]
    return float(np.count_nonzero(votes == int(Label.DRONE))) / votes.size


def knn_predict_many(m: KnnModel, xs: Sequence) -> List[Label]:
    return [knn_predict(m, x) for x in xs]
