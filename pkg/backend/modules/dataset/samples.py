from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List

import numpy as np

from common.errors import ConfigError, DimMismatch, EmptyDataset, SingleClassDataset


class Label(IntEnum):
    DRONE = 1
    BIRD = -1

    @property
    def index(self) -> int:
        """Output index used by the network: 0 = Drone, 1 = Bird."""
        return 0 if self is Label.DRONE else 1

    @classmethod
    def from_index(cls, index: int) -> 'Label':
        return cls.DRONE if int(index) == 0 else cls.BIRD

    @classmethod
    def from_name(cls, name: str) -> 'Label':
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown class name: {name}") from None

    @property
    def title(self) -> str:
        return self.name.capitalize()


class FeatureMode(str, Enum):
    RAW = 'raw'
    HOG = 'hog'
    TENSOR = 'tensor'

    @classmethod
    def parse(cls, value) -> 'FeatureMode':
        if isinstance(value, cls):
            return value
        aliases = {'rawpixels': 'raw', 'raw_pixels': 'raw', 'pixels': 'raw'}
        text = str(value).strip().lower()
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise ConfigError(f"unknown feature mode: {value}") from None


@dataclass
class LabeledSample:
    id: str
    features: np.ndarray
    label: Label

    def __post_init__(self):
        self.label = Label(int(self.label))
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.size == 0:
            raise ValueError(f"sample {self.id} has no features")
        if not np.all(np.isfinite(self.features)):
            raise ValueError(f"sample {self.id} has non-finite features")


@dataclass
class Dataset:
    samples: List[LabeledSample] = field(default_factory=list)
    feature_dim: int = 0

    def __post_init__(self):
        if self.samples:
            dims = {s.features.size for s in self.samples}
            if len(dims) != 1:
                raise DimMismatch(f"samples disagree on feature dimension: {sorted(dims)}")
            dim = dims.pop()
            if self.feature_dim and self.feature_dim != dim:
                raise DimMismatch(f"declared feature_dim {self.feature_dim} != {dim}")
            self.feature_dim = dim

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def ids(self) -> List[str]:
        return [s.id for s in self.samples]

    @property
    def labels(self) -> np.ndarray:
        return np.array([int(s.label) for s in self.samples], dtype=np.int64)

    def matrix(self) -> np.ndarray:
        """Features stacked as an (n, feature_dim) array."""
        if not self.samples:
            return np.zeros((0, self.feature_dim))
        return np.stack([s.features.reshape(-1) for s in self.samples])

    def tensors(self) -> np.ndarray:
        """Features stacked with their own shape, e.g. (n, h, w)."""
        return np.stack([s.features for s in self.samples])

    def class_counts(self) -> Dict[Label, int]:
        counts = {Label.DRONE: 0, Label.BIRD: 0}
        for sample in self.samples:
            counts[sample.label] += 1
        return counts

    def subset(self, indices) -> 'Dataset':
        return Dataset([self.samples[i] for i in indices], self.feature_dim)

    def require_both_classes(self):
        if not self.samples:
            raise EmptyDataset("dataset is empty")
        counts = self.class_counts()
        missing = [label.title for label, n in counts.items() if n == 0]
        if missing:
            raise SingleClassDataset(f"training data has no {', '.join(missing)} samples")


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
