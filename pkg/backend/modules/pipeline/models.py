"""Uniform train/predict surface over the three classifier kinds."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Union

import numpy as np

from cnn import CnnModel, EpochLog, cnn_drone_probability, cnn_predict_many, cnn_train
from common.errors import DimMismatch, SizeMismatch
from dataset import Dataset, Label
from knn import KnnModel, knn_fit, knn_predict, knn_vote_fraction
from svm import SvmModel, svm_decision, svm_predict, svm_predict_many, svm_train

from .runconfig import RunConfig

logger = logging.getLogger(__name__)

Model = Union[KnnModel, SvmModel, CnnModel]


@dataclass
class Classifier:
    kind: str
    model: Model
    config: RunConfig

    @property
    def input_dim(self) -> int:
        if self.kind == 'knn':
            return self.model.feature_dim
        if self.kind == 'svm':
            return self.model.dim
        return self.model.input_size * self.model.input_size

    def check_dataset(self, ds: Dataset):
        if ds.feature_dim != self.input_dim:
            error = SizeMismatch if self.kind == 'cnn' else DimMismatch
            raise error(
                f"data has {ds.feature_dim} features per sample, the {self.kind} model expects "
                f"{self.input_dim}")

    def predict(self, features) -> Label:
        if self.kind == 'knn':
            return knn_predict(self.model, features)
        if self.kind == 'svm':
            return svm_predict(self.model, features)
        return cnn_predict_many(self.model, np.asarray(features)[np.newaxis])[0]

    def predict_dataset(self, ds: Dataset) -> List[Label]:
        self.check_dataset(ds)
        if self.kind == 'cnn':
            return cnn_predict_many(self.model, ds.tensors())
        if self.kind == 'svm':
            return svm_predict_many(self.model, ds.matrix())
        return [self.predict(s.features) for s in ds.samples]

    def score(self, features) -> float:
        """Drone confidence: SVM decision value, CNN probability, or KNN vote share."""
        if self.kind == 'knn':
            return knn_vote_fraction(self.model, features)
        if self.kind == 'svm':
            return svm_decision(self.model, features)
        return cnn_drone_probability(self.model, features)

    def summary(self) -> str:
        if self.kind == 'knn':
            return f"knn: stored {len(self.model)} samples, k={self.model.k}, dim={self.input_dim}"
        if self.kind == 'svm':
            final = self.model.history[-1] if self.model.history else float('nan')
            return f"svm: dim={self.model.dim} b={self.model.b:.6f} objective={final:.6f}"
        channels = '-'.join(str(c) for c in self.model.conv_channels)
        return (f"cnn: input={self.model.input_size} channels={channels} "
                f"fc_hidden={self.model.fc_hidden}")


def train_classifier(train_ds: Dataset,
                     cfg: RunConfig,
                     on_epoch: Optional[Callable[[EpochLog], None]] = None) -> Classifier:
    logger.info(f"Training {cfg.classifier} on {len(train_ds)} samples")
    if cfg.classifier == 'knn':
        model = knn_fit(train_ds, cfg.k)
    elif cfg.classifier == 'svm':
        model = svm_train(train_ds, cfg.svm)
    else:
        model, _ = cnn_train(train_ds, cfg.cnn, on_epoch=on_epoch)
    return Classifier(cfg.classifier, model, cfg)
