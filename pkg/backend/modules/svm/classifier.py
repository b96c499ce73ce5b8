"""
Linear soft-margin SVM trained by primal subgradient descent.

Objective: (lambda/2)|w|^2 + (1/N) sum max(0, 1 - y (w.x + b)), with the
bias left out of the regulariser. Every epoch takes one full-batch
subgradient step with decay 1 / (1 + epoch). Rows are centred first, and
the w step is lr0 divided by the mean squared centred row norm, so one
default works for HOG and raw pixels alike. The bias step is lr0 itself.
The seeded shuffle only fixes the order in which samples are summed, so
duplicating every sample leaves the result unchanged.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from common.errors import ConfigError, DimMismatch
from config import settings
from dataset import Dataset, Label

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SvmTrainConfig:
    lam: float = settings.SVM_LAMBDA
    epochs: int = settings.SVM_EPOCHS
    lr0: float = settings.SVM_LR0
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigError("svm.lambda must be > 0")
        if self.epochs < 1:
            raise ConfigError("svm.epochs must be >= 1")
        if self.lr0 <= 0:
            raise ConfigError("svm.lr0 must be > 0")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


@dataclass
class SvmModel:
    w: np.ndarray
    b: float = 0.0
    history: List[float] = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64).reshape(-1)
        self.b = float(self.b)

    @property
    def dim(self) -> int:
        return self.w.size


def _check(m: SvmModel, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != m.dim:
        raise DimMismatch(f"input has {x.size} features, model expects {m.dim}")
    return x


def svm_decision(m: SvmModel, x) -> float:
    return float(np.dot(m.w, _check(m, x)) + m.b)


def svm_predict(m: SvmModel, x) -> Label:
    # a point exactly on the boundary counts as Drone
    return Label.DRONE if svm_decision(m, x) >= 0.0 else Label.BIRD


def svm_predict_many(m: SvmModel, xs) -> List[Label]:
    """Sign rule over a (n, dim) matrix in one product."""
    X = np.asarray(xs, dtype=np.float64)
    X = X.reshape(len(X), -1)
    if X.shape[1] != m.dim:
        raise DimMismatch(f"input has {X.shape[1]} features, model expects {m.dim}")
    return [Label.DRONE if v >= 0.0 else Label.BIRD for v in X @ m.w + m.b]


def svm_objective(m: SvmModel, ds: Dataset, lam: float) -> float:
    X, y = ds.matrix(), ds.labels.astype(np.float64)
    margins = y * (X @ m.w + m.b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return float(0.5 * lam * np.dot(m.w, m.w) + hinge.mean())


def svm_train(ds: Dataset, cfg: SvmTrainConfig = SvmTrainConfig()) -> SvmModel:
    ds.require_both_classes()
    X, y = ds.matrix(), ds.labels.astype(np.float64)
    n, dim = X.shape

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    order = rng.permutation(n)
    X, y = X[order], y[order]

    # Train on centred rows; w.(x - mean) + b is folded back into w.x + b at the end.
    mean = X.mean(axis=0)
    X = X - mean
    scale = float(np.mean(np.einsum('ij,ij->i', X, X)))
    # w steps are measured in units of the mean squared row norm and capped so
    # the shrink factor (1 - lr * lambda) never goes negative
    w_rate = cfg.lr0 / scale if scale > 0 else np.inf
    w_rate = min(w_rate, 1.0 / cfg.lam)

    w = np.zeros(dim)
    b = 0.0
    scores = np.zeros(n)
    history = []
    for epoch in range(cfg.epochs):
        decay = 1.0 + epoch
        active = y * (scores + b) < 1.0
        grad_w = cfg.lam * w - (y[active] @ X[active]) / n
        grad_b = -np.sum(y[active]) / n
        w = w - (w_rate / decay) * grad_w
        b = b - (cfg.lr0 / decay) * grad_b
        scores = X @ w
        hinge = np.maximum(0.0, 1.0 - y * (scores + b))
        history.append(0.5 * cfg.lam * float(np.dot(w, w)) + float(hinge.mean()))

    logger.info(f"SVM trained: {cfg.epochs} epochs, objective {history[-1]:.6f}")
    return SvmModel(w, b - float(np.dot(w, mean)), history)
