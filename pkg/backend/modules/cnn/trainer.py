import logging
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from common.errors import ConfigError
from config import settings
from dataset import Dataset

from .network import CnnModel, cnn_backward, cnn_forward, init_model

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CnnTrainConfig:
    epochs: int = settings.CNN_EPOCHS
    batch: int = settings.CNN_BATCH
    lr: float = settings.CNN_LR
    momentum: float = settings.CNN_MOMENTUM
    seed: int = settings.DEFAULT_SEED
    conv_channels: Tuple[int, ...] = settings.CNN_CONV_CHANNELS
    fc_hidden: int = settings.CNN_FC_HIDDEN
    early_stop: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'conv_channels', tuple(int(c) for c in self.conv_channels))
        if self.epochs < 1 or self.batch < 1 or self.fc_hidden < 1:
            raise ConfigError("cnn.epochs, cnn.batch and cnn.fc_hidden must be positive")
        if self.lr <= 0:
            raise ConfigError("cnn.lr must be > 0")
        if not 0 <= self.momentum < 1:
            raise ConfigError("cnn.momentum must be in [0, 1)")
        if len(self.conv_channels) not in (2, 3, 4) or min(self.conv_channels) < 1:
            raise ConfigError("cnn.conv_channels needs 2 to 4 positive entries")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")

    @property
    def depth(self) -> int:
        return len(self.conv_channels)


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    loss: float
    accuracy: float
    seconds: float

    def line(self, total: int) -> str:
        return (f"epoch {self.epoch}/{total} loss={self.loss:.6f} "
                f"accuracy={self.accuracy:.4f} time={self.seconds:.2f}s")


def _should_stop(losses: List[float]) -> bool:
    """Mean epoch loss moved less than the threshold over the last few epochs."""
    patience = settings.EARLY_STOP_PATIENCE
    if len(losses) <= patience:
        return False
    recent = losses[-(patience + 1):]
    return all(abs(b - a) < settings.EARLY_STOP_DELTA for a, b in zip(recent, recent[1:]))


def cnn_train(ds: Dataset,
              cfg: CnnTrainConfig = CnnTrainConfig(),
              on_epoch: Optional[Callable[[EpochLog], None]] = None) -> Tuple[CnnModel, List[EpochLog]]:
    """
    Train the network with minibatch SGD and momentum

    Args:
        ds: Tensor-mode dataset (every sample a square 2-D tensor)
        cfg: Training configuration
        on_epoch: Called with each epoch's log entry

    Returns:
        (trained model, per-epoch log)
    """
    ds.require_both_classes()
    x = ds.tensors()
    if x.ndim != 3 or x.shape[1] != x.shape[2]:
        raise ConfigError("CNN training needs square 2-D tensors (feature mode 'tensor')")
    targets = np.array([s.label.index for s in ds.samples], dtype=np.int64)
    n = x.shape[0]

    model = init_model(x.shape[1], cfg.conv_channels, cfg.fc_hidden, cfg.seed)
    params = model.parameters()
    velocity = {name: np.zeros_like(p) for name, p in params}
    rng = np.random.Generator(np.random.PCG64(cfg.seed + 1))

    log: List[EpochLog] = []
    for epoch in range(1, cfg.epochs + 1):
        started = time.perf_counter()
        order = rng.permutation(n)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch):
            idx = order[start:start + cfg.batch]
            probs, cache = cnn_forward(model, x[idx])
            batch_targets = targets[idx]
            picked = probs[np.arange(idx.size), batch_targets]
            total_loss += float(np.sum(-np.log(np.maximum(picked, settings.CE_FLOOR))))
            correct += int(np.count_nonzero(np.argmax(probs, axis=1) == batch_targets))

            grads = cnn_backward(model, cache, batch_targets)
            for name, param in params:
                v = velocity[name]
                v *= cfg.momentum
                v -= cfg.lr * grads[name]
                param += v

        entry = EpochLog(epoch, total_loss / n, correct / n, time.perf_counter() - started)
        log.append(entry)
        logger.debug(entry.line(cfg.epochs))
        if on_epoch is not None:
            on_epoch(entry)
        if cfg.early_stop and _should_stop([e.loss for e in log]):
            logger.info(f"Loss settled after {epoch} epochs; stopping early")
            break

    return model, log
