"""
Histogram of oriented gradients.

Unsigned orientations (0-180 degrees), magnitude-weighted linear voting
between the two nearest bins, overlapping blocks with L2-Hys
normalisation. Concatenation order: blocks row-major, cells within a
block row-major, bins ascending.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from common.errors import ConfigError, DimsNotDivisible, ImageTooSmall
from config import settings


@dataclass(frozen=True)
class HogConfig:
    cell_size: int = settings.HOG_CELL_SIZE
    block_size: int = settings.HOG_BLOCK_SIZE
    block_stride: int = settings.HOG_BLOCK_STRIDE
    bins: int = settings.HOG_BINS
    clip: float = settings.HOG_CLIP

    def __post_init__(self):
        if self.cell_size < 2:
            raise ConfigError("hog.cell_size must be >= 2")
        if self.bins < 2:
            raise ConfigError("hog.bins must be >= 2")
        if self.block_size < 1:
            raise ConfigError("hog.block_size must be >= 1")
        if self.block_stride < 1:
            raise ConfigError("hog.block_stride must be >= 1")
        if not 0 < self.clip <= 1:
            raise ConfigError("hog.clip must be in (0, 1]")


def compute_gradients(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference gradients with replicated borders.

    Returns (magnitude, orientation in degrees folded to [0, 180)).
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 2 or t.shape[0] < 3 or t.shape[1] < 3:
        raise ImageTooSmall(f"gradients need at least a 3x3 input, got {t.shape}")

    padded = np.pad(t, 1, mode='edge')
    gx = padded[1:-1, 2:] - padded[1:-1, :-2]
    gy = padded[2:, 1:-1] - padded[:-2, 1:-1]

    magnitude = np.sqrt(gx * gx + gy * gy)
    orientation = np.mod(np.degrees(np.arctan2(gy, gx)), 180.0)
    orientation[orientation >= 180.0] = 0.0
    return magnitude, orientation


def _grid(shape, cfg: HogConfig) -> Tuple[int, int, int, int]:
    height, width = shape
    if height % cfg.cell_size or width % cfg.cell_size:
        raise DimsNotDivisible(
            f"{width}x{height} image is not divisible by cell size {cfg.cell_size}")
    cells_y, cells_x = height // cfg.cell_size, width // cfg.cell_size
    if cells_y < cfg.block_size or cells_x < cfg.block_size:
        raise ImageTooSmall(f"{width}x{height} image is smaller than one block")
    blocks_y = (cells_y - cfg.block_size) // cfg.block_stride + 1
    blocks_x = (cells_x - cfg.block_size) // cfg.block_stride + 1
    return cells_y, cells_x, blocks_y, blocks_x


def descriptor_length(height: int, width: int, cfg: HogConfig = HogConfig()) -> int:
    _, _, blocks_y, blocks_x = _grid((height, width), cfg)
    return blocks_y * blocks_x * cfg.block_size * cfg.block_size * cfg.bins


def _cell_histograms(magnitude, orientation, cfg: HogConfig, cells_y: int, cells_x: int):
    bin_width = 180.0 / cfg.bins
    position = orientation / bin_width - 0.5
    lower = np.floor(position)
    upper_weight = position - lower
    lower_bin = np.mod(lower.astype(np.int64), cfg.bins)
    upper_bin = np.mod(lower_bin + 1, cfg.bins)

    rows = np.arange(magnitude.shape[0]) // cfg.cell_size
    cols = np.arange(magnitude.shape[1]) // cfg.cell_size
    cell = (rows[:, np.newaxis] * cells_x + cols[np.newaxis, :]) * cfg.bins

    # bincount accumulates in index order, so sums are reproducible
    size = cells_y * cells_x * cfg.bins
    hist = np.bincount((cell + lower_bin).ravel(),
                       weights=(magnitude * (1.0 - upper_weight)).ravel(), minlength=size)
    hist += np.bincount((cell + upper_bin).ravel(),
                        weights=(magnitude * upper_weight).ravel(), minlength=size)
    return hist.reshape(cells_y, cells_x, cfg.bins)


def _l2_hys(block: np.ndarray, clip: float) -> np.ndarray:
    eps = settings.HOG_EPS
    block = block / max(np.sqrt(np.dot(block, block)), eps)
    block = np.minimum(block, clip)
    return block / max(np.sqrt(np.dot(block, block)), eps)


def hog_descriptor(t: np.ndarray, cfg: HogConfig = HogConfig()) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    cells_y, cells_x, blocks_y, blocks_x = _grid(t.shape, cfg)
    magnitude, orientation = compute_gradients(t)
    hist = _cell_histograms(magnitude, orientation, cfg, cells_y, cells_x)

    size, stride = cfg.block_size, cfg.block_stride
    blocks = []
    for by in range(blocks_y):
        for bx in range(blocks_x):
            y, x = by * stride, bx * stride
            block = hist[y:y + size, x:x + size].reshape(-1)
            blocks.append(_l2_hys(block, cfg.clip))
    return np.concatenate(blocks)
