"""
Procedural drone/bird corpus.

Each sample is a pure function of (seed, class, index): an anti-aliased
silhouette rasterised by Pillow on a supersampled canvas, composited on a
flat background with additive Gaussian noise. Drones are a body disc with
four arms ending in rotor discs; birds are a chevron of two curved wings.
Position, scale, rotation and polarity are randomised for both classes so
the classes differ by shape rather than intensity.
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from PIL import Image as PILImage
from PIL import ImageDraw

from common.errors import ConfigError
from common.utils import thread_count
from config import settings
from imagecore import Image, normalize, write_image

from .samples import Dataset, Label, LabeledSample

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.csv'
MANIFEST_FIELDS = ['id', 'class', 'seed', 'index']
_CLASS_CODE = {Label.DRONE: 0, Label.BIRD: 1}


def sample_id(label: Label, index: int) -> str:
    folder = label.name.lower()
    return f"{folder}/{folder}_{index:05d}.pgm"


def _disc(draw, cx, cy, r):
    draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=255)


def _draw_drone(draw, rng, cx, cy, radius, rotation):
    arm_length = 0.72 * radius
    arm_width = max(1, int(round(0.10 * radius)))
    jitter = math.radians(8.0)
    for k in range(4):
        angle = rotation + math.pi / 4 + k * math.pi / 2 + rng.uniform(-jitter, jitter)
        tx = cx + arm_length * math.cos(angle)
        ty = cy + arm_length * math.sin(angle)
        draw.line([(cx, cy), (tx, ty)], fill=255, width=arm_width)
        _disc(draw, tx, ty, 0.26 * radius)
    _disc(draw, cx, cy, 0.22 * radius)


def _draw_bird(draw, rng, cx, cy, radius, rotation):
    spread = math.radians(rng.uniform(35.0, 70.0))
    sag = rng.uniform(0.05, 0.20)
    steps = 12
    for side in (1, -1):
        direction = rotation + math.pi + side * spread
        dx, dy = math.cos(direction), math.sin(direction)
        # wings bow away from the body axis
        nx, ny = -dy * side, dx * side
        points = []
        for i in range(steps + 1):
            t = i / steps
            bow = sag * math.sin(math.pi * t) * radius
            points.append((cx + t * radius * dx + bow * nx, cy + t * radius * dy + bow * ny))
        for i in range(steps):
            width = 0.14 * radius - 0.09 * radius * (i / steps)
            draw.line([points[i], points[i + 1]], fill=255, width=max(1, int(round(width))))
    _disc(draw, cx, cy, 0.10 * radius)


def render_sample(label: Label, size: int, seed: int, index: int) -> Image:
    """Render one synthetic sample; identical arguments give identical pixels."""
    label = Label(int(label))
    rng = np.random.default_rng([int(seed), _CLASS_CODE[label], int(index)])

    scale = rng.uniform(*settings.SCALE_RANGE)
    shift = settings.SHIFT_FRACTION
    cx = size / 2 + rng.uniform(-shift, shift) * size
    cy = size / 2 + rng.uniform(-shift, shift) * size
    rotation = rng.uniform(0.0, 2 * math.pi)
    light_object = rng.random() < 0.5
    background = rng.uniform(0.15, 0.45) if light_object else rng.uniform(0.55, 0.85)
    contrast = rng.uniform(0.25, 0.45)
    foreground = background + contrast if light_object else background - contrast
    sigma = rng.uniform(*settings.NOISE_SIGMA_RANGE)

    factor = settings.SUPERSAMPLE
    canvas = PILImage.new('L', (size * factor, size * factor), 0)
    draw = ImageDraw.Draw(canvas)
    radius = scale * size * factor / 2
    if label is Label.DRONE:
        _draw_drone(draw, rng, cx * factor, cy * factor, radius, rotation)
    else:
        _draw_bird(draw, rng, cx * factor, cy * factor, radius, rotation)

    coverage = canvas.resize((size, size), PILImage.Resampling.BOX)
    alpha = np.asarray(coverage, dtype=np.float64) / 255.0

    values = background + (foreground - background) * alpha
    values = values + rng.normal(0.0, sigma, size=(size, size))
    pixels = np.floor(np.clip(values, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    return Image(pixels)


def generate_synthetic(count_per_class: int,
                       size: int,
                       seed: int,
                       out_dir: Optional[Union[str, Path]] = None,
                       threads: Optional[int] = None) -> Dataset:
    """
    Generate a balanced synthetic corpus

    Args:
        count_per_class: Samples per class (>= 1)
        size: Side length in pixels (>= 32)
        seed: Corpus seed
        out_dir: When given, images and manifest.csv are written there
        threads: Worker threads; defaults to AVDB_THREADS

    Returns:
        Tensor-mode Dataset ordered drones first, then birds, by index
    """
    if count_per_class < 1:
        raise ConfigError("count_per_class must be >= 1")
    if size < 32:
        raise ConfigError("size must be >= 32")

    jobs = [(label, i) for label in (Label.DRONE, Label.BIRD) for i in range(count_per_class)]
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        for label in (Label.DRONE, Label.BIRD):
            (out / label.name.lower()).mkdir(parents=True, exist_ok=True)

    def job(entry):
        label, index = entry
        img = render_sample(label, size, seed, index)
        if out is not None:
            write_image(out / sample_id(label, index), img)
        return img

    workers = thread_count(threads)
    if workers > 0:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            images = list(pool.map(job, jobs))
    else:
        images = [job(entry) for entry in jobs]

    if out is not None:
        with open(out / MANIFEST_NAME, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(MANIFEST_FIELDS)
            for label, index in jobs:
                writer.writerow([sample_id(label, index), label.name.lower(), seed, index])
        logger.info(f"Wrote {len(jobs)} images and {MANIFEST_NAME} to {out}")

    samples = [
        LabeledSample(sample_id(label, index), normalize(img), label)
        for (label, index), img in zip(jobs, images)
    ]
    return Dataset(samples)


def read_manifest(root: Union[str, Path]) -> List[dict]:
    with open(Path(root) / MANIFEST_NAME, encoding='utf-8', newline='') as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        row['seed'] = int(row['seed'])
        row['index'] = int(row['index'])
    return rows
