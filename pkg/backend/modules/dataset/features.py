from typing import Optional

import numpy as np

from hog import HogConfig, hog_descriptor
from imagecore import Image, normalize, resize_bilinear, to_grayscale

from .samples import Dataset, FeatureMode, LabeledSample


def preprocess(img: Image, image_size: int) -> np.ndarray:
    """Grayscale, resize to image_size x image_size and scale to [0, 1]."""
    gray = to_grayscale(img)
    return normalize(resize_bilinear(gray, image_size, image_size))


def featurize(t: np.ndarray, mode: FeatureMode, hog_cfg: Optional[HogConfig] = None) -> np.ndarray:
    mode = FeatureMode.parse(mode)
    if mode is FeatureMode.HOG:
        return hog_descriptor(t, hog_cfg or HogConfig())
    if mode is FeatureMode.RAW:
        return np.asarray(t, dtype=np.float64).reshape(-1).copy()
    return np.asarray(t, dtype=np.float64).copy()


def featurize_dataset(ds: Dataset, mode: FeatureMode, hog_cfg: Optional[HogConfig] = None) -> Dataset:
    """Turn a tensor dataset into raw-pixel or HOG features, keeping order and ids."""
    samples = [
        LabeledSample(s.id, featurize(s.features, mode, hog_cfg), s.label)
        for s in ds.samples
    ]
    return Dataset(samples)
