"""Sliding-window drone search over a larger frame."""

from dataclasses import dataclass
from typing import Iterator, List, Tuple

from common.errors import ConfigError
from dataset import Label, featurize, preprocess
from imagecore import Image, crop

from .models import Classifier


@dataclass(frozen=True)
class Detection:
    x: int
    y: int
    width: int
    height: int
    label: Label
    score: float

    def line(self) -> str:
        return (f"x={self.x} y={self.y} w={self.width} h={self.height} "
                f"label={self.label.title} score={self.score:.6f}")


def _positions(length: int, window: int, stride: int) -> List[int]:
    positions = list(range(0, length - window + 1, stride))
    # make sure the far edge is covered
    if positions and positions[-1] != length - window:
        positions.append(length - window)
    return positions


def sliding_windows(frame: Image, window: int, stride: int) -> Iterator[Tuple[int, int, int, int]]:
    if window < 1 or stride < 1:
        raise ConfigError("window and stride must be positive")
    if window > frame.width or window > frame.height:
        raise ConfigError(f"window {window} larger than the {frame.width}x{frame.height} frame")
    for y in _positions(frame.height, window, stride):
        for x in _positions(frame.width, window, stride):
            yield x, y, window, window


def classify_image(clf: Classifier, img: Image) -> Tuple[Label, float]:
    """Preprocess one image exactly as the training data was, then classify it."""
    cfg = clf.config
    features = featurize(preprocess(img, cfg.image_size), cfg.feature_mode, cfg.hog)
    return clf.predict(features), clf.score(features)


def detect(clf: Classifier, frame: Image, window: int, stride: int,
           keep_birds: bool = False) -> List[Detection]:
    """Classify every window; by default only Drone windows are returned."""
    found = []
    for x, y, w, h in sliding_windows(frame, window, stride):
        label, score = classify_image(clf, crop(frame, x, y, w, h))
        if label is Label.DRONE or keep_birds:
            found.append(Detection(x, y, w, h, label, score))
    return found
