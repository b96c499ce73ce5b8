import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

from common.errors import AvdbError, EmptyClass, ImageLoadError
from common.utils import thread_count
from config import settings
from hog import HogConfig
from imagecore import read_image

from .features import featurize, preprocess
from .samples import Dataset, FeatureMode, Label, LabeledSample

logger = logging.getLogger(__name__)

_CLASS_FOLDERS = ((Label.DRONE, 'drone'), (Label.BIRD, 'bird'))


def _class_files(root: Path, folder: str) -> List[Path]:
    directory = root / folder
    if not directory.is_dir():
        raise EmptyClass(f"missing class folder: {directory}")
    files = sorted(
        (p for p in directory.iterdir()
         if p.is_file() and p.suffix.lower() in settings.IMAGE_SUFFIXES),
        key=lambda p: p.name,
    )
    if not files:
        raise EmptyClass(f"class folder {directory} has no images")
    return files


def _load_one(path: Path, image_size: int, mode: FeatureMode, hog_cfg: Optional[HogConfig]):
    try:
        tensor = preprocess(read_image(path), image_size)
        return featurize(tensor, mode, hog_cfg)
    except AvdbError as e:
        raise ImageLoadError(path, e) from e
    except OSError as e:
        raise ImageLoadError(path, e) from e


def load_images(root: Union[str, Path]) -> List[Tuple[Label, Path]]:
    """List (label, path) pairs ordered by class, then file name."""
    root = Path(root)
    return [(label, path) for label, folder in _CLASS_FOLDERS for path in _class_files(root, folder)]


def load_directory(root: Union[str, Path],
                   image_size: int = settings.DEFAULT_IMAGE_SIZE,
                   feature_mode: FeatureMode = FeatureMode.HOG,
                   hog_cfg: Optional[HogConfig] = None,
                   threads: Optional[int] = None) -> Dataset:
    """
    Load a drone/ and bird/ folder pair into a Dataset

    Args:
        root: Directory containing the two class folders
        image_size: Side length every image is resized to
        feature_mode: raw pixels, HOG descriptor, or the 2-D tensor itself
        hog_cfg: HOG parameters (HOG mode only)
        threads: Worker threads; defaults to AVDB_THREADS

    Returns:
        Dataset ordered by (class, file name)
    """
    mode = FeatureMode.parse(feature_mode)
    entries = load_images(root)
    workers = thread_count(threads)
    logger.info(f"Loading {len(entries)} images from {root} ({mode.value}, {image_size}px)")

    def job(entry):
        return _load_one(entry[1], image_size, mode, hog_cfg)

    if workers > 0:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            features = list(pool.map(job, entries))
    else:
        features = [job(entry) for entry in entries]

    samples = [
        LabeledSample(f"{path.parent.name}/{path.name}", values, label)
        for (label, path), values in zip(entries, features)
    ]
    return Dataset(samples)
