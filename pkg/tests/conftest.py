import numpy as np
import pytest

from dataset import generate_synthetic
from imagecore import Image, write_image


def write_gray(path, values):
    path.parent.mkdir(parents=True, exist_ok=True)
    return write_image(path, Image(np.asarray(values, dtype=np.uint8)))


@pytest.fixture
def tiny_corpus(tmp_path):
    """3 drone and 2 bird 16x16 graymaps with distinct content."""
    root = tmp_path / 'tiny'
    rng = np.random.default_rng(0)
    for i in range(3):
        write_gray(root / 'drone' / f'd{i}.pgm', rng.integers(0, 256, size=(16, 16)))
    for i in range(2):
        write_gray(root / 'bird' / f'b{i}.pgm', rng.integers(0, 256, size=(16, 16)))
    return root


@pytest.fixture
def five_each(tmp_path):
    """5 drone + 5 bird images: a bright square for drones, a dark one for birds."""
    root = tmp_path / 'five'
    rng = np.random.default_rng(1)
    for i in range(5):
        drone = rng.integers(0, 60, size=(32, 32))
        drone[8:24, 8:24] = 230
        write_gray(root / 'drone' / f'drone_{i}.pgm', drone)
        bird = rng.integers(0, 60, size=(32, 32))
        bird[12:20, 4:28] = 200
        write_gray(root / 'bird' / f'bird_{i}.pgm', bird)
    return root


@pytest.fixture(scope='session')
def synthetic_corpus(tmp_path_factory):
    """A small generated corpus on disk (12 per class at 32px)."""
    root = tmp_path_factory.mktemp('synthetic')
    generate_synthetic(12, 32, seed=3, out_dir=root, threads=0)
    return root
