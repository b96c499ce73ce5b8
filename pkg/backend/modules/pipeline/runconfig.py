"""
Run configuration: one flat `key = value` namespace covering the
preprocessing, split and classifier settings of a run.

Files are UTF-8 with `#` comments. Inline strings use `key=value` pairs
separated by commas (`epochs=2,lr=0.05`). A bare key such as `epochs`
resolves against the selected classifier's section.
"""

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from common.errors import ConfigError
from config import settings
from cnn import CnnTrainConfig
from dataset import FeatureMode, SplitSpec
from hog import HogConfig
from svm import SvmTrainConfig

TOP_KEYS = ('image_size', 'feature_mode', 'train_fraction', 'seed', 'k')
SVM_KEYS = {'svm.lambda': 'lam', 'svm.epochs': 'epochs', 'svm.lr0': 'lr0'}
CNN_KEYS = {
    'cnn.epochs': 'epochs', 'cnn.batch': 'batch', 'cnn.lr': 'lr', 'cnn.momentum': 'momentum',
    'cnn.conv_channels': 'conv_channels', 'cnn.fc_hidden': 'fc_hidden',
}
HOG_KEYS = {
    'hog.cell_size': 'cell_size', 'hog.block_size': 'block_size',
    'hog.block_stride': 'block_stride', 'hog.bins': 'bins', 'hog.clip': 'clip',
}
ALL_KEYS = TOP_KEYS + tuple(SVM_KEYS) + tuple(CNN_KEYS) + tuple(HOG_KEYS)
CLASSIFIERS = settings.MODEL_KINDS

_INLINE_SPLIT = re.compile(r',(?=\s*[A-Za-z_][A-Za-z0-9_.]*\s*=)')


@dataclass(frozen=True)
class RunConfig:
    classifier: str = 'svm'
    image_size: int = settings.DEFAULT_IMAGE_SIZE
    feature_mode: FeatureMode = FeatureMode.HOG
    train_fraction: float = settings.TRAIN_FRACTION
    seed: int = settings.DEFAULT_SEED
    k: int = settings.KNN_K
    hog: HogConfig = field(default_factory=HogConfig)
    svm: SvmTrainConfig = field(default_factory=SvmTrainConfig)
    cnn: CnnTrainConfig = field(default_factory=CnnTrainConfig)

    @property
    def split(self) -> SplitSpec:
        return SplitSpec(self.train_fraction, self.seed)

    def validate(self) -> 'RunConfig':
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"unknown classifier: {self.classifier}")
        if self.image_size < 8:
            raise ConfigError("image_size must be >= 8")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        SplitSpec(self.train_fraction, self.seed)
        if self.classifier == 'cnn':
            if self.feature_mode is not FeatureMode.TENSOR:
                raise ConfigError("the cnn classifier consumes feature_mode 'tensor'")
            if self.image_size % (2 ** self.cnn.depth):
                raise ConfigError(
                    f"image_size {self.image_size} is not divisible by 2^{self.cnn.depth}")
        else:
            if self.feature_mode is FeatureMode.TENSOR:
                raise ConfigError(f"the {self.classifier} classifier needs feature_mode 'hog' or 'raw'")
            if self.feature_mode is FeatureMode.HOG:
                cells = self.image_size // self.hog.cell_size
                if self.image_size % self.hog.cell_size or cells < self.hog.block_size:
                    raise ConfigError(
                        f"image_size {self.image_size} does not fit HOG cells of {self.hog.cell_size}px")
        return self

    def pairs(self) -> List[Tuple[str, str]]:
        """Every setting as (key, text) in a fixed order."""
        values = {
            'image_size': str(self.image_size),
            'feature_mode': self.feature_mode.value,
            'train_fraction': repr(self.train_fraction),
            'seed': str(self.seed),
            'k': str(self.k),
        }
        for key, attr in SVM_KEYS.items():
            values[key] = _format(getattr(self.svm, attr))
        for key, attr in CNN_KEYS.items():
            values[key] = _format(getattr(self.cnn, attr))
        for key, attr in HOG_KEYS.items():
            values[key] = _format(getattr(self.hog, attr))
        return [('classifier', self.classifier)] + [(key, values[key]) for key in ALL_KEYS]


def _format(value) -> str:
    if isinstance(value, tuple):
        return ','.join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config_text(text: str) -> Dict[str, str]:
    entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError(f"line {number}: missing key")
        entries[key] = value
    return entries


def parse_inline(text: str) -> Dict[str, str]:
    entries = {}
    for chunk in _INLINE_SPLIT.split(text):
        chunk = chunk.strip()
        if not chunk:
            continue
        if '=' not in chunk:
            raise ConfigError(f"expected key=value, got {chunk!r}")
        key, value = (part.strip() for part in chunk.split('=', 1))
        entries[key] = value
    return entries


def read_config_source(source: Optional[str]) -> Dict[str, str]:
    """A config file path, or an inline key=value string."""
    if not source:
        return {}
    path = Path(source)
    if path.is_file():
        try:
            return parse_config_text(path.read_text(encoding='utf-8'))
        except UnicodeDecodeError as e:
            raise ConfigError(f"{path}: not UTF-8 text ({e})") from e
    if '=' in source:
        return parse_inline(source)
    raise ConfigError(f"config file not found: {source}")


def _resolve_key(key: str, classifier: str) -> str:
    if key in ALL_KEYS:
        return key
    qualified = f"{classifier}.{key}"
    if qualified in ALL_KEYS:
        return qualified
    raise ConfigError(f"unknown config key: {key}")


def _convert(key: str, text: str):
    try:
        if key == 'feature_mode':
            return FeatureMode.parse(text)
        if key == 'cnn.conv_channels':
            return tuple(int(part) for part in text.replace(';', ',').split(',') if part.strip())
        if key in ('train_fraction', 'svm.lambda', 'svm.lr0', 'cnn.lr', 'cnn.momentum', 'hog.clip'):
            return float(text)
        return int(text)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"invalid value for {key}: {text!r}") from e


def build_run_config(classifier: str,
                     entries: Mapping[str, str] = (),
                     base: Optional[RunConfig] = None) -> RunConfig:
    """Apply key/value entries on top of base (or the defaults) and validate."""
    if classifier not in CLASSIFIERS:
        raise ConfigError(f"unknown classifier: {classifier}")
    entries = dict(entries)
    if 'classifier' in entries:
        if entries.pop('classifier') != classifier:
            raise ConfigError("config 'classifier' disagrees with the selected model")

    top = {}
    sections = {'svm': {}, 'cnn': {}, 'hog': {}}
    for key, text in entries.items():
        resolved = _resolve_key(key, classifier)
        value = _convert(resolved, text)
        if resolved in TOP_KEYS:
            top[resolved] = value
        elif resolved in SVM_KEYS:
            sections['svm'][SVM_KEYS[resolved]] = value
        elif resolved in CNN_KEYS:
            sections['cnn'][CNN_KEYS[resolved]] = value
        else:
            sections['hog'][HOG_KEYS[resolved]] = value

    if base is None:
        mode = FeatureMode.TENSOR if classifier == 'cnn' else FeatureMode.HOG
        base = RunConfig(classifier=classifier, feature_mode=mode)
    cfg = replace(base, classifier=classifier, **top)
    seed = cfg.seed
    cfg = replace(
        cfg,
        hog=replace(cfg.hog, **sections['hog']),
        svm=replace(cfg.svm, seed=seed, **sections['svm']),
        cnn=replace(cfg.cnn, seed=seed, **sections['cnn']),
    )
    return cfg.validate()


def run_config_from_pairs(pairs: Iterable[Tuple[str, str]]) -> RunConfig:
    entries = dict(pairs)
    classifier = entries.pop('classifier', None)
    if classifier is None:
        raise ConfigError("stored config lacks a classifier")
    return build_run_config(classifier, entries)
