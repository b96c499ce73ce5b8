from .samples import Dataset, FeatureMode, Label, LabeledSample, SplitSpec
from .features import featurize, featurize_dataset, preprocess
from .loader import load_directory, load_images
from .split import check_disjoint, split_train_test
from .synthetic import generate_synthetic, read_manifest, render_sample

__all__ = [
    'Dataset', 'FeatureMode', 'Label', 'LabeledSample', 'SplitSpec',
    'featurize', 'featurize_dataset', 'preprocess',
    'load_directory', 'load_images', 'check_disjoint', 'split_train_test',
    'generate_synthetic', 'read_manifest', 'render_sample',
]
