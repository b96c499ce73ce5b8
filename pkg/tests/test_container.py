import struct

import numpy as np
import pytest

from common.errors import ConfigError, ContainerError
from dataset import FeatureMode, Label, SplitSpec, featurize_dataset, generate_synthetic, split_train_test
from pipeline import build_run_config, dump_model, load_model, parse_model, save_model, train_classifier
from pipeline.runconfig import parse_config_text, parse_inline, read_config_source, run_config_from_pairs


@pytest.fixture(scope='module')
def corpus():
    return generate_synthetic(8, 32, seed=21, threads=0)


@pytest.fixture(scope='module')
def unseen():
    """100 unseen samples for comparing predictions before and after a round trip."""
    return generate_synthetic(50, 32, seed=99, threads=0)


def payload_start(data) -> int:
    return data.index(b'\n', data.index(b'\npayload ') + 1) + 1


def features_for(cfg, ds):
    return ds if cfg.feature_mode is FeatureMode.TENSOR else featurize_dataset(ds, cfg.feature_mode, cfg.hog)


def trained(kind, corpus, **entries):
    cfg = build_run_config(kind, {'image_size': '32', **entries})
    ds = features_for(cfg, corpus)
    train, test = split_train_test(ds, cfg.split)
    return train_classifier(train, cfg), test


class TestRunConfig:
    def test_defaults(self):
        cfg = build_run_config('svm')
        assert cfg.image_size == 64 and cfg.feature_mode is FeatureMode.HOG
        assert build_run_config('cnn').feature_mode is FeatureMode.TENSOR

    def test_bare_keys_follow_the_classifier(self):
        assert build_run_config('cnn', {'epochs': '2'}).cnn.epochs == 2
        assert build_run_config('svm', {'epochs': '7', 'lambda': '0.5'}).svm.lam == 0.5

    def test_seed_reaches_trainers(self):
        cfg = build_run_config('cnn', {'seed': '42'})
        assert cfg.cnn.seed == 42 and cfg.svm.seed == 42 and cfg.split == SplitSpec(0.8, 42)

    def test_channels_list(self):
        assert build_run_config('cnn', parse_inline('cnn.conv_channels=4,8,lr=0.05')).cnn.conv_channels == (4, 8)

    @pytest.mark.parametrize('entries', [
        {'colour': 'yes'},
        {'k': 'three'},
        {'train_fraction': '1.5'},
        {'image_size': '60', 'feature_mode': 'hog'},
        {'feature_mode': 'tensor'},
    ])
    def test_rejected(self, entries):
        with pytest.raises(ConfigError):
            build_run_config('knn', entries)

    def test_cnn_size_must_halve_cleanly(self):
        with pytest.raises(ConfigError):
            build_run_config('cnn', {'image_size': '36'})

    def test_file_format(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('# knn run\nk = 3   # neighbours\n\nimage_size = 32\n', encoding='utf-8')
        assert read_config_source(str(path)) == {'k': '3', 'image_size': '32'}
        with pytest.raises(ConfigError):
            parse_config_text('just words')

    def test_missing_file(self, tmp_path):
        with pytest.raises(ContainerError) as info:
            load_model(tmp_path / 'none.avdb')
        assert info.value.exit_code == 5

    def test_rejects_unknown_label_byte(self, corpus):
        clf, _ = trained('knn', corpus)
        data = bytearray(dump_model(clf))
        start = payload_start(data)
        id_length = struct.unpack_from('<H', data, start + 12)[0]
        data[start + 14 + id_length] = 3
        with pytest.raises(ContainerError, match='label byte 3'):
            parse_model(bytes(data))

    def test_rejects_cnn_without_conv_layers(self, corpus):
        clf, _ = trained('cnn', corpus, epochs='1', conv_channels='2,2', fc_hidden='4')
        data = bytearray(dump_model(clf))
        struct.pack_into('<I', data, payload_start(data) + 4, 0)
        with pytest.raises(ContainerError):
            parse_model(bytes(data))

    def test_rejects_inconsistent_cnn_shape(self, corpus):
        clf, _ = trained('cnn', corpus, epochs='1', conv_channels='2,2', fc_hidden='4')
        data = bytearray(dump_model(clf))
        struct.pack_into('<I', data, payload_start(data) + 12, 2)
        with pytest.raises(ContainerError):
            parse_model(bytes(data))


def test_labels_survive_round_trip(corpus):
    clf, _ = trained('knn', corpus)
    loaded = parse_model(dump_model(clf))
    assert set(int(v) for v in loaded.model.labels) == {int(Label.DRONE), int(Label.BIRD)}
