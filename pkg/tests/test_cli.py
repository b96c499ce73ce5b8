import numpy as np
import pytest

import main
from cnn import cnn_backward
from common.errors import DatasetError
from config import settings
from dataset import Dataset, Label, LabeledSample, read_manifest, split_train_test
from metrics import read_csv_rows
from pipeline import build_run_config, cells_for_seed, cmd_gradcheck, load_model, save_model
from pipeline.bench import run_cell
from pipeline.commands import load_for

from conftest import write_gray

CNN_SMALL = 'epochs=2,conv_channels=2,2,fc_hidden=4'


def run(*argv):
    return main.main(['--threads', '0', *map(str, argv)])


class TestGen:
    def test_writes_images_and_manifest(self, tmp_path, capsys):
        out = tmp_path / 'corpus'
        assert run('gen', '--out', out, '--count', 3, '--size', 32, '--seed', 5) == 0
        assert len(list(out.glob('*/*.pgm'))) == 6
        assert len(read_manifest(out)) == 6
        assert 'wrote 6 images' in capsys.readouterr().out

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / 'a', tmp_path / 'b'
        run('gen', '--out', a, '--count', 2, '--size', 32, '--seed', 9)
        run('gen', '--out', b, '--count', 2, '--size', 32, '--seed', 9)
        for path in sorted(a.rglob('*.*')):
            assert path.read_bytes() == (b / path.relative_to(a)).read_bytes()

    def test_zero_count_is_a_usage_error(self, tmp_path, capsys):
        assert run('gen', '--out', tmp_path, '--count', 0) == 2
        assert '--count' in capsys.readouterr().err


class TestTrain:
    def test_knn_stores_training_split(self, five_each, tmp_path, capsys):
        model = tmp_path / 'knn.avdb'
        assert run('train', '--model', 'knn', '--data', five_each, '--out', model) == 0
        assert len(load_model(model).model) == 8
        assert 'saved knn model' in capsys.readouterr().out

    def test_cnn_prints_one_line_per_epoch(self, five_each, tmp_path, capsys):
        model = tmp_path / 'cnn.avdb'
        assert run('train', '--model', 'cnn', '--data', five_each, '--out', model,
                   '--config', CNN_SMALL) == 0
        lines = [l for l in capsys.readouterr().out.splitlines() if l.startswith('epoch ')]
        assert len(lines) == 2
        assert lines[0].startswith('epoch 1/2 loss=')
        assert load_model(model).model.conv_channels == (2, 2)

    def test_corrupt_image(self, five_each, tmp_path, capsys):
        (five_each / 'bird' / 'broken.pgm').write_bytes(b'P5\n32 32\n255\n\x00\x01')
        assert run('train', '--model', 'svm', '--data', five_each, '--out', tmp_path / 'm') == 3
        assert 'broken.pgm' in capsys.readouterr().err

    def test_missing_class_folder(self, tmp_path):
        write_gray(tmp_path / 'only' / 'drone' / 'a.pgm', np.zeros((8, 8)))
        assert run('train', '--model', 'knn', '--data', tmp_path / 'only', '--out', tmp_path / 'm') == 3

    def test_unknown_config_key(self, five_each, tmp_path):
        assert run('train', '--model', 'svm', '--data', five_each, '--out', tmp_path / 'm',
                   '--set', 'colour=red') == 4

    def test_k_larger_than_training_set(self, five_each, tmp_path):
        assert run('train', '--model', 'knn', '--data', five_each, '--out', tmp_path / 'm',
                   '--set', 'k=9') == 4


class TestEval:
    @pytest.fixture
    def knn_model(self, five_each, tmp_path):
        model = tmp_path / 'knn.avdb'
        run('train', '--model', 'knn', '--data', five_each, '--out', model, '--set', 'k=3')
        return model

    def test_appends_csv_row(self, knn_model, five_each, tmp_path, capsys):
        csv_path = tmp_path / 'results.csv'
        assert run('eval', '--model-file', knn_model, '--data', five_each, '--csv', csv_path) == 0
        rows = read_csv_rows(csv_path)
        assert len(rows) == 1
        row = rows[0]
        assert row.classifier == 'knn' and row.params == 'k=3;features=hog'
        assert row.cm.total == 2
        out = capsys.readouterr().out
        assert f"tp={row.cm.tp} tn={row.cm.tn} fp={row.cm.fp} fn={row.cm.fn}" in out
        assert 'misclassified: ' in out

    def test_second_run_keeps_one_header(self, knn_model, five_each, tmp_path):
        csv_path = tmp_path / 'results.csv'
        for _ in range(2):
            run('eval', '--model-file', knn_model, '--data', five_each, '--csv', csv_path)
        lines = csv_path.read_text().splitlines()
        assert lines[0].startswith('classifier,seed,params')
        assert len(lines) == 3

    def test_wrong_image_size(self, knn_model, five_each, tmp_path):
        assert run('eval', '--model-file', knn_model, '--data', five_each,
                   '--csv', tmp_path / 'r.csv', '--image-size', 32) == 5
        assert not (tmp_path / 'r.csv').exists()

    def test_corrupt_model_file(self, five_each, tmp_path):
        model = tmp_path / 'junk.avdb'
        model.write_bytes(b'not a model')
        assert run('eval', '--model-file', model, '--data', five_each, '--csv', tmp_path / 'r.csv') == 5

    def test_bad_label_byte_in_model(self, knn_model, five_each, tmp_path, capsys):
        data = bytearray(knn_model.read_bytes())
        payload = data.index(b'\n', data.index(b'\npayload ') + 1) + 1
        id_length = int.from_bytes(data[payload + 12:payload + 14], 'little')
        data[payload + 14 + id_length] = 0
        knn_model.write_bytes(bytes(data))
        assert run('eval', '--model-file', knn_model, '--data', five_each, '--csv', tmp_path / 'r.csv') == 5
        assert 'label byte' in capsys.readouterr().err

    def test_evaluated_ids_were_never_trained_on(self, knn_model, five_each, tmp_path, capsys):
        clf = load_model(knn_model)
        trained_ids = set(clf.model.ids)
        _, test = split_train_test(load_for(clf.config, str(five_each)), clf.config.split)
        assert len(test) == 2 and not trained_ids & set(test.ids)

        capsys.readouterr()
        assert run('eval', '--model-file', knn_model, '--data', five_each, '--csv', tmp_path / 'r.csv') == 0
        line = [l for l in capsys.readouterr().out.splitlines() if l.startswith('misclassified: ')][0]
        missed = set(line.split(': ', 1)[1].split()) - {'-'}
        assert missed <= set(test.ids)
        assert not missed & trained_ids

    def test_training_id_in_test_split_is_rejected(self, knn_model, five_each, tmp_path, capsys):
        clf = load_model(knn_model)
        _, test = split_train_test(load_for(clf.config, str(five_each)), clf.config.split)
        clf.model.ids[0] = test.ids[0]
        save_model(knn_model, clf)
        assert run('eval', '--model-file', knn_model, '--data', five_each, '--csv', tmp_path / 'r.csv') == 3
        assert 'leakage' in capsys.readouterr().err
        assert not (tmp_path / 'r.csv').exists()


class TestGradcheck:
    def test_passes(self, capsys):
        assert run('gradcheck') == 0
        assert capsys.readouterr().out.startswith('checked 162 parameters')

    def test_broken_backward_fails(self, capsys):
        def skewed(m, cache, target):
            grads = cnn_backward(m, cache, target)
            grads['fc1.bias'] = grads['fc1.bias'] + 0.5
            return grads

        assert cmd_gradcheck(backward=skewed) == 1
        assert 'gradient check failed: fc1.bias[' in capsys.readouterr().out


class TestBench:
    @pytest.fixture
    def small_grid(self, monkeypatch):
        monkeypatch.setattr(settings, 'BENCH_DEPTHS', (2,))
        monkeypatch.setattr(settings, 'BENCH_EPOCHS', (1, 2))
        monkeypatch.setattr(settings, 'DEPTH_CHANNELS', {2: (2, 2)})

    def bench(self, data, csv_path, threads=0):
        return main.main(['--threads', str(threads), 'bench', '--data', str(data), '--seeds', '2',
                          '--csv', str(csv_path), '--set', 'image_size=32',
                          '--set', 'cnn.epochs=2,cnn.conv_channels=2,2,cnn.fc_hidden=4'])

    def test_rows_and_ranking(self, small_grid, five_each, tmp_path, capsys):
        csv_path = tmp_path / 'bench.csv'
        assert self.bench(five_each, csv_path) == 0
        rows = read_csv_rows(csv_path)
        assert [r.classifier for r in rows] == ['knn', 'svm', 'cnn', 'cnn-grid', 'cnn-grid'] * 2
        assert [r.seed for r in rows] == [7] * 5 + [8] * 5
        assert [r.params for r in rows[3:5]] == ['depth=2;epochs=1', 'depth=2;epochs=2']
        assert all(r.cm.total == 2 for r in rows)
        out = capsys.readouterr().out
        assert 'seed=7 rank=' in out and 'seed=8 rank=' in out

    def test_threads_do_not_change_results(self, small_grid, five_each, tmp_path):
        serial, pooled = tmp_path / 'serial.csv', tmp_path / 'pooled.csv'
        self.bench(five_each, serial, threads=0)
        self.bench(five_each, pooled, threads=3)
        assert [r.metric_values() for r in read_csv_rows(serial)] == \
            [r.metric_values() for r in read_csv_rows(pooled)]

    def test_cell_refuses_overlapping_split(self):
        base = build_run_config('svm', {'image_size': '32'})
        knn = cells_for_seed(base, 7)[0]
        samples = [LabeledSample(f"s{i}", np.full(2, float(i)), Label.DRONE if i % 2 else Label.BIRD)
                   for i in range(6)]
        train = Dataset(samples[:4])
        test = Dataset(samples[3:])
        with pytest.raises(DatasetError, match='s3'):
            run_cell(knn, {knn.config.feature_mode: (train, test)})

    def test_zero_seeds(self, five_each, tmp_path):
        assert main.main(['bench', '--data', str(five_each), '--seeds', '0',
                          '--csv', str(tmp_path / 'b.csv')]) == 2

    @pytest.mark.slow
    def test_default_grid_on_synthetic_corpus(self, synthetic_corpus, tmp_path):
        csv_path = tmp_path / 'bench.csv'
        assert main.main(['bench', '--data', str(synthetic_corpus), '--csv', str(csv_path),
                          '--set', 'image_size=32']) == 0
        rows = read_csv_rows(csv_path)
        assert len(rows) == 3 + len(settings.BENCH_DEPTHS) * len(settings.BENCH_EPOCHS)


class TestDetect:
    def test_reports_windows(self, five_each, tmp_path, capsys):
        model = tmp_path / 'knn.avdb'
        run('train', '--model', 'knn', '--data', five_each, '--out', model,
            '--set', 'image_size=32,k=3')
        frame = np.zeros((32, 64), dtype=np.uint8)
        frame[8:24, 8:24] = 230
        write_gray(tmp_path / 'frame.pgm', frame)
        capsys.readouterr()
        assert run('detect', '--model-file', model, '--image', tmp_path / 'frame.pgm',
                   '--stride', 32, '--all') == 0
        lines = capsys.readouterr().out.splitlines()
        assert [l.split(' label=')[0] for l in lines] == ['x=0 y=0 w=32 h=32', 'x=32 y=0 w=32 h=32']

    def test_window_larger_than_frame(self, five_each, tmp_path):
        model = tmp_path / 'knn.avdb'
        run('train', '--model', 'knn', '--data', five_each, '--out', model, '--set', 'k=3')
        write_gray(tmp_path / 'small.pgm', np.zeros((16, 16)))
        assert run('detect', '--model-file', model, '--image', tmp_path / 'small.pgm') == 4
