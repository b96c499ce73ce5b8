from .bench import BenchCell, cells_for_seed, params_text, rank_line, run_bench
from .commands import cmd_bench, cmd_detect, cmd_eval, cmd_gen, cmd_gradcheck, cmd_train
from .container import dump_model, load_model, parse_model, save_model
from .detector import Detection, classify_image, detect, sliding_windows
from .models import Classifier, train_classifier
from .runconfig import RunConfig, build_run_config, parse_config_text, parse_inline, read_config_source

__all__ = [
    'BenchCell', 'cells_for_seed', 'params_text', 'rank_line', 'run_bench',
    'cmd_bench', 'cmd_detect', 'cmd_eval', 'cmd_gen', 'cmd_gradcheck', 'cmd_train',
    'dump_model', 'load_model', 'parse_model', 'save_model',
    'Detection', 'classify_image', 'detect', 'sliding_windows',
    'Classifier', 'train_classifier',
    'RunConfig', 'build_run_config', 'parse_config_text', 'parse_inline', 'read_config_source',
]
