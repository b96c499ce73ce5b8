import os

from dotenv import load_dotenv

load_dotenv()

# Runtime environment
THREADS = int(os.environ.get('AVDB_THREADS', '0') or 0)
LOG_LEVEL = os.environ.get('AVDB_LOG_LEVEL', 'INFO')
LOG_FILE = os.environ.get('AVDB_LOG_FILE') or None
HOST = os.environ.get('AVDB_HOST', '127.0.0.1')
PORT = int(os.environ.get('AVDB_PORT', '5000'))

# Preprocessing
DEFAULT_IMAGE_SIZE = 64
IMAGE_SUFFIXES = ('.pgm', '.ppm', '.pnm')

# HOG defaults
HOG_CELL_SIZE = 8
HOG_BLOCK_SIZE = 2
HOG_BLOCK_STRIDE = 1
HOG_BINS = 9
HOG_CLIP = 0.2
HOG_EPS = 1e-12

# Split
TRAIN_FRACTION = 0.8
DEFAULT_SEED = 7

# KNN
KNN_K = 5

# SVM
SVM_LAMBDA = 1e-3
SVM_EPOCHS = 1000
SVM_LR0 = 100.0

# CNN
CNN_EPOCHS = 80
CNN_BATCH = 32
CNN_LR = 0.01
CNN_MOMENTUM = 0.9
CNN_CONV_CHANNELS = (8, 16, 32)
CNN_FC_HIDDEN = 128
CNN_KERNEL = 3
EARLY_STOP_DELTA = 1e-5
EARLY_STOP_PATIENCE = 5
CE_FLOOR = 1e-12

# Benchmark grid (depth x epochs)
BENCH_DEPTHS = (2, 3, 4)
BENCH_EPOCHS = (60, 80)
DEPTH_CHANNELS = {
    2: (8, 16),
    3: (8, 16, 32),
    4: (8, 16, 32, 64),
}

# Gradient check
GRADCHECK_STEP = 1e-5
GRADCHECK_TOLERANCE = 1e-4
GRADCHECK_SEED = 1234

# Synthetic corpus
NOISE_SIGMA_RANGE = (0.02, 0.08)
SHIFT_FRACTION = 0.15
SCALE_RANGE = (0.35, 0.70)
SUPERSAMPLE = 4

# Model container
CONTAINER_MAGIC = b'AVDB1\n'
CONTAINER_VERSION = 1
MODEL_KINDS = ('knn', 'svm', 'cnn')

# Evaluation CSV
CSV_HEADER = [
    'classifier', 'seed', 'params', 'tp', 'tn', 'fp', 'fn',
    'accuracy', 'sensitivity', 'precision', 'wall_time_ms',
]
UNDEFINED_TEXT = 'undefined'
