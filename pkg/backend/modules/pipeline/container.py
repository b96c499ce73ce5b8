"""
Model container files.

Layout:
    AVDB1\\n
    kind <knn|svm|cnn>\\n
    version <n>\\n
    config <count>\\n
    <count lines of `key = value`>
    payload <byte count>\\n
    <payload>

Payloads are little-endian: integer headers packed with struct, real
arrays as IEEE-754 float64.
"""

import io
import struct
from pathlib import Path
from typing import Union

import numpy as np

from cnn import CnnModel, ConvLayer, FcLayer
from common.errors import ConfigError, ContainerError
from config import settings
from dataset import Label
from knn import KnnModel
from svm import SvmModel

from .models import Classifier
from .runconfig import run_config_from_pairs

_F64 = np.dtype('<f8')


def _floats(values: np.ndarray) -> bytes:
    return np.ascontiguousarray(values, dtype=_F64).tobytes()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int) -> bytes:
        if count < 0 or self.pos + count > len(self.data):
            raise ContainerError("model payload is truncated")
        chunk = self.data[self.pos:self.pos + count]
        self.pos += count
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def floats(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(count * 8), dtype=_F64).astype(np.float64)

    def done(self):
        if self.pos != len(self.data):
            raise ContainerError("unexpected trailing bytes in model payload")


def encode_knn(m: KnnModel) -> bytes:
    out = [struct.pack('<III', m.k, m.feature_dim, len(m))]
    for sample_id, label in zip(m.ids, m.labels):
        encoded = sample_id.encode('utf-8')
        out.append(struct.pack('<H', len(encoded)) + encoded + struct.pack('<b', int(label)))
    out.append(_floats(m.features))
    return b''.join(out)


def decode_knn(payload: bytes) -> KnnModel:
    r = _Reader(payload)
    k, dim, n = r.unpack('<III')
    ids, labels = [], []
    for _ in range(n):
        (length,) = r.unpack('<H')
        ids.append(r.take(length).decode('utf-8'))
        (value,) = r.unpack('<b')
        if value not in (Label.DRONE, Label.BIRD):
            raise ContainerError(f"invalid label byte {value} in knn payload")
        labels.append(Label(value))
    features = r.floats(n * dim).reshape(n, dim)
    r.done()
    return KnnModel(k, features, np.array([int(v) for v in labels], dtype=np.int64), ids)


def encode_svm(m: SvmModel) -> bytes:
    return struct.pack('<Id', m.dim, m.b) + _floats(m.w)


def decode_svm(payload: bytes) -> SvmModel:
    r = _Reader(payload)
    dim, b = r.unpack('<Id')
    w = r.floats(dim)
    r.done()
    return SvmModel(w, b)


def encode_cnn(m: CnnModel) -> bytes:
    kernel = m.convs[0].weights.shape[2]
    channels = m.conv_channels
    header = struct.pack('<IIII', m.input_size, len(channels), m.fc_hidden, kernel)
    header += struct.pack(f'<{len(channels)}I', *channels)
    return header + b''.join(_floats(p) for _, p in m.parameters())


def decode_cnn(payload: bytes) -> CnnModel:
    r = _Reader(payload)
    input_size, depth, fc_hidden, kernel = r.unpack('<IIII')
    if depth < 1:
        raise ContainerError("cnn payload declares no conv layers")
    channels = r.unpack(f'<{depth}I')

    convs = []
    in_ch = 1
    for out_ch in channels:
        weights = r.floats(out_ch * in_ch * kernel * kernel).reshape(out_ch, in_ch, kernel, kernel)
        convs.append(ConvLayer(weights, r.floats(out_ch)))
        in_ch = out_ch
    side = input_size // (2 ** depth)
    flat = in_ch * side * side
    fc1 = FcLayer(r.floats(fc_hidden * flat).reshape(fc_hidden, flat), r.floats(fc_hidden))
    fc2 = FcLayer(r.floats(2 * fc_hidden).reshape(2, fc_hidden), r.floats(2))
    r.done()
    return CnnModel(convs, fc1, fc2, input_size)


_ENCODERS = {'knn': encode_knn, 'svm': encode_svm, 'cnn': encode_cnn}
_DECODERS = {'knn': decode_knn, 'svm': decode_svm, 'cnn': decode_cnn}


def dump_model(clf: Classifier) -> bytes:
    if clf.kind not in _ENCODERS:
        raise ContainerError(f"unknown model kind: {clf.kind}")
    payload = _ENCODERS[clf.kind](clf.model)
    pairs = clf.config.pairs()
    lines = [
        f"kind {clf.kind}",
        f"version {settings.CONTAINER_VERSION}",
        f"config {len(pairs)}",
    ] + [f"{key} = {value}" for key, value in pairs] + [f"payload {len(payload)}"]
    header = ''.join(line + '\n' for line in lines).encode('utf-8')
    return settings.CONTAINER_MAGIC + header + payload


def _field(stream: io.BytesIO, name: str) -> str:
    line = stream.readline()
    if not line.endswith(b'\n'):
        raise ContainerError(f"truncated container header (expected '{name}')")
    text = line[:-1].decode('utf-8', errors='replace')
    prefix = name + ' '
    if not text.startswith(prefix):
        raise ContainerError(f"expected '{name}' in container header, got {text!r}")
    return text[len(prefix):]


def _int_field(stream: io.BytesIO, name: str) -> int:
    text = _field(stream, name)
    if not text.isdigit():
        raise ContainerError(f"invalid {name}: {text!r}")
    return int(text)


def parse_model(data: bytes) -> Classifier:
    magic = settings.CONTAINER_MAGIC
    if not data.startswith(magic):
        raise ContainerError("not a model file (bad magic)")
    stream = io.BytesIO(data[len(magic):])

    kind = _field(stream, 'kind')
    if kind not in _DECODERS:
        raise ContainerError(f"unknown model kind: {kind}")
    version = _int_field(stream, 'version')
    if version != settings.CONTAINER_VERSION:
        raise ContainerError(f"unsupported container version {version}")

    pairs = []
    for _ in range(_int_field(stream, 'config')):
        line = stream.readline().decode('utf-8', errors='replace').rstrip('\n')
        if ' = ' not in line:
            raise ContainerError(f"bad config line in container: {line!r}")
        key, value = line.split(' = ', 1)
        pairs.append((key, value))
    try:
        config = run_config_from_pairs(pairs)
    except ConfigError as e:
        raise ContainerError(f"stored config is invalid: {e}") from e
    if config.classifier != kind:
        raise ContainerError("stored config does not match the model kind")

    size = _int_field(stream, 'payload')
    payload = stream.read()
    if len(payload) != size:
        raise ContainerError(f"payload is {len(payload)} bytes, header says {size}")
    try:
        model = _DECODERS[kind](payload)
    except (ValueError, IndexError) as e:
        raise ContainerError(f"inconsistent {kind} payload: {e}") from e
    return Classifier(kind, model, config)


def save_model(path: Union[str, Path], clf: Classifier) -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dump_model(clf))
    return path


def load_model(path: Union[str, Path]) -> Classifier:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ContainerError(f"cannot read model file {path}: {e}") from e
    return parse_model(data)
