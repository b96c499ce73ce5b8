"""
The drone/bird network: (conv -> ReLU -> 2x2 max-pool) x depth, then
fc1 -> ReLU -> fc2 -> softmax over two classes (index 0 = Drone,
index 1 = Bird).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from common.errors import BadTarget, SizeMismatch
from config import settings
from dataset import Label

from .layers import (
    ConvLayer,
    FcLayer,
    conv2d_backward,
    conv2d_forward,
    fc_backward,
    fc_forward,
    maxpool2x2,
    maxpool2x2_backward,
    relu,
    relu_backward,
    softmax,
)


@dataclass
class CnnModel:
    convs: List[ConvLayer]
    fc1: FcLayer
    fc2: FcLayer
    input_size: int

    def __post_init__(self):
        if self.fc2.weights.shape[0] != 2:
            raise ValueError("fc2 must have exactly two outputs")
        if self.input_size % (2 ** len(self.convs)):
            raise ValueError(
                f"input size {self.input_size} is not divisible by 2^{len(self.convs)}")
        if self.fc1.weights.shape[1] != self.flatten_dim:
            raise ValueError(
                f"fc1 expects {self.fc1.weights.shape[1]} inputs, conv stack yields {self.flatten_dim}")

    @property
    def conv_channels(self) -> Tuple[int, ...]:
        return tuple(layer.out_channels for layer in self.convs)

    @property
    def fc_hidden(self) -> int:
        return self.fc1.weights.shape[0]

    @property
    def flatten_dim(self) -> int:
        side = self.input_size // (2 ** len(self.convs))
        return self.convs[-1].out_channels * side * side

    def parameters(self) -> List[Tuple[str, np.ndarray]]:
        """(name, array) pairs in declaration order; the arrays are live references."""
        params = []
        for i, layer in enumerate(self.convs):
            params.append((f"conv{i + 1}.weights", layer.weights))
            params.append((f"conv{i + 1}.bias", layer.bias))
        params += [
            ('fc1.weights', self.fc1.weights), ('fc1.bias', self.fc1.bias),
            ('fc2.weights', self.fc2.weights), ('fc2.bias', self.fc2.bias),
        ]
        return params

    def copy(self) -> 'CnnModel':
        return CnnModel(
            [ConvLayer(c.weights.copy(), c.bias.copy()) for c in self.convs],
            FcLayer(self.fc1.weights.copy(), self.fc1.bias.copy()),
            FcLayer(self.fc2.weights.copy(), self.fc2.bias.copy()),
            self.input_size,
        )


@dataclass
class ForwardCache:
    inputs: List[np.ndarray] = field(default_factory=list)
    columns: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)
    argmaxes: List[np.ndarray] = field(default_factory=list)
    pooled_shape: Tuple[int, ...] = ()
    flat: np.ndarray = None
    hidden_pre: np.ndarray = None
    hidden: np.ndarray = None
    probs: np.ndarray = None
    single: bool = False


def init_model(input_size: int = settings.DEFAULT_IMAGE_SIZE,
               conv_channels: Sequence[int] = settings.CNN_CONV_CHANNELS,
               fc_hidden: int = settings.CNN_FC_HIDDEN,
               seed: int = settings.DEFAULT_SEED,
               kernel: int = settings.CNN_KERNEL) -> CnnModel:
    """He-normal weights, zero biases."""
    rng = np.random.Generator(np.random.PCG64(seed))
    convs = []
    in_ch = 1
    for out_ch in conv_channels:
        fan_in = in_ch * kernel * kernel
        weights = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(out_ch, in_ch, kernel, kernel))
        convs.append(ConvLayer(weights, np.zeros(out_ch)))
        in_ch = out_ch

    side = input_size // (2 ** len(conv_channels))
    flat = in_ch * side * side
    fc1 = FcLayer(rng.normal(0.0, np.sqrt(2.0 / flat), size=(fc_hidden, flat)), np.zeros(fc_hidden))
    fc2 = FcLayer(rng.normal(0.0, np.sqrt(2.0 / fc_hidden), size=(2, fc_hidden)), np.zeros(2))
    return CnnModel(convs, fc1, fc2, input_size)


def _as_batch(m: CnnModel, x) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 2
    batch = x[np.newaxis] if single else x
    if batch.ndim != 3 or batch.shape[1:] != (m.input_size, m.input_size):
        raise SizeMismatch(
            f"input shape {x.shape} does not match model input {m.input_size}x{m.input_size}")
    return batch[:, np.newaxis, :, :], single


def cnn_forward(m: CnnModel, x) -> Tuple[np.ndarray, ForwardCache]:
    """Forward pass for one (H, W) tensor or an (N, H, W) batch."""
    a, single = _as_batch(m, x)
    cache = ForwardCache(single=single)
    for layer in m.convs:
        cache.inputs.append(a)
        z, cols = conv2d_forward(a, layer, keep_columns=True)
        cache.columns.append(cols)
        cache.pre_activations.append(z)
        a, argmax = maxpool2x2(relu(z))
        cache.argmaxes.append(argmax)

    cache.pooled_shape = a.shape
    cache.flat = a.reshape(a.shape[0], -1)
    cache.hidden_pre = fc_forward(cache.flat, m.fc1)
    cache.hidden = relu(cache.hidden_pre)
    cache.probs = softmax(fc_forward(cache.hidden, m.fc2))
    probs = cache.probs[0] if single else cache.probs
    return probs, cache


def _targets(target, n: int) -> np.ndarray:
    t = np.atleast_1d(np.asarray(target)).astype(np.int64)
    if t.size != n or np.any((t < 0) | (t > 1)):
        raise BadTarget(f"targets must be {n} class indices in {{0, 1}}")
    return t


def cnn_backward(m: CnnModel, cache: ForwardCache, target) -> Dict[str, np.ndarray]:
    """Gradients of the mean cross-entropy over the cached batch.

    Keys and shapes match CnnModel.parameters().
    """
    n = cache.probs.shape[0]
    t = _targets(target, n)
    grads = {}

    dlogits = cache.probs.copy()
    dlogits[np.arange(n), t] -= 1.0
    dlogits /= n

    dhidden, grads['fc2.weights'], grads['fc2.bias'] = fc_backward(dlogits, cache.hidden, m.fc2)
    dhidden_pre = relu_backward(dhidden, cache.hidden_pre)
    dflat, grads['fc1.weights'], grads['fc1.bias'] = fc_backward(dhidden_pre, cache.flat, m.fc1)

    da = dflat.reshape(cache.pooled_shape)
    for i in reversed(range(len(m.convs))):
        dz = relu_backward(maxpool2x2_backward(da, cache.argmaxes[i]), cache.pre_activations[i])
        da, dw, db = conv2d_backward(dz, cache.inputs[i], m.convs[i],
                                     cols=cache.columns[i], input_grad=i > 0)
        grads[f"conv{i + 1}.weights"] = dw
        grads[f"conv{i + 1}.bias"] = db
    return grads


def cnn_loss(m: CnnModel, x, target) -> float:
    probs, cache = cnn_forward(m, x)
    t = _targets(target, cache.probs.shape[0])
    picked = cache.probs[np.arange(t.size), t]
    return float(np.mean(-np.log(np.maximum(picked, settings.CE_FLOOR))))


def cnn_predict(m: CnnModel, x) -> Label:
    probs, _ = cnn_forward(m, x)
    return Label.from_index(int(np.argmax(probs)))


def cnn_predict_many(m: CnnModel, xs, batch: int = 64) -> List[Label]:
    xs = np.asarray(xs, dtype=np.float64)
    labels = []
    for start in range(0, xs.shape[0], batch):
        probs, _ = cnn_forward(m, xs[start:start + batch])
        labels.extend(Label.from_index(i) for i in np.argmax(probs, axis=1))
    return labels


def cnn_drone_probability(m: CnnModel, x) -> float:
    probs, _ = cnn_forward(m, x)
    return float(probs[Label.DRONE.index])
