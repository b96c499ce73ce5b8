"""
Layer primitives with hand-derived backward passes.

Tensors are channel-major. Functions accept a single sample (C, H, W) or a
batch (N, C, H, W); batched inputs give batched outputs.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from common.errors import BadTarget, ChannelMismatch, DimMismatch, OddDims
from config import settings


@dataclass
class ConvLayer:
    """weights: (out_ch, in_ch, kh, kw); bias: (out_ch,). Stride 1, zero 'same' padding."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64).reshape(-1)
        if self.weights.ndim != 4:
            raise ValueError("conv weights must be 4-D [out][in][kh][kw]")
        kh, kw = self.weights.shape[2:]
        if kh % 2 == 0 or kw % 2 == 0:
            raise ValueError("conv kernels must have odd height and width")
        if self.bias.size != self.weights.shape[0]:
            raise ValueError("conv bias must have one value per output channel")

    @property
    def in_channels(self) -> int:
        return self.weights.shape[1]

    @property
    def out_channels(self) -> int:
        return self.weights.shape[0]


@dataclass
class FcLayer:
    """weights: (out, in); bias: (out,) (the perceptron threshold)."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64).reshape(-1)
        if self.weights.ndim != 2 or self.bias.size != self.weights.shape[0]:
            raise ValueError("fc weights must be (out, in) with one bias per output")


def _batched(x: np.ndarray):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 3:
        return x[np.newaxis], True
    if x.ndim != 4:
        raise DimMismatch(f"expected (C, H, W) or (N, C, H, W), got shape {x.shape}")
    return x, False


def _columns(x: np.ndarray, kh: int, kw: int) -> np.ndarray:
    """im2col: (N, C, H, W) -> (N*H*W, C*kh*kw) with zero 'same' padding."""
    n, c, h, w = x.shape
    padded = np.pad(x, ((0, 0), (0, 0), (kh // 2, kh // 2), (kw // 2, kw // 2)))
    windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))  # N, C, H, W, kh, kw
    return windows.transpose(0, 2, 3, 1, 4, 5).reshape(n * h * w, c * kh * kw)


def _conv(xb: np.ndarray, layer: ConvLayer):
    n, _, h, w = xb.shape
    kh, kw = layer.weights.shape[2:]
    cols = _columns(xb, kh, kw)
    out = cols @ layer.weights.reshape(layer.weights.shape[0], -1).T + layer.bias
    out = out.reshape(n, h, w, layer.weights.shape[0]).transpose(0, 3, 1, 2)
    return np.ascontiguousarray(out), cols


def conv2d_forward(x: np.ndarray, layer: ConvLayer, keep_columns: bool = False):
    """out[o][y][x] = b[o] + sum_c sum_u sum_v k[o][c][u][v] * in[c][y+u-kh/2][x+v-kw/2]

    With keep_columns the im2col matrix is returned too, for conv2d_backward.
    """
    xb, single = _batched(x)
    if xb.shape[1] != layer.in_channels:
        raise ChannelMismatch(f"input has {xb.shape[1]} channels, layer expects {layer.in_channels}")
    out, cols = _conv(xb, layer)
    if single:
        out = out[0]
    return (out, cols) if keep_columns else out


def conv2d_backward(dout: np.ndarray, x: np.ndarray, layer: ConvLayer,
                    cols: np.ndarray = None, input_grad: bool = True):
    """Gradients (dx, dweights, dbias) of a conv layer for a batch.

    dx is None when input_grad is False (the first layer needs no input gradient).
    """
    n, c, h, w = x.shape
    kh, kw = layer.weights.shape[2:]
    out_ch = layer.out_channels
    dmat = dout.transpose(0, 2, 3, 1).reshape(n * h * w, out_ch)

    if cols is None:
        cols = _columns(x, kh, kw)
    dweights = (dmat.T @ cols).reshape(layer.weights.shape)
    dbias = dmat.sum(axis=0)
    if not input_grad:
        return None, dweights, dbias

    # 'same' correlation of dout with the kernels flipped and in/out swapped
    flipped = layer.weights[:, :, ::-1, ::-1].transpose(1, 0, 2, 3).reshape(c, -1)
    dx = _columns(np.ascontiguousarray(dout), kh, kw) @ flipped.T
    dx = dx.reshape(n, h, w, c).transpose(0, 3, 1, 2)
    return np.ascontiguousarray(dx), dweights, dbias


def maxpool2x2(x: np.ndarray):
    """Non-overlapping 2x2 max pooling.

    Returns (pooled, argmax) where argmax holds the row-major position
    (0..3) of the winner inside each window; the first maximum wins ties.
    """
    xb, single = _batched(x)
    n, c, h, w = xb.shape
    if h % 2 or w % 2:
        raise OddDims(f"max pooling needs even height and width, got {h}x{w}")
    windows = xb.reshape(n, c, h // 2, 2, w // 2, 2).transpose(0, 1, 2, 4, 3, 5)
    windows = windows.reshape(n, c, h // 2, w // 2, 4)
    argmax = np.argmax(windows, axis=-1)
    pooled = np.take_along_axis(windows, argmax[..., np.newaxis], axis=-1)[..., 0]
    if single:
        return pooled[0], argmax[0]
    return pooled, argmax


def maxpool2x2_backward(dout: np.ndarray, argmax: np.ndarray) -> np.ndarray:
    n, c, hh, wh = dout.shape
    routed = np.zeros((n, c, hh, wh, 4))
    np.put_along_axis(routed, argmax[..., np.newaxis], dout[..., np.newaxis], axis=-1)
    routed = routed.reshape(n, c, hh, wh, 2, 2).transpose(0, 1, 2, 4, 3, 5)
    return routed.reshape(n, c, hh * 2, wh * 2)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def relu_backward(dout: np.ndarray, pre_activation: np.ndarray) -> np.ndarray:
    return dout * (pre_activation > 0)


def fc_forward(x: np.ndarray, layer: FcLayer) -> np.ndarray:
    """out = W x + theta, for a vector or a (N, in) batch."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != layer.weights.shape[1]:
        raise DimMismatch(f"input has {x.shape[-1]} values, layer expects {layer.weights.shape[1]}")
    return x @ layer.weights.T + layer.bias


def fc_backward(dout: np.ndarray, x: np.ndarray, layer: FcLayer):
    """Gradients (dx, dweights, dbias) for a (N, in) batch."""
    return dout @ layer.weights, dout.T @ x, dout.sum(axis=0)


def softmax(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.size == 0:
        raise ValueError("softmax of an empty vector")
    shifted = np.exp(z - np.max(z, axis=-1, keepdims=True))
    return shifted / np.sum(shifted, axis=-1, keepdims=True)


def cross_entropy(p: np.ndarray, target: int) -> float:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if not 0 <= int(target) < p.size or int(target) != target:
        raise BadTarget(f"target {target} outside 0..{p.size - 1}")
    return float(-np.log(max(p[int(target)], settings.CE_FLOOR)))
