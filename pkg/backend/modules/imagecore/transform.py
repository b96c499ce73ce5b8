import numpy as np

from common.errors import NotGrayscale

from .pnm import Image

# ITU-R BT.601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])


def _round_clamp(values: np.ndarray) -> np.ndarray:
    """Round half up and clamp to the 8-bit range."""
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def to_grayscale(img: Image) -> Image:
    if img.channels == 1:
        return img
    rgb = img.data.astype(np.float64)
    gray = rgb[:, :, 0] * _LUMA[0] + rgb[:, :, 1] * _LUMA[1] + rgb[:, :, 2] * _LUMA[2]
    return Image(_round_clamp(gray)[:, :, np.newaxis])


def _source_coords(out_len: int, in_len: int):
    """Half-pixel-center mapping of output samples onto the input grid."""
    src = (np.arange(out_len, dtype=np.float64) + 0.5) * (in_len / out_len) - 0.5
    src = np.clip(src, 0.0, in_len - 1)
    lo = np.floor(src).astype(np.int64)
    hi = np.minimum(lo + 1, in_len - 1)
    return lo, hi, src - lo


def resize_bilinear(img: Image, out_w: int, out_h: int) -> Image:
    if out_w < 1 or out_h < 1:
        raise ValueError("output dimensions must be at least 1x1")
    if (out_w, out_h) == (img.width, img.height):
        return Image(img.data.copy())

    x0, x1, fx = _source_coords(out_w, img.width)
    y0, y1, fy = _source_coords(out_h, img.height)
    src = img.data.astype(np.float64)

    fx = fx[np.newaxis, :, np.newaxis]
    fy = fy[:, np.newaxis, np.newaxis]
    top = src[y0][:, x0] + (src[y0][:, x1] - src[y0][:, x0]) * fx
    bottom = src[y1][:, x0] + (src[y1][:, x1] - src[y1][:, x0]) * fx
    return Image(_round_clamp(top + (bottom - top) * fy))


def normalize(img: Image) -> np.ndarray:
    """Map a 1-channel image onto a (height, width) float tensor in [0, 1]."""
    if img.channels != 1:
        raise NotGrayscale(f"expected 1 channel, got {img.channels}")
    return img.data[:, :, 0].astype(np.float64) / 255.0


def crop(img: Image, x: int, y: int, w: int, h: int) -> Image:
    if x < 0 or y < 0 or w < 1 or h < 1 or x + w > img.width or y + h > img.height:
        raise ValueError(f"crop window ({x}, {y}, {w}, {h}) outside {img.width}x{img.height} image")
    return Image(img.data[y:y + h, x:x + w].copy())
