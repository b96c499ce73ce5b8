"""
Portable graymap/pixmap (PGM/PPM) reading and writing.

Only 8-bit images (maxval 255) are accepted. Plain (P2/P3) and binary
(P5/P6) variants are both supported.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from common.errors import MalformedImage, UnsupportedFormat

_CHANNELS = {b'P2': 1, b'P5': 1, b'P3': 3, b'P6': 3}
_BINARY = {b'P5', b'P6'}
_OTHER_NETPBM = {b'P1', b'P4', b'P7'}
_WHITESPACE = b' \t\r\n\x0b\x0c'
_PLAIN_LINE_LIMIT = 70


@dataclass(eq=False)
class Image:
    """Decoded 8-bit raster stored as a (height, width, channels) uint8 array."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim == 2:
            data = data[:, :, np.newaxis]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ValueError(f"image array must be HxWx1 or HxWx3, got {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        self.data = np.ascontiguousarray(data, dtype=np.uint8)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def pixels(self) -> List[int]:
        """Row-major, channel-interleaved pixel values."""
        return self.data.reshape(-1).tolist()

    @classmethod
    def from_pixels(cls, width: int, height: int, channels: int, pixels) -> 'Image':
        values = np.asarray(pixels, dtype=np.int64)
        if values.size != width * height * channels:
            raise ValueError("pixel count does not match width x height x channels")
        if values.size and (values.min() < 0 or values.max() > 255):
            raise ValueError("pixel values must be 8-bit")
        return cls(values.astype(np.uint8).reshape(height, width, channels))

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"Image(width={self.width}, height={self.height}, channels={self.channels})"


def _read_tokens(data: bytes, count: int, pos: int) -> Tuple[List[bytes], int]:
    """Read header tokens, skipping whitespace and '#' comments."""
    tokens = []
    size = len(data)
    while len(tokens) < count:
        while pos < size and data[pos] in _WHITESPACE:
            pos += 1
        if pos < size and data[pos:pos + 1] == b'#':
            while pos < size and data[pos:pos + 1] not in (b'\n', b'\r'):
                pos += 1
            continue
        if pos >= size:
            raise MalformedImage("truncated header")
        start = pos
        while pos < size and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b'#':
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _parse_int(token: bytes, what: str) -> int:
    if not token.isdigit():
        raise MalformedImage(f"invalid {what}: {token!r}")
    return int(token)


def decode_image(data: bytes) -> Image:
    """Decode a PGM/PPM byte string into an Image."""
    if not data or len(data) < 2:
        raise MalformedImage("empty or truncated input")

    magic = bytes(data[:2])
    if magic in _OTHER_NETPBM:
        raise UnsupportedFormat(f"netpbm variant {magic.decode()} is not supported")
    if magic not in _CHANNELS:
        raise MalformedImage("bad magic number")

    channels = _CHANNELS[magic]
    (w_tok, h_tok, max_tok), pos = _read_tokens(data, 3, 2)
    width = _parse_int(w_tok, 'width')
    height = _parse_int(h_tok, 'height')
    maxval = _parse_int(max_tok, 'maxval')
    if width < 1 or height < 1:
        raise MalformedImage("image dimensions must be positive")
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval} is not supported (8-bit 255 only)")

    count = width * height * channels
    if magic in _BINARY:
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise MalformedImage("missing raster separator")
        raster = data[pos + 1:pos + 1 + count]
        if len(raster) < count:
            raise MalformedImage(f"truncated raster: expected {count} bytes, got {len(raster)}")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        tokens, _ = _read_tokens(data, count, pos) if count else ([], pos)
        values = np.array([_parse_int(t, 'sample') for t in tokens], dtype=np.int64)
        if values.size and values.max() > maxval:
            raise MalformedImage("sample exceeds maxval")
        values = values.astype(np.uint8)

    return Image(values.reshape(height, width, channels).copy())


def encode_image(img: Image, binary: bool = True) -> bytes:
    """Encode an Image as PGM (1 channel) or PPM (3 channels)."""
    gray = img.channels == 1
    if binary:
        magic = b'P5' if gray else b'P6'
        header = b'%s\n%d %d\n255\n' % (magic, img.width, img.height)
        return header + img.data.tobytes()

    magic = b'P2' if gray else b'P3'
    lines = [b'%s' % magic, b'%d %d' % (img.width, img.height), b'255']
    current = b''
    for value in img.data.reshape(-1).tolist():
        token = str(value).encode()
        if current and len(current) + 1 + len(token) > _PLAIN_LINE_LIMIT:
            lines.append(current)
            current = token
        else:
            current = current + b' ' + token if current else token
    if current:
        lines.append(current)
    return b'\n'.join(lines) + b'\n'


def read_image(path: Union[str, Path]) -> Image:
    return decode_image(Path(path).read_bytes())


def write_image(path: Union[str, Path], img: Image, binary: bool = True) -> Path:
    path = Path(path)
    path.write_bytes(encode_image(img, binary=binary))
    return path
