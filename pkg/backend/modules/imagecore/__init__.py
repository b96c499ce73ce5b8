from .pnm import Image, decode_image, encode_image, read_image, write_image
from .transform import crop, normalize, resize_bilinear, to_grayscale

__all__ = [
    'Image', 'decode_image', 'encode_image', 'read_image', 'write_image',
    'crop', 'normalize', 'resize_bilinear', 'to_grayscale',
]
