from .descriptor import HogConfig, compute_gradients, descriptor_length, hog_descriptor

__all__ = ['HogConfig', 'compute_gradients', 'descriptor_length', 'hog_descriptor']
