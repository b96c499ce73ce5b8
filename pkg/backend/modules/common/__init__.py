from .errors import AvdbError
from .utils import setup_logging, thread_count

__all__ = ['AvdbError', 'setup_logging', 'thread_count']
