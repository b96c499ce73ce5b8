import logging
from pathlib import Path
from typing import Optional

from config import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Setup logging configuration"""
    handlers = [logging.StreamHandler()]

    log_file = log_file or settings.LOG_FILE
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    return logging.getLogger('avdb')


def thread_count(override: Optional[int] = None) -> int:
    """Worker threads for parallel stages; 0 means run serially."""
    value = settings.THREADS if override is None else override
    return max(0, int(value))
