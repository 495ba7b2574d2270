"""Logging configuration and timing helpers for the logderiv CLI"""

import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "WARNING", logfile: Optional[str] = None) -> bool:
    """Send log records to stderr and, when given, to ``logfile``.

    Reports are written to stdout, so no handler ever targets it.
    Returns True if file logging is enabled, else False.
    """
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    file_error: Optional[OSError] = None

    if logfile:
        try:
            log_path = Path(logfile)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_path, encoding="utf-8"))
        except OSError as e:
            file_error = e

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    if file_error is not None:
        logging.warning(f"Cannot open log file {logfile}: {file_error}; using stderr only")
    return len(handlers) > 1


class Timer:
    """Wall-clock seconds since creation, frozen once stopped"""

    def __init__(self):
        self.started = time.perf_counter()
        self.stopped: Optional[float] = None

    def stop(self) -> float:
        self.stopped = time.perf_counter()
        return self.elapsed

    @property
    def elapsed(self) -> float:
        end = self.stopped if self.stopped is not None else time.perf_counter()
        return end - self.started


@contextmanager
def log_duration(label: str, level: int = logging.DEBUG) -> Iterator[Timer]:
    """Log how long the block took, also when it raises"""
    timer = Timer()
    try:
        yield timer
    finally:
        timer.stop()
        logging.log(level, f"{label} finished in {timer.elapsed:.3f}s")
