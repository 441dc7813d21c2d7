"""
Provides logging utilities.

Inherit from `Loggable` to get a `log()` classmethod and a `logger` property
that return a logger named after the concrete class (`VolumeSim`,
`SepBitPlacement`, `ReplayRunner`, ...).
"""

from __future__ import annotations

import logging
import sys
from logging import handlers
from pathlib import Path

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# marks handlers installed by setup_logs so a second call replaces them
_HANDLER_TAG = "_lsgc_handler"


class Loggable:
    """Inherit from this class to get a class-named logger."""

    @staticmethod
    def setup_logs(
        log_path: Path | None = None,
        console_log_level: int = logging.INFO,
        file_log_level: int = logging.DEBUG,
        format: str = LOG_FORMAT,
        date_format: str = DATE_FORMAT,
    ) -> None:
        """
        Setup logging to console and, optionally, to a rotating file.
        Calling it again swaps the previously installed handlers instead of stacking them.

        :param log_path: Path to the log file; no file logging when None
        :param console_log_level: Log level for console logging
        :param file_log_level: Log level for file logging
        :param format: Log format
        :param date_format: Log date format
        """
        root_logger = logging.getLogger()
        root_logger.setLevel(min(console_log_level, file_log_level))
        for handler in list(root_logger.handlers):
            if getattr(handler, _HANDLER_TAG, False):
                root_logger.removeHandler(handler)
                handler.close()

        formatter = logging.Formatter(fmt=format, datefmt=date_format)

        if log_path is not None:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = handlers.RotatingFileHandler(
                log_path, maxBytes=1000000, backupCount=5
            )
            file_handler.setLevel(file_log_level)
            file_handler.setFormatter(formatter)
            setattr(file_handler, _HANDLER_TAG, True)
            root_logger.addHandler(file_handler)

        # console output goes to stderr so CSV written to stdout stays clean
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(console_log_level)
        console_handler.setFormatter(formatter)
        setattr(console_handler, _HANDLER_TAG, True)
        root_logger.addHandler(console_handler)

    @property
    def logger(self) -> logging.Logger:
        """Returns a logger for the concrete class."""
        return logging.getLogger(self.__class__.__name__)

    @classmethod
    def log(cls) -> logging.Logger:
        """Returns a logger for the concrete class."""
        return logging.getLogger(cls.__name__)
