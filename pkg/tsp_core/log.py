import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Optional

from . import dirs

# drop workers log under their own process name
LOG_FORMAT = "%(asctime)s [%(levelname)-5s] %(processName)s: %(message)s  (%(name)s:%(lineno)s)"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
MAX_LOG_BYTES = 10 * 1024 * 1024
LOG_BACKUPS = 3


def _resolve_level(verbose: bool) -> int:
    level = logging.DEBUG if verbose else logging.INFO
    override = os.environ.get("LOG_LEVEL", "").upper()
    if override:
        named = logging.getLevelName(override)
        if isinstance(named, int):
            return named
        logging.getLogger(__name__).warning(f"Ignoring unknown LOG_LEVEL={override}")
    return level


def setup_logging(
    name: str,
    verbose: bool = False,
    log_stderr: bool = True,
    log_file: bool = False,
) -> Optional[str]:  # pragma: no cover
    """
    Configures the root logger for a ``simulate`` invocation and returns the
    path of the log file, if one was requested. ``LOG_LEVEL`` in the
    environment wins over ``verbose``.
    """
    root_logger = logging.getLogger()
    root_logger.handlers = []
    formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)

    path = None
    if log_stderr:
        stderr_handler = logging.StreamHandler(stream=sys.stderr)
        stderr_handler.setFormatter(formatter)
        root_logger.addHandler(stderr_handler)
    if log_file:
        path = log_file_path(name)
        fh = RotatingFileHandler(path, mode="a", maxBytes=MAX_LOG_BYTES, backupCount=LOG_BACKUPS)
        fh.setFormatter(formatter)
        root_logger.addHandler(fh)
    root_logger.setLevel(_resolve_level(verbose))

    def excepthook(type_, value, traceback):
        root_logger.critical("Unhandled exception", exc_info=(type_, value, traceback))
        if not log_stderr:
            sys.__excepthook__(type_, value, traceback)

    sys.excepthook = excepthook
    return path


def log_file_path(name: str, now: Optional[datetime] = None) -> str:
    # $LOG_DIR/simulate/simulate_2024-01-05T00-21-39.log
    stamp = (now or datetime.now()).replace(microsecond=0).isoformat().replace(":", "-")
    return os.path.join(dirs.get_log_dir(name), f"{name}_{stamp}.log")
