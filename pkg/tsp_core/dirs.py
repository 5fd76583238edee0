import os
import sys
from functools import wraps
from typing import Callable, Optional

import platformdirs

GetDirFunc = Callable[[Optional[str]], str]

APPNAME = "tsp-sim"


def ensure_path_exists(path: str) -> None:
    if not os.path.exists(path):
        os.makedirs(path)


def _ensure_returned_path_exists(f: GetDirFunc) -> GetDirFunc:
    @wraps(f)
    def wrapper(subpath: Optional[str] = None) -> str:
        path = f(subpath)
        ensure_path_exists(path)
        return path

    return wrapper


@_ensure_returned_path_exists
def get_data_dir(subpath: Optional[str] = None) -> str:
    data_dir = platformdirs.user_data_dir(APPNAME)
    return os.path.join(data_dir, subpath) if subpath else data_dir


@_ensure_returned_path_exists
def get_log_dir(subpath: Optional[str] = None) -> str:  # pragma: no cover
    # Linux: under the cache dir
    if sys.platform.startswith("linux"):
        log_dir = str(platformdirs.user_cache_path(APPNAME) / "log")
    else:
        log_dir = platformdirs.user_log_dir(APPNAME)
    return os.path.join(log_dir, subpath) if subpath else log_dir


def get_runs_dir(experiment: Optional[str] = None) -> str:
    """Default output directory for ``simulate run``."""
    return get_data_dir(os.path.join("runs", experiment) if experiment else "runs")
