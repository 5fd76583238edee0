# ignore: F401

from . import __about__

from . import exceptions
from . import decorators
from . import util

from . import dirs
from . import schema
from . import models
from .models import ScenarioConfig
from . import config
from . import log

__all__ = [
    "__about__",
    # Classes
    "ScenarioConfig",
    # Modules
    "exceptions",
    "decorators",
    "util",
    "dirs",
    "schema",
    "models",
    "config",
    "log",
]
