import functools
import logging
from typing import Callable, TypeVar

from .exceptions import DropError, SimulationError

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable)


def drop_context(f: F) -> F:
    """
    Re-raises simulation errors from a per-drop function as ``DropError``
    carrying the drop index. The wrapped function takes the drop index as its
    second positional argument or as the ``drop_index`` keyword.
    """

    @functools.wraps(f)
    def g(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DropError:
            raise
        except SimulationError as e:
            drop_index = kwargs.get("drop_index", args[1] if len(args) > 1 else -1)
            logger.error(f"{f.__name__} failed for drop {drop_index}: {e}")
            raise DropError(drop_index, e) from e

    return g  # type: ignore
