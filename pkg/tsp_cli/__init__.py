from . import output

__all__ = ["output"]
