__all__ = [
    "__title__",
    "__summary__",
    "__version__",
    "__license__",
]

__title__ = "tsp-sim"
__summary__ = "Simulator and closed-form analytics for time-shifted pilot channel estimation"
__version__ = "0.1.0"

__license__ = "MPL2"
