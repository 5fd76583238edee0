"""
Counter-based random streams. Every draw of a drop comes from its own
stream keyed by (seed, drop, link class, link id), so any single link can be
re-drawn in isolation and results don't depend on evaluation order.
"""

from functools import partial
from typing import Callable

import numpy as np

LINK_CLASSES = {
    "placement": 0,
    "shadow-ms-bs": 1,
    "shadow-bs-bs": 2,
    "shadow-ms-ms": 3,
    "ms-bs": 4,
    "bs-bs": 5,
    "ms-ms": 6,
    "data": 7,
    "noise": 8,
    "estimate-surrogate": 9,
    "bs-pilot": 10,
    "calibration": 11,
}

StreamFactory = Callable[..., np.random.Generator]


def stream(seed: int, drop: int, link_class: str, *link_id: int) -> np.random.Generator:
    try:
        class_id = LINK_CLASSES[link_class]
    except KeyError:
        raise ValueError(f"unknown link class: {link_class}") from None
    entropy = [seed, drop, class_id, *(int(i) for i in link_id)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def drop_streams(seed: int, drop: int) -> StreamFactory:
    """``rng_for(link_class, *link_id)`` bound to one drop."""
    return partial(stream, seed, drop)
