import functools
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """
    One MS-BS channel estimate. ``terms`` holds the error contributions in
    the order they were separated (``self`` is the projection leftover of
    the target pilot, zero up to rounding); their sum equals ``error`` up to
    floating-point rounding.
    """

    estimate: np.ndarray
    channel: Optional[np.ndarray] = None
    terms: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def error(self) -> np.ndarray:
        if self.channel is None:
            raise ValueError("estimation error needs the true channel")
        return self.estimate - self.channel

    @property
    def mscee(self) -> float:
        return float(np.vdot(self.error, self.error).real / len(self.estimate))

    def term_sum(self) -> np.ndarray:
        return functools.reduce(np.add, self.terms.values(), np.zeros_like(self.estimate))

    def term_mscee(self, name: str) -> float:
        e = self.terms[name]
        return float(np.vdot(e, e).real / len(e))


@dataclass(frozen=True, eq=False)
class BsBsEstimate:
    """An estimate of one M x M BS-BS channel."""

    estimate: np.ndarray
    channel: Optional[np.ndarray] = None
    method: str = "ls"
    pilot_length: int = 0
    sparsity: Optional[int] = None
    terms: Dict[str, np.ndarray] = field(default_factory=dict)
    """Separated error parts (``co_slot`` and ``noise``) when available."""
    flagged: bool = False

    @property
    def error(self) -> np.ndarray:
        if self.channel is None:
            raise ValueError("estimation error needs the true channel")
        return self.estimate - self.channel

    @property
    def relative_error(self) -> float:
        return float(np.linalg.norm(self.error) / np.linalg.norm(self.channel))
