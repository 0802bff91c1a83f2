"""Uniform momentum grids and their conjugate position grids."""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidBoundsError

logger = logging.getLogger(__name__)

DEFAULT_K_MIN = -8.0
DEFAULT_K_MAX = 8.0
DEFAULT_N = 4096


@dataclass(frozen=True)
class XGrid:
    """Position nodes conjugate to a KGrid, centred on x = 0."""

    n: int
    dx: float

    @property
    def nodes(self) -> np.ndarray:
        return np.fft.fftshift(np.fft.fftfreq(self.n, d=1.0 / (self.n * self.dx)))

    @property
    def extent(self) -> float:
        return self.n * self.dx


@dataclass(frozen=True)
class KGrid:
    """Uniform momentum grid k_j = k_min + j·dk, j = 0..n-1."""

    k_min: float
    k_max: float
    n: int

    @property
    def dk(self) -> float:
        return (self.k_max - self.k_min) / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.n)

    def position_grid(self) -> XGrid:
        return XGrid(n=self.n, dx=2 * math.pi / (self.n * self.dk))

    def covers(self, lo: float, hi: float) -> bool:
        return self.k_min <= lo and hi <= self.k_max

    def refined(self, factor: int = 2) -> "KGrid":
        """Same bounds with ``factor`` times as many intervals."""
        return KGrid(self.k_min, self.k_max, (self.n - 1) * factor + 1)


def make_k_grid(
    k_min: float = DEFAULT_K_MIN, k_max: float = DEFAULT_K_MAX, n: int = DEFAULT_N
) -> KGrid:
    """Build a uniform momentum grid; ``n`` should be a power of two."""
    if not (math.isfinite(k_min) and math.isfinite(k_max)) or not k_max > k_min:
        raise InvalidBoundsError(f"need k_max > k_min, got [{k_min}, {k_max}]")
    if int(n) != n or n < 2:
        raise InvalidBoundsError(f"need an integer node count n >= 2, got {n}")
    n = int(n)
    if n & (n - 1):
        logger.debug("Node count %d is not a power of two; FFTs will be slower", n)
    return KGrid(float(k_min), float(k_max), n)
