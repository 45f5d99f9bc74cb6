import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DISTRIBUTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LatticePoint:
    """Integer coordinate vector on Z^d"""

    coords: Tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) < 1:
            raise ValueError("LatticePoint needs at least one coordinate")
        object.__setattr__(self, 'coords', coords)

    @classmethod
    def origin(cls, d: int) -> 'LatticePoint':
        if d < 1:
            raise ValueError(f"Dimension must be >= 1, got {d}")
        return cls((0,) * d)

    @classmethod
    def of(cls, *coords: int) -> 'LatticePoint':
        return cls(tuple(coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def x(self) -> int:
        return self.coords[0]

    @property
    def y(self) -> int:
        if self.d < 2:
            raise ValueError("y is undefined for a one-dimensional point")
        return self.coords[1]

    @property
    def r(self) -> float:
        """Euclidean norm"""
        return math.sqrt(sum(c * c for c in self.coords))

    @property
    def theta(self) -> float:
        """Polar angle in [0, 2*pi) from the positive x-axis (planar points only)"""
        if self.d != 2:
            raise ValueError("theta is defined for planar points only")
        angle = math.atan2(self.coords[1], self.coords[0])
        if angle < 0:
            angle += 2 * math.pi
        return angle

    def moved(self, direction: 'Direction') -> 'LatticePoint':
        coords = list(self.coords)
        coords[direction.axis] += direction.sign
        return LatticePoint(tuple(coords))

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class Direction:
    """Unit step along one axis; axis 0 with sign +1 is 'right'"""

    axis: int
    sign: int

    def __post_init__(self):
        if self.axis < 0:
            raise ValueError(f"Axis must be nonnegative, got {self.axis}")
        if self.sign not in (1, -1):
            raise ValueError(f"Sign must be +1 or -1, got {self.sign}")

    @property
    def index(self) -> int:
        """Position in the canonical axis-major, plus-before-minus ordering"""
        return 2 * self.axis + (0 if self.sign > 0 else 1)

    @property
    def name(self) -> str:
        if self.axis == 0:
            return 'right' if self.sign > 0 else 'left'
        if self.axis == 1:
            return 'up' if self.sign > 0 else 'down'
        return f"{'+' if self.sign > 0 else '-'}e{self.axis}"


@dataclass(frozen=True)
class BiasParams:
    """Bias epsilon toward +x on first visits, in dimension d"""

    epsilon: float
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"Dimension must be >= 1, got {self.d}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    @property
    def p(self) -> float:
        """First-visit right probability of the one-dimensional walk"""
        return (1.0 + self.epsilon) / 2.0

    @classmethod
    def from_p(cls, p: float) -> 'BiasParams':
        return cls(epsilon=2.0 * p - 1.0, d=1)


@lru_cache(maxsize=None)
def directions(d: int) -> Tuple[Direction, ...]:
    """All 2d directions, axis-major, +sign before -sign"""
    if d < 1:
        raise ValueError(f"Dimension must be >= 1, got {d}")
    return tuple(Direction(axis, sign) for axis in range(d) for sign in (1, -1))


def first_visit_distribution(bias: BiasParams) -> List[Tuple[Direction, float]]:
    """Step distribution used when leaving a site on its first visit"""
    d = bias.d
    base = 1.0 / (2 * d)
    result = []
    for direction in directions(d):
        if direction.axis == 0:
            mass = (1.0 + direction.sign * bias.epsilon) / (2 * d)
        else:
            mass = base
        result.append((direction, mass))
    return result


def uniform_step_distribution(d: int) -> List[Tuple[Direction, float]]:
    """Simple random walk step distribution"""
    mass = 1.0 / (2 * d) if d >= 1 else 0.0
    return [(direction, mass) for direction in directions(d)]


def cumulative_masses(dist: Sequence[Tuple[Direction, float]]) -> np.ndarray:
    """Validate a distribution and return its cumulative masses in listed order"""
    if not dist:
        raise ValueError("Distribution is empty")
    masses = np.array([mass for _, mass in dist], dtype=np.float64)
    if np.any(masses < 0.0):
        raise ValueError(f"Distribution has negative mass: {masses.tolist()}")
    total = float(masses.sum())
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise ValueError(f"Distribution masses sum to {total!r}, not 1")
    return np.cumsum(masses)


def select_index(cumulative, u: float) -> int:
    """Inverse-CDF lookup: first index whose cumulative mass exceeds u"""
    last = len(cumulative) - 1
    k = 0
    while k < last and u >= cumulative[k]:
        k += 1
    return k


def sample_direction(dist: Sequence[Tuple[Direction, float]], rng) -> Direction:
    """Draw one direction, consuming exactly one uniform variate"""
    cumulative = cumulative_masses(dist)
    return dist[select_index(cumulative, rng.uniform())][0]
