from dataclasses import dataclass, field
from typing import Callable, List, Optional, Set, Tuple

from src.core.lattice import BiasParams, Direction, LatticePoint


class StopReason:
    MAX_STEPS = 'max_steps'
    ABSORBED = 'absorbed'
    TARGET_X = 'target_x'


@dataclass
class WalkState:
    """Single-trial walker state: position, visited sites and step count"""

    position: LatticePoint
    bias: BiasParams
    visited: Set[Tuple[int, ...]] = field(default_factory=set)
    steps: int = 0
    record_trace: bool = False
    trace: Optional[List[LatticePoint]] = None

    # First-visit status of the current site, fixed on arrival
    fresh: bool = True
    fresh_departures: int = 0
    last_direction: Optional[Direction] = None
    last_from_fresh: bool = False

    def __post_init__(self):
        if self.position.d != self.bias.d:
            raise ValueError(
                f"Position dimension {self.position.d} does not match bias dimension {self.bias.d}"
            )
        if not self.visited:
            self.visited.add(self.position.coords)
        if self.record_trace and self.trace is None:
            self.trace = [self.position]

    @classmethod
    def start(cls, bias: BiasParams, position: Optional[LatticePoint] = None,
              record_trace: bool = False) -> 'WalkState':
        """Fresh walker; the start site counts as visited and at its first visit"""
        return cls(
            position=position or LatticePoint.origin(bias.d),
            bias=bias,
            record_trace=record_trace,
        )

    @property
    def d(self) -> int:
        return self.bias.d

    def is_visited(self, point: LatticePoint) -> bool:
        return point.coords in self.visited

    def arrive(self, point: LatticePoint):
        """Move to `point` and settle its first-visit status"""
        self.position = point
        self.steps += 1
        if self.is_visited(point):
            self.fresh = False
        else:
            self.visited.add(point.coords)
            self.fresh = True
        if self.record_trace:
            self.trace.append(point)


@dataclass
class StopCondition:
    """At least one of max_steps, absorb or target_x must be set"""

    max_steps: Optional[int] = None
    absorb: Optional[Callable[[LatticePoint], bool]] = None
    target_x: Optional[int] = None

    def __post_init__(self):
        if self.max_steps is None and self.absorb is None and self.target_x is None:
            raise ValueError("StopCondition needs max_steps, absorb or target_x")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError(f"max_steps must be nonnegative, got {self.max_steps}")

    @classmethod
    def absorb_at(cls, points, max_steps: Optional[int] = None) -> 'StopCondition':
        targets = {p.coords if isinstance(p, LatticePoint) else tuple(p) for p in points}
        return cls(max_steps=max_steps, absorb=lambda point: point.coords in targets)

    def check(self, state: WalkState) -> Optional[str]:
        if self.absorb is not None and self.absorb(state.position):
            return StopReason.ABSORBED
        if self.target_x is not None and state.position.x >= self.target_x:
            return StopReason.TARGET_X
        if self.max_steps is not None and state.steps >= self.max_steps:
            return StopReason.MAX_STEPS
        return None
