from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set

from src.core.lattice import LatticePoint


@dataclass
class TanTracker:
    """
    Online tan-point detector for a planar trajectory.

    A point is tan when it is reached before any point further right in its
    row, so it suffices to remember the rightmost x seen in each row.
    """

    rowmax: Dict[int, int] = field(default_factory=dict)
    tan_count: int = 0
    tan_points: Optional[List[LatticePoint]] = None

    @classmethod
    def recording(cls) -> 'TanTracker':
        return cls(tan_points=[])

    def observe(self, point: LatticePoint) -> bool:
        """Feed the next trajectory point; True if it is a new tan point"""
        x, y = point.x, point.y
        seen = self.rowmax.get(y)
        if seen is not None and x <= seen:
            return False
        self.rowmax[y] = x
        self.tan_count += 1
        if self.tan_points is not None:
            self.tan_points.append(point)
        return True

    def observe_all(self, trace: Iterable[LatticePoint]) -> int:
        for point in trace:
            self.observe(point)
        return self.tan_count


def brute_force_tan_set(trace: List[LatticePoint]) -> Set[LatticePoint]:
    """Tan points of a full trajectory by the literal definition (quadratic)"""
    first_visit: Dict[LatticePoint, int] = {}
    for time, point in enumerate(trace):
        first_visit.setdefault(point, time)

    tan = set()
    for point, time in first_visit.items():
        righter_earlier = any(
            other.y == point.y and other.x > point.x and other_time < time
            for other, other_time in first_visit.items()
        )
        if not righter_earlier:
            tan.add(point)
    return tan
