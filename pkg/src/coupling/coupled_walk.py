"""
Joint construction of a planar SRW and ERW from one randomness source.

The SRW draws its direction from the main stream. The ERW copies it except
when the SRW steps left while the ERW sits on a first-visit site; then a
flip variate from sub-stream FLIP_LANE sends the ERW right with probability
epsilon. This gives the ERW exactly the first-visit law
((1+eps)/4, (1-eps)/4, 1/4, 1/4) while the SRW path stays that of an
uncoupled SRW on the same stream.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict

from src.core.lattice import BiasParams, Direction, directions, select_index
from src.models.walk_state import WalkState
from src.tan.tracker import TanTracker
from src.walkers.walkers import uniform_table

logger = logging.getLogger(__name__)

FLIP_LANE = 1
LEFT = Direction(0, -1)
RIGHT = Direction(0, 1)


@dataclass
class CoupledState:
    srw: WalkState
    erw: WalkState
    steps: int = 0
    flips: int = 0
    last_flip: bool = False

    @classmethod
    def start(cls, epsilon: float, record_trace: bool = False) -> 'CoupledState':
        return cls(
            srw=WalkState.start(BiasParams(epsilon=0.0, d=2), record_trace=record_trace),
            erw=WalkState.start(BiasParams(epsilon=epsilon, d=2), record_trace=record_trace),
        )

    @property
    def gap(self) -> int:
        """erw.x - srw.x"""
        return self.erw.position.x - self.srw.position.x

    def aligned(self) -> bool:
        return self.srw.position.coords[1:] == self.erw.position.coords[1:]


def coupled_step(cs: CoupledState, rng) -> CoupledState:
    direction = directions(2)[select_index(uniform_table(2), rng.uniform())]

    erw_direction = direction
    cs.last_flip = False
    if direction == LEFT and cs.erw.fresh:
        if rng.substream(FLIP_LANE).uniform() < cs.erw.bias.epsilon:
            erw_direction = RIGHT
            cs.last_flip = True
            cs.flips += 1

    for walker, move in ((cs.srw, direction), (cs.erw, erw_direction)):
        walker.last_direction = move
        walker.last_from_fresh = walker.fresh
        if walker is cs.erw and walker.fresh:
            walker.fresh_departures += 1
        walker.arrive(walker.position.moved(move))

    cs.steps += 1
    return cs


def tan_implies_fresh_check(cs: CoupledState, tracker: TanTracker) -> bool:
    """
    Call right after a coupled step that gave the SRW a new tan point.
    True iff the ERW is at a first-visit site, which must always hold.
    """
    return cs.erw.fresh


def run_coupled(epsilon: float, steps: int, rng, record_trace: bool = False) -> Dict[str, Any]:
    """Run the coupled pair and audit every structural property along the way"""
    cs = CoupledState.start(epsilon, record_trace=record_trace)
    tracker = TanTracker()
    tracker.observe(cs.srw.position)

    audit: Dict[str, Any] = {
        'steps': steps,
        'tan_events': 1,
        'tan_fresh_failures': 0,
        'alignment_failures': 0,
        'gap_failures': 0,
        'fresh_step_counts': [0, 0, 0, 0],
    }
    previous_gap = 0
    for _ in range(steps):
        coupled_step(cs, rng)

        if cs.erw.last_from_fresh:
            audit['fresh_step_counts'][cs.erw.last_direction.index] += 1
        if not cs.aligned():
            audit['alignment_failures'] += 1

        gap = cs.gap
        expected = previous_gap + (2 if cs.last_flip else 0)
        if gap != expected or gap % 2 != 0:
            audit['gap_failures'] += 1
        previous_gap = gap

        if tracker.observe(cs.srw.position):
            audit['tan_events'] += 1
            if not tan_implies_fresh_check(cs, tracker):
                audit['tan_fresh_failures'] += 1

    audit.update({
        'flips': cs.flips,
        'final_gap': cs.gap,
        'srw_x': cs.srw.position.x,
        'erw_x': cs.erw.position.x,
        'y': cs.erw.position.y,
        'erw_fresh_departures': cs.erw.fresh_departures,
    })
    if audit['tan_fresh_failures'] or audit['alignment_failures'] or audit['gap_failures']:
        logger.error(f"❌ Coupling audit failed: {audit}")
    return audit
