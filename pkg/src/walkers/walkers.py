import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from src.core.lattice import (
    BiasParams,
    LatticePoint,
    cumulative_masses,
    directions,
    first_visit_distribution,
    select_index,
    uniform_step_distribution,
)
from src.models.walk_state import StopCondition, WalkState

logger = logging.getLogger(__name__)

Stepper = Callable[[WalkState, object], WalkState]


@lru_cache(maxsize=None)
def uniform_table(d: int) -> np.ndarray:
    return cumulative_masses(uniform_step_distribution(d))


@lru_cache(maxsize=None)
def first_visit_table(epsilon: float, d: int) -> np.ndarray:
    return cumulative_masses(first_visit_distribution(BiasParams(epsilon=epsilon, d=d)))


def _take_step(state: WalkState, cumulative: np.ndarray, rng) -> WalkState:
    direction = directions(state.d)[select_index(cumulative, rng.uniform())]
    state.last_direction = direction
    state.last_from_fresh = state.fresh
    state.arrive(state.position.moved(direction))
    return state


def srw_step(state: WalkState, rng) -> WalkState:
    """Move to a uniformly chosen neighbour"""
    return _take_step(state, uniform_table(state.d), rng)


def erw_step(state: WalkState, rng) -> WalkState:
    """
    Excited step: biased toward +x when leaving a site on its first visit,
    uniform otherwise. First-visit status was fixed when the walker arrived.
    """
    if state.fresh:
        state.fresh_departures += 1
        table = first_visit_table(state.bias.epsilon, state.d)
    else:
        table = uniform_table(state.d)
    return _take_step(state, table, rng)


def run(state: WalkState, stepper: Stepper, stop: StopCondition, rng) -> Tuple[WalkState, str]:
    """Apply `stepper` until `stop` fires; returns the final state and the reason"""
    reason = stop.check(state)
    while reason is None:
        stepper(state, rng)
        reason = stop.check(state)
    logger.debug(f"Walk stopped after {state.steps} steps: {reason}")
    return state, reason


def range_count(state: WalkState) -> int:
    """Number of distinct sites visited so far"""
    return len(state.visited)


def new_walk(epsilon: float = 0.0, d: int = 2, start: Optional[LatticePoint] = None,
             record_trace: bool = False) -> WalkState:
    return WalkState.start(BiasParams(epsilon=epsilon, d=d), position=start, record_trace=record_trace)
