"""
Compiled walk kernels.

Every kernel is resumable: it consumes a block of uniform variates, updates
state arrays in place and returns how many variates it used (one per step).
The Python drivers feed blocks from an RngStream and advance the stream by
exactly that count, so a kernel run and the object-level steppers in
walkers.py trace the same path from the same stream.
"""

import logging

import numpy as np

from src.core.lattice import (
    BiasParams,
    cumulative_masses,
    first_visit_distribution,
    uniform_step_distribution,
)
from .jit_support import jit
from .site_table import new_site_table, site_insert

logger = logging.getLogger(__name__)

CHUNK = 1 << 16
ROW_UNSEEN = np.iinfo(np.int64).min

# walk counters
W_STEPS = 0
W_SITES = 1
W_FRESH = 2
W_FRESH_DEPARTURES = 3
W_SIZE = 4

# recurrence state
R_POS = 0
R_LO = 1
R_HI = 2
R_STEPS = 3
R_FRESH = 4
R_RETURNED = 5
R_SIZE = 6

# planar state (band and ray kernels)
P_X = 0
P_Y = 1
P_STEPS = 2
P_COUNT = 3
P_DONE = 4
P_SIZE = 5

RAY_PENDING = 0
RAY_TIP = 1
RAY_OFF_TIP = 2


@jit
def walk_advance(pos, counters, keys, used, cum_fresh, cum_revisit, uniforms):
    n = uniforms.shape[0]
    last = cum_fresh.shape[0] - 1
    for t in range(n):
        u = uniforms[t]
        if counters[W_FRESH] == 1:
            cum = cum_fresh
            counters[W_FRESH_DEPARTURES] += 1
        else:
            cum = cum_revisit
        k = 0
        while k < last and u >= cum[k]:
            k += 1
        axis = k // 2
        if k % 2 == 0:
            pos[axis] += 1
        else:
            pos[axis] -= 1
        counters[W_STEPS] += 1
        if site_insert(keys, used, pos):
            counters[W_SITES] += 1
            counters[W_FRESH] = 1
        else:
            counters[W_FRESH] = 0
    return n


@jit
def recurrence_advance(state, cum_fresh, cum_revisit, uniforms):
    n = uniforms.shape[0]
    for t in range(n):
        u = uniforms[t]
        if state[R_FRESH] == 1:
            threshold = cum_fresh[0]
        else:
            threshold = cum_revisit[0]
        if u < threshold:
            state[R_POS] += 1
        else:
            state[R_POS] -= 1
        state[R_STEPS] += 1
        pos = state[R_POS]
        if pos > state[R_HI]:
            state[R_HI] = pos
            state[R_FRESH] = 1
        elif pos < state[R_LO]:
            state[R_LO] = pos
            state[R_FRESH] = 1
        else:
            state[R_FRESH] = 0
        if pos == 0:
            state[R_RETURNED] = 1
            return t + 1
    return n


@jit
def _planar_move(state, cum, u):
    k = 0
    while k < 3 and u >= cum[k]:
        k += 1
    if k == 0:
        state[P_X] += 1
    elif k == 1:
        state[P_X] -= 1
    elif k == 2:
        state[P_Y] += 1
    else:
        state[P_Y] -= 1
    state[P_STEPS] += 1


@jit
def band_advance(state, rowmax, cum, h, uniforms):
    """SRW counting tan points in rows [0, h-1] until y leaves [-h, 2h-1]"""
    n = uniforms.shape[0]
    for t in range(n):
        _planar_move(state, cum, uniforms[t])
        y = state[P_Y]
        if y < -h or y > 2 * h - 1:
            state[P_DONE] = 1
            return t + 1
        row = y + h
        x = state[P_X]
        if x > rowmax[row]:
            rowmax[row] = x
            if 0 <= y and y <= h - 1:
                state[P_COUNT] += 1
    return n


@jit
def ray_advance(state, cum, tx, ty, uniforms):
    """SRW until it enters the ray {(x', ty): x' >= tx}; records whether at the tip"""
    n = uniforms.shape[0]
    for t in range(n):
        _planar_move(state, cum, uniforms[t])
        if state[P_Y] == ty and state[P_X] >= tx:
            state[P_DONE] = RAY_TIP if state[P_X] == tx else RAY_OFF_TIP
            return t + 1
    return n


class FastWalk:
    """Kernel-backed SRW/ERW on Z^d for runs of a known maximum length"""

    def __init__(self, bias: BiasParams, max_steps: int, excited: bool = True):
        d = bias.d
        self.bias = bias
        self.max_steps = int(max_steps)
        self.pos = np.zeros(d, dtype=np.int64)
        self.counters = np.zeros(W_SIZE, dtype=np.int64)
        self.keys, self.used = new_site_table(self.max_steps + 1, d)
        self.cum_revisit = cumulative_masses(uniform_step_distribution(d))
        if excited:
            self.cum_fresh = cumulative_masses(first_visit_distribution(bias))
        else:
            self.cum_fresh = self.cum_revisit

        site_insert(self.keys, self.used, self.pos)
        self.counters[W_SITES] = 1
        self.counters[W_FRESH] = 1

    def advance(self, steps: int, rng):
        """Take exactly `steps` more steps"""
        if self.steps + steps > self.max_steps:
            raise ValueError(f"Walk sized for {self.max_steps} steps cannot take {steps} more")
        remaining = int(steps)
        while remaining > 0:
            block = rng.peek_block(min(CHUNK, remaining))
            consumed = walk_advance(self.pos, self.counters, self.keys, self.used,
                                    self.cum_fresh, self.cum_revisit, block)
            rng.advance(consumed)
            remaining -= consumed
        return self

    @property
    def x(self) -> int:
        return int(self.pos[0])

    @property
    def steps(self) -> int:
        return int(self.counters[W_STEPS])

    @property
    def sites(self) -> int:
        return int(self.counters[W_SITES])

    @property
    def fresh_departures(self) -> int:
        return int(self.counters[W_FRESH_DEPARTURES])

    @property
    def position(self):
        return tuple(int(c) for c in self.pos)


def run_recurrence_trial(p: float, step_cap: int, rng) -> dict:
    """One-dimensional ERW from 0 until it returns to 0 or the cap fires"""
    bias = BiasParams.from_p(p)
    cum_fresh = cumulative_masses(first_visit_distribution(bias))
    cum_revisit = cumulative_masses(uniform_step_distribution(1))
    state = np.zeros(R_SIZE, dtype=np.int64)
    state[R_FRESH] = 1

    while state[R_RETURNED] == 0 and state[R_STEPS] < step_cap:
        block = rng.peek_block(int(min(CHUNK, step_cap - state[R_STEPS])))
        rng.advance(recurrence_advance(state, cum_fresh, cum_revisit, block))

    return {
        'returned': int(state[R_RETURNED]),
        'steps': int(state[R_STEPS]),
        'max_x': int(state[R_HI]),
        'min_x': int(state[R_LO]),
    }


def run_band_trial(h: int, step_cap: int, rng) -> dict:
    """Tan points in the band Z x [0, h-1] before leaving Z x [-h, 2h-1]"""
    cum = cumulative_masses(uniform_step_distribution(2))
    rowmax = np.full(3 * h, ROW_UNSEEN, dtype=np.int64)
    state = np.zeros(P_SIZE, dtype=np.int64)
    # origin observed at time 0
    rowmax[h] = 0
    state[P_COUNT] = 1

    while state[P_DONE] == 0 and state[P_STEPS] < step_cap:
        block = rng.peek_block(int(min(CHUNK, step_cap - state[P_STEPS])))
        rng.advance(band_advance(state, rowmax, cum, h, block))

    return {
        'tan_count': int(state[P_COUNT]),
        'steps': int(state[P_STEPS]),
        'censored': int(state[P_DONE] == 0),
    }


def run_ray_trial(tx: int, ty: int, step_cap: int, rng) -> dict:
    """Whether the SRW from the origin first enters the ray at (tx, ty) at its tip"""
    cum = cumulative_masses(uniform_step_distribution(2))
    state = np.zeros(P_SIZE, dtype=np.int64)
    if ty == 0 and tx <= 0:
        # origin already lies on the ray
        state[P_DONE] = RAY_TIP if tx == 0 else RAY_OFF_TIP

    while state[P_DONE] == RAY_PENDING and state[P_STEPS] < step_cap:
        block = rng.peek_block(int(min(CHUNK, step_cap - state[P_STEPS])))
        rng.advance(ray_advance(state, cum, tx, ty, block))

    return {
        'outcome': int(state[P_DONE]),
        'steps': int(state[P_STEPS]),
    }
