"""
Probability mass of a planar SRW with the nonnegative x-axis absorbing.

Mass starts as a unit at one point and is pushed one step at a time. Mass
stepping onto the slit is absorbed, at the tip (0, 0) or elsewhere. Two
modes:

  float  float64 cells; cells below kill_floor are zeroed and booked as
         killed so the bracket stays rigorous while memory tracks the
         effective support.
  exact  Python integer path counts (mass times 4^n); absorbed masses are
         Fractions and conservation holds exactly.

The grid is axis 0 = x, axis 1 = y. Whenever mass reaches its border ring
the grid is cropped to the nonzero support and padded by a fixed margin, so
its size follows the effective support rather than the step count.

tan_bracket_table brackets every point near the origin at once from two
stencil sweeps over one fixed box.
"""

import logging
import math
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np

from src.walkers.jit_support import jit

logger = logging.getLogger(__name__)

DEFAULT_KILL_FLOOR = 1e-18
DEFAULT_N_MAX = 10 ** 4
EXACT_MODE_MAX_STEPS = 200
INITIAL_MARGIN = 16


def on_slit(x: int, y: int) -> bool:
    return y == 0 and x >= 0


class MassGrid:

    def __init__(self, start: Tuple[int, int], exact: bool = False,
                 kill_floor: float = DEFAULT_KILL_FLOOR):
        sx, sy = int(start[0]), int(start[1])
        if on_slit(sx, sy):
            raise ValueError(f"Start {start} lies on the absorbing axis")
        self.exact = bool(exact)
        self.kill_floor = 0.0 if self.exact else float(kill_floor)
        self.n = 0

        size = 2 * INITIAL_MARGIN + 1
        self.x_min = sx - INITIAL_MARGIN
        self.y_min = sy - INITIAL_MARGIN
        self.mass = self._zeros((size, size))
        self.mass[INITIAL_MARGIN, INITIAL_MARGIN] = 1 if self.exact else 1.0

        zero = Fraction(0) if self.exact else 0.0
        self.absorbed_tip = zero
        self.absorbed_elsewhere = zero
        self.killed = 0.0

    def _zeros(self, shape):
        if self.exact:
            return np.zeros(shape, dtype=object)
        return np.zeros(shape, dtype=np.float64)

    def _scale(self):
        """Weight of one cell unit at the current step"""
        return Fraction(1, 4 ** self.n) if self.exact else 1.0

    def _touches_border(self) -> bool:
        m = self.mass
        return bool(np.any(m[0, :] != 0) or np.any(m[-1, :] != 0)
                    or np.any(m[:, 0] != 0) or np.any(m[:, -1] != 0))

    def _refit(self):
        """Crop to the nonzero support, then pad by INITIAL_MARGIN on every side"""
        nonzero = (self.mass != 0).astype(bool)
        rows = np.flatnonzero(nonzero.any(axis=1))
        cols = np.flatnonzero(nonzero.any(axis=0))
        if rows.size == 0:
            return
        core = self.mass[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]
        pad = INITIAL_MARGIN
        width, height = core.shape
        refit = self._zeros((width + 2 * pad, height + 2 * pad))
        refit[pad:pad + width, pad:pad + height] = core
        self.mass = refit
        self.x_min += int(rows[0]) - pad
        self.y_min += int(cols[0]) - pad
        logger.debug(f"Mass grid refit to {refit.shape} at step {self.n}")

    def step(self):
        if self._touches_border():
            self._refit()

        m = self.mass
        new = self._zeros(m.shape)
        new[1:, :] += m[:-1, :]
        new[:-1, :] += m[1:, :]
        new[:, 1:] += m[:, :-1]
        new[:, :-1] += m[:, 1:]
        if not self.exact:
            new *= 0.25
        self.n += 1

        ix0, iy0 = -self.x_min, -self.y_min
        width, height = new.shape
        if 0 <= iy0 < height and ix0 < width:
            start = max(ix0, 0)
            tip = new[ix0, iy0] if ix0 >= 0 else 0
            elsewhere = new[start:, iy0].sum() - tip
            scale = self._scale()
            if self.exact:
                self.absorbed_tip += int(tip) * scale
                self.absorbed_elsewhere += int(elsewhere) * scale
            else:
                self.absorbed_tip += float(tip)
                self.absorbed_elsewhere += float(elsewhere)
            new[start:, iy0] = 0

        if self.kill_floor > 0.0:
            small = (new > 0.0) & (new < self.kill_floor)
            if small.any():
                self.killed += float(new[small].sum())
                new[small] = 0.0

        self.mass = new
        return self

    def run(self, n_max: int) -> 'MassGrid':
        if self.exact and n_max > EXACT_MODE_MAX_STEPS:
            raise ValueError(f"Exact mode is limited to {EXACT_MODE_MAX_STEPS} steps, got {n_max}")
        while self.n < n_max:
            self.step()
        return self

    @property
    def surviving(self):
        total = self.mass.sum()
        if self.exact:
            return int(total) * self._scale()
        return float(total)

    @property
    def lower(self) -> float:
        return float(self.absorbed_tip)

    @property
    def upper(self) -> float:
        return min(1.0, float(self.absorbed_tip) + float(self.surviving) + self.killed)

    def conservation_error(self) -> float:
        total = self.surviving + self.absorbed_tip + self.absorbed_elsewhere
        if self.exact:
            return float(abs(1 - total))
        return abs(1.0 - (total + self.killed))


@dataclass
class TanBracket:
    lower: float
    upper: float
    n_max: int
    exact: bool
    killed: float = 0.0
    conservation_error: float = 0.0
    lower_exact: str = ''

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _bracket_from(start: Tuple[int, int], n_max: int, exact: bool, kill_floor: float) -> TanBracket:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if start == (0, 0):
        raise ValueError("Start at the tip: the probability is 1 by definition")
    if on_slit(*start):
        # first entry is at time 0 and not at the tip
        return TanBracket(lower=0.0, upper=0.0, n_max=n_max, exact=exact, lower_exact='0')

    grid = MassGrid(start, exact=exact, kill_floor=kill_floor).run(n_max)
    return TanBracket(
        lower=grid.lower,
        upper=grid.upper,
        n_max=n_max,
        exact=exact,
        killed=grid.killed,
        conservation_error=grid.conservation_error(),
        lower_exact=str(grid.absorbed_tip) if exact else '',
    )


def slit_hitting_bracket(x: int, y: int, n_max: int = DEFAULT_N_MAX, exact: bool = False,
                         kill_floor: float = DEFAULT_KILL_FLOOR) -> TanBracket:
    """Bracket on Pr[SRW from (x, y) first meets the nonnegative x-axis at the origin]"""
    return _bracket_from((int(x), int(y)), n_max, exact, kill_floor)


def exact_tan_probability(x: int, y: int, n_max: int = DEFAULT_N_MAX, exact: bool = False,
                          kill_floor: float = DEFAULT_KILL_FLOOR) -> TanBracket:
    """
    Bracket on Pr[(x, y) is a tan point of the SRW from the origin].

    Shifting by (-x, -y) turns the event into the walk from (-x, -y) first
    meeting the nonnegative x-axis at the origin; lower is the mass absorbed
    at the tip within n_max steps, upper adds the mass not yet absorbed.
    """
    if x == 0 and y == 0:
        raise ValueError("The origin is tan with probability 1")
    return _bracket_from((-int(x), -int(y)), n_max, exact, kill_floor)


@jit
def _stencil_sweeps(grid, slit, boundary, n_steps, accumulate, total):
    """
    n_steps four-neighbour averaging sweeps. Slit cells are reset to 0 after
    every sweep and cells beyond the box read as `boundary`; with accumulate
    set each sweep's result is added into `total`.
    """
    size_x, size_y = grid.shape
    cur = grid.copy()
    nxt = np.empty_like(grid)
    for _ in range(n_steps):
        for i in range(size_x):
            for j in range(size_y):
                if slit[i, j]:
                    nxt[i, j] = 0.0
                    continue
                left = cur[i - 1, j] if i > 0 else boundary
                right = cur[i + 1, j] if i < size_x - 1 else boundary
                down = cur[i, j - 1] if j > 0 else boundary
                up = cur[i, j + 1] if j < size_y - 1 else boundary
                nxt[i, j] = 0.25 * (left + right + down + up)
        if accumulate:
            for i in range(size_x):
                for j in range(size_y):
                    total[i, j] += nxt[i, j]
        cur, nxt = nxt, cur
    return cur


def default_box_margin(n_max: int) -> int:
    """About four per-axis standard deviations of an n_max-step walk"""
    return int(math.ceil(3.0 * math.sqrt(n_max)))


def tan_bracket_table(radius: int, n_max: int = DEFAULT_N_MAX,
                      margin: Optional[int] = None) -> Dict[Tuple[int, int], TanBracket]:
    """
    Brackets for every point other than the origin with |x|, |y| <= radius.

    Both bounds come from sweeps over the box |x|, |y| <= radius + margin.
    The forward sweep carries walks from the origin that stay off the slit
    and inside the box; its mass at (-x, -y) summed over steps 1..n_max is,
    by reversing paths, the chance the walk from (-x, -y) reaches the tip
    inside the box within n_max steps. That is the lower bound. The backward
    sweep gives for every start the chance of avoiding the slit for n_max
    steps or leaving the box before touching it; lower plus that chance is
    the upper bound. A margin of n_max or more makes the box irrelevant and
    the bounds equal exact_tan_probability's.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if margin is None:
        margin = default_box_margin(n_max)

    half = int(radius) + int(margin)
    size = 2 * half + 1
    slit = np.zeros((size, size), dtype=np.bool_)
    slit[half:, half] = True

    logger.info(f"🔄 Bracket table: radius {radius}, {size}x{size} box, {n_max} steps")
    origin = np.zeros((size, size), dtype=np.float64)
    origin[half, half] = 1.0
    reached = np.zeros((size, size), dtype=np.float64)
    _stencil_sweeps(origin, slit, 0.0, int(n_max), True, reached)

    alive = np.where(slit, 0.0, 1.0)
    alive = _stencil_sweeps(alive, slit, 1.0, int(n_max), False, np.zeros((1, 1), dtype=np.float64))

    table = {}
    for x in range(-radius, radius + 1):
        for y in range(-radius, radius + 1):
            if x == 0 and y == 0:
                continue
            sx, sy = -x, -y
            if on_slit(sx, sy):
                table[(x, y)] = TanBracket(lower=0.0, upper=0.0, n_max=n_max, exact=False, lower_exact='0')
                continue
            lower = float(reached[sx + half, sy + half])
            upper = min(1.0, lower + float(alive[sx + half, sy + half]))
            table[(x, y)] = TanBracket(lower=lower, upper=upper, n_max=n_max, exact=False)
    logger.info(f"✅ Bracket table: {len(table)} points")
    return table
