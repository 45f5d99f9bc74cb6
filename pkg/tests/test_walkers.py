import sys
import os
import math
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.core.lattice import BiasParams, LatticePoint
from src.core.rng import RngStream
from src.models.walk_state import StopCondition, StopReason
from src.walkers.kernels import (
    RAY_OFF_TIP,
    RAY_TIP,
    FastWalk,
    run_band_trial,
    run_ray_trial,
    run_recurrence_trial,
)
from src.walkers.walkers import erw_step, new_walk, range_count, run, srw_step
from src.experiments.range_speed import range_experiment, speed_experiment


def test_srw_run_stops_at_max_steps():
    state, reason = run(new_walk(d=2), srw_step, StopCondition(max_steps=200), RngStream(1))
    assert reason == StopReason.MAX_STEPS
    assert state.steps == 200
    assert 2 <= range_count(state) <= 201


def test_stop_condition_checked_before_first_step():
    state = new_walk(d=2)
    state, reason = run(state, srw_step, StopCondition.absorb_at([(0, 0)]), RngStream(1))
    assert reason == StopReason.ABSORBED
    assert state.steps == 0


def test_stop_condition_needs_a_rule():
    with pytest.raises(ValueError):
        StopCondition()


def test_fully_excited_walk_on_the_line_runs_right():
    state, reason = run(new_walk(epsilon=1.0, d=1), erw_step, StopCondition(target_x=50), RngStream(5))
    assert reason == StopReason.TARGET_X
    assert state.position.x == 50
    assert state.steps == 50
    assert state.fresh_departures == 50


def test_erw_counts_first_visit_departures():
    state = new_walk(epsilon=0.5, d=2, record_trace=True)
    rng = RngStream(8)
    for _ in range(300):
        erw_step(state, rng)
    assert 1 <= state.fresh_departures <= 300
    # every departure from a fresh site left a site never seen before
    assert state.fresh_departures == range_count(state) - (1 if state.fresh else 0)
    assert len(state.trace) == 301


def test_position_dimension_must_match_bias():
    with pytest.raises(ValueError):
        new_walk(d=2, start=LatticePoint.of(0, 0, 0))


def test_fast_walk_matches_object_walk():
    for d, epsilon in ((1, 0.4), (2, 0.5), (3, 1.0)):
        state = new_walk(epsilon=epsilon, d=d)
        rng = RngStream(21, d)
        for _ in range(2000):
            erw_step(state, rng)

        walk = FastWalk(BiasParams(epsilon=epsilon, d=d), 2000).advance(2000, RngStream(21, d))
        assert walk.position == state.position.coords
        assert walk.sites == range_count(state)
        assert walk.fresh_departures == state.fresh_departures


def test_fast_walk_advances_in_pieces():
    whole = FastWalk(BiasParams(epsilon=0.3, d=4), 1000).advance(1000, RngStream(2))
    pieces = FastWalk(BiasParams(epsilon=0.3, d=4), 1000)
    rng = RngStream(2)
    for _ in range(4):
        pieces.advance(250, rng)
    assert pieces.position == whole.position
    assert pieces.sites == whole.sites


def test_fast_walk_refuses_to_overrun():
    walk = FastWalk(BiasParams(epsilon=0.0, d=2), 10)
    with pytest.raises(ValueError):
        walk.advance(11, RngStream(0))


def test_fully_excited_line_never_returns():
    result = run_recurrence_trial(1.0, 100, RngStream(4))
    assert result == {'returned': 0, 'steps': 100, 'max_x': 100, 'min_x': 0}


def test_recurrence_trial_returns_on_the_line():
    returned = [run_recurrence_trial(0.6, 10 ** 5, RngStream(0, i))['returned'] for i in range(50)]
    assert sum(returned) > 25


def test_band_trial_counts_the_origin():
    result = run_band_trial(2, 1, RngStream(3))
    assert result['censored'] == 1
    assert result['tan_count'] >= 1

    result = run_band_trial(8, 10 ** 6, RngStream(3))
    assert result['censored'] == 0
    assert result['tan_count'] >= 1


def test_ray_trial_on_the_negative_axis_resolves_at_once():
    assert run_ray_trial(0, 0, 100, RngStream(0)) == {'outcome': RAY_TIP, 'steps': 0}
    assert run_ray_trial(-3, 0, 100, RngStream(0)) == {'outcome': RAY_OFF_TIP, 'steps': 0}


def test_ray_trial_is_deterministic():
    a = run_ray_trial(2, 1, 10 ** 4, RngStream(17, 3))
    b = run_ray_trial(2, 1, 10 ** 4, RngStream(17, 3))
    assert a == b


def test_fast_walk_in_high_dimension_matches_object_walk():
    state = new_walk(epsilon=0.5, d=12)
    rng = RngStream(40)
    for _ in range(3000):
        erw_step(state, rng)

    walk = FastWalk(BiasParams(epsilon=0.5, d=12), 3000).advance(3000, RngStream(40))
    assert walk.position == state.position.coords
    assert walk.sites == range_count(state)


def test_long_walks_in_eight_dimensions():
    walk = FastWalk(BiasParams(epsilon=1.0, d=8), 10 ** 6).advance(10 ** 6, RngStream(8))
    assert walk.steps == 10 ** 6
    assert max(abs(c) for c in walk.position[1:]) < 10 ** 6
    assert walk.x > 0
    assert 0 < walk.sites <= 10 ** 6 + 1

    speed = speed_experiment(8, 1.0, 10 ** 6, trials=1)
    assert 'bound_holds' in speed.report
    spread = range_experiment(12, 20000, trials=2)
    assert len(spread.rows) == 2


def test_srw_mean_squared_displacement_per_step():
    n, trials = 1000, 2000
    rng = RngStream(606)
    total = 0.0
    for _ in range(trials):
        walk = FastWalk(BiasParams(epsilon=0.0, d=2), n, excited=False).advance(n, rng)
        total += sum(c * c for c in walk.position) / n
    # |S_n|^2 / n has mean 1 and standard deviation close to 1
    assert abs(total / trials - 1.0) <= 4.5 / math.sqrt(trials)


def test_gamblers_ruin_from_one():
    trials = 20000
    rng = RngStream(1001)
    stop = StopCondition.absorb_at([(0,), (10,)])
    top = 0
    for _ in range(trials):
        state, _ = run(new_walk(d=1, start=LatticePoint.of(1)), srw_step, stop, rng)
        top += state.position.x == 10
    assert abs(top / trials - 0.1) <= 4.5 * math.sqrt(0.1 * 0.9 / trials)


def test_fully_excited_planar_steps_from_fresh_sites():
    state = new_walk(epsilon=1.0, d=2)
    rng = RngStream(55)
    counts = {'right': 0, 'left': 0, 'up': 0, 'down': 0}
    for _ in range(20000):
        erw_step(state, rng)
        if state.last_from_fresh:
            counts[state.last_direction.name] += 1
    fresh = sum(counts.values())
    assert fresh >= 2000
    assert counts['left'] == 0
    assert abs(counts['right'] / fresh - 0.5) <= 4.5 * math.sqrt(0.25 / fresh)
    for name in ('up', 'down'):
        assert abs(counts[name] / fresh - 0.25) <= 4.5 * math.sqrt(0.25 * 0.75 / fresh)


def test_line_right_step_frequency_depends_on_first_visit():
    epsilon = 0.5
    rng = RngStream(73)
    right = {True: 0, False: 0}
    total = {True: 0, False: 0}
    for _ in range(2000):
        state = new_walk(epsilon=epsilon, d=1)
        for _ in range(50):
            erw_step(state, rng)
            total[state.last_from_fresh] += 1
            right[state.last_from_fresh] += state.last_direction.name == 'right'

    for fresh, expected in ((True, (1 + epsilon) / 2), (False, 0.5)):
        assert total[fresh] >= 1000
        freq = right[fresh] / total[fresh]
        assert abs(freq - expected) <= 4.5 * math.sqrt(expected * (1 - expected) / total[fresh])


def test_unbiased_erw_follows_the_srw_path():
    for d in (2, 3):
        erw = new_walk(epsilon=0.0, d=d, record_trace=True)
        srw = new_walk(d=d, record_trace=True)
        erw_rng, srw_rng = RngStream(12, d), RngStream(12, d)
        for _ in range(1000):
            erw_step(erw, erw_rng)
            srw_step(srw, srw_rng)
        assert erw.trace == srw.trace

        excited = FastWalk(BiasParams(epsilon=0.0, d=d), 1000).advance(1000, RngStream(12, d))
        plain = FastWalk(BiasParams(epsilon=0.0, d=d), 1000, excited=False).advance(1000, RngStream(12, d))
        assert excited.position == plain.position == srw.position.coords
