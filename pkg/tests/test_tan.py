import sys
import os
import math
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.core.lattice import LatticePoint
from src.core.rng import RngStream
from src.exact.mass_grid import exact_tan_probability
from src.tan.estimator import estimate_from_rows, tan_probability_mc
from src.tan.predictions import (
    crude_bounds_check,
    crude_order,
    slit_hitting_prediction,
    tan_prediction,
)
from src.tan.tracker import TanTracker, brute_force_tan_set
from src.walkers.walkers import new_walk, srw_step


def test_tracker_matches_brute_force():
    for seed in range(5):
        state = new_walk(d=2, record_trace=True)
        rng = RngStream(seed)
        for _ in range(400):
            srw_step(state, rng)

        tracker = TanTracker.recording()
        tracker.observe_all(state.trace)
        assert set(tracker.tan_points) == brute_force_tan_set(state.trace)
        assert tracker.tan_count == len(tracker.tan_points)


def test_tracker_ignores_revisits_and_left_moves():
    tracker = TanTracker()
    trace = [LatticePoint.of(0, 0), LatticePoint.of(1, 0), LatticePoint.of(0, 0),
             LatticePoint.of(-1, 0), LatticePoint.of(-1, 1), LatticePoint.of(0, 1)]
    assert [tracker.observe(p) for p in trace] == [True, True, False, False, True, True]
    assert tracker.tan_count == 4


def test_tan_prediction_values():
    assert tan_prediction(0, 100) == pytest.approx(0.043832, abs=1e-5)
    assert tan_prediction(100, 0) == pytest.approx(0.0619866, abs=1e-5)
    assert tan_prediction(-100, 0) == pytest.approx(0.0, abs=1e-15)
    assert tan_prediction(0, 20) == pytest.approx(0.619866 * math.sin(math.pi / 4) / math.sqrt(20), abs=1e-5)


def test_slit_hitting_prediction_is_the_shifted_event():
    assert slit_hitting_prediction(-7, 3) == pytest.approx(tan_prediction(7, -3))
    with pytest.raises(ValueError):
        tan_prediction(0, 0)


def test_crude_order_by_half_plane():
    assert crude_order(0, 16) == pytest.approx(0.25)
    assert crude_order(-16, 1) == pytest.approx(1.0 / 257 ** 0.75)
    assert crude_order(-5, 0) == 0.0
    assert crude_order(0, 16) > crude_order(-16, 1)


def test_crude_bounds_check_accepts_a_tight_band():
    samples = [((0, 16), 0.5 * crude_order(0, 16)), ((0, 64), 0.6 * crude_order(0, 64)),
               {'x': -16, 'y': 1, 'p_hat': 0.3 * crude_order(-16, 1), 'ci_halfwidth': 0.0},
               {'x': -32, 'y': 1, 'p_hat': 0.4 * crude_order(-32, 1), 'ci_halfwidth': 0.0}]
    report = crude_bounds_check(samples)
    assert report['holds']
    assert report['right']['c'] == pytest.approx(0.5)
    assert report['right']['C'] == pytest.approx(0.6)
    assert report['left']['points'] == 2


def test_crude_bounds_check_flags_spread_and_axis_mass():
    spread = [((0, 16), 0.1 * crude_order(0, 16)), ((0, 64), 0.9 * crude_order(0, 64))]
    assert not crude_bounds_check(spread)['holds']

    on_axis = [((-8, 0), 0.01, 0.001)]
    report = crude_bounds_check(on_axis)
    assert not report['holds']
    assert report['violations'][0]['reason'].startswith('nonzero')


def test_estimate_from_rows_brackets():
    rows = [{'tip': 1, 'resolved': 1}] * 3 + [{'tip': 0, 'resolved': 1}] * 5 + [{'tip': 0, 'resolved': 0}] * 2
    estimate = estimate_from_rows(rows)
    assert estimate['p_hat'] == pytest.approx(3 / 8)
    assert estimate['censored_fraction'] == pytest.approx(0.2)
    assert estimate['bracket_low'] == pytest.approx(0.3)
    assert estimate['bracket_high'] == pytest.approx(0.5)


def test_mc_rejects_the_origin():
    with pytest.raises(ValueError):
        tan_probability_mc(0, 0, trials=10)


def test_mc_on_the_negative_axis_is_zero():
    estimate = tan_probability_mc(-4, 0, trials=20, step_cap=100)
    assert estimate['p_hat'] == 0.0
    assert estimate['censored'] == 0


def test_mc_agrees_with_exact_bracket():
    trials = 2000
    estimate = tan_probability_mc(0, 1, trials=trials, step_cap=10 ** 4, master_seed=5)
    bracket = exact_tan_probability(0, 1, n_max=400)
    sigma = math.sqrt(0.25 / trials)
    assert estimate['bracket_low'] - 4 * sigma <= bracket.upper
    assert bracket.lower <= estimate['bracket_high'] + 4 * sigma


def test_mc_is_deterministic_for_a_seed():
    a = tan_probability_mc(2, 1, trials=50, step_cap=10 ** 4, master_seed=3, return_rows=True)
    b = tan_probability_mc(2, 1, trials=50, step_cap=10 ** 4, master_seed=3, return_rows=True)
    assert a['rows'] == b['rows']
