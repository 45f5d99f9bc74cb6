import sys
import os
import math
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.rng import RngStream
from src.coupling.coupled_walk import CoupledState, coupled_step, run_coupled
from src.walkers.walkers import new_walk, srw_step


def test_coupled_audit_is_clean():
    for seed in range(5):
        audit = run_coupled(0.5, 500, RngStream(seed))
        assert audit['tan_fresh_failures'] == 0
        assert audit['alignment_failures'] == 0
        assert audit['gap_failures'] == 0
        assert audit['tan_events'] >= 1


def test_gap_counts_flips():
    audit = run_coupled(0.8, 1000, RngStream(12))
    assert audit['final_gap'] == 2 * audit['flips']
    assert audit['erw_x'] - audit['srw_x'] == audit['final_gap']
    assert audit['flips'] <= audit['fresh_step_counts'][0]
    assert sum(audit['fresh_step_counts']) == audit['erw_fresh_departures']


def test_zero_bias_pair_moves_together():
    audit = run_coupled(0.0, 300, RngStream(3))
    assert audit['flips'] == 0
    assert audit['srw_x'] == audit['erw_x']


def test_coupled_srw_is_an_ordinary_srw():
    rng = RngStream(9, 4)
    cs = CoupledState.start(0.7)
    for _ in range(400):
        coupled_step(cs, rng)

    alone = new_walk(d=2)
    rng = RngStream(9, 4)
    for _ in range(400):
        srw_step(alone, rng)

    assert cs.srw.position == alone.position
    assert cs.srw.visited == alone.visited


def test_flip_only_on_fresh_left_steps():
    rng = RngStream(1)
    cs = CoupledState.start(1.0)
    for _ in range(200):
        coupled_step(cs, rng)
        if cs.last_flip:
            assert cs.srw.last_direction.name == 'left'
            assert cs.erw.last_direction.name == 'right'
            assert cs.erw.last_from_fresh
    assert cs.gap == 2 * cs.flips


def test_coupled_erw_fresh_steps_follow_the_first_visit_law():
    epsilon = 0.5
    counts = [0, 0, 0, 0]
    for seed in range(4):
        audit = run_coupled(epsilon, 25000, RngStream(300 + seed))
        counts = [a + b for a, b in zip(counts, audit['fresh_step_counts'])]
    fresh = sum(counts)
    assert fresh >= 10000
    expected = [(1 + epsilon) / 4, (1 - epsilon) / 4, 0.25, 0.25]
    for count, p in zip(counts, expected):
        assert abs(count / fresh - p) <= 4.5 * math.sqrt(p * (1 - p) / fresh)
