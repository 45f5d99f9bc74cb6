import sys
import os
from fractions import Fraction
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.exact.mass_grid import (
    EXACT_MODE_MAX_STEPS,
    INITIAL_MARGIN,
    MassGrid,
    exact_tan_probability,
    slit_hitting_bracket,
    tan_bracket_table,
)
from src.exact.slit_counts import (
    EXHAUSTIVE_LIMIT,
    count_ratio,
    enumerate_slit_walks,
    exact_table,
    slit_walk_counts,
)
from src.experiments.constants import slit_count_constant
from src.tan.predictions import tan_prediction


def test_first_slit_counts():
    assert slit_walk_counts(3) == [1, 3, 9, 34]


def test_dynamic_program_matches_enumeration():
    assert slit_walk_counts(10) == enumerate_slit_walks(10)


def test_enumeration_is_limited():
    with pytest.raises(ValueError):
        enumerate_slit_walks(EXHAUSTIVE_LIMIT + 1)
    with pytest.raises(ValueError):
        slit_walk_counts(-1)


def test_count_ratio_moves_toward_the_constant():
    counts = slit_walk_counts(60)
    limit = slit_count_constant()
    early = abs(count_ratio(10, counts) - limit)
    late = abs(count_ratio(60, counts) - limit)
    assert late < early
    with pytest.raises(ValueError):
        count_ratio(0)


def test_exact_table_rows():
    rows = exact_table(4)
    assert [row['n'] for row in rows] == [0, 1, 2, 3, 4]
    assert rows[0]['ratio'] is None
    assert rows[1]['a_n_over_4n'] == pytest.approx(0.75)
    assert rows[2]['ratio'] == pytest.approx(9 / 16 * 2 ** 0.25)


def test_one_step_brackets():
    bracket = exact_tan_probability(0, 1, n_max=1)
    assert bracket.lower == pytest.approx(0.25)
    assert bracket.upper == pytest.approx(1.0)

    bracket = exact_tan_probability(1, 0, n_max=1, exact=True)
    assert bracket.lower_exact == '1/4'


def test_negative_axis_is_never_tan():
    bracket = exact_tan_probability(-3, 0, n_max=50)
    assert bracket.lower == 0.0
    assert bracket.upper == 0.0


def test_origin_is_rejected():
    with pytest.raises(ValueError):
        exact_tan_probability(0, 0, n_max=10)


def test_start_on_the_slit_is_rejected_by_the_grid():
    with pytest.raises(ValueError):
        MassGrid((2, 0))


def test_exact_mode_conserves_mass():
    grid = MassGrid((-2, 1), exact=True).run(40)
    total = grid.surviving + grid.absorbed_tip + grid.absorbed_elsewhere
    assert total == Fraction(1)
    assert grid.conservation_error() == 0.0


def test_exact_mode_step_limit():
    with pytest.raises(ValueError):
        MassGrid((0, 1), exact=True).run(EXACT_MODE_MAX_STEPS + 1)


def test_float_mode_agrees_with_exact_mode():
    fast = exact_tan_probability(2, -1, n_max=60)
    slow = exact_tan_probability(2, -1, n_max=60, exact=True)
    assert fast.lower == pytest.approx(slow.lower, abs=1e-12)
    assert fast.upper == pytest.approx(slow.upper, abs=1e-12)
    assert fast.conservation_error < 1e-12


def test_brackets_tighten_with_more_steps():
    short = exact_tan_probability(1, 2, n_max=50)
    long = exact_tan_probability(1, 2, n_max=500)
    assert short.lower <= long.lower <= long.upper <= short.upper
    assert long.width < short.width


def test_grid_grows_without_losing_mass():
    grid = MassGrid((0, 3)).run(200)
    assert grid.mass.shape[0] > 33
    assert grid.conservation_error() < 1e-12


def test_slit_hitting_bracket_is_the_unreflected_start():
    assert slit_hitting_bracket(-1, 2, n_max=30).lower == pytest.approx(
        exact_tan_probability(1, -2, n_max=30).lower)


def test_tan_bracket_helpers():
    bracket = exact_tan_probability(0, 1, n_max=100)
    assert bracket.contains((bracket.lower + bracket.upper) / 2)
    assert not bracket.contains(bracket.upper + 0.1)
    assert set(bracket.to_dict()) >= {'lower', 'upper', 'n_max', 'exact', 'killed'}


def test_count_ratio_near_twenty_and_beyond():
    counts = slit_walk_counts(30)
    limit = slit_count_constant()
    assert abs(count_ratio(20, counts) - 0.633965) <= 0.25 * 0.633965
    gaps = [abs(count_ratio(n, counts) - limit) for n in (10, 20, 30)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_grid_refit_tracks_the_support():
    n = 400
    grid = MassGrid((1, 1)).run(n)
    assert max(grid.mass.shape) <= 2 * n + 1 + 2 * INITIAL_MARGIN
    assert grid.conservation_error() < 1e-12


def test_bracket_table_equals_single_point_brackets_when_the_box_is_wide():
    n_max = 40
    table = tan_bracket_table(3, n_max=n_max, margin=n_max)
    assert len(table) == 7 * 7 - 1
    for (x, y), bracket in table.items():
        single = exact_tan_probability(x, y, n_max=n_max)
        assert bracket.lower == pytest.approx(single.lower, abs=1e-12), (x, y)
        assert bracket.upper == pytest.approx(single.upper, abs=1e-9), (x, y)
    assert (table[(-2, 0)].lower, table[(-2, 0)].upper) == (0.0, 0.0)


def test_bracket_table_with_a_tight_box_still_brackets():
    table = tan_bracket_table(2, n_max=100, margin=5)
    for (x, y), bracket in table.items():
        if y == 0 and x < 0:
            continue
        assert bracket.lower <= exact_tan_probability(x, y, n_max=100).lower + 1e-12
        assert bracket.upper >= exact_tan_probability(x, y, n_max=400).lower - 1e-12


def test_brackets_away_from_the_origin_agree_with_the_prediction():
    table = tan_bracket_table(20, n_max=4000)
    for point in ((0, 10), (0, 20)):
        predicted = tan_prediction(*point)
        bracket = table[point]
        assert 0.0 < bracket.lower <= 1.15 * predicted
        assert bracket.upper >= 0.85 * predicted
