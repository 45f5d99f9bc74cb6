import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.exact.mass_grid import tan_bracket_table
from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.tan.estimator import DEFAULT_STEP_CAP, estimate_from_rows, ray_trial
from src.tan.predictions import tan_prediction, crude_bounds_check
from .statistics import summarize

logger = logging.getLogger(__name__)

COLUMNS = ('x', 'y', 'trial', 'tip', 'resolved', 'steps')
RELATIVE_TOLERANCE = 0.15
EXACT_RADIUS = 6


def near_origin_points(radius: int) -> List[Tuple[int, int]]:
    """Every point with |x|, |y| <= radius except the origin and the negative x-axis"""
    return [(x, y) for x in range(-radius, radius + 1) for y in range(-radius, radius + 1)
            if not (y == 0 and x <= 0)]


def tanprob_experiment(points: Sequence[Tuple[int, int]], trials: int,
                       step_cap: int = DEFAULT_STEP_CAP, master_seed: int = 0,
                       workers: int = 1, exact_n_max: Optional[int] = None,
                       grid_radius: Optional[int] = None) -> ExperimentResult:
    """
    Monte Carlo tan probabilities at each point, set against the
    leading-order prediction and, for points near the origin, the exact
    bracket from the absorbing-axis mass computation. grid_radius adds every
    point of near_origin_points(grid_radius) not already listed.
    """
    points = [(int(x), int(y)) for x, y in points]
    if grid_radius:
        points += [p for p in near_origin_points(int(grid_radius)) if p not in points]
    if not points:
        raise ValueError("tanprob_experiment needs at least one point")
    if (0, 0) in points:
        raise ValueError("The origin is tan with probability 1; remove it from points")

    pool = TrialPool(workers)
    rows: List[Dict[str, Any]] = []
    estimates = []
    summaries = {}

    for group_index, (x, y) in enumerate(points):
        logger.info(f"🔄 tanprob ({x},{y}): {trials} trials")
        group = pool.run(ray_trial, {'x': x, 'y': y, 'step_cap': int(step_cap)}, trials,
                         master_seed, group_index)
        rows.extend(group)

        estimate = estimate_from_rows(group)
        predicted = tan_prediction(x, y)
        tolerance = max(3 * estimate['ci_halfwidth'], RELATIVE_TOLERANCE * predicted)
        estimate.update({
            'x': x,
            'y': y,
            'tan_prediction': predicted,
            'matches_prediction': bool(abs(estimate['p_hat'] - predicted) <= tolerance),
        })
        estimates.append(estimate)
        resolved = [row['tip'] for row in group if row['resolved']]
        if resolved:
            summaries[f'({x},{y})'] = summarize(resolved, censored=estimate['censored'])

    if exact_n_max:
        near = [e for e in estimates if abs(e['x']) <= EXACT_RADIUS and abs(e['y']) <= EXACT_RADIUS]
        radius = max([max(abs(e['x']), abs(e['y'])) for e in near], default=0)
        table = tan_bracket_table(radius, int(exact_n_max)) if near else {}
        for estimate in near:
            bracket = table[(estimate['x'], estimate['y'])].to_dict()
            slack = 3 * estimate['ci_halfwidth']
            estimate['exact_lower'] = bracket['lower']
            estimate['exact_upper'] = bracket['upper']
            estimate['agrees_with_exact'] = bool(
                bracket['lower'] - slack <= estimate['p_hat'] <= bracket['upper'] + slack
            )

    report = {
        'estimates': estimates,
        'crude_bounds': crude_bounds_check(estimates),
        'all_match_prediction': all(e['matches_prediction'] for e in estimates),
    }
    if exact_n_max:
        report['all_agree_with_exact'] = all(e.get('agrees_with_exact', True) for e in estimates)

    logger.info(f"✅ tanprob: {len(points)} points estimated")
    return ExperimentResult(kind='tanprob', columns=COLUMNS, rows=rows, summaries=summaries,
                            report=report, primary=next(iter(summaries), ''))
