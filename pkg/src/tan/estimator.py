import logging
from typing import Any, Dict

from src.experiments.statistics import wilson_interval
from src.orchestrator.trial_pool import TrialPool
from src.walkers.kernels import RAY_OFF_TIP, RAY_TIP, run_ray_trial

logger = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 10 ** 7


def ray_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    """One SRW from the origin run until it enters the ray left-bounded at (x, y)"""
    result = run_ray_trial(params['x'], params['y'], params['step_cap'], rng)
    return {
        'x': params['x'],
        'y': params['y'],
        'tip': int(result['outcome'] == RAY_TIP),
        'resolved': int(result['outcome'] in (RAY_TIP, RAY_OFF_TIP)),
        'steps': result['steps'],
    }


def estimate_from_rows(rows) -> Dict[str, Any]:
    """Fold per-trial ray rows into the tan-probability estimate"""
    trials = len(rows)
    tip = sum(row['tip'] for row in rows)
    resolved = sum(row['resolved'] for row in rows)
    censored = trials - resolved
    interval = wilson_interval(tip, resolved)
    return {
        'p_hat': interval['p_hat'],
        'ci_halfwidth': interval['halfwidth'],
        'wilson_low': interval['low'],
        'wilson_high': interval['high'],
        'censored_fraction': censored / trials if trials else 0.0,
        'bracket_low': tip / trials if trials else 0.0,
        'bracket_high': (tip + censored) / trials if trials else 1.0,
        'tip': tip,
        'resolved': resolved,
        'censored': censored,
        'trials': trials,
    }


def tan_probability_mc(x: int, y: int, trials: int, step_cap: int = DEFAULT_STEP_CAP,
                       master_seed: int = 0, group_index: int = 0, workers: int = 1,
                       return_rows: bool = False) -> Dict[str, Any]:
    """
    Monte Carlo probability that (x, y) is a tan point of the planar SRW.

    Each trial walks from the origin until it first enters
    {(x', y): x' >= x}; the point is tan exactly when that entry is at the
    tip. Censored trials are left out of p_hat and reported separately.
    """
    if x == 0 and y == 0:
        raise ValueError("The origin is tan with probability 1; nothing to estimate")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if step_cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {step_cap}")

    params = {'x': int(x), 'y': int(y), 'step_cap': int(step_cap)}
    rows = TrialPool(workers).run(ray_trial, params, trials, master_seed, group_index)
    estimate = estimate_from_rows(rows)
    estimate.update({'x': int(x), 'y': int(y)})

    if estimate['censored']:
        logger.warning(
            f"⚠️ tan({x},{y}): {estimate['censored']} of {trials} trials censored at {step_cap} steps"
        )
    if return_rows:
        estimate['rows'] = rows
    return estimate
