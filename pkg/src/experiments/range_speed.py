"""
Range of the simple random walk and speed of the excited walk.
"""

import logging
import math
from typing import Any, Dict

from src.core.lattice import BiasParams
from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.walkers.kernels import FastWalk
from .constants import glasser_zucker_constant, speed_lower_bound
from .statistics import percentile, summarize

logger = logging.getLogger(__name__)

RANGE_COLUMNS = ('trial', 'range', 'ratio', 'normalized')
SPEED_COLUMNS = ('trial', 'x', 'speed', 'fresh_departures', 'push_fraction')
SPEED_MIN_DIMENSION = 4
BOUND_MARGIN = 0.9


def range_normalization(d: int, n: int) -> float:
    """Scale R_n is divided by: n for d != 2, pi n / log n for d = 2"""
    if d == 2:
        return math.pi * n / math.log(n)
    return float(n)


def range_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    n, d = params['n'], params['d']
    walk = FastWalk(BiasParams(epsilon=0.0, d=d), n, excited=False).advance(n, rng)
    return {
        'range': walk.sites,
        'ratio': walk.sites / n,
        'normalized': walk.sites / range_normalization(d, n),
    }


def range_experiment(d: int, n: int, trials: int, master_seed: int = 0,
                     workers: int = 1) -> ExperimentResult:
    """Samples of R_n / n for the SRW on Z^d (d = 3 compares with the escape probability)"""
    if d < 1:
        raise ValueError(f"Dimension must be >= 1, got {d}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")

    logger.info(f"🔄 range: d={d}, n={n}, {trials} trials")
    rows = TrialPool(workers).run(range_trial, {'d': int(d), 'n': int(n)}, trials, master_seed)

    summaries = {
        'ratio': summarize([row['ratio'] for row in rows]),
        'normalized': summarize([row['normalized'] for row in rows]),
    }
    report: Dict[str, Any] = {'d': d, 'n': n, 'mean_ratio': summaries['ratio'].mean}
    if d == 3:
        c = glasser_zucker_constant()
        report['escape_probability'] = c
        report['difference'] = summaries['ratio'].mean - c
        report['in_acceptance_band'] = bool(0.649 <= summaries['ratio'].mean <= 0.675)
    elif d == 2:
        report['normalization'] = 'R_n log(n) / (pi n)'

    logger.info(f"✅ range: mean R_n/n = {summaries['ratio'].mean:.5f}")
    return ExperimentResult(kind='range', columns=RANGE_COLUMNS, rows=rows,
                            summaries=summaries, report=report, primary='ratio')


def speed_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    n = params['n']
    walk = FastWalk(BiasParams(epsilon=params['epsilon'], d=params['d']), n).advance(n, rng)
    return {
        'x': walk.x,
        'speed': walk.x / n,
        'fresh_departures': walk.fresh_departures,
        'push_fraction': walk.fresh_departures / n,
    }


def speed_experiment(d: int, epsilon: float, n: int, trials: int, master_seed: int = 0,
                     workers: int = 1, allow_low_dimension: bool = False) -> ExperimentResult:
    """
    Samples of X_n / n for the excited walk on Z^d. The 5th percentile is set
    against the asymptotic bound c * epsilon / d, which is proved for d >= 4
    only; lower dimensions collect data without a verdict.
    """
    if d < SPEED_MIN_DIMENSION and not allow_low_dimension:
        raise ValueError(f"The speed bound holds for d >= {SPEED_MIN_DIMENSION}, got d={d}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    logger.info(f"🔄 speed: d={d}, eps={epsilon}, n={n}, {trials} trials")
    params = {'d': int(d), 'epsilon': float(epsilon), 'n': int(n)}
    rows = TrialPool(workers).run(speed_trial, params, trials, master_seed)

    speeds = [row['speed'] for row in rows]
    summaries = {
        'speed': summarize(speeds),
        'push_fraction': summarize([row['push_fraction'] for row in rows]),
    }
    bound = speed_lower_bound(epsilon, d)
    p05 = percentile(speeds, 5)
    report: Dict[str, Any] = {
        'd': d,
        'epsilon': epsilon,
        'n': n,
        'bound': bound,
        'p05_speed': p05,
        'mean_speed': summaries['speed'].mean,
        'mean_push_fraction': summaries['push_fraction'].mean,
        'escape_probability': glasser_zucker_constant(),
    }
    if d >= SPEED_MIN_DIMENSION and epsilon > 0:
        report['bound_holds'] = bool(p05 >= BOUND_MARGIN * bound)
    elif epsilon == 0:
        report['control_within_noise'] = bool(abs(summaries['speed'].mean) <= 0.002)
    else:
        report['note'] = 'positive speed in this dimension is open; no verdict'

    logger.info(f"✅ speed: p05 {p05:.5f} vs bound {bound:.5f}")
    return ExperimentResult(kind='speed', columns=SPEED_COLUMNS, rows=rows,
                            summaries=summaries, report=report, primary='speed')
