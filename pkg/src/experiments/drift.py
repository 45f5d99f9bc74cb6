import logging
from typing import Any, Dict, List, Sequence

from src.core.lattice import BiasParams
from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.walkers.kernels import FastWalk
from .statistics import drift_scale, percentile, summarize

logger = logging.getLogger(__name__)

COLUMNS = ('trial', 'n', 'x', 'normalized', 'fresh_departures')
DEFAULT_N_LIST = (10 ** 4, 10 ** 5, 10 ** 6)
STABILITY_FACTOR = 2.0


def drift_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    """One ERW run, sampled at every checkpoint in n_list"""
    walk = FastWalk(BiasParams(epsilon=params['epsilon'], d=params['d']), params['n_list'][-1])
    checkpoints = []
    for n in params['n_list']:
        walk.advance(n - walk.steps, rng)
        checkpoints.append((n, walk.x, walk.fresh_departures))
    return {'checkpoints': checkpoints}


def _flatten(rows: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    flat = []
    for row in rows:
        for n, x, fresh in row['checkpoints']:
            flat.append({
                'trial': row['trial'],
                'n': n,
                'x': x,
                'normalized': x / drift_scale(n),
                'fresh_departures': fresh,
            })
    return flat


def drift_experiment(epsilon: float, n_list: Sequence[int], trials: int, d: int = 2,
                     master_seed: int = 0, workers: int = 1) -> ExperimentResult:
    """
    Distribution of X_n for the excited walk at several horizons n, with the
    normalised statistic X_n / (n^{3/4} / log^{5/4} n).

    The checks are properties, not constants: the 1st percentile of X_n stays
    positive, and the 5th percentile of the normalised statistic does not
    fall by more than a factor 2 from one horizon to any later one.
    """
    n_list = sorted({int(n) for n in n_list})
    if not n_list:
        raise ValueError("drift_experiment needs a nonempty n_list")
    if n_list[0] < 2:
        raise ValueError(f"Every horizon must be >= 2, got {n_list[0]}")

    logger.info(f"🔄 drift: eps={epsilon}, d={d}, n={n_list}, {trials} trials")
    params = {'epsilon': float(epsilon), 'd': int(d), 'n_list': n_list}
    rows = _flatten(TrialPool(workers).run(drift_trial, params, trials, master_seed))

    summaries = {}
    horizons = []
    for n in n_list:
        xs = [row['x'] for row in rows if row['n'] == n]
        normalized = [row['normalized'] for row in rows if row['n'] == n]
        fresh = [row['fresh_departures'] for row in rows if row['n'] == n]
        summaries[f'x@{n}'] = summarize(xs)
        summaries[f'normalized@{n}'] = summarize(normalized)
        horizons.append({
            'n': n,
            'scale': drift_scale(n),
            'median_x': summaries[f'x@{n}'].median,
            'p01_x': percentile(xs, 1),
            'p05_normalized': percentile(normalized, 5),
            'push_fraction': sum(fresh) / (len(fresh) * n),
        })

    stable = True
    for i, earlier in enumerate(horizons):
        for later in horizons[i + 1:]:
            if later['p05_normalized'] * STABILITY_FACTOR < earlier['p05_normalized']:
                stable = False

    report = {
        'epsilon': epsilon,
        'd': d,
        'horizons': horizons,
        'p01_positive': all(h['p01_x'] > 0 for h in horizons),
        'p05_normalized_stable': stable,
        'median_increasing': all(a['median_x'] < b['median_x'] for a, b in zip(horizons, horizons[1:])),
    }
    logger.info(f"✅ drift: p01>0 {report['p01_positive']}, stable {stable}")
    return ExperimentResult(kind='drift', columns=COLUMNS, rows=rows, summaries=summaries,
                            report=report, primary=f'x@{n_list[-1]}')
