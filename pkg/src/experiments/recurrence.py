"""
One-dimensional excited walk: return to the origin and the conditional
advance probabilities 1 - 2(1-p)/(x+1).
"""

import logging
from typing import Any, Dict, List

import numpy as np

from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.walkers.kernels import run_recurrence_trial
from .statistics import summarize, wilson_interval

logger = logging.getLogger(__name__)

COLUMNS = ('trial', 'returned', 'steps', 'max_x', 'min_x')
TABLE_LIMIT = 30
DEFAULT_STEP_CAP = 10 ** 6


def advance_prediction(p: float, x: int) -> float:
    """Pr[reach x+1 before 0 | first arrival at x with [0, x] visited]"""
    return 1.0 - 2.0 * (1.0 - p) / (x + 1)


def reach_prediction(p: float, x: int) -> float:
    """Pr[the excursion from 0 reaches x], the product of advance probabilities"""
    if x <= 0:
        return 1.0
    value = p
    for j in range(1, x):
        value *= advance_prediction(p, j)
    return value


def recurrence_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    return run_recurrence_trial(params['p'], params['step_cap'], rng)


def conditional_table(rows: List[Dict[str, Any]], p: float, limit: int = TABLE_LIMIT) -> List[Dict[str, Any]]:
    """
    A trial that reached x went right first and arrived at x for the first
    time with [0, x] visited. It then succeeds if it reaches x+1 before
    returning; trials censored with maximum exactly x are undecided.
    """
    maxima = np.array([row['max_x'] for row in rows], dtype=np.int64)
    undecided = np.array([row['returned'] == 0 for row in rows], dtype=bool)

    table = []
    for x in range(1, limit + 1):
        reached = int(np.count_nonzero(maxima >= x))
        pending = int(np.count_nonzero((maxima == x) & undecided))
        events = reached - pending
        if events <= 0:
            break
        successes = int(np.count_nonzero(maxima >= x + 1))
        interval = wilson_interval(successes, events)
        predicted = advance_prediction(p, x)
        table.append({
            'x': x,
            'events': events,
            'successes': successes,
            'empirical': interval['p_hat'],
            'ci_halfwidth': interval['halfwidth'],
            'predicted': predicted,
            'within_3ci': bool(abs(interval['p_hat'] - predicted) <= 3 * interval['halfwidth']),
        })
    return table


def return_fraction_by_cap(rows: List[Dict[str, Any]], step_cap: int) -> Dict[str, float]:
    caps = []
    cap = 10
    while cap < step_cap:
        caps.append(cap)
        cap *= 10
    caps.append(step_cap)

    trials = len(rows)
    return_steps = np.array([row['steps'] for row in rows if row['returned']], dtype=np.int64)
    return {str(c): int(np.count_nonzero(return_steps <= c)) / trials for c in caps}


def recurrence1d_experiment(p: float, trials: int, step_cap: int = DEFAULT_STEP_CAP,
                            master_seed: int = 0, workers: int = 1,
                            table_limit: int = TABLE_LIMIT) -> ExperimentResult:
    if not (0.5 < p <= 1.0):
        raise ValueError(f"p must lie in (1/2, 1], got {p}")
    if step_cap < 1:
        raise ValueError(f"step_cap must be >= 1, got {step_cap}")

    logger.info(f"🔄 recurrence1d: p={p}, {trials} trials, cap {step_cap}")
    params = {'p': float(p), 'step_cap': int(step_cap)}
    rows = TrialPool(workers).run(recurrence_trial, params, trials, master_seed)

    returned = sum(row['returned'] for row in rows)
    return_steps = [row['steps'] for row in rows if row['returned']]
    maxima = [row['max_x'] for row in rows]

    tail = []
    for x in (1, 2, 4, 8, 16, 32, 64, 128):
        empirical = sum(1 for m in maxima if m >= x) / trials
        tail.append({'x': x, 'empirical': empirical, 'predicted': reach_prediction(p, x)})

    summaries = {'max_x': summarize(maxima)}
    if return_steps:
        summaries['return_steps'] = summarize(return_steps, censored=trials - returned)

    report = {
        'p': p,
        'return_fraction': returned / trials,
        'return_fraction_by_cap': return_fraction_by_cap(rows, step_cap),
        'conditional_table': conditional_table(rows, p, table_limit),
        'excursion_tail': tail,
    }
    logger.info(f"✅ recurrence1d: return fraction {report['return_fraction']:.4f}")
    return ExperimentResult(kind='recurrence1d', columns=COLUMNS, rows=rows,
                            summaries=summaries, report=report, primary='max_x')
