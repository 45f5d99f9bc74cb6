import logging
from typing import Any, Dict, List

import numpy as np

from src.coupling.coupled_walk import run_coupled
from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.walkers.walkers import erw_step, new_walk
from .statistics import chi_square_homogeneity, summarize

logger = logging.getLogger(__name__)

COLUMNS = ('source', 'trial', 'final_x', 'final_y', 'fresh_right', 'fresh_left',
           'fresh_up', 'fresh_down', 'audit_failures')
COUPLED_GROUP = 0
DIRECT_GROUP = 1
FINAL_X_BINS = 10


def coupled_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    audit = run_coupled(params['epsilon'], params['steps'], rng)
    right, left, up, down = audit['fresh_step_counts']
    return {
        'source': 'coupled',
        'final_x': audit['erw_x'],
        'final_y': audit['y'],
        'fresh_right': right,
        'fresh_left': left,
        'fresh_up': up,
        'fresh_down': down,
        'audit_failures': audit['tan_fresh_failures'] + audit['alignment_failures'] + audit['gap_failures'],
    }


def direct_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    state = new_walk(params['epsilon'], 2)
    counts = [0, 0, 0, 0]
    for _ in range(params['steps']):
        erw_step(state, rng)
        if state.last_from_fresh:
            counts[state.last_direction.index] += 1
    return {
        'source': 'direct',
        'final_x': state.position.x,
        'final_y': state.position.y,
        'fresh_right': counts[0],
        'fresh_left': counts[1],
        'fresh_up': counts[2],
        'fresh_down': counts[3],
        'audit_failures': 0,
    }


def _binned(values_a: List[int], values_b: List[int], bins: int = FINAL_X_BINS):
    pooled = np.sort(np.asarray(values_a + values_b, dtype=np.float64))
    edges = np.unique(np.quantile(pooled, np.linspace(0.0, 1.0, bins + 1)))
    if edges.shape[0] < 2:
        return [len(values_a)], [len(values_b)]
    hist_a, _ = np.histogram(values_a, bins=edges)
    hist_b, _ = np.histogram(values_b, bins=edges)
    return hist_a.tolist(), hist_b.tolist()


def _fresh_table(rows: List[Dict[str, Any]]) -> List[int]:
    return [sum(row[key] for row in rows) for key in ('fresh_right', 'fresh_left', 'fresh_up', 'fresh_down')]


def coupling_experiment(epsilon: float, steps: int, trials: int, master_seed: int = 0,
                        workers: int = 1) -> ExperimentResult:
    """
    Coupled SRW/ERW pairs audited step by step, and the coupled ERW's law
    compared with directly simulated ERW trials by chi-square homogeneity.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")

    logger.info(f"🔄 coupling: eps={epsilon}, {steps} steps, {trials} trials per side")
    pool = TrialPool(workers)
    params = {'epsilon': float(epsilon), 'steps': int(steps)}
    coupled = pool.run(coupled_trial, params, trials, master_seed, COUPLED_GROUP)
    direct = pool.run(direct_trial, params, trials, master_seed, DIRECT_GROUP)

    coupled_table = _fresh_table(coupled)
    direct_table = _fresh_table(direct)
    fresh_total = sum(coupled_table)
    bins_coupled, bins_direct = _binned([r['final_x'] for r in coupled], [r['final_x'] for r in direct])

    report = {
        'epsilon': epsilon,
        'steps': steps,
        'audit_failures': sum(row['audit_failures'] for row in coupled),
        'coupled_fresh_table': coupled_table,
        'direct_fresh_table': direct_table,
        'coupled_fresh_frequencies': [c / fresh_total for c in coupled_table] if fresh_total else [],
        'expected_fresh_frequencies': [(1 + epsilon) / 4, (1 - epsilon) / 4, 0.25, 0.25],
        'fresh_table_test': chi_square_homogeneity(coupled_table, direct_table),
        'final_x_test': chi_square_homogeneity(bins_coupled, bins_direct),
    }
    summaries = {
        'coupled_final_x': summarize([row['final_x'] for row in coupled]),
        'direct_final_x': summarize([row['final_x'] for row in direct]),
    }
    status = '✅' if report['audit_failures'] == 0 else '❌'
    logger.info(f"{status} coupling: {report['audit_failures']} audit failures")
    return ExperimentResult(kind='coupling', columns=COLUMNS, rows=coupled + direct,
                            summaries=summaries, report=report, primary='coupled_final_x')
