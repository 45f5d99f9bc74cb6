import logging
from typing import Any, Dict, List, Optional, Sequence

from src.models.results import ExperimentResult
from src.orchestrator.trial_pool import TrialPool
from src.walkers.kernels import run_band_trial
from .paley_zygmund import paley_zygmund_check
from .statistics import loglog_fit, summarize

logger = logging.getLogger(__name__)

COLUMNS = ('h', 'trial', 'tan_count', 'steps', 'censored')
DEFAULT_HEIGHTS = (8, 16, 32, 64, 128)
CAP_PER_AREA = 1000
TARGET_SLOPE = 1.5


def band_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    row = run_band_trial(params['h'], params['step_cap'], rng)
    row['h'] = params['h']
    return row


def band_experiment(heights: Sequence[int], trials: int, step_cap: Optional[int] = None,
                    master_seed: int = 0, workers: int = 1) -> ExperimentResult:
    """
    Tan points an SRW started at (0, 0) collects in Z x [0, h-1] before its
    height leaves [-h, 2h-1], for each h. Fits the growth exponent of the
    mean count and applies the second-moment check to every height.
    """
    heights = [int(h) for h in heights]
    if not heights:
        raise ValueError("band_experiment needs at least one height")
    for h in heights:
        if h < 2:
            raise ValueError(f"Band height must be >= 2, got {h}")

    pool = TrialPool(workers)
    rows: List[Dict[str, Any]] = []
    summaries = {}
    per_height = []

    for group_index, h in enumerate(heights):
        cap = int(step_cap) if step_cap else CAP_PER_AREA * h * h
        logger.info(f"🔄 band h={h}: {trials} trials")
        group = pool.run(band_trial, {'h': h, 'step_cap': cap}, trials, master_seed, group_index)
        rows.extend(group)

        counts = [row['tan_count'] for row in group if not row['censored']]
        censored = len(group) - len(counts)
        if not counts:
            raise RuntimeError(f"Every band trial at h={h} hit the step cap {cap}")
        summary = summarize(counts, censored=censored)
        summaries[f'h={h}'] = summary

        mean = summary.mean
        above_half = sum(1 for c in counts if c >= 0.5 * mean) / len(counts)
        per_height.append({
            'h': h,
            'mean': mean,
            'fraction_above_half_mean': above_half,
            'paley_zygmund': paley_zygmund_check(counts),
        })

    report: Dict[str, Any] = {'heights': per_height}
    if len(heights) >= 3:
        fit = loglog_fit([(entry['h'], entry['mean']) for entry in per_height])
        report['fit'] = fit
        report['slope_in_range'] = bool(1.35 <= fit['slope'] <= 1.65)

    doubling = []
    for previous, current in zip(per_height, per_height[1:]):
        if current['h'] == 2 * previous['h']:
            doubling.append({
                'h': current['h'],
                'ratio': current['mean'] / previous['mean'],
                'expected': 2 ** TARGET_SLOPE,
            })
    report['doubling'] = doubling
    report['paley_zygmund_all_hold'] = all(entry['paley_zygmund']['holds'] for entry in per_height)

    logger.info(f"✅ band: slope {report.get('fit', {}).get('slope', float('nan')):.3f}")
    return ExperimentResult(kind='band', columns=COLUMNS, rows=rows, summaries=summaries,
                            report=report, primary=f'h={heights[-1]}')
