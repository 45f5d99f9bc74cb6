"""
Sample summaries, confidence intervals and fits shared by every experiment.
"""

import logging
import math
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np
from scipy import stats

from src.models.results import SampleSummary

logger = logging.getLogger(__name__)

Z95 = float(stats.norm.ppf(0.975))
QUANTILE_LEVELS = (0.05, 0.25, 0.50, 0.75, 0.95)


def summarize(samples: Iterable[float], censored: int = 0) -> SampleSummary:
    """
    Unbiased moments, quantiles and a normal-approximation 95% CI half-width.

    Values are sorted before any reduction so the result does not depend on
    trial order. `censored` counts trials excluded from `samples`.
    """
    values = np.sort(np.asarray(list(samples), dtype=np.float64))
    count = int(values.shape[0])
    if count == 0:
        raise ValueError("Cannot summarize an empty sample set")

    mean = float(np.mean(values))
    variance = float(np.var(values, ddof=1)) if count > 1 else 0.0
    q05, q25, q50, q75, q95 = (float(q) for q in np.quantile(values, QUANTILE_LEVELS))
    total = count + int(censored)

    return SampleSummary(
        count=count,
        mean=mean,
        variance=variance,
        q05=q05,
        q25=q25,
        q50=q50,
        q75=q75,
        q95=q95,
        ci95_halfwidth=Z95 * math.sqrt(variance / count),
        censored_fraction=int(censored) / total,
    )


def percentile(samples: Sequence[float], level: float) -> float:
    """Empirical percentile (level in [0, 100]) with linear interpolation"""
    values = np.sort(np.asarray(samples, dtype=np.float64))
    if values.shape[0] == 0:
        raise ValueError("Cannot take a percentile of an empty sample set")
    return float(np.percentile(values, level))


def wilson_interval(successes: int, trials: int, z: float = Z95) -> Dict[str, float]:
    """Wilson score interval for a binomial proportion"""
    if trials <= 0:
        return {'p_hat': 0.0, 'low': 0.0, 'high': 1.0, 'halfwidth': 0.5}
    p_hat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p_hat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z2 / (4 * trials * trials)) / denom
    return {
        'p_hat': p_hat,
        'low': max(0.0, center - half),
        'high': min(1.0, center + half),
        'halfwidth': half,
    }


def loglog_fit(points: Sequence[Tuple[float, float]]) -> Dict[str, float]:
    """Least-squares line through (log x, log y)"""
    if len(points) < 3:
        raise ValueError(f"loglog_fit needs at least 3 points, got {len(points)}")
    xs = np.array([p[0] for p in points], dtype=np.float64)
    ys = np.array([p[1] for p in points], dtype=np.float64)
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("loglog_fit requires strictly positive coordinates")

    fit = stats.linregress(np.log(xs), np.log(ys))
    return {
        'slope': float(fit.slope),
        'intercept': float(fit.intercept),
        'r2': float(fit.rvalue ** 2),
        'slope_stderr': float(fit.stderr),
    }


def chi_square_homogeneity(counts_a: Sequence[int], counts_b: Sequence[int],
                           quantile: float = 0.999) -> Dict[str, float]:
    """
    Test whether two histograms over the same bins come from one law.

    Bins empty in both samples are dropped. The statistic is compared against
    the chi-square quantile at the given level.
    """
    table = np.array([counts_a, counts_b], dtype=np.float64)
    if table.shape[1] == 0:
        raise ValueError("Histograms have no bins")
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return {'statistic': 0.0, 'dof': 0, 'threshold': 0.0, 'p_value': 1.0, 'passes': True}

    statistic, p_value, dof, _ = stats.chi2_contingency(table, correction=False)
    threshold = float(stats.chi2.ppf(quantile, dof))
    return {
        'statistic': float(statistic),
        'dof': int(dof),
        'threshold': threshold,
        'p_value': float(p_value),
        'passes': bool(statistic <= threshold),
    }


def drift_scale(n: int) -> float:
    """n^{3/4} / log^{5/4} n, the two-dimensional drift scale"""
    if n < 2:
        raise ValueError(f"drift_scale needs n >= 2, got {n}")
    return n ** 0.75 / math.log(n) ** 1.25
