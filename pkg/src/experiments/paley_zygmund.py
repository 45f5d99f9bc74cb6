from typing import Any, Dict, Iterable

import numpy as np

from .statistics import wilson_interval


def paley_zygmund_check(samples: Iterable[float]) -> Dict[str, Any]:
    """
    Empirical check of Pr[X >= E[X]/2] >= E[X]^2 / (4 E[X^2]).

    lhs is the fraction of samples at least half the sample mean, rhs the
    bound from the sample moments. The inequality may miss by the Wilson
    half-width of lhs.
    """
    values = np.sort(np.asarray(list(samples), dtype=np.float64))
    count = values.shape[0]
    if count == 0:
        raise ValueError("paley_zygmund_check needs at least one sample")

    mean = float(np.mean(values))
    if mean < 0:
        raise ValueError(f"Sample mean must be nonnegative, got {mean!r}")
    second_moment = float(np.mean(values * values))

    hits = int(np.count_nonzero(values >= 0.5 * mean))
    lhs = hits / count
    rhs = mean * mean / (4.0 * second_moment) if second_moment > 0 else 0.0
    slack = wilson_interval(hits, count)['halfwidth']

    return {
        'lhs': lhs,
        'rhs': rhs,
        'slack': slack,
        'holds': bool(lhs >= rhs - slack),
        'mean': mean,
        'second_moment': second_moment,
        'count': int(count),
    }
