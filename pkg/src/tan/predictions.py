import logging
import math
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from src.core.lattice import LatticePoint
from src.experiments.constants import tan_prefactor

logger = logging.getLogger(__name__)


def _reject_origin(x: int, y: int):
    if x == 0 and y == 0:
        raise ValueError("The origin is always tan; no asymptotic prediction applies")


def slit_hitting_prediction(x: int, y: int) -> float:
    """
    Leading-order probability that the SRW started at (x, y) first meets the
    nonnegative x-axis at the origin: C sin(theta/2) / sqrt(r).
    """
    _reject_origin(x, y)
    point = LatticePoint.of(x, y)
    return tan_prefactor() * math.sin(point.theta / 2.0) / math.sqrt(point.r)


def tan_prediction(x: int, y: int) -> float:
    """
    Leading-order probability that (x, y) is a tan point of the SRW from the
    origin. Shifting the walk by (-x, -y) turns the tan event into a slit
    hitting event from (-x, -y).
    """
    _reject_origin(x, y)
    return slit_hitting_prediction(-x, -y)


def crude_order(x: int, y: int) -> float:
    """r^{-1/2} on the right half-plane, |y| r^{-3/2} on the left"""
    _reject_origin(x, y)
    r = math.hypot(x, y)
    if x >= 0:
        return 1.0 / math.sqrt(r)
    return abs(y) / r ** 1.5


def _unpack(sample) -> Tuple[int, int, float, float]:
    if isinstance(sample, dict):
        return int(sample['x']), int(sample['y']), float(sample['p_hat']), float(sample.get('ci_halfwidth', 0.0))
    point, p_hat = sample[0], sample[1]
    ci = float(sample[2]) if len(sample) > 2 else 0.0
    return int(point[0]), int(point[1]), float(p_hat), ci


def crude_bounds_check(samples: Iterable[Any], band_factor: float = 2.0) -> Dict[str, Any]:
    """
    Check estimated tan probabilities against the crude two-sided orders.

    For each half-plane the ratios p_hat / g(x, y) must fit inside one band
    [c, C] with C <= band_factor * c, allowing each estimate its CI.
    Points of the negative x-axis have g = 0 and must have p_hat = 0.
    """
    halves: Dict[str, List[Dict[str, float]]] = {'right': [], 'left': []}
    violations = []

    for sample in samples:
        x, y, p_hat, ci = _unpack(sample)
        g = crude_order(x, y)
        if g == 0.0:
            if p_hat - ci > 0.0:
                violations.append({'x': x, 'y': y, 'reason': 'nonzero estimate on the negative axis'})
            continue
        halves['right' if x >= 0 else 'left'].append({
            'x': x, 'y': y,
            'ratio': p_hat / g,
            'ratio_low': max(p_hat - ci, 0.0) / g,
            'ratio_high': (p_hat + ci) / g,
        })

    report: Dict[str, Any] = {'band_factor': band_factor, 'violations': violations}
    for label, entries in halves.items():
        if not entries:
            continue
        c = min(e['ratio'] for e in entries)
        C = max(e['ratio'] for e in entries)
        holds = (max(e['ratio_low'] for e in entries)
                 <= band_factor * min(e['ratio_high'] for e in entries))
        if not holds or c <= 0.0:
            violations.append({'half_plane': label, 'reason': f'ratios span [{c!r}, {C!r}]'})
        report[label] = {'c': c, 'C': C, 'points': len(entries), 'holds': holds and c > 0.0}

    report['holds'] = not violations
    return report
