from .tracker import TanTracker, brute_force_tan_set
from .predictions import tan_prediction, slit_hitting_prediction, crude_order, crude_bounds_check
from .estimator import tan_probability_mc, estimate_from_rows, ray_trial

__all__ = [
    'TanTracker', 'brute_force_tan_set',
    'tan_prediction', 'slit_hitting_prediction', 'crude_order', 'crude_bounds_check',
    'tan_probability_mc', 'estimate_from_rows', 'ray_trial',
]
