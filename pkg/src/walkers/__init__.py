from .walkers import srw_step, erw_step, run, range_count, new_walk
from .kernels import FastWalk, run_recurrence_trial, run_band_trial, run_ray_trial

__all__ = [
    'srw_step', 'erw_step', 'run', 'range_count', 'new_walk',
    'FastWalk', 'run_recurrence_trial', 'run_band_trial', 'run_ray_trial',
]
