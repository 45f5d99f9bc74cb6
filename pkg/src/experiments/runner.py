import logging
from typing import Any, Dict

from src.models.experiment_config import ExperimentConfig, ExperimentKind
from src.models.results import ExperimentResult
from .band import DEFAULT_HEIGHTS, band_experiment
from .coupling import coupling_experiment
from .drift import DEFAULT_N_LIST, drift_experiment
from .range_speed import range_experiment, speed_experiment
from .recurrence import DEFAULT_STEP_CAP, recurrence1d_experiment
from .tanprob import tanprob_experiment

logger = logging.getLogger(__name__)

DEFAULT_N = 10 ** 6
DEFAULT_COUPLING_STEPS = 10 ** 3


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Dispatch one configured experiment to its implementation"""
    common: Dict[str, Any] = {
        'trials': config.trials,
        'master_seed': config.master_seed,
        'workers': config.workers,
    }
    kind = config.kind

    if kind == ExperimentKind.RECURRENCE1D:
        return recurrence1d_experiment(config.p, step_cap=config.step_cap or DEFAULT_STEP_CAP, **common)
    if kind == ExperimentKind.BAND:
        return band_experiment(config.heights or DEFAULT_HEIGHTS, step_cap=config.step_cap, **common)
    if kind == ExperimentKind.DRIFT:
        return drift_experiment(config.epsilon, config.n_list or DEFAULT_N_LIST, d=config.dimension, **common)
    if kind == ExperimentKind.RANGE:
        return range_experiment(config.dimension, config.n or DEFAULT_N, **common)
    if kind == ExperimentKind.SPEED:
        return speed_experiment(config.dimension, config.epsilon, config.n or DEFAULT_N,
                                allow_low_dimension=config.allow_low_dimension, **common)
    if kind == ExperimentKind.TANPROB:
        extra = {'step_cap': config.step_cap} if config.step_cap else {}
        return tanprob_experiment(config.points, exact_n_max=config.exact_n_max,
                                  grid_radius=config.grid_radius, **extra, **common)
    if kind == ExperimentKind.COUPLING:
        return coupling_experiment(config.epsilon, config.n or DEFAULT_COUPLING_STEPS, **common)

    raise ValueError(f"Unknown experiment kind: {kind}")
