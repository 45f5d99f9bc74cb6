# Models package
from .walk_state import WalkState, StopCondition, StopReason
from .experiment_config import ExperimentKind, ExperimentConfig, CampaignFile
from .results import SampleSummary, ExperimentResult

__all__ = [
    'WalkState', 'StopCondition', 'StopReason',
    'ExperimentKind', 'ExperimentConfig', 'CampaignFile',
    'SampleSummary', 'ExperimentResult',
]
