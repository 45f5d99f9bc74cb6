from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

CAMPAIGN_FORMAT_VERSION = 1


class ExperimentKind(str, Enum):
    RECURRENCE1D = 'recurrence1d'
    BAND = 'band'
    DRIFT = 'drift'
    RANGE = 'range'
    SPEED = 'speed'
    TANPROB = 'tanprob'
    COUPLING = 'coupling'


@dataclass
class ExperimentConfig:
    """One configured experiment; kind decides which fields are used"""

    name: str
    kind: ExperimentKind
    trials: int
    master_seed: int = 0
    workers: int = 1

    dimension: int = 2
    epsilon: float = 0.0
    n: Optional[int] = None
    n_list: List[int] = field(default_factory=list)
    step_cap: Optional[int] = None
    heights: List[int] = field(default_factory=list)
    points: List[Tuple[int, int]] = field(default_factory=list)
    allow_low_dimension: bool = False
    exact_n_max: Optional[int] = None
    grid_radius: Optional[int] = None

    @property
    def p(self) -> float:
        """First-visit right probability for the one-dimensional experiment"""
        return (1.0 + self.epsilon) / 2.0

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result['kind'] = self.kind.value
        result['points'] = [list(point) for point in self.points]
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: Dict[str, Any] = None) -> 'ExperimentConfig':
        """Build from a campaign entry; `defaults` fills fields the entry leaves out"""
        merged = dict(defaults or {})
        if 'epsilon' in data or 'p' in data:
            merged.pop('epsilon', None)
            merged.pop('p', None)
        merged.update({k: v for k, v in data.items() if v is not None})

        kind = ExperimentKind(merged['kind'])
        epsilon = merged.get('epsilon')
        if epsilon is None and merged.get('p') is not None:
            epsilon = 2.0 * float(merged['p']) - 1.0

        return cls(
            name=str(merged.get('name', kind.value)),
            kind=kind,
            trials=int(merged.get('trials', 1)),
            master_seed=int(merged.get('master_seed', 0)),
            workers=int(merged.get('workers', 1)),
            dimension=int(merged.get('dimension', 1 if kind == ExperimentKind.RECURRENCE1D else 2)),
            epsilon=float(epsilon if epsilon is not None else 0.0),
            n=int(merged['n']) if merged.get('n') is not None else None,
            n_list=[int(v) for v in merged.get('n_list', []) or []],
            step_cap=int(merged['step_cap']) if merged.get('step_cap') is not None else None,
            heights=[int(v) for v in merged.get('heights', []) or []],
            points=[(int(p[0]), int(p[1])) for p in merged.get('points', []) or []],
            allow_low_dimension=bool(merged.get('allow_low_dimension', False)),
            exact_n_max=int(merged['exact_n_max']) if merged.get('exact_n_max') is not None else None,
            grid_radius=int(merged['grid_radius']) if merged.get('grid_radius') is not None else None,
        )


@dataclass
class CampaignFile:
    """Parsed campaign: a versioned list of experiments sharing seed and output"""

    format_version: int
    experiments: List[ExperimentConfig]
    output_dir: str
    master_seed: int = 0
    workers: int = 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any], kind_defaults: Dict[str, Dict] = None) -> 'CampaignFile':
        kind_defaults = kind_defaults or {}
        master_seed = int(data.get('master_seed', 0))
        workers = int(data.get('workers', 1))
        experiments = []
        for entry in data.get('experiments', []) or []:
            defaults = dict(kind_defaults.get(entry.get('kind'), {}))
            defaults.setdefault('master_seed', master_seed)
            defaults.setdefault('workers', workers)
            experiments.append(ExperimentConfig.from_dict(entry, defaults))
        return cls(
            format_version=int(data.get('format_version', 0)),
            experiments=experiments,
            output_dir=str(data.get('output_dir', 'results')),
            master_seed=master_seed,
            workers=workers,
        )
