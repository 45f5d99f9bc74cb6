from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Tuple


@dataclass(frozen=True)
class SampleSummary:
    """Moments, quantiles and 95% CI half-width of one sample set"""

    count: int
    mean: float
    variance: float
    q05: float
    q25: float
    q50: float
    q75: float
    q95: float
    ci95_halfwidth: float
    censored_fraction: float = 0.0

    @property
    def quantiles(self) -> Tuple[float, float, float, float, float]:
        return (self.q05, self.q25, self.q50, self.q75, self.q95)

    @property
    def median(self) -> float:
        return self.q50

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ExperimentResult:
    """Per-trial rows plus aggregate summaries and a kind-specific report"""

    kind: str
    columns: Tuple[str, ...]
    rows: List[Dict[str, Any]]
    summaries: Dict[str, SampleSummary]
    report: Dict[str, Any] = field(default_factory=dict)
    primary: str = ''

    @property
    def summary(self) -> SampleSummary:
        key = self.primary or next(iter(self.summaries))
        return self.summaries[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind,
            'summary': self.summary.to_dict() if self.summaries else None,
            'summaries': {label: s.to_dict() for label, s in self.summaries.items()},
            'report': self.report,
        }
