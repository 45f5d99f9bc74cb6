import logging
from typing import Any, Dict, List, Tuple

from src.models.experiment_config import CAMPAIGN_FORMAT_VERSION, ExperimentKind

logger = logging.getLogger(__name__)


class CampaignValidationError(ValueError):
    """Campaign file failed validation; `results` carries the validator output"""

    def __init__(self, results: Dict):
        self.results = results
        super().__init__('; '.join(results.get('errors', [])) or 'invalid campaign')


class CampaignValidator:
    """Structural and per-kind validation of campaign files and experiment entries"""

    def __init__(self, kind_defaults: Dict[str, Dict] = None):
        self.rules = self._initialize_rules()
        # per-kind defaults from settings, applied before the entry is checked
        self.kind_defaults = kind_defaults or {}

    def _initialize_rules(self) -> Dict:
        return {
            'campaign': {
                'supported_versions': [CAMPAIGN_FORMAT_VERSION],
                'allowed_keys': ['format_version', 'master_seed', 'workers', 'output_dir', 'experiments'],
            },
            'experiment': {
                'required_fields': ['name', 'kind', 'trials'],
                'kind_fields': {
                    'recurrence1d': [],
                    'band': [],
                    'drift': [],
                    'range': [],
                    'speed': [],
                    'tanprob': [],
                    'coupling': [],
                },
                'min_band_height': 2,
                'min_speed_dimension': 4,
                'uint64_limit': 1 << 64,
                'large_trials_warning': 10 ** 7,
            },
        }

    def validate_campaign(self, data: Any) -> Tuple[bool, Dict]:
        """
        Validate a parsed campaign file
        Returns: (is_valid, validation_results)
        """
        results = {
            'is_valid': True,
            'errors': [],
            'warnings': [],
            'passed_checks': [],
        }

        if not isinstance(data, dict):
            results['errors'].append("campaign: top level must be a mapping")
            results['is_valid'] = False
            return False, results

        self._check_version(data, results)
        self._check_top_level(data, results)

        experiments = data.get('experiments', [])
        if experiments is None:
            experiments = []
        if not isinstance(experiments, list):
            results['errors'].append("experiments: must be a list")
        else:
            names = set()
            for index, entry in enumerate(experiments):
                self.validate_experiment(entry, f"experiments[{index}]", results)
                name = entry.get('name') if isinstance(entry, dict) else None
                if name is not None:
                    if name in names:
                        results['errors'].append(f"experiments[{index}].name: duplicate name '{name}'")
                    names.add(name)
            results['passed_checks'].append('experiments')

        results['is_valid'] = not results['errors']
        return results['is_valid'], results

    def _check_version(self, data: Dict, results: Dict):
        version = data.get('format_version')
        if version is None:
            results['errors'].append("format_version: missing")
        elif version not in self.rules['campaign']['supported_versions']:
            results['errors'].append(f"format_version: unsupported version {version!r}")
        else:
            results['passed_checks'].append('format_version')

    def _check_top_level(self, data: Dict, results: Dict):
        unknown = [key for key in data if key not in self.rules['campaign']['allowed_keys']]
        for key in unknown:
            results['warnings'].append(f"{key}: unknown top-level key ignored")

        if 'master_seed' in data:
            self._check_seed(data['master_seed'], 'master_seed', results)
        if 'workers' in data and not self._is_int(data['workers'], minimum=0):
            results['errors'].append(f"workers: must be a nonnegative integer, got {data['workers']!r}")
        if 'output_dir' in data and not isinstance(data['output_dir'], str):
            results['errors'].append("output_dir: must be a string")

    def validate_experiment(self, entry: Any, path: str, results: Dict) -> bool:
        """Append errors for one experiment entry; True when it is valid"""
        errors_before = len(results['errors'])
        if not isinstance(entry, dict):
            results['errors'].append(f"{path}: must be a mapping")
            return False
        entry = self._with_defaults(entry)

        rules = self.rules['experiment']
        missing = [field for field in rules['required_fields'] if entry.get(field) is None]
        for field in missing:
            results['errors'].append(f"{path}.{field}: missing required field")

        kind = entry.get('kind')
        if kind is not None and kind not in [k.value for k in ExperimentKind]:
            results['errors'].append(f"{path}.kind: unknown experiment kind {kind!r}")
            return False

        trials = entry.get('trials')
        if trials is not None:
            if not self._is_int(trials, minimum=1):
                results['errors'].append(f"{path}.trials: must be an integer >= 1, got {trials!r}")
            elif trials > rules['large_trials_warning']:
                results['warnings'].append(f"{path}.trials: {trials} trials will take a long time")

        if 'master_seed' in entry:
            self._check_seed(entry['master_seed'], f"{path}.master_seed", results)
        if 'workers' in entry and not self._is_int(entry['workers'], minimum=0):
            results['errors'].append(f"{path}.workers: must be a nonnegative integer")

        if 'epsilon' in entry and 'p' in entry:
            results['errors'].append(f"{path}: give either epsilon or p, not both")
        if 'epsilon' in entry and not self._in_range(entry['epsilon'], 0.0, 1.0):
            results['errors'].append(f"{path}.epsilon: must lie in [0, 1], got {entry['epsilon']!r}")
        if 'dimension' in entry and not self._is_int(entry['dimension'], minimum=1):
            results['errors'].append(f"{path}.dimension: must be an integer >= 1")
        for field in ('n', 'step_cap', 'exact_n_max'):
            if field in entry and entry[field] is not None and not self._is_int(entry[field], minimum=1):
                results['errors'].append(f"{path}.{field}: must be an integer >= 1")

        for field in rules['kind_fields'].get(kind, []):
            if not entry.get(field):
                results['errors'].append(f"{path}.{field}: required for kind '{kind}'")

        if kind is not None:
            getattr(self, f'_check_{kind}')(entry, path, results)

        if len(results['errors']) == errors_before:
            results['passed_checks'].append(path)
            return True
        return False

    def _with_defaults(self, entry: Dict) -> Dict:
        """Entry as it will run: its kind's defaults overlaid by the entry itself"""
        defaults = self.kind_defaults.get(entry.get('kind')) if isinstance(entry.get('kind'), str) else None
        if not defaults:
            return entry
        merged = dict(defaults)
        if 'epsilon' in entry or 'p' in entry:
            merged.pop('epsilon', None)
            merged.pop('p', None)
        merged.update({key: value for key, value in entry.items() if value is not None})
        return merged

    def _check_recurrence1d(self, entry: Dict, path: str, results: Dict):
        p = entry.get('p')
        if p is None and 'epsilon' in entry and self._in_range(entry['epsilon'], 0.0, 1.0):
            p = (1.0 + entry['epsilon']) / 2.0
        if p is None:
            results['errors'].append(f"{path}.p: required for kind 'recurrence1d'")
        elif not self._in_range(p, 0.5, 1.0) or p <= 0.5:
            results['errors'].append(f"{path}.p: must lie in (1/2, 1], got {p!r}")
        if entry.get('dimension', 1) != 1:
            results['errors'].append(f"{path}.dimension: recurrence1d runs on Z^1")

    def _check_band(self, entry: Dict, path: str, results: Dict):
        heights = entry.get('heights', [])
        if not isinstance(heights, list):
            results['errors'].append(f"{path}.heights: must be a list")
            return
        for index, h in enumerate(heights):
            if not self._is_int(h, minimum=self.rules['experiment']['min_band_height']):
                results['errors'].append(f"{path}.heights[{index}]: band height must be an integer >= 2")
        if 0 < len(heights) < 3:
            results['warnings'].append(f"{path}.heights: fewer than 3 heights, no slope fit")
        if entry.get('dimension', 2) != 2:
            results['errors'].append(f"{path}.dimension: band runs on Z^2")

    def _check_drift(self, entry: Dict, path: str, results: Dict):
        n_list = entry.get('n_list', [])
        if not isinstance(n_list, list):
            results['errors'].append(f"{path}.n_list: must be a list")
            return
        for index, n in enumerate(n_list):
            if not self._is_int(n, minimum=2):
                results['errors'].append(f"{path}.n_list[{index}]: must be an integer >= 2")

    def _check_range(self, entry: Dict, path: str, results: Dict):
        if entry.get('n') is not None and self._is_int(entry['n'], minimum=1) and entry['n'] < 2:
            results['errors'].append(f"{path}.n: must be >= 2")

    def _check_speed(self, entry: Dict, path: str, results: Dict):
        d = entry.get('dimension', 2)
        if self._is_int(d, minimum=1) and d < self.rules['experiment']['min_speed_dimension']:
            if entry.get('allow_low_dimension'):
                results['warnings'].append(f"{path}.dimension: d={d} collects data only, no verdict")
            else:
                results['errors'].append(
                    f"{path}.dimension: speed bound needs d >= 4 (set allow_low_dimension to collect data)"
                )

    def _check_tanprob(self, entry: Dict, path: str, results: Dict):
        points = entry.get('points') or []
        grid_radius = entry.get('grid_radius')
        if grid_radius is not None and not self._is_int(grid_radius, minimum=1):
            results['errors'].append(f"{path}.grid_radius: must be an integer >= 1")
        if not points and grid_radius is None:
            results['errors'].append(f"{path}.points: required for kind 'tanprob' unless grid_radius is given")
        if not isinstance(points, list):
            results['errors'].append(f"{path}.points: must be a list of [x, y] pairs")
            return
        for index, point in enumerate(points):
            if (not isinstance(point, (list, tuple)) or len(point) != 2
                    or not all(self._is_int(c) for c in point)):
                results['errors'].append(f"{path}.points[{index}]: must be an [x, y] integer pair")
            elif tuple(point) == (0, 0):
                results['errors'].append(f"{path}.points[{index}]: the origin is tan with probability 1")
        if entry.get('dimension', 2) != 2:
            results['errors'].append(f"{path}.dimension: tan points are planar")

    def _check_coupling(self, entry: Dict, path: str, results: Dict):
        if entry.get('dimension', 2) != 2:
            results['errors'].append(f"{path}.dimension: the coupling is planar")

    def _check_seed(self, value: Any, path: str, results: Dict):
        if not self._is_int(value, minimum=0) or value >= self.rules['experiment']['uint64_limit']:
            results['errors'].append(f"{path}: must be a 64-bit unsigned integer, got {value!r}")

    @staticmethod
    def _is_int(value: Any, minimum: int = None) -> bool:
        if isinstance(value, bool) or not isinstance(value, int):
            return False
        return minimum is None or value >= minimum

    @staticmethod
    def _in_range(value: Any, low: float, high: float) -> bool:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return low <= value <= high

    def generate_validation_report(self, data: Any) -> Dict:
        is_valid, results = self.validate_campaign(data)
        return {
            'validation_summary': {
                'is_valid': is_valid,
                'passed_checks': len(results['passed_checks']),
                'errors_count': len(results['errors']),
                'warnings_count': len(results['warnings']),
            },
            'detailed_results': results,
        }
