import copy
import logging
import os
import sys
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = 'config/erwlab.yaml'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

DEFAULT_SETTINGS: Dict[str, Any] = {
    'app': {
        'name': 'erwlab',
        'version': '1.0.0',
    },
    'runtime': {
        'workers': 1,
    },
    'logging': {
        'level': 'INFO',
        'file': 'erwlab.log',
    },
    'defaults': {
        'recurrence1d': {'trials': 10000, 'p': 0.75, 'step_cap': 1000000},
        'band': {'trials': 2000, 'heights': [8, 16, 32, 64, 128]},
        'drift': {'trials': 1000, 'epsilon': 1.0, 'n_list': [10000, 100000, 1000000]},
        'range': {'trials': 100, 'dimension': 3, 'n': 1000000},
        'speed': {'trials': 200, 'dimension': 4, 'epsilon': 1.0, 'n': 1000000},
        'tanprob': {'trials': 100000, 'step_cap': 10000000},
        'coupling': {'trials': 100000, 'epsilon': 0.5, 'n': 1000},
    },
    'exact': {
        'n_max': 10000,
        'kill_floor': 1e-18,
        'exact_mode_max_steps': 200,
    },
    'monitoring': {
        'enable_metrics': True,
        'metrics_file': 'metrics.prom',
    },
}


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_settings(config_path: Optional[str] = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """Load YAML settings over the built-in defaults; ERWLAB_WORKERS overrides runtime.workers"""
    settings = copy.deepcopy(DEFAULT_SETTINGS)
    if config_path:
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise ValueError("top level must be a mapping")
            settings = deep_merge(settings, loaded)
        except FileNotFoundError:
            logger.warning(f"⚠️ Config {config_path} not found, using defaults")
        except Exception as e:
            logger.error(f"❌ Config load error: {e}; using defaults")

    env_workers = os.environ.get('ERWLAB_WORKERS')
    if env_workers:
        try:
            settings['runtime']['workers'] = int(env_workers)
        except ValueError:
            logger.warning(f"⚠️ Ignoring non-integer ERWLAB_WORKERS={env_workers!r}")
    return settings


def configure_logging(settings: Dict[str, Any], level: Optional[str] = None):
    """Log to the configured file and to stderr (stdout carries result lines)"""
    log_settings = settings.get('logging', {})
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = log_settings.get('file')
    if log_file:
        try:
            handlers.insert(0, logging.FileHandler(log_file))
        except OSError as e:
            print(f"⚠️ Cannot open log file {log_file}: {e}", file=sys.stderr)
    logging.basicConfig(
        level=getattr(logging, (level or log_settings.get('level', 'INFO')).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
