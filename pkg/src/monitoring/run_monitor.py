import logging
import os
import time
from datetime import datetime
from typing import Dict, Optional

import psutil
from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, generate_latest

logger = logging.getLogger(__name__)

SECONDS_BUCKETS = (0.1, 1.0, 10.0, 60.0, 300.0, 1800.0, 7200.0, float('inf'))


class RunMonitor:
    """
    Campaign-level metrics: trials, failures, experiment wall time and peak
    memory. Uses a private registry so repeated runs in one process do not
    collide; nothing is served over the network.
    """

    def __init__(self, workers: int = 1):
        self.registry = CollectorRegistry()
        self.trials_completed = Counter('erwlab_trials_completed_total', 'Trials completed',
                                        ['kind'], registry=self.registry)
        self.experiment_failures = Counter('erwlab_experiment_failures_total', 'Experiments that raised',
                                           ['kind'], registry=self.registry)
        self.experiment_seconds = Histogram('erwlab_experiment_seconds', 'Experiment wall time',
                                            ['kind'], buckets=SECONDS_BUCKETS, registry=self.registry)
        self.peak_rss = Gauge('erwlab_peak_rss_megabytes', 'Peak resident memory of the runner',
                              registry=self.registry)
        self.workers = Gauge('erwlab_workers', 'Worker processes per experiment', registry=self.registry)
        self.workers.set(workers)

        self._process = psutil.Process(os.getpid())
        self._peak_mb = 0.0
        self.monitoring_data: Dict = {}

    def sample_memory(self) -> float:
        try:
            rss_mb = self._process.memory_info().rss / (1024 ** 2)
        except psutil.Error as e:
            logger.warning(f"⚠️ Memory sampling failed: {e}")
            return self._peak_mb
        self._peak_mb = max(self._peak_mb, rss_mb)
        self.peak_rss.set(round(self._peak_mb, 2))
        return rss_mb

    def start_experiment(self) -> float:
        self.sample_memory()
        return time.perf_counter()

    def record_success(self, kind: str, trials: int, started: float) -> float:
        seconds = time.perf_counter() - started
        self.trials_completed.labels(kind=kind).inc(trials)
        self.experiment_seconds.labels(kind=kind).observe(seconds)
        self.sample_memory()
        return seconds

    def record_failure(self, kind: str, started: Optional[float] = None):
        self.experiment_failures.labels(kind=kind).inc()
        if started is not None:
            self.experiment_seconds.labels(kind=kind).observe(time.perf_counter() - started)

    def snapshot(self) -> Dict:
        memory = psutil.virtual_memory()
        self.monitoring_data = {
            'timestamp': datetime.utcnow().isoformat(),
            'peak_rss_mb': round(self._peak_mb, 2),
            'memory_percent': memory.percent,
            'cpu_count': psutil.cpu_count(),
        }
        return self.monitoring_data

    def exposition(self) -> str:
        return generate_latest(self.registry).decode('utf-8')

    def write_metrics(self, path: str) -> str:
        os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(self.exposition())
        logger.info(f"📊 Metrics written to {path}")
        return path
