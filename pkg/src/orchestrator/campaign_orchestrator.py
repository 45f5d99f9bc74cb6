import logging
import os
import time
from datetime import datetime
from typing import Any, Dict, Optional

import yaml

from src.api.result_exporter import ResultExporter
from src.experiments.runner import run_experiment
from src.models.experiment_config import CampaignFile, ExperimentConfig
from src.monitoring.run_monitor import RunMonitor
from src.validation.campaign_validator import CampaignValidationError, CampaignValidator
from .settings import load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class CampaignOrchestrator:
    def __init__(self, settings: Optional[Dict[str, Any]] = None):
        self.settings = settings if settings is not None else load_settings()
        self.validator = CampaignValidator(self.settings.get('defaults', {}))
        self.stats = {
            'experiments_run': 0,
            'experiments_failed': 0,
            'trials_completed': 0,
            'artifacts_written': 0,
            'start_time': datetime.utcnow(),
        }

    def load_campaign(self, path: str, workers: Optional[int] = None,
                      output_dir: Optional[str] = None) -> CampaignFile:
        """Parse and validate a campaign file; raises CampaignValidationError"""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise CampaignValidationError({'is_valid': False, 'errors': [f"{path}: cannot read campaign: {e}"],
                                           'warnings': [], 'passed_checks': []})

        if data is None:
            data = {}
        is_valid, results = self.validator.validate_campaign(data)
        for warning in results['warnings']:
            logger.warning(f"⚠️ {warning}")
        if not is_valid:
            raise CampaignValidationError(results)

        data.setdefault('workers', self.settings['runtime']['workers'])
        if workers is not None:
            data['workers'] = workers
            for entry in data.get('experiments') or []:
                entry['workers'] = workers
        if output_dir is not None:
            data['output_dir'] = output_dir
        return CampaignFile.from_dict(data, self.settings.get('defaults', {}))

    def run_experiment(self, config: ExperimentConfig, exporter: ResultExporter,
                       monitor: RunMonitor) -> bool:
        logger.info(f"🚀 Experiment '{config.name}' ({config.kind.value}, {config.trials} trials)")
        started = monitor.start_experiment()
        try:
            result = run_experiment(config)
            seconds = monitor.record_success(config.kind.value, config.trials, started)
            exporter.export(config.name, result, config=config.to_dict(), seed=config.master_seed,
                            wall_time_ms=round(seconds * 1000.0, 3))
            self.stats['experiments_run'] += 1
            self.stats['trials_completed'] += config.trials
            self.stats['artifacts_written'] += 2
            logger.info(f"✅ '{config.name}' done in {seconds:.2f}s")
            return True
        except Exception as e:
            logger.error(f"❌ Experiment '{config.name}' failed: {e}")
            monitor.record_failure(config.kind.value, started)
            self.stats['experiments_failed'] += 1
            return False

    def run_campaign(self, campaign: CampaignFile) -> int:
        if not campaign.experiments:
            logger.info("📭 Campaign has no experiments; nothing to do")
            return EXIT_OK

        exporter = ResultExporter(campaign.output_dir)
        monitor = RunMonitor(workers=campaign.workers)
        logger.info(f"🚀 Campaign: {len(campaign.experiments)} experiments -> {campaign.output_dir}")

        for config in campaign.experiments:
            self.run_experiment(config, exporter, monitor)

        monitoring = self.settings.get('monitoring', {})
        if monitoring.get('enable_metrics'):
            try:
                monitor.write_metrics(os.path.join(campaign.output_dir, monitoring.get('metrics_file', 'metrics.prom')))
            except OSError as e:
                logger.warning(f"⚠️ Could not write metrics: {e}")

        self._report_campaign_stats(monitor.snapshot())
        return EXIT_RUNTIME if self.stats['experiments_failed'] else EXIT_OK

    def _report_campaign_stats(self, snapshot: Dict[str, Any]):
        elapsed = (datetime.utcnow() - self.stats['start_time']).total_seconds()
        logger.info(f"""
📊 CAMPAIGN COMPLETE 📊
⏱️  Wall Time: {elapsed:.2f}s
🧪 Experiments Run: {self.stats['experiments_run']}
❌ Failed: {self.stats['experiments_failed']}
🎲 Trials: {self.stats['trials_completed']}
💾 Artifacts: {self.stats['artifacts_written']}
🧠 Peak RSS: {snapshot.get('peak_rss_mb', 0.0)} MB
        """)

    def get_overall_stats(self) -> Dict[str, Any]:
        stats = dict(self.stats)
        stats['start_time'] = self.stats['start_time'].isoformat()
        return stats


def run_campaign(path: str, settings: Optional[Dict[str, Any]] = None, workers: Optional[int] = None,
                 output_dir: Optional[str] = None) -> int:
    """Validate and run a campaign file; returns the process exit code"""
    orchestrator = CampaignOrchestrator(settings)
    try:
        campaign = orchestrator.load_campaign(path, workers=workers, output_dir=output_dir)
    except CampaignValidationError as e:
        for error in e.results.get('errors', []):
            logger.error(f"❌ {error}")
        return EXIT_VALIDATION

    started = time.perf_counter()
    code = orchestrator.run_campaign(campaign)
    logger.debug(f"Campaign finished with exit code {code} after {time.perf_counter() - started:.2f}s: "
                 f"{orchestrator.get_overall_stats()}")
    return code
