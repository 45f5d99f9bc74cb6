import sys
import os
import json
from fractions import Fraction
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from src.api.result_exporter import CSV_SCHEMA_VERSION, ResultExporter, format_cell, render_csv, to_builtin
from src.experiments.statistics import summarize
from src.models.results import ExperimentResult
from src.monitoring.run_monitor import RunMonitor
from src.orchestrator.settings import DEFAULT_SETTINGS, deep_merge, load_settings


def _result():
    rows = [{'trial': 0, 'x': 3, 'ok': True}, {'trial': 1, 'x': -1, 'ok': False}]
    return ExperimentResult(kind='simulate', columns=('trial', 'x', 'ok'), rows=rows,
                            summaries={'x': summarize([3, -1])}, report={'fraction': Fraction(1, 3)},
                            primary='x')


def test_format_cell():
    assert format_cell(0.1) == '0.1'
    assert format_cell(np.float64(2.5)) == '2.5'
    assert format_cell(np.int64(3)) == '3'
    assert format_cell(None) == ''
    assert format_cell(True) == '1'
    assert format_cell(float('nan')) == ''


def test_to_builtin_handles_numpy_and_models():
    payload = to_builtin({'a': np.arange(3), 'b': np.bool_(True), 'c': Fraction(1, 4), 'd': (1, 2)})
    assert payload == {'a': [0, 1, 2], 'b': True, 'c': '1/4', 'd': [1, 2]}
    assert to_builtin(summarize([1.0, 2.0]))['count'] == 2


def test_render_csv_header_and_rows():
    text = render_csv(('trial', 'x'), [{'trial': 0, 'x': 1.5, 'extra': 'dropped'}])
    assert text == 'trial,x\n0,1.5\n'


def test_exporter_writes_csv_and_summary(tmp_path):
    exporter = ResultExporter(str(tmp_path / 'out'))
    paths = exporter.export('demo', _result(), config={'trials': 2}, seed=5, wall_time_ms=1.0)

    with open(paths['csv'], 'r', encoding='utf-8') as f:
        assert f.read() == 'trial,x,ok\n0,3,1\n1,-1,0\n'
    with open(paths['json'], 'r', encoding='utf-8') as f:
        summary = json.load(f)
    assert summary['experiment'] == 'demo'
    assert summary['csv_schema_version'] == CSV_SCHEMA_VERSION
    assert summary['seed'] == 5
    assert summary['summary']['mean'] == 1.0
    assert summary['report']['fraction'] == '1/3'


def test_run_monitor_exposition(tmp_path):
    monitor = RunMonitor(workers=2)
    started = monitor.start_experiment()
    monitor.record_success('band', 10, started)
    monitor.record_failure('drift')
    text = monitor.exposition()
    assert 'erwlab_trials_completed_total{kind="band"} 10.0' in text
    assert 'erwlab_experiment_failures_total{kind="drift"} 1.0' in text
    assert 'erwlab_workers 2.0' in text
    assert monitor.snapshot()['peak_rss_mb'] > 0

    path = monitor.write_metrics(str(tmp_path / 'metrics.prom'))
    assert os.path.exists(path)


def test_settings_defaults_and_overrides(tmp_path, monkeypatch):
    monkeypatch.delenv('ERWLAB_WORKERS', raising=False)
    assert load_settings(None) == DEFAULT_SETTINGS

    config = tmp_path / 'erwlab.yaml'
    config.write_text('runtime:\n  workers: 4\ndefaults:\n  band:\n    trials: 7\n')
    settings = load_settings(str(config))
    assert settings['runtime']['workers'] == 4
    assert settings['defaults']['band']['trials'] == 7
    assert settings['defaults']['band']['heights'] == [8, 16, 32, 64, 128]

    monkeypatch.setenv('ERWLAB_WORKERS', '3')
    assert load_settings(str(config))['runtime']['workers'] == 3
    assert load_settings(str(tmp_path / 'missing.yaml'))['runtime']['workers'] == 3


def test_deep_merge_does_not_mutate():
    base = {'a': {'b': 1, 'c': 2}}
    merged = deep_merge(base, {'a': {'b': 5}})
    assert merged == {'a': {'b': 5, 'c': 2}}
    assert base == {'a': {'b': 1, 'c': 2}}
