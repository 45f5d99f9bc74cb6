import sys
import os
import json
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.cli.main import main
from src.orchestrator.campaign_orchestrator import (
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_VALIDATION,
    CampaignOrchestrator,
    run_campaign,
)
from src.orchestrator.settings import DEFAULT_SETTINGS


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Run from an empty directory so the log file and defaults stay local"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv('ERWLAB_WORKERS', raising=False)
    return tmp_path


def _cli(*args):
    return main(['--config', 'none.yaml', *args])


def test_gz_constant(workdir, capsys):
    assert _cli('gz-constant', '--digits', '6') == EXIT_OK
    assert capsys.readouterr().out.strip() == '0.659463'


def test_exact_table_with_verification(workdir, capsys):
    assert _cli('exact-table', '--n', '8', '--verify') == EXIT_OK
    out = capsys.readouterr().out
    assert 'brute-force match' in out


def test_exact_tan_in_rational_mode(workdir, capsys):
    assert _cli('exact-tan', '--x', '0', '--y', '1', '--n-max', '1', '--exact') == EXIT_OK
    assert '[0.25, 1]' in capsys.readouterr().out


def test_tan_prob_at_the_origin(workdir, capsys):
    assert _cli('tan-prob', '--x', '0', '--y', '0') == EXIT_OK
    assert 'p=1' in capsys.readouterr().out


def test_inconsistent_flags_exit_with_usage_code(workdir):
    assert _cli('recurrence', '--dim', '2', '--p', '0.75') == EXIT_VALIDATION
    assert _cli('recurrence', '--p', '0.75', '--epsilon', '0.5') == EXIT_VALIDATION
    assert _cli('band', '--dim', '3') == EXIT_VALIDATION
    assert _cli('speed', '--dim', '3') == EXIT_VALIDATION
    assert _cli('simulate', '--walk', 'srw', '--epsilon', '0.5') == EXIT_VALIDATION
    assert _cli('exact-table', '--n', '20', '--verify') == EXIT_VALIDATION


def test_simulate_writes_artifacts(workdir, capsys):
    code = _cli('simulate', '--dim', '3', '--epsilon', '0.5', '--steps', '500', '--trials', '4',
                '--out', 'out', '--seed', '9')
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith('simulate erw d=3')

    with open(workdir / 'out' / 'simulate.csv', 'r', encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert lines[0] == 'trial,x,range,fresh_departures'
    assert len(lines) == 5
    with open(workdir / 'out' / 'simulate.summary.json', 'r', encoding='utf-8') as f:
        summary = json.load(f)
    assert summary['seed'] == 9
    assert summary['kind'] == 'simulate'


def test_json_format_skips_the_csv(workdir):
    assert _cli('simulate', '--steps', '100', '--out', 'out', '--format', 'json', '--name', 'only') == EXIT_OK
    assert (workdir / 'out' / 'only.summary.json').exists()
    assert not (workdir / 'out' / 'only.csv').exists()


def test_simulate_csv_is_independent_of_workers(workdir):
    for workers in ('1', '2'):
        assert _cli('simulate', '--steps', '300', '--trials', '6', '--workers', workers,
                    '--out', f'w{workers}') == EXIT_OK
    first = (workdir / 'w1' / 'simulate.csv').read_text()
    second = (workdir / 'w2' / 'simulate.csv').read_text()
    assert first == second


def test_empty_campaign_succeeds_without_outputs(workdir):
    (workdir / 'empty.yaml').write_text('format_version: 1\noutput_dir: results\nexperiments: []\n')
    assert _cli('campaign', 'empty.yaml') == EXIT_OK
    assert not (workdir / 'results').exists()


def test_invalid_campaign_exits_with_validation_code(workdir):
    (workdir / 'bad.yaml').write_text(
        'format_version: 1\nexperiments:\n  - name: a\n    kind: foo\n    trials: 1\n'
    )
    assert _cli('campaign', 'bad.yaml') == EXIT_VALIDATION
    assert _cli('campaign', 'does_not_exist.yaml') == EXIT_VALIDATION


def test_campaign_writes_csv_summary_and_metrics(workdir):
    (workdir / 'small.yaml').write_text(
        'format_version: 1\n'
        'master_seed: 3\n'
        'output_dir: results\n'
        'experiments:\n'
        '  - name: line\n'
        '    kind: recurrence1d\n'
        '    p: 1.0\n'
        '    trials: 4\n'
        '    step_cap: 20\n'
        '  - name: pair\n'
        '    kind: coupling\n'
        '    epsilon: 0.5\n'
        '    n: 50\n'
        '    trials: 10\n'
    )
    assert _cli('campaign', 'small.yaml') == EXIT_OK
    for name in ('line.csv', 'line.summary.json', 'pair.csv', 'pair.summary.json', 'metrics.prom'):
        assert (workdir / 'results' / name).exists(), name

    with open(workdir / 'results' / 'line.summary.json', 'r', encoding='utf-8') as f:
        summary = json.load(f)
    assert summary['config']['master_seed'] == 3
    assert summary['report']['return_fraction'] == 0.0


def test_failing_experiment_gives_runtime_code(workdir):
    (workdir / 'fail.yaml').write_text(
        'format_version: 1\noutput_dir: results\nexperiments:\n'
        '  - name: censored\n    kind: band\n    heights: [2]\n    step_cap: 1\n    trials: 2\n'
    )
    assert run_campaign('fail.yaml', DEFAULT_SETTINGS) == EXIT_RUNTIME


def test_orchestrator_applies_defaults_and_counts_runs(workdir):
    (workdir / 'defaults.yaml').write_text(
        'format_version: 1\noutput_dir: results\nexperiments:\n'
        '  - name: line\n    kind: recurrence1d\n'
        '  - name: spread\n    kind: range\n    dimension: 1\n    n: 50\n    trials: 3\n'
    )
    orchestrator = CampaignOrchestrator(DEFAULT_SETTINGS)
    campaign = orchestrator.load_campaign('defaults.yaml')
    line = campaign.experiments[0]
    assert line.trials == 10000
    assert line.p == 0.75
    assert line.step_cap == 1000000

    campaign.experiments = campaign.experiments[1:]
    assert orchestrator.run_campaign(campaign) == EXIT_OK
    stats = orchestrator.get_overall_stats()
    assert stats['experiments_run'] == 1
    assert stats['trials_completed'] == 3
    assert isinstance(stats['start_time'], str)
