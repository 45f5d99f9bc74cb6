import sys
import os
import json
import glob
import logging
import argparse

# Add the project root to Python path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.orchestrator.campaign_orchestrator import EXIT_OK, run_campaign
from src.orchestrator.settings import configure_logging, load_settings

logger = logging.getLogger(__name__)

DEFAULT_CAMPAIGN = 'config/campaigns/reproduction.yaml'


def verdicts(summary: dict) -> dict:
    """Pass/fail flags of one experiment summary, keyed by check name"""
    kind = summary.get('kind')
    report = summary.get('report') or {}
    checks = {}

    if kind == 'tanprob':
        # leading-order checks only mean something away from the origin
        if 'all_agree_with_exact' in report:
            checks['agrees_with_exact'] = report['all_agree_with_exact']
        else:
            checks['matches_prediction'] = report.get('all_match_prediction')
            checks['crude_bounds'] = (report.get('crude_bounds') or {}).get('holds')
    elif kind == 'band':
        checks['slope_in_range'] = report.get('slope_in_range')
        checks['paley_zygmund'] = report.get('paley_zygmund_all_hold')
    elif kind == 'recurrence1d':
        table = report.get('conditional_table') or []
        checks['advance_table'] = bool(table) and all(row['within_3ci'] for row in table)
    elif kind == 'drift':
        checks['p01_positive'] = report.get('p01_positive')
        checks['p05_stable'] = report.get('p05_normalized_stable')
    elif kind == 'range':
        if 'in_acceptance_band' in report:
            checks['escape_band'] = report['in_acceptance_band']
    elif kind == 'speed':
        for key in ('bound_holds', 'control_within_noise'):
            if key in report:
                checks[key] = report[key]
    elif kind == 'coupling':
        checks['audit'] = report.get('audit_failures') == 0
        checks['fresh_law'] = (report.get('fresh_table_test') or {}).get('passes')
        checks['final_x_law'] = (report.get('final_x_test') or {}).get('passes')

    return checks


def check_outputs(output_dir: str) -> bool:
    """Print the verdict of every summary under output_dir; True if all pass"""
    paths = sorted(glob.glob(os.path.join(output_dir, '*.summary.json')))
    if not paths:
        print(f"❌ No summaries found in {output_dir}")
        return False

    all_pass = True
    for path in paths:
        with open(path, 'r', encoding='utf-8') as f:
            summary = json.load(f)
        checks = verdicts(summary)
        failed = [name for name, ok in checks.items() if not ok]
        all_pass = all_pass and not failed
        status = '✅' if not failed else '❌'
        detail = ', '.join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in checks.items()) or 'no checks'
        print(f"{status} {summary.get('experiment')} ({summary.get('kind')}): {detail}")
    return all_pass


def main():
    parser = argparse.ArgumentParser(description='Run the reproduction campaign and check every verdict')
    parser.add_argument('campaign', nargs='?', default=DEFAULT_CAMPAIGN)
    parser.add_argument('--workers', type=int, default=None)
    parser.add_argument('--out', default=None)
    parser.add_argument('--check-only', action='store_true', help='only check existing outputs')
    args = parser.parse_args()

    settings = load_settings()
    configure_logging(settings)

    if not args.check_only:
        print(f"🚀 Running {args.campaign}...")
        code = run_campaign(args.campaign, settings, workers=args.workers, output_dir=args.out)
        if code != EXIT_OK:
            print(f"❌ Campaign exited with code {code}")
            return code

    output_dir = args.out
    if output_dir is None:
        import yaml
        with open(args.campaign, 'r', encoding='utf-8') as f:
            output_dir = (yaml.safe_load(f) or {}).get('output_dir', 'results')

    print(f"\n🔍 Checking summaries in {output_dir}")
    return EXIT_OK if check_outputs(output_dir) else 1


if __name__ == '__main__':
    sys.exit(main())
