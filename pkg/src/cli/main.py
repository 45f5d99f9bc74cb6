"""
erwlab command line.

    python -m src.cli.main gz-constant
    python -m src.cli.main band --height 8 16 32 --trials 500 --out results/
    python -m src.cli.main campaign config/campaigns/smoke.yaml

Exit codes: 0 success, 2 invalid input, 3 runtime failure.
"""

import argparse
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from src import __version__
from src.api.result_exporter import ResultExporter
from src.core.lattice import BiasParams
from src.exact.mass_grid import exact_tan_probability
from src.exact.slit_counts import EXHAUSTIVE_LIMIT, enumerate_slit_walks, exact_table
from src.experiments.band import band_experiment
from src.experiments.constants import glasser_zucker_constant
from src.experiments.coupling import coupling_experiment
from src.experiments.drift import drift_experiment
from src.experiments.range_speed import range_experiment, speed_experiment
from src.experiments.recurrence import recurrence1d_experiment
from src.experiments.statistics import summarize
from src.models.results import ExperimentResult
from src.orchestrator.campaign_orchestrator import EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, run_campaign
from src.orchestrator.settings import DEFAULT_CONFIG_PATH, configure_logging, load_settings
from src.orchestrator.trial_pool import TrialPool
from src.tan.estimator import tan_probability_mc
from src.tan.predictions import tan_prediction
from src.walkers.kernels import FastWalk

logger = logging.getLogger(__name__)

SIMULATE_COLUMNS = ('trial', 'x', 'range', 'fresh_departures')
EXACT_TABLE_COLUMNS = ('n', 'a_n', 'a_n_over_4n', 'ratio')


class UsageError(ValueError):
    """Flags that contradict each other or the chosen subcommand"""


def _add_common(parser: argparse.ArgumentParser, trials: bool = True):
    parser.add_argument('--seed', type=int, default=0, help='master seed (64-bit unsigned)')
    if trials:
        parser.add_argument('--trials', type=int, default=None, help='number of independent trials')
    parser.add_argument('--workers', type=int, default=None, help='worker processes (0 = one per core)')
    parser.add_argument('--out', default=None, help='directory for CSV/JSON artifacts')
    parser.add_argument('--format', choices=('csv', 'json'), default='csv',
                        help='csv writes the per-trial CSV and summary JSON, json only the summary')
    parser.add_argument('--name', default=None, help='artifact base name (defaults to the subcommand)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='erwlab', description='Excited random walk laboratory')
    parser.add_argument('--config', default=DEFAULT_CONFIG_PATH, help='settings YAML')
    parser.add_argument('--log-level', default=None, help='override logging.level')
    parser.add_argument('--version', action='version', version=f'erwlab {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('simulate', help='SRW or ERW endpoints and range on Z^d')
    _add_common(p)
    p.add_argument('--walk', choices=('srw', 'erw'), default='erw')
    p.add_argument('--dim', type=int, default=2)
    p.add_argument('--epsilon', type=float, default=0.0)
    p.add_argument('--steps', '--n', dest='steps', type=int, default=10000)

    p = sub.add_parser('recurrence', help='one-dimensional ERW return and advance probabilities')
    _add_common(p)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--epsilon', type=float, default=None)
    p.add_argument('--dim', type=int, default=1)
    p.add_argument('--steps', '--n', '--cap', dest='steps', type=int, default=None, help='step cap')

    p = sub.add_parser('tan-prob', help='Monte Carlo tan probability of one point')
    _add_common(p)
    p.add_argument('--x', type=int, required=True)
    p.add_argument('--y', type=int, required=True)
    p.add_argument('--dim', type=int, default=2)
    p.add_argument('--steps', '--n', '--cap', dest='steps', type=int, default=None, help='step cap')

    p = sub.add_parser('band', help='tan points collected inside a band')
    _add_common(p)
    p.add_argument('--height', type=int, nargs='+', default=None)
    p.add_argument('--dim', type=int, default=2)
    p.add_argument('--steps', '--n', '--cap', dest='steps', type=int, default=None, help='step cap')

    p = sub.add_parser('drift', help='rightward drift of the planar ERW')
    _add_common(p)
    p.add_argument('--epsilon', type=float, default=None)
    p.add_argument('--dim', type=int, default=2)
    p.add_argument('--steps', '--n', dest='steps', type=int, nargs='+', default=None)

    p = sub.add_parser('range', help='range of the SRW')
    _add_common(p)
    p.add_argument('--dim', type=int, default=None)
    p.add_argument('--steps', '--n', dest='steps', type=int, default=None)

    p = sub.add_parser('speed', help='speed of the ERW in d >= 4')
    _add_common(p)
    p.add_argument('--dim', type=int, default=None)
    p.add_argument('--epsilon', type=float, default=None)
    p.add_argument('--steps', '--n', dest='steps', type=int, default=None)
    p.add_argument('--allow-low-dimension', action='store_true')

    p = sub.add_parser('coupling', help='audit the coupled SRW/ERW pair')
    _add_common(p)
    p.add_argument('--epsilon', type=float, default=None)
    p.add_argument('--dim', type=int, default=2)
    p.add_argument('--steps', '--n', dest='steps', type=int, default=None)

    p = sub.add_parser('exact-table', help='slit-plane walk counts a_n')
    _add_common(p, trials=False)
    p.add_argument('--n', dest='steps', type=int, default=30)
    p.add_argument('--verify', action='store_true', help=f'check against enumeration (n <= {EXHAUSTIVE_LIMIT})')

    p = sub.add_parser('exact-tan', help='exact bracket on a tan probability')
    _add_common(p, trials=False)
    p.add_argument('--x', type=int, required=True)
    p.add_argument('--y', type=int, required=True)
    p.add_argument('--n-max', type=int, default=None)
    p.add_argument('--exact', action='store_true', help='rational arithmetic (n-max <= 200)')

    p = sub.add_parser('gz-constant', help='escape probability of the SRW on Z^3')
    p.add_argument('--digits', type=int, default=10)

    p = sub.add_parser('campaign', help='run a campaign file')
    p.add_argument('path')
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--out', default=None, help='override output_dir')

    return parser


def _default(settings: Dict[str, Any], kind: str, key: str, fallback=None):
    return settings.get('defaults', {}).get(kind, {}).get(key, fallback)


def _workers(args, settings) -> int:
    return args.workers if args.workers is not None else settings['runtime']['workers']


def _trials(args, settings, kind: str) -> int:
    trials = args.trials if args.trials is not None else _default(settings, kind, 'trials', 1)
    if trials < 1:
        raise UsageError(f"--trials must be >= 1, got {trials}")
    return trials


def _require_planar(args, command: str):
    if args.dim != 2:
        raise UsageError(f"{command} is planar; --dim {args.dim} is inconsistent")


def _simulate_trial(params: Dict[str, Any], rng) -> Dict[str, Any]:
    walk = FastWalk(BiasParams(epsilon=params['epsilon'], d=params['d']), params['steps'],
                    excited=params['excited']).advance(params['steps'], rng)
    return {'x': walk.x, 'range': walk.sites, 'fresh_departures': walk.fresh_departures}


def cmd_simulate(args, settings):
    if args.walk == 'srw' and args.epsilon:
        raise UsageError("--epsilon has no effect on --walk srw")
    BiasParams(epsilon=args.epsilon, d=args.dim)
    params = {'epsilon': args.epsilon, 'd': args.dim, 'steps': args.steps, 'excited': args.walk == 'erw'}
    trials = args.trials or 1
    rows = TrialPool(_workers(args, settings)).run(_simulate_trial, params, trials, args.seed)
    summaries = {
        'x': summarize([row['x'] for row in rows]),
        'range': summarize([row['range'] for row in rows]),
    }
    result = ExperimentResult(kind='simulate', columns=SIMULATE_COLUMNS, rows=rows,
                              summaries=summaries, report={'walk': args.walk, **params}, primary='x')
    line = (f"simulate {args.walk} d={args.dim} eps={args.epsilon} n={args.steps}: "
            f"mean X_n={summaries['x'].mean:.6g} mean R_n={summaries['range'].mean:.6g}")
    return result, line


def cmd_recurrence(args, settings):
    if args.dim != 1:
        raise UsageError(f"recurrence runs on Z^1; --dim {args.dim} is inconsistent")
    if args.p is not None and args.epsilon is not None:
        raise UsageError("give --p or --epsilon, not both")
    p = args.p
    if p is None:
        p = (1.0 + args.epsilon) / 2.0 if args.epsilon is not None else _default(settings, 'recurrence1d', 'p', 0.75)
    cap = args.steps or _default(settings, 'recurrence1d', 'step_cap', 10 ** 6)
    result = recurrence1d_experiment(p, _trials(args, settings, 'recurrence1d'), cap,
                                     master_seed=args.seed, workers=_workers(args, settings))
    table = result.report['conditional_table']
    within = sum(1 for entry in table if entry['within_3ci'])
    line = (f"recurrence p={p}: return_fraction={result.report['return_fraction']:.6g} "
            f"advance table {within}/{len(table)} within 3 CI")
    return result, line


def cmd_tan_prob(args, settings):
    _require_planar(args, 'tan-prob')
    if args.x == 0 and args.y == 0:
        return None, "tan-prob (0,0): p=1 (the origin is always tan)"
    cap = args.steps or _default(settings, 'tanprob', 'step_cap', 10 ** 7)
    estimate = tan_probability_mc(args.x, args.y, _trials(args, settings, 'tanprob'), cap,
                                  master_seed=args.seed, workers=_workers(args, settings), return_rows=True)
    rows = estimate.pop('rows')
    predicted = tan_prediction(args.x, args.y)
    estimate['tan_prediction'] = predicted
    summaries = {}
    resolved = [row['tip'] for row in rows if row['resolved']]
    if resolved:
        summaries['tip'] = summarize(resolved, censored=estimate['censored'])
    result = ExperimentResult(kind='tanprob', columns=('x', 'y', 'trial', 'tip', 'resolved', 'steps'),
                              rows=rows, summaries=summaries, report=estimate, primary='tip')
    line = (f"tan-prob ({args.x},{args.y}): p_hat={estimate['p_hat']:.6g} "
            f"± {estimate['ci_halfwidth']:.3g} (censored {estimate['censored_fraction']:.3g}), "
            f"prediction {predicted:.6g}")
    return result, line


def cmd_band(args, settings):
    _require_planar(args, 'band')
    heights = args.height or _default(settings, 'band', 'heights', [8, 16, 32, 64, 128])
    result = band_experiment(heights, _trials(args, settings, 'band'), step_cap=args.steps,
                             master_seed=args.seed, workers=_workers(args, settings))
    fit = result.report.get('fit')
    slope = f"slope={fit['slope']:.4f} r2={fit['r2']:.4f}" if fit else 'no fit (< 3 heights)'
    means = ' '.join(f"h={e['h']}:{e['mean']:.4g}" for e in result.report['heights'])
    line = f"band {means} {slope} paley_zygmund={'holds' if result.report['paley_zygmund_all_hold'] else 'FAILS'}"
    return result, line


def cmd_drift(args, settings):
    _require_planar(args, 'drift')
    epsilon = args.epsilon if args.epsilon is not None else _default(settings, 'drift', 'epsilon', 1.0)
    n_list = args.steps or _default(settings, 'drift', 'n_list', [10 ** 4, 10 ** 5, 10 ** 6])
    result = drift_experiment(epsilon, n_list, _trials(args, settings, 'drift'), d=args.dim,
                              master_seed=args.seed, workers=_workers(args, settings))
    medians = ' '.join(f"n={h['n']}:{h['median_x']:.6g}" for h in result.report['horizons'])
    line = (f"drift eps={epsilon} medians {medians} p01>0={result.report['p01_positive']} "
            f"p05-stable={result.report['p05_normalized_stable']}")
    return result, line


def cmd_range(args, settings):
    d = args.dim if args.dim is not None else _default(settings, 'range', 'dimension', 3)
    n = args.steps or _default(settings, 'range', 'n', 10 ** 6)
    result = range_experiment(d, n, _trials(args, settings, 'range'),
                              master_seed=args.seed, workers=_workers(args, settings))
    summary = result.summaries['ratio']
    line = f"range d={d} n={n}: mean R_n/n={summary.mean:.6g} ± {summary.ci95_halfwidth:.3g}"
    if 'escape_probability' in result.report:
        line += f" (c={result.report['escape_probability']:.6g})"
    return result, line


def cmd_speed(args, settings):
    d = args.dim if args.dim is not None else _default(settings, 'speed', 'dimension', 4)
    if d < 4 and not args.allow_low_dimension:
        raise UsageError(f"speed bound needs --dim >= 4 (got {d}); pass --allow-low-dimension to collect data")
    epsilon = args.epsilon if args.epsilon is not None else _default(settings, 'speed', 'epsilon', 1.0)
    n = args.steps or _default(settings, 'speed', 'n', 10 ** 6)
    result = speed_experiment(d, epsilon, n, _trials(args, settings, 'speed'), master_seed=args.seed,
                              workers=_workers(args, settings), allow_low_dimension=args.allow_low_dimension)
    line = (f"speed d={d} eps={epsilon} n={n}: mean X_n/n={result.report['mean_speed']:.6g} "
            f"p05={result.report['p05_speed']:.6g} bound={result.report['bound']:.6g}")
    return result, line


def cmd_coupling(args, settings):
    _require_planar(args, 'coupling')
    epsilon = args.epsilon if args.epsilon is not None else _default(settings, 'coupling', 'epsilon', 0.5)
    steps = args.steps or _default(settings, 'coupling', 'n', 1000)
    result = coupling_experiment(epsilon, steps, _trials(args, settings, 'coupling'),
                                 master_seed=args.seed, workers=_workers(args, settings))
    report = result.report
    line = (f"coupling eps={epsilon}: audit failures {report['audit_failures']}, "
            f"fresh-step chi2 {report['fresh_table_test']['statistic']:.4g} "
            f"(threshold {report['fresh_table_test']['threshold']:.4g})")
    return result, line


def cmd_exact_table(args, settings):
    if args.steps < 0:
        raise UsageError(f"--n must be nonnegative, got {args.steps}")
    rows = exact_table(args.steps)
    report: Dict[str, Any] = {'n_max': args.steps}
    if args.verify:
        if args.steps > EXHAUSTIVE_LIMIT:
            raise UsageError(f"--verify needs --n <= {EXHAUSTIVE_LIMIT}")
        brute = enumerate_slit_walks(args.steps)
        report['verified'] = brute == [row['a_n'] for row in rows]
    result = ExperimentResult(kind='exact-table', columns=EXACT_TABLE_COLUMNS, rows=rows,
                              summaries={}, report=report)
    last = rows[-1]
    line = f"exact-table n={last['n']}: a_n={last['a_n']}"
    if last['ratio'] is not None:
        line += f" ratio={last['ratio']:.6g}"
    if 'verified' in report:
        line += f" brute-force {'match' if report['verified'] else 'MISMATCH'}"
    return result, line


def cmd_exact_tan(args, settings):
    n_max = args.n_max or settings['exact']['n_max']
    bracket = exact_tan_probability(args.x, args.y, n_max, exact=args.exact,
                                    kill_floor=settings['exact']['kill_floor'])
    result = ExperimentResult(kind='exact-tan', columns=(), rows=[], summaries={},
                              report={'x': args.x, 'y': args.y, **bracket.to_dict()})
    line = (f"exact-tan ({args.x},{args.y}) n_max={n_max}: "
            f"[{bracket.lower:.10g}, {bracket.upper:.10g}]")
    return result, line


def cmd_gz_constant(args, settings):
    return None, f"{glasser_zucker_constant():.{args.digits}f}"


COMMANDS = {
    'simulate': cmd_simulate,
    'recurrence': cmd_recurrence,
    'tan-prob': cmd_tan_prob,
    'band': cmd_band,
    'drift': cmd_drift,
    'range': cmd_range,
    'speed': cmd_speed,
    'coupling': cmd_coupling,
    'exact-table': cmd_exact_table,
    'exact-tan': cmd_exact_tan,
    'gz-constant': cmd_gz_constant,
}


def _write_artifacts(args, result: ExperimentResult, wall_time_ms: float):
    name = args.name or args.command
    exporter = ResultExporter(args.out)
    config = {key: value for key, value in vars(args).items() if key not in ('out', 'name', 'config', 'log_level')}
    if args.format == 'csv' and result.columns:
        exporter.write_csv(name, result.columns, result.rows)
    exporter.write_summary(name, result, config=config, seed=getattr(args, 'seed', None),
                           wall_time_ms=wall_time_ms)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = load_settings(args.config)
    configure_logging(settings, args.log_level)

    if args.command == 'campaign':
        return run_campaign(args.path, settings, workers=args.workers, output_dir=args.out)

    started = time.perf_counter()
    try:
        result, line = COMMANDS[args.command](args, settings)
    except (UsageError, ValueError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:
        logger.error(f"❌ {args.command} failed: {e}")
        return EXIT_RUNTIME

    print(line)
    out = getattr(args, 'out', None)
    if out and result is not None:
        try:
            _write_artifacts(args, result, round((time.perf_counter() - started) * 1000.0, 3))
        except OSError as e:
            logger.error(f"❌ Could not write artifacts to {out}: {e}")
            return EXIT_RUNTIME
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
