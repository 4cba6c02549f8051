"""Command-line entry point: ``ortho-qkd run | attack-table | efficiency-table``."""
import argparse
import logging
import sys
import time
from typing import Dict, List, Optional

from ortho_qkd import defaults
from ortho_qkd.analysis.attack_table import attack_constant_table
from ortho_qkd.analysis.ledger import efficiency_frame
from ortho_qkd.cli.experiment import ExperimentSpec, load_spec, run_trials
from ortho_qkd.cli.report import (attack_document, efficiency_document, render, run_document, trial_frame,
                                  write_output)
from ortho_qkd.errors import ConfigError, QKDError
from ortho_qkd.qstate.rng import fresh_seed

logger = logging.getLogger(__name__)

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
RUN_OPTIONS = ('protocol', 'n', 'trials', 'seed', 'attack', 'noise', 'grouping', 'adapt', 'decoy_ratio',
               'checking_fraction', 'error_threshold', 'workers', 'out', 'format')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='ortho-qkd', description='Simulate orthogonal-state QKD protocols')
    parser.add_argument('--log-level', choices=LOG_LEVELS, default='WARNING')
    parser.add_argument('--verbose', action='store_true', help='shorthand for --log-level INFO')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run seeded trials of one protocol configuration')
    run.add_argument('--config', help='flat key = value configuration file')
    run.add_argument('--protocol', type=int, choices=(1, 2))
    run.add_argument('--n', type=int, help='number of key positions N')
    run.add_argument('--trials', type=int)
    run.add_argument('--seed', type=int, help='master seed, generated when absent')
    run.add_argument('--attack', help='name[:param[,param]], e.g. purify-single:z')
    run.add_argument('--noise', help='mode[:p1[,p2...]], e.g. pauli-full:0.4,0.2,0.2,0.2')
    run.add_argument('--grouping', choices=defaults.GROUPINGS)
    run.add_argument('--adapt', choices=('true', 'false'), help='run the noise-adapted protocol')
    run.add_argument('--decoy-ratio', type=float)
    run.add_argument('--checking-fraction', type=float)
    run.add_argument('--error-threshold', type=float)
    run.add_argument('--workers', type=int)
    run.add_argument('--out', help='output path, stdout when absent')
    run.add_argument('--format', choices=defaults.REPORT_FORMATS)
    run.add_argument('--quiet', action='store_true', help='hide the progress bar')

    table = commands.add_parser('attack-table', help='exact block purification error rates')
    table.add_argument('--out')
    table.add_argument('--format', choices=defaults.REPORT_FORMATS, default=defaults.REPORT_FORMAT)

    eff = commands.add_parser('efficiency-table', help='qubit and classical bit consumption per key bit')
    eff.add_argument('--n', type=int, default=1000)
    eff.add_argument('--out')
    eff.add_argument('--format', choices=defaults.REPORT_FORMATS, default=defaults.REPORT_FORMAT)
    return parser


def cmd_run(spec: ExperimentSpec, quiet: bool = False) -> Dict[str, any]:
    if spec.seed is None:
        spec = spec.with_seed(fresh_seed())
    start = time.time()
    results = run_trials(spec, spec.seed, quiet=quiet)
    document = run_document(spec, results)
    write_output(render(document, trial_frame(results), spec.format), spec.out)
    logger.info('ran %s trials with seed %s in %.1f seconds', spec.trials, spec.seed, time.time() - start)
    return document


def cmd_attack_table(out: Optional[str] = None, fmt: str = defaults.REPORT_FORMAT) -> Dict[str, any]:
    table = attack_constant_table()
    document = attack_document(table)
    write_output(render(document, table.frame(), fmt), out)
    if fmt != 'json':
        logger.warning(table.note)
    return document


def cmd_efficiency_table(n: int = 1000, out: Optional[str] = None,
                         fmt: str = defaults.REPORT_FORMAT) -> Dict[str, any]:
    if n < 2:
        raise ConfigError(f'N must be at least 2, got {n}')
    frame = efficiency_frame(n)
    document = efficiency_document(frame, n)
    write_output(render(document, frame, fmt), out)
    return document


def main(argv: List[str] = None) -> int:
    args = build_parser().parse_args(argv)
    level = 'INFO' if args.verbose and args.log_level == 'WARNING' else args.log_level
    logging.basicConfig(level=level, format=defaults.LOG_FORMAT, datefmt=defaults.LOG_DATE_FORMAT)
    try:
        if args.command == 'run':
            overrides = {option: getattr(args, option) for option in RUN_OPTIONS}
            cmd_run(load_spec(args.config, overrides), quiet=args.quiet)
        elif args.command == 'attack-table':
            cmd_attack_table(args.out, args.format)
        else:
            cmd_efficiency_table(args.n, args.out, args.format)
    except ConfigError as err:
        print(f'ortho-qkd: invalid configuration: {err}', file=sys.stderr)
        return 1
    except (QKDError, OSError) as err:
        print(f'ortho-qkd: {err}', file=sys.stderr)
        return 2
    except Exception as err:
        logger.debug('unexpected failure', exc_info=True)
        print(f'ortho-qkd: unexpected error: {err!r}', file=sys.stderr)
        return 2
    return 0


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
