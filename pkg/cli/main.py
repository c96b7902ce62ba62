import argparse
import sys

from cli.commands import COMMANDS, make_command
from cli.config import RunConfig
from cli.sweep import SweepRunner
from helpers.errors import QdSimError, UnknownCommandError
from helpers.log import configure_logger, set_verbosity
from helpers.output import to_json

logger = configure_logger(__name__)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so errors come out as JSON"""

    def error(self, message):
        raise UnknownCommandError(message)


def build_parser() -> CliParser:
    parser = CliParser(prog='qdsim', description="Quantum-dot micropillar cavity QED toolkit")
    parser.add_argument('command', help=f"one of {', '.join(sorted(COMMANDS))}, or sweep")
    parser.add_argument('action', nargs='?', default=None,
                        help="gate: truth-table | fidelity | sweep; sense: trace | histogram | error-curve")
    parser.add_argument('--config', '-c', default=None, help="INI configuration file")
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='SECTION.KEY=VALUE',
                        help="override one configuration value, repeatable")
    parser.add_argument('--seed', type=int, default=None, help="global RNG seed")
    parser.add_argument('--jobs', type=int, default=None, help="parallel sweep points")
    parser.add_argument('--out', default=None, help="output directory (default: $QDSIM_OUT or ./out)")
    parser.add_argument('--M', dest='M', type=float, default=None, help="two-photon overlap for gate commands")
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    return parser


def load_config(args) -> RunConfig:
    overrides = list(args.overrides)
    for key, value in (('seed', args.seed), ('jobs', args.jobs), ('out', args.out)):
        if value is not None:
            overrides.append(f'run.{key}={value}')
    if args.M is not None:
        overrides.append(f'gate.m={args.M}')
    return RunConfig.load(args.config, overrides)


def main(argv=None) -> int:
    """
    Parse the command line, run the command and print its summary as JSON

    :return: 0 on success, the error's exit code otherwise
    """
    try:
        args = build_parser().parse_args(argv)
        set_verbosity(args.verbose)
        config = load_config(args)
        if args.command == 'sweep':
            if args.action:
                raise UnknownCommandError(f"sweep takes no action, got {args.action!r}")
            summary = SweepRunner(config, config.jobs).execute()
        else:
            summary = make_command(args.command, args.action).execute(config)
    except QdSimError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        sys.stdout.write(to_json(e.to_dict()))
        return e.exit_code
    sys.stdout.write(to_json(summary.as_dict()))
    return 0
