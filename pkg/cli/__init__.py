from .config import RunConfig, SCHEMA
from .base import BaseCommand, RunSummary, __version__
from .commands import COMMANDS, make_command
from .sweep import SweepRunner, sweep
from .main import main, build_parser

__all__ = [
    'RunConfig',
    'SCHEMA',
    'BaseCommand',
    'RunSummary',
    'COMMANDS',
    'make_command',
    'SweepRunner',
    'sweep',
    'main',
    'build_parser',
]
