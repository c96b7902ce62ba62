"""
    Cross-product parameter sweeps over one or two config paths.

    Points run in a process pool; rows are collected in grid order, so the
    CSV does not depend on which worker finished first.
"""
from concurrent.futures import ProcessPoolExecutor
from itertools import product
import numbers
import time

import numpy as np
import pandas as pd

from cli.base import RunSummary
from cli.commands import make_command
from cli.config import RunConfig
from helpers.errors import QdSimError, UnknownCommandError
from helpers.log import configure_logger, progress
from helpers.output import write_csv, write_json

logger = configure_logger(__name__)


def _scalars(outputs: dict) -> dict:
    """Keep the outputs a CSV cell can hold"""
    row = {}
    for key, value in outputs.items():
        if isinstance(value, (bool, np.bool_, str)) or value is None:
            row[key] = value
        elif isinstance(value, numbers.Real):
            row[key] = float(value) if not isinstance(value, numbers.Integral) else int(value)
    return row


def run_point(command: str, action, sections: dict, overrides: tuple) -> dict:
    """
    Evaluate one grid point

    :param command: subcommand name
    :param action: gate/sense action or None
    :param sections: raw config sections
    :param overrides: ((section.key, value), ...) of this point
    :return: scalar outputs, or {'error': ...} when the point failed
    """
    try:
        config = RunConfig(sections)
        for path, value in overrides:
            config = config.with_override(path, value)
        outputs, _ = make_command(command, action).run(config, with_tables=False)
        return {**_scalars(outputs), 'error': ''}
    except QdSimError as e:
        logger.error(f"sweep point {dict(overrides)} failed: {e}")
        return {'error': f'{type(e).__name__}: {e.message}'}


class SweepRunner:
    """
    :param config: configuration with a [sweep] section
    :param jobs: worker processes, 1 runs in-process
    """

    def __init__(self, config: RunConfig, jobs: int = 1):
        self.config = config
        self.jobs = max(1, int(jobs))
        self.axes = config.sweep_axes()
        parts = config.require('sweep', 'command').split()
        if not parts or parts[0] == 'sweep':
            raise UnknownCommandError("[sweep] command must name a non-sweep command")
        self.command, self.action = parts[0], (parts[1] if len(parts) > 1 else None)
        make_command(self.command, self.action)
        self.logger = configure_logger(__name__)

    def points(self) -> list:
        """Grid points in lexicographic order of the axes"""
        paths = [path for path, _ in self.axes]
        return [tuple(zip(paths, values)) for values in product(*(grid for _, grid in self.axes))]

    def run(self) -> pd.DataFrame:
        points = self.points()
        sections = self.config.sections
        self.logger.info(f"sweep of {self.command}: {len(points)} point(s) over "
                         f"{[p for p, _ in self.axes]}, {self.jobs} job(s)")
        args = [(self.command, self.action, sections, point) for point in points]
        if self.jobs == 1:
            results = [run_point(*a) for a in progress(args, desc='sweep')]
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(progress(pool.map(run_point, *zip(*args)), desc='sweep', total=len(args)))

        rows = []
        for point, result in zip(points, results):
            row = {}
            for path, raw in point:
                section, key = RunConfig.split_path(path)
                row[path] = RunConfig({section: {key: raw}}).get(section, key)
            row.update(result)
            rows.append(row)
        table = pd.DataFrame(rows)
        columns = [c for c in table.columns if c != 'error'] + ['error']
        failed = int((table['error'] != '').sum())
        if failed:
            self.logger.warning(f"{failed} of {len(points)} sweep point(s) failed")
        return table[columns]

    def execute(self) -> RunSummary:
        start = time.perf_counter()
        table = self.run()
        out_dir = self.config.out_dir
        csv_path = write_csv(table, out_dir / 'sweep.csv')
        summary_path = out_dir / 'sweep_summary.json'
        summary = RunSummary(
            command=f'sweep {self.command}' + (f' {self.action}' if self.action else ''),
            config_hash=self.config.hash(),
            outputs={'points': len(table), 'failed': int((table['error'] != '').sum()),
                     'axes': [p for p, _ in self.axes]},
            files=[csv_path, summary_path],
            wall_clock=round(time.perf_counter() - start, 3),
        )
        write_json(summary.as_dict(), summary_path)
        return summary


def sweep(config: RunConfig, jobs: int = None) -> pd.DataFrame:
    """Sweep table of config's [sweep] section, grid ordered, with an 'error' column"""
    return SweepRunner(config, config.jobs if jobs is None else jobs).run()
