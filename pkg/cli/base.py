from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, Tuple
import time

import pandas as pd

from cli.config import RunConfig
from helpers.log import configure_logger
from helpers.output import write_csv, write_json

__version__ = '0.1.0'

# values quoted for comparison only, they are not computed by any command
ANNOTATIONS = {
    'experimental_brightness': 0.79,
    'measured_correct_output': 0.684,
}


@dataclass
class RunSummary:
    command: str
    config_hash: str
    outputs: dict
    files: list
    wall_clock: float
    version: str = __version__
    annotations: dict = field(default_factory=lambda: dict(ANNOTATIONS))

    def as_dict(self) -> dict:
        return {
            'command': self.command,
            'config_hash': self.config_hash,
            'outputs': self.outputs,
            'files': [str(f) for f in self.files],
            'wall_clock': self.wall_clock,
            'version': self.version,
            'annotations': self.annotations,
        }


class BaseCommand(ABC):
    """
    One command line operation

    Subclasses compute scalar outputs and tables from a RunConfig; execute()
    writes the tables as CSV and the run summary as JSON.
    """
    name: str = ''
    stochastic: bool = False

    def __init__(self):
        self.logger = configure_logger(__name__)

    @abstractmethod
    def run(self, config: RunConfig, with_tables: bool = True) -> Tuple[Dict, Dict[str, pd.DataFrame]]:
        """
        Compute the command

        :param config: parsed configuration
        :param with_tables: False when only the scalar outputs are needed (sweeps)
        :return: (scalar outputs, {file stem: DataFrame})
        """
        pass

    def execute(self, config: RunConfig) -> RunSummary:
        if self.stochastic:
            config.require_seed()
        start = time.perf_counter()
        self.logger.info(f"{self.name}: config {config.hash()[:12]}")
        outputs, tables = self.run(config)
        out_dir = config.out_dir
        files = [write_csv(df, out_dir / f'{stem}.csv') for stem, df in tables.items()]
        stem = self.name.replace(' ', '_')
        summary_path = out_dir / f'{stem}_summary.json'
        files.append(summary_path)
        summary = RunSummary(
            command=self.name,
            config_hash=config.hash(),
            outputs=outputs,
            files=files,
            wall_clock=round(time.perf_counter() - start, 3),
        )
        write_json(summary.as_dict(), summary_path)
        self.logger.info(f"{self.name}: wrote {len(files)} file(s) to {out_dir}")
        return summary
