import logging
import sys

from tqdm import tqdm

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """
    Return a logger with a single stream handler attached

    Level and handler are set on first configuration only, so a later call
    keeps the level chosen by set_verbosity.

    :param name: logger name, usually the module's __name__
    :param level: logging level for a logger configured here for the first time
    :return: configured logging.Logger
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        logger.setLevel(level)
        handler = logging.StreamHandler()
        formatter = logging.Formatter(LOG_FORMAT)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger


def set_verbosity(verbose: bool):
    """Switch every toolkit logger between INFO and DEBUG"""
    level = logging.DEBUG if verbose else logging.INFO
    for name in list(logging.root.manager.loggerDict):
        if name.split('.')[0] in ('qedcore', 'hilbert', 'reflectivity', 'source', 'gate', 'sensing', 'cli', 'helpers'):
            logging.getLogger(name).setLevel(level)


def progress(iterable, desc: str, total: int = None):
    """tqdm bar on stderr, silent when stderr is not a terminal"""
    return tqdm(iterable, desc=desc, total=total, leave=False, disable=not sys.stderr.isatty())
