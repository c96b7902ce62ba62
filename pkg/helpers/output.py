"""
    Writers for CSV tables and JSON summaries.

    Files are written to a temporary sibling and renamed into place so a
    crashed run never leaves a half-written artifact behind.
"""
import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

CSV_FLOAT_FORMAT = '%.10g'


def _atomic_write(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def write_csv(df: pd.DataFrame, path) -> Path:
    """
    Write a DataFrame as comma separated values with a header row and LF endings

    :param df: table to write, index is dropped
    :param path: destination file
    :return: the destination path
    """
    text = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    _atomic_write(Path(path), text)
    return Path(path)


def _to_jsonable(value):
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if np.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': float(np.real(value)), 'im': float(np.imag(value))}
    if isinstance(value, np.ndarray):
        return _to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def to_json(payload: dict) -> str:
    return json.dumps(_to_jsonable(payload), indent=2, sort_keys=True) + '\n'


def write_json(payload: dict, path) -> Path:
    _atomic_write(Path(path), to_json(payload))
    return Path(path)


def stable_hash(payload) -> str:
    """SHA-256 of the canonical (key sorted, compact) JSON of a payload"""
    canonical = json.dumps(_to_jsonable(payload), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
