"""CSV-with-metadata and JSON summary writers.

A result file looks like::

    # kickedtops: 0.1.0
    # command: evolve
    # k: 3.0
    ...
    t,s_vn,s_lin
    0,0,0
    ...

Metadata values are JSON-encoded so they parse back losslessly. Nothing
time- or host-dependent is written, so reruns are byte-identical.
"""
import json
from pathlib import Path

import numpy as np


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def format_number(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_csv(path, columns, metadata):
    """Write equal-length ``columns`` (an ordered dict name -> sequence)."""
    path = Path(path)
    names = list(columns)
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"columns have different lengths: {sorted(lengths)}")
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {k}: {json.dumps(_plain(v), sort_keys=True)}" for k, v in metadata.items()]
    lines.append(",".join(names))
    for row in zip(*(columns[n] for n in names)):
        lines.append(",".join(format_number(x) for x in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Inverse of ``write_csv``: returns ``(metadata, columns)``.

    Numeric columns come back as float arrays, anything else as lists of str.
    """
    meta, header, rows = {}, None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, raw = line[1:].strip().partition(": ")
            meta[key] = json.loads(raw)
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append(line.split(","))
    columns = {}
    for i, name in enumerate(header or []):
        vals = [r[i] for r in rows]
        try:
            columns[name] = np.array([float(v) for v in vals])
        except ValueError:
            columns[name] = vals
    return meta, columns


def summary_path(csv_path, suffix=""):
    p = Path(csv_path)
    return p.with_name(p.stem + suffix + ".json")


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_plain(payload), indent=2, sort_keys=True) + "\n")
    return path
