"""File I/O helpers: byte-stable JSON/CSV writers and atomic replacement.

All floats are serialized with 17 significant digits, which round-trips IEEE
doubles losslessly, and every writer goes through a temp-file + rename so
partially written outputs never appear under the target name.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputFormatError


def format_float(x: float) -> str:
    return "%.17g" % float(x)


def _json_fragment(obj) -> str:
    if isinstance(obj, dict):
        items = ", ".join(
            f"{json.dumps(str(k))}: {_json_fragment(v)}" for k, v in obj.items()
        )
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_fragment(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    return json.dumps(obj)


def dumps_json(obj) -> str:
    """JSON text with floats at 17 significant digits."""
    return _json_fragment(obj)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, dumps_json(obj) + "\n")


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _format_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        if np.isnan(v):
            return ""
        return format_float(v)
    return str(v)


def write_csv(path, header, rows) -> None:
    """Write rows (sequences matching ``header``) atomically."""
    lines = [",".join(header)]
    lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Parse a CSV written by :func:`write_csv`; returns (header, row dicts)."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc
    if not lines:
        raise InputFormatError(f"{path}: empty file")
    header = lines[0].split(",")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise InputFormatError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        rows.append(dict(zip(header, cells)))
    return header, rows


def write_meta(out_path, config: dict) -> None:
    """Sidecar ``<out>.meta`` holding the effective configuration as one JSON line."""
    atomic_write_text(str(out_path) + ".meta", dumps_json(config) + "\n")
