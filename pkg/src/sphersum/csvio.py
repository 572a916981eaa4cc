"""Byte-stable CSV and JSON artifact emission.

Every artifact the command-line tools write is reproducible bit-for-bit
from its configuration: floats are serialized with shortest round-trip
formatting, metadata carries no timestamps or host data, and JSON is
sorted.  Column layouts live here so producers (the CLI) and consumers
(plotting tools, spreadsheet imports) share one contract:

==================  =========================================================
shell points        N, j, n1..nN
shell counts        N, j, count
partitions          N, n1..nN, k, q, p, tag
kernel coefficients N, R, r, M, j, n1..nN, re, im
trajectories        trial, lambda, x1..xN, re, im, abs
threshold probes    N, s, alpha, lambda, x1..xN, re, im, abs, envelope
decay scans         N, lambda, eta_norm, l, weighted_abs
experiment ratios   N, band, trial, ratio
==================  =========================================================

File layout: zero or more ``# key = value`` metadata lines, then the
header row, then data rows.  Multi-index cells (the ``alpha`` column) join
their entries with ``;`` so they stay one CSV field.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ParameterError


def axis_columns(prefix: str, N: int) -> list[str]:
    """Per-axis column names: prefix1 .. prefixN."""
    if N < 1:
        raise ParameterError(f"dimension must be >= 1, got {N}")
    return [f"{prefix}{i}" for i in range(1, N + 1)]


def shell_point_columns(N: int) -> list[str]:
    return ["N", "j", *axis_columns("n", N)]


def shell_count_columns() -> list[str]:
    return ["N", "j", "count"]


def partition_columns(N: int) -> list[str]:
    return ["N", *axis_columns("n", N), "k", "q", "p", "tag"]


def coeff_columns(N: int) -> list[str]:
    return ["N", "R", "r", "M", "j", *axis_columns("n", N), "re", "im"]


def trajectory_columns(N: int) -> list[str]:
    return ["trial", "lambda", *axis_columns("x", N), "re", "im", "abs"]


def probe_columns(N: int) -> list[str]:
    return ["N", "s", "alpha", "lambda", *axis_columns("x", N), "re", "im", "abs", "envelope"]


def decay_columns() -> list[str]:
    return ["N", "lambda", "eta_norm", "l", "weighted_abs"]


def ratio_columns() -> list[str]:
    return ["N", "band", "trial", "ratio"]


def format_cell(value) -> str:
    """One CSV cell: ints plainly, floats shortest-round-trip, strings as is."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise ParameterError("booleans are not valid CSV cells; spell the meaning out")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    raise ParameterError(f"unsupported CSV cell type {type(value).__name__}")


def format_multi_index(alpha) -> str:
    """One-cell form of a derivative multi-index, entries joined with ';'."""
    return ";".join(str(int(a)) for a in np.atleast_1d(np.asarray(alpha)))


def write_csv(path, header, rows, metadata=None) -> int:
    """Write one artifact; returns the number of data rows written."""
    path = Path(path)
    count = 0
    with path.open("w", encoding="utf-8", newline="") as fh:
        for key, value in (metadata or {}).items():
            if "=" in key or "\n" in key:
                raise ParameterError(f"metadata key {key!r} would break round-tripping")
            fh.write(f"# {key} = {format_cell(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
            count += 1
    return count


def read_csv(path) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Read (metadata, header, rows) back; every cell stays a string."""
    metadata: dict[str, str] = {}
    data_lines: list[str] = []
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if sep:
                    metadata[key.strip()] = value.strip()
                continue
            data_lines.append(line)
    table = [row for row in csv.reader(data_lines) if row]
    if not table:
        return metadata, [], []
    return metadata, table[0], table[1:]


def write_json(path, payload) -> None:
    """Sorted, indented JSON with a trailing newline; no volatile fields."""
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
