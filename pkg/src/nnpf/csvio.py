"""Strict numeric CSV reading and writing.

Conventions: comma separator, UTF-8, header row required, ``.`` decimal
point, no thousands separators.  Values are written with repr so files
round-trip float64 exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def read_table(path) -> tuple:
    """Read a numeric CSV; returns (header, float64 matrix (n_rows, n_cols)).

    Raises ValueError naming the offending row/column on any malformation.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        header = [h.strip() for h in header]
        if not header or any(not h for h in header):
            raise ValueError(f"{path}: blank column name in header")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}"
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                bad = next(v for v in row if not _is_float(v))
                raise ValueError(f"{path}:{lineno}: non-numeric value {bad!r}") from None
    data = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(header))
    return header, data


def _is_float(v: str) -> bool:
    try:
        float(v)
        return True
    except ValueError:
        return False


def write_table(path, header, data) -> None:
    """Write a float64 matrix with a header row; repr formatting."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError(
            f"data shape {data.shape} does not match {len(header)} header columns"
        )
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in data:
            writer.writerow([repr(float(v)) for v in row])


def pick_column(header, data, name=None, default: str = "first") -> np.ndarray:
    """Select one column by name, or positionally when name is None.

    default picks the "first" or "last" column; prediction-style files
    conventionally lead with the value of interest while dataset files
    end with the target.
    """
    if name is not None:
        if name not in header:
            raise ValueError(f"no column named {name!r}; file has {header}")
        return data[:, header.index(name)]
    if default == "first":
        return data[:, 0]
    if default == "last":
        return data[:, -1]
    raise ValueError(f"default must be 'first' or 'last', got {default!r}")
