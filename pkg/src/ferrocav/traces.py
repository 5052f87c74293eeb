"""Column-oriented time series with a stable text serialization.

Traces are written as plain CSV with a fixed header line and 17
significant digits per value, which round-trips IEEE 754 doubles
exactly.  Readers reject files whose header does not match the expected
column list, so the on-disk contract is explicit.
"""

from __future__ import annotations

import warnings
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Trace", "write_csv", "read_csv"]


class Trace:
    """Named float64 columns of equal length."""

    def __init__(self, columns: Sequence[str],
                 data: Iterable[np.ndarray]) -> None:
        self.columns = tuple(columns)
        self.data = [np.asarray(c, dtype=float) for c in data]
        if len(self.data) != len(self.columns):
            raise ValueError("column names and arrays differ in count")
        n = self.data[0].size if self.data else 0
        for name, col in zip(self.columns, self.data):
            if col.ndim != 1 or col.size != n:
                raise ValueError(f"column {name} has inconsistent shape")

    def __len__(self) -> int:
        return self.data[0].size if self.data else 0

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.data[self.columns.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def to_csv(self, path: str | Path) -> None:
        write_csv(path, self.columns, self.data)

    @classmethod
    def from_csv(cls, path: str | Path,
                 expected_columns: Sequence[str] | None = None) -> "Trace":
        columns, data = read_csv(path)
        if expected_columns is not None and tuple(columns) != tuple(expected_columns):
            raise ValueError(
                f"{path}: header {columns} does not match expected "
                f"{tuple(expected_columns)}")
        return cls(columns, data)


def write_csv(path: str | Path, columns: Sequence[str],
              data: Iterable[np.ndarray]) -> None:
    """Write columns as CSV with 17 significant digits per value."""
    arrays = [np.asarray(c, dtype=float) for c in data]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        if not arrays:
            return
        for row in zip(*arrays):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_csv(path: str | Path) -> tuple[tuple[str, ...], list[np.ndarray]]:
    """Read a CSV written by :func:`write_csv`."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if not header:
            raise ValueError(f"{path}: empty file")
        columns = tuple(header.split(","))
        with warnings.catch_warnings():
            # a header-only file (zero rows) is legitimate
            warnings.filterwarnings("ignore",
                                    message="loadtxt: input contained no "
                                            "data.*")
            table = np.loadtxt(fh, delimiter=",", ndmin=2, dtype=float)
    if table.size == 0:
        return columns, [np.empty(0) for _ in columns]
    if table.shape[1] != len(columns):
        raise ValueError(f"{path}: row width does not match header")
    return columns, [np.ascontiguousarray(table[:, i])
                     for i in range(len(columns))]
