"""Diagnostics CSV and binary field snapshots.

Snapshot layout (all little-endian)::

    b"KGS1"
    u32  dim
    u32  points[dim]
    f64  lengths[dim]
    f64  t
    u32  field_count
    field_count * prod(points) * (f64 re, f64 im)   # row-major per field
"""

from __future__ import annotations

import csv
import io
import math
import os
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .diagnostics import DiagnosticsRecord
from .errors import ConfigurationError, SnapshotError
from .grid import ComplexField, CoupledState, DiagonalState, GridSpec

__all__ = [
    "CSV_COLUMNS",
    "write_diagnostics",
    "format_diagnostics",
    "read_diagnostics",
    "Snapshot",
    "write_snapshot",
    "read_snapshot",
    "snapshot_nbytes",
]

CSV_COLUMNS = DiagnosticsRecord.columns()
MAGIC = b"KGS1"


def _fmt(value: float) -> str:
    return format(value, ".17g")


def format_diagnostics(records: Iterable[DiagnosticsRecord]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for rec in records:
        buf.write(",".join(_fmt(getattr(rec, col)) for col in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def write_diagnostics(records: Iterable[DiagnosticsRecord], path) -> None:
    """Write the CSV header and one row per record (17 significant digits)."""
    records = list(records)
    for a, b in zip(records, records[1:]):
        if b.t < a.t:
            raise ValueError("diagnostics records must be time-ordered")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_diagnostics(records))


def read_diagnostics(path) -> list[DiagnosticsRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected diagnostics header {header}")
        return [DiagnosticsRecord(*(float(v) for v in row)) for row in reader if row]


@dataclass(frozen=True, eq=False)
class Snapshot:
    grid: GridSpec
    t: float
    fields: tuple[ComplexField, ...]


def _fields_of(obj) -> tuple[Sequence[ComplexField], float]:
    if isinstance(obj, CoupledState):
        return (obj.psi, obj.chi), obj.t
    if isinstance(obj, DiagonalState):
        return (obj.eta_plus, obj.eta_minus), obj.t
    if isinstance(obj, ComplexField):
        return (obj,), 0.0
    return tuple(obj), 0.0


def snapshot_nbytes(grid: GridSpec, field_count: int) -> int:
    return 4 + 4 + 4 * grid.dim + 8 * grid.dim + 8 + 4 + field_count * grid.size * 16


def write_snapshot(obj, path, t: float | None = None) -> None:
    """Write a field, a state or a sequence of fields in position representation."""
    fields_, t_obj = _fields_of(obj)
    if not fields_:
        raise ValueError("nothing to write")
    grid = fields_[0].grid
    for f in fields_:
        if f.grid != grid:
            raise ValueError("all snapshot fields must share one grid")
    t = t_obj if t is None else t
    header = MAGIC + struct.pack(
        f"<I{grid.dim}I{grid.dim}ddI", grid.dim, *grid.points, *grid.lengths, float(t), len(fields_)
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for f in fields_:
            fh.write(np.ascontiguousarray(f.to_position().values, dtype="<c16").tobytes())


def read_snapshot(path) -> Snapshot:
    with open(path, "rb") as fh:
        data = fh.read()
    view = memoryview(data)
    pos = 0

    def take(fmt):
        nonlocal pos
        size = struct.calcsize(fmt)
        if pos + size > len(data):
            raise SnapshotError(f"{os.fspath(path)}: truncated header at byte {pos}")
        out = struct.unpack_from(fmt, view, pos)
        pos += size
        return out

    (magic,) = take("<4s")
    if magic != MAGIC:
        raise SnapshotError(f"{os.fspath(path)}: bad magic {magic!r}")
    (dim,) = take("<I")
    if dim not in (1, 2, 3):
        raise SnapshotError(f"{os.fspath(path)}: invalid dimension {dim}")
    points = take(f"<{dim}I")
    lengths = take(f"<{dim}d")
    (t,) = take("<d")
    (count,) = take("<I")
    try:
        grid = GridSpec(dim, tuple(points), tuple(lengths))
    except ConfigurationError as exc:
        raise SnapshotError(f"{os.fspath(path)}: invalid grid ({exc})") from None
    n = math.prod(points)
    expected = pos + count * n * 16
    if len(data) != expected:
        raise SnapshotError(f"{os.fspath(path)}: expected {expected} bytes, found {len(data)}")
    fields_ = []
    for i in range(count):
        values = np.frombuffer(data, dtype="<c16", count=n, offset=pos + i * n * 16)
        fields_.append(ComplexField(grid, values.astype(complex).reshape(grid.shape)))
    return Snapshot(grid, t, tuple(fields_))
