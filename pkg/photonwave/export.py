"""Snapshot files and comma-separated tables written by the batch runner.

Snapshot layout (all little-endian):

    magic   8 bytes   b"PWSNAP01"
    dims    3 x int64 Nx, Ny, Nz
    lengths 3 x f8    Lx, Ly, Lz
    time    1 x f8
    body    Nx*Ny*Nz*12 x f8, row-major over (x, y, z), per point Re/Im of the 6 components
"""

from __future__ import annotations

import csv
import io
import logging
import os
from pathlib import Path
from typing import Iterable, Tuple

import numpy as np

from photonwave.fields.dynamics import FieldState
from photonwave.grid import BoxSpec

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b"PWSNAP01"
HEADER_DTYPE = np.dtype([("dims", "<i8", (3,)), ("lengths", "<f8", (3,)), ("time", "<f8")])


class SnapshotError(ValueError):
    pass


def snapshot_bytes(state: FieldState) -> bytes:
    header = np.zeros((), dtype=HEADER_DTYPE)
    header["dims"] = state.box.grid_points
    header["lengths"] = state.box.lengths
    header["time"] = state.time
    # (6, Nx, Ny, Nz) -> (Nx, Ny, Nz, 6) complex -> 12 floats per point
    body = np.ascontiguousarray(np.moveaxis(state.psi, 0, -1), dtype="<c16").view("<f8")
    return SNAPSHOT_MAGIC + header.tobytes() + body.tobytes()


def write_snapshot(state: FieldState, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(snapshot_bytes(state))
    logger.info("Wrote snapshot t=%.6g to %s", state.time, path)
    return path


def parse_snapshot(content: bytes) -> FieldState:
    if not content.startswith(SNAPSHOT_MAGIC):
        raise SnapshotError("Not a photonwave snapshot")
    offset = len(SNAPSHOT_MAGIC)
    if len(content) < offset + HEADER_DTYPE.itemsize:
        raise SnapshotError("Truncated snapshot header")
    header = np.frombuffer(content, dtype=HEADER_DTYPE, count=1, offset=offset)[0]
    dims = tuple(int(n) for n in header["dims"])
    body = content[offset + HEADER_DTYPE.itemsize :]
    expected = int(np.prod(dims)) * 12 * 8
    if len(body) != expected:
        raise SnapshotError(f"Snapshot body has {len(body)} bytes, expected {expected}")
    box = BoxSpec(
        lengths=tuple(float(v) for v in header["lengths"]),  # type: ignore[arg-type]
        grid_points=dims,  # type: ignore[arg-type]
    )
    values = np.frombuffer(body, dtype="<f8").view("<c16").reshape(dims + (6,))
    psi = np.moveaxis(values, -1, 0).astype(complex)
    return FieldState(box=box, psi=psi, time=float(header["time"]))


def read_snapshot(path: str | os.PathLike) -> FieldState:
    return parse_snapshot(Path(path).read_bytes())


def validate_snapshot(content: bytes) -> Tuple[bool, str | None]:
    try:
        parse_snapshot(content)
    except (SnapshotError, ValueError) as exc:
        return False, str(exc)
    return True, None


def write_table(path: str | os.PathLike, header: Iterable[str], rows: Iterable[Iterable]) -> Path:
    """Comma-separated table with a one-line header; floats use ``repr`` for exact round trips."""

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    count = 0
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        count += 1
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(buffer.getvalue())
    logger.info("Wrote %d rows to %s", count, path)
    return path


def read_table(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))
