"""Flat-file model serialization and plane CSV export.

Binary layout (all little-endian):

    magic   4 bytes  b"IDSM"
    version u32      currently 1
    n_inputs u32, n_groups u32
    output spec      min f64, max f64, levels u32
    input specs      n_inputs x (min f64, max f64, levels u32)
    radii            radius_in f64, radius_out f64
    per group:
        n_levels u32, then n_levels x u32 stored output levels
        per input variable, the plane grid as row-major float32
        (n_in x n_out values)

Grids are held in memory as float64 but stored as float32, so a save/load
round trip quantizes cell values to single precision.  The stored output
level sets ride along in the header of each group; without them a reloaded
model could not refuse an equal-output merge.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .core import QuantizationSpec, StainRadii
from .model import IdsGroup, IdsPlane, Model

MAGIC = b"IDSM"
VERSION = 1


def _pack_spec(spec: QuantizationSpec) -> bytes:
    return struct.pack("<ddI", spec.min, spec.max, spec.levels)


def _unpack_spec(buf: memoryview, off: int) -> tuple[QuantizationSpec, int]:
    lo, hi, levels = struct.unpack_from("<ddI", buf, off)
    return QuantizationSpec(lo, hi, levels), off + struct.calcsize("<ddI")


def save_model(model: Model, path: str | Path) -> None:
    parts = [MAGIC, struct.pack("<III", VERSION, model.n_inputs, len(model.groups))]
    parts.append(_pack_spec(model.output_spec))
    for spec in model.input_specs:
        parts.append(_pack_spec(spec))
    parts.append(struct.pack("<dd", model.radii.radius_in, model.radii.radius_out))
    for group in model.groups:
        levels = sorted(group.stored_output_levels)
        parts.append(struct.pack(f"<I{len(levels)}I", len(levels), *levels))
        for plane in group.planes:
            parts.append(np.ascontiguousarray(plane.grid, dtype="<f4").tobytes())
    Path(path).write_bytes(b"".join(parts))


def load_model(path: str | Path) -> Model:
    raw = Path(path).read_bytes()
    buf = memoryview(raw)
    if raw[:4] != MAGIC:
        raise ValueError(f"{path}: not a model file (bad magic {raw[:4]!r})")
    version, n_inputs, n_groups = struct.unpack_from("<III", buf, 4)
    if version != VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    off = 4 + struct.calcsize("<III")
    output_spec, off = _unpack_spec(buf, off)
    input_specs = []
    for _ in range(n_inputs):
        spec, off = _unpack_spec(buf, off)
        input_specs.append(spec)
    r_in, r_out = struct.unpack_from("<dd", buf, off)
    off += struct.calcsize("<dd")
    radii = StainRadii(r_in, r_out)
    n_out = output_spec.levels
    groups = []
    for _ in range(n_groups):
        (n_levels,) = struct.unpack_from("<I", buf, off)
        off += 4
        stored = set(struct.unpack_from(f"<{n_levels}I", buf, off))
        off += 4 * n_levels
        planes = []
        for spec in input_specs:
            count = spec.levels * n_out
            grid = np.frombuffer(buf, dtype="<f4", count=count, offset=off)
            off += 4 * count
            planes.append(IdsPlane(spec, output_spec, grid.reshape(spec.levels, n_out).astype(float)))
        groups.append(IdsGroup(planes, stored))
    if off != len(raw):
        raise ValueError(f"{path}: {len(raw) - off} trailing bytes after last grid")
    return Model(groups, input_specs, output_spec, radii)


def plane_to_csv(plane: IdsPlane, path: str | Path) -> None:
    """Heatmap export: one row per output level, one column per input level."""
    np.savetxt(path, plane.grid.T, delimiter=",", fmt="%.8g")
