"""Benchmark dataset generators and the iris loader.

Regression targets are the two analytic surfaces

    f1(x1, x2) = (1 + x1^-2 + x2^-1.5)^2
    f2(x1, x2) = sqrt(2*(sin x1 / x1)^2 + 3*(sin x2 / x2)^2)

sampled uniformly over (1, 10) x (1, 10).  Classification sets are the
two-interleaved-spirals curve, three concentric circular regions, and the
iris flowers bundled as package data.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MalformedCsvError
from .model import Sample

DOMAIN = (1.0, 10.0)


def f1(x1, x2):
    return (1.0 + x1**-2.0 + x2**-1.5) ** 2


def f2(x1, x2):
    return np.sqrt(2.0 * (np.sin(x1) / x1) ** 2 + 3.0 * (np.sin(x2) / x2) ** 2)


@dataclass
class Dataset:
    """Samples plus the metadata the experiment drivers need."""

    samples: list[Sample]
    input_ranges: list[tuple[float, float]]
    kind: str  # "regression" | "classification"
    class_count: int | None = None

    def __post_init__(self):
        if self.kind not in ("regression", "classification"):
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        if self.kind == "classification" and not self.class_count:
            raise ValueError("classification dataset needs class_count")
        for k, s in enumerate(self.samples):
            for v, (lo, hi) in zip(s.inputs, self.input_ranges):
                if not lo <= v <= hi:
                    raise ValueError(f"sample {k} input {v} outside declared range [{lo}, {hi}]")
            if self.kind == "classification":
                if not (float(s.output).is_integer() and 1 <= s.output <= self.class_count):
                    raise ValueError(f"sample {k} label {s.output} is not a class in 1..{self.class_count}")

    def inputs_array(self) -> np.ndarray:
        return np.array([s.inputs for s in self.samples])

    def outputs_array(self) -> np.ndarray:
        return np.array([s.output for s in self.samples])


def _gen_surface(func, count: int, seed: int) -> Dataset:
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    x = rng.uniform(*DOMAIN, size=(count, 2))
    # scalar evaluation per sample so the generator and the published
    # formula are one code path, bitwise
    samples = [Sample((float(a), float(b)), float(func(float(a), float(b)))) for a, b in x]
    return Dataset(samples, [DOMAIN, DOMAIN], "regression")


def gen_f1(count: int, seed: int) -> Dataset:
    return _gen_surface(f1, count, seed)


def gen_f2(count: int, seed: int) -> Dataset:
    return _gen_surface(f2, count, seed)


def spiral_points(points_per_class: int, turns: float = 3.0, r_max: float = 1.0) -> np.ndarray:
    """Points of spiral class 1 at evenly spaced curve parameters.

    t = (i+1)/N for i = 0..N-1, so the origin itself is excluded and the
    outermost point sits at radius r_max.  Class 2 is the pointwise
    negation.  An even sweep rather than random t keeps the arms gap-free,
    which is what makes dense-grid evaluation near the enemy arm fair.
    """
    t = np.arange(1, points_per_class + 1) / points_per_class
    r = r_max * t
    theta = 2.0 * np.pi * turns * t
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_two_spiral(points_per_class: int, seed: int, turns: float = 3.0, r_max: float = 1.0) -> Dataset:
    """Two interleaved spirals, labels 1 and 2; the seed only shuffles order."""
    if points_per_class < 1:
        raise ValueError("points_per_class must be >= 1")
    a = spiral_points(points_per_class, turns, r_max)
    pts = np.vstack([a, -a])
    labels = np.concatenate([np.ones(points_per_class), np.full(points_per_class, 2.0)])
    order = np.random.default_rng(seed).permutation(len(pts))
    samples = [Sample(tuple(pts[i]), labels[i]) for i in order]
    lim = (-r_max, r_max)
    return Dataset(samples, [lim, lim], "classification", class_count=2)


def circle_class(x1, x2) -> int:
    rsq = x1 * x1 + x2 * x2
    if rsq < 1.0:
        return 1
    if rsq < 4.0:
        return 2
    return 3


def gen_circles(count: int, seed: int) -> Dataset:
    """Uniform points over [-3,3]^2 labeled by two concentric circle boundaries.

    Points landing exactly on a boundary radius are redrawn so every label
    is unambiguous.
    """
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    samples: list[Sample] = []
    while len(samples) < count:
        x1, x2 = rng.uniform(-3.0, 3.0, size=2)
        rsq = x1 * x1 + x2 * x2
        if rsq == 1.0 or rsq == 4.0:
            continue
        samples.append(Sample((x1, x2), float(circle_class(x1, x2))))
    lim = (-3.0, 3.0)
    return Dataset(samples, [lim, lim], "classification", class_count=3)


def bundled_iris_path() -> Path:
    return Path(importlib.resources.files("inkspread") / "data" / "iris.csv")


def load_iris(path: str | Path | None = None) -> Dataset:
    """Parse a 4-feature CSV with a trailing class column; labels become 1..3.

    String labels are mapped in sorted order; numeric labels are used as
    given.  Malformed rows raise with the offending row and column.
    """
    path = bundled_iris_path() if path is None else Path(path)
    rows: list[tuple[float, ...]] = []
    raw_labels: list[str] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != 5:
                raise MalformedCsvError(f"{path}: row {lineno} has {len(fields)} columns, expected 5")
            try:
                rows.append(tuple(float(v) for v in fields[:4]))
            except ValueError:
                bad = next(i for i, v in enumerate(fields[:4]) if not _is_float(v))
                raise MalformedCsvError(
                    f"{path}: row {lineno} column {bad + 1}: {fields[bad]!r} is not numeric"
                ) from None
            raw_labels.append(fields[4])
    if not rows:
        raise MalformedCsvError(f"{path}: no data rows")
    if len(rows) != 150:
        raise MalformedCsvError(f"{path}: expected 150 rows, found {len(rows)}")
    label_map = _label_mapping(raw_labels, path)
    features = np.array(rows)
    samples = [Sample(f, label_map[lab]) for f, lab in zip(rows, raw_labels)]
    ranges = [(float(features[:, j].min()), float(features[:, j].max())) for j in range(4)]
    return Dataset(samples, ranges, "classification", class_count=len(label_map))


def _is_float(v: str) -> bool:
    try:
        float(v)
        return True
    except ValueError:
        return False


def _label_mapping(raw_labels: list[str], path) -> dict[str, float]:
    distinct = sorted(set(raw_labels))
    if all(_is_float(v) for v in distinct):
        mapping = {v: float(v) for v in distinct}
        if any(m != int(m) or m < 1 for m in mapping.values()):
            raise MalformedCsvError(f"{path}: numeric class labels must be integers >= 1")
        return mapping
    return {name: float(i) for i, name in enumerate(distinct, start=1)}
