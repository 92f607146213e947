"""Ink-drop-spread planes, plane groups, and training policies.

A plane is a dense grid over (input level, output level) holding confidence
degrees.  Training a sample means diffusing a pyramid stain centered on the
sample's quantized (input, output) pair onto one plane per input variable;
the planes written by one sample form a group.  Overlapping stains combine
by cellwise max, which keeps every cell in [0,1] and makes diffusion
commutative and idempotent.

Two training policies are provided: ``train_full`` allocates one group per
sample, and ``train_error_gated`` allocates a group only when the current
model's prediction misses the sample by more than a tolerance.  A third,
memory-reduced layout packs several samples into one group via
``merge_into_group`` as long as their output levels differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import QuantizationSpec, StainRadii, level_values, quantize
from .errors import EqualOutputConflict, NoCoverageError


@dataclass
class Sample:
    """One training pattern: raw input values and the raw output value."""

    inputs: tuple[float, ...]
    output: float

    def __post_init__(self):
        self.inputs = tuple(float(v) for v in self.inputs)
        self.output = float(self.output)


@dataclass
class IdsPlane:
    """Confidence grid for one input variable, shape (input levels, output levels)."""

    input_spec: QuantizationSpec
    output_spec: QuantizationSpec
    grid: np.ndarray

    def __post_init__(self):
        expected = (self.input_spec.levels, self.output_spec.levels)
        if self.grid.shape != expected:
            raise ValueError(f"grid shape {self.grid.shape} does not match specs {expected}")

    def copy(self) -> "IdsPlane":
        return IdsPlane(self.input_spec, self.output_spec, self.grid.copy())


def empty_plane(input_spec: QuantizationSpec, output_spec: QuantizationSpec) -> IdsPlane:
    return IdsPlane(input_spec, output_spec, np.zeros((input_spec.levels, output_spec.levels)))


@dataclass
class IdsGroup:
    """One plane per input variable plus the set of output levels stored so far.

    The level set is what lets a group refuse a second sample with the same
    output level: storing both would erase which inputs belonged together.
    """

    planes: list[IdsPlane]
    stored_output_levels: set[int] = field(default_factory=set)

    def __post_init__(self):
        if not self.planes:
            raise ValueError("a group needs at least one plane")
        out = self.planes[0].output_spec
        if any(p.output_spec != out for p in self.planes[1:]):
            raise ValueError("all planes of a group must share one output spec")


def empty_group(input_specs: list[QuantizationSpec], output_spec: QuantizationSpec) -> IdsGroup:
    return IdsGroup([empty_plane(spec, output_spec) for spec in input_specs])


@dataclass
class Model:
    groups: list[IdsGroup]
    input_specs: list[QuantizationSpec]
    output_spec: QuantizationSpec
    radii: StainRadii

    def __post_init__(self):
        self._stacks = None
        self._level_values = None

    @property
    def n_inputs(self) -> int:
        return len(self.input_specs)

    def output_level_values(self) -> np.ndarray:
        """Raw output values of levels 1..n_y, cached."""
        if self._level_values is None:
            self._level_values = level_values(self.output_spec)
        return self._level_values

    def append_group(self, group: IdsGroup) -> None:
        if len(group.planes) != self.n_inputs:
            raise ValueError(f"group has {len(group.planes)} planes, model expects {self.n_inputs}")
        for plane, spec in zip(group.planes, self.input_specs):
            if plane.input_spec != spec or plane.output_spec != self.output_spec:
                raise ValueError("group plane specs do not match the model's specs")
        self.groups.append(group)
        self._stacks = None

    def input_stacks(self) -> list[np.ndarray]:
        """Per input variable, all group planes stacked as (n_groups, n_in, n_out).

        Built lazily for batch inference.  Each plane's grid is re-bound to its
        slice of the stack so the model does not hold two copies of the data.
        """
        if self._stacks is None:
            stacks = []
            for j, spec in enumerate(self.input_specs):
                if self.groups:
                    stack = np.stack([g.planes[j].grid for g in self.groups])
                    for g, view in zip(self.groups, stack):
                        g.planes[j].grid = view
                else:
                    stack = np.zeros((0, spec.levels, self.output_spec.levels))
                stacks.append(stack)
            self._stacks = stacks
        return self._stacks


def diffuse(plane: IdsPlane, center_in: int, center_out: int, radii: StainRadii) -> IdsPlane:
    """Write one pyramid stain onto the plane, aggregating by cellwise max.

    Centers are 1-based level indices and must lie on the plane.  Only the
    stain's support window is touched.  Returns the same plane object.
    """
    n_in = plane.input_spec.levels
    n_out = plane.output_spec.levels
    if not (1 <= center_in <= n_in and 1 <= center_out <= n_out):
        raise ValueError(f"stain center ({center_in}, {center_out}) outside plane {n_in}x{n_out}")
    i_lo = max(1, int(math.ceil(center_in - radii.radius_in)))
    i_hi = min(n_in, int(math.floor(center_in + radii.radius_in)))
    j_lo = max(1, int(math.ceil(center_out - radii.radius_out)))
    j_hi = min(n_out, int(math.floor(center_out + radii.radius_out)))
    ramp_in = 1.0 - np.abs(np.arange(i_lo, i_hi + 1) - center_in) / radii.radius_in
    ramp_out = 1.0 - np.abs(np.arange(j_lo, j_hi + 1) - center_out) / radii.radius_out
    stain = np.maximum(0.0, np.minimum(ramp_in[:, None], ramp_out[None, :]))
    window = plane.grid[i_lo - 1 : i_hi, j_lo - 1 : j_hi]
    np.maximum(window, stain, out=window)
    return plane


def _check_samples(samples: list[Sample], input_specs: list[QuantizationSpec]) -> None:
    if not samples:
        raise ValueError("empty sample list")
    n = len(input_specs)
    for k, s in enumerate(samples):
        if len(s.inputs) != n:
            raise ValueError(f"sample {k} has {len(s.inputs)} inputs, expected {n}")


def _group_from_sample(
    sample: Sample,
    input_specs: list[QuantizationSpec],
    output_spec: QuantizationSpec,
    radii: StainRadii,
) -> IdsGroup:
    group = empty_group(input_specs, output_spec)
    y_level = quantize(output_spec, sample.output)
    for plane, x in zip(group.planes, sample.inputs):
        diffuse(plane, quantize(plane.input_spec, x), y_level, radii)
    group.stored_output_levels.add(y_level)
    return group


def train_full(
    samples: list[Sample],
    input_specs: list[QuantizationSpec],
    output_spec: QuantizationSpec,
    radii: StainRadii,
) -> Model:
    """One group per sample; the plain policy with no memory reduction."""
    _check_samples(samples, input_specs)
    model = Model([], list(input_specs), output_spec, radii)
    for s in samples:
        model.append_group(_group_from_sample(s, model.input_specs, output_spec, radii))
    return model


def train_error_gated(
    samples: list[Sample],
    input_specs: list[QuantizationSpec],
    output_spec: QuantizationSpec,
    radii: StainRadii,
    tolerance: float,
) -> Model:
    """Single pass over the samples; allocate a group only on prediction error.

    A sample is skipped when the model built so far already predicts its
    output within ``tolerance`` (absolute, raw output units).  No coverage at
    the sample's inputs counts as an error.  Group count never exceeds the
    sample count, and equals it when tolerance is negative.
    """
    from .inference import infer

    _check_samples(samples, input_specs)
    model = Model([], list(input_specs), output_spec, radii)
    for s in samples:
        needs_group = True
        if model.groups:
            try:
                needs_group = abs(infer(model, s.inputs) - s.output) > tolerance
            except NoCoverageError:
                needs_group = True
        if needs_group:
            model.append_group(_group_from_sample(s, model.input_specs, output_spec, radii))
    return model


def train_merged(
    samples: list[Sample],
    input_specs: list[QuantizationSpec],
    output_spec: QuantizationSpec,
    radii: StainRadii,
) -> Model:
    """Memory-reduced policy: pack samples into shared groups greedily.

    Each sample goes into the first existing group that does not already
    store its output level; only when every group refuses is a new group
    allocated.  Worst case (all outputs at one level) degenerates to one
    group per sample, best case needs only as many groups as the most
    popular output level has samples.
    """
    _check_samples(samples, input_specs)
    model = Model([], list(input_specs), output_spec, radii)
    for s in samples:
        placed = False
        for group in model.groups:
            try:
                merge_into_group(group, s, model.input_specs, output_spec, radii)
                placed = True
                break
            except EqualOutputConflict:
                continue
        if placed:
            model._stacks = None
        else:
            group = empty_group(model.input_specs, output_spec)
            merge_into_group(group, s, model.input_specs, output_spec, radii)
            model.append_group(group)
    return model


def merge_into_group(
    group: IdsGroup,
    sample: Sample,
    input_specs: list[QuantizationSpec],
    output_spec: QuantizationSpec,
    radii: StainRadii,
) -> IdsGroup:
    """Add a sample to an existing group, provided its output level is new.

    Raises EqualOutputConflict when the sample's quantized output level is
    already stored, since two apices on one output row cannot be told apart
    at inference time.  An empty group (no planes yet) accepts any sample.
    """
    if len(sample.inputs) != len(input_specs):
        raise ValueError(f"sample has {len(sample.inputs)} inputs, expected {len(input_specs)}")
    if not group.planes:
        group.planes = [empty_plane(spec, output_spec) for spec in input_specs]
    y_level = quantize(output_spec, sample.output)
    if y_level in group.stored_output_levels:
        raise EqualOutputConflict(
            f"output level {y_level} already stored in this group; "
            f"samples with equal output levels need separate groups"
        )
    for plane, x in zip(group.planes, sample.inputs):
        diffuse(plane, quantize(plane.input_spec, x), y_level, radii)
    group.stored_output_levels.add(y_level)
    return group
