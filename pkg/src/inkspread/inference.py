"""Model evaluation: min across planes, max across groups, weighted-sum defuzzifier.

A query is quantized per input variable, each plane is read at its (input
level, output level) cell, the per-group confidence at an output level is the
min over that group's planes, and the model confidence is the max over
groups.  The crisp output is the confidence-weighted mean of the output
level values; when every confidence is zero there is no crisp output and
``NoCoverageError`` is raised instead of returning NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .core import quantize, quantize_many
from .errors import NoCoverageError

if TYPE_CHECKING:
    from .model import IdsGroup, IdsPlane, Model


@dataclass(frozen=True)
class FuzzyOutput:
    """Per-output-level confidences paired with the levels' raw values."""

    level_values: np.ndarray
    confidences: np.ndarray

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.level_values.tolist(), self.confidences.tolist()))


def plane_confidence(plane: "IdsPlane", x: float, y_level: int) -> float:
    """Grid value at the quantized input level of ``x`` and the given output level."""
    return float(plane.grid[quantize(plane.input_spec, x) - 1, y_level - 1])


def group_confidence(group: "IdsGroup", x, y_level: int) -> float:
    """Min over the group's planes; one plane reading zero zeroes the group."""
    return min(plane_confidence(p, xi, y_level) for p, xi in zip(group.planes, x))


def _group_rows(model: "Model", x) -> tuple[list[int], np.ndarray]:
    """Quantized input indices (0-based) and the (n_groups, n_out) confidence rows."""
    idx = [quantize(spec, xi) - 1 for spec, xi in zip(model.input_specs, x)]
    n_y = model.output_spec.levels
    rows = np.zeros((len(model.groups), n_y))
    for g_i, group in enumerate(model.groups):
        row = group.planes[0].grid[idx[0], :]
        for j in range(1, model.n_inputs):
            row = np.minimum(row, group.planes[j].grid[idx[j], :])
        rows[g_i] = row
    return idx, rows


def infer_fuzzy(model: "Model", x) -> FuzzyOutput:
    """Confidence in each output level for the query ``x``."""
    x = _check_query(model, x)
    n_y = model.output_spec.levels
    if not model.groups:
        return FuzzyOutput(model.output_level_values(), np.zeros(n_y))
    _, rows = _group_rows(model, x)
    return FuzzyOutput(model.output_level_values(), rows.max(axis=0))


def defuzzify_wsf(fz: FuzzyOutput) -> float:
    """Weighted sum of level values over total confidence.

    Invariant under scaling all confidences by the same positive factor,
    which is what lets the attenuated hardware readout defuzzify unchanged.
    """
    total = float(np.sum(fz.confidences))
    if total == 0.0:
        raise NoCoverageError("all output-level confidences are zero at this query")
    weighted = float(np.sum(fz.level_values * fz.confidences))
    return weighted / total


def infer(model: "Model", x) -> float:
    """Crisp output for one query; raises NoCoverageError off the stained region."""
    return defuzzify_wsf(infer_fuzzy(model, x))


def infer_many(model: "Model", X: np.ndarray, chunk: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Batch inference.

    Returns ``(values, covered)`` where ``values[b]`` is the crisp output or
    NaN and ``covered[b]`` says whether any confidence was nonzero.  Queries
    are processed in chunks against per-input plane stacks to bound the
    (n_groups, chunk, n_out) intermediate.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.n_inputs:
        raise ValueError(f"expected queries shaped (batch, {model.n_inputs}), got {X.shape}")
    n_q = X.shape[0]
    values = np.full(n_q, np.nan)
    covered = np.zeros(n_q, dtype=bool)
    if not model.groups or n_q == 0:
        return values, covered
    stacks = model.input_stacks()
    y_vals = model.output_level_values()
    for lo in range(0, n_q, chunk):
        sl = slice(lo, min(lo + chunk, n_q))
        idx = [quantize_many(spec, X[sl, j]) - 1 for j, spec in enumerate(model.input_specs)]
        conf = stacks[0][:, idx[0], :]
        for j in range(1, model.n_inputs):
            np.minimum(conf, stacks[j][:, idx[j], :], out=conf)
        conf = conf.max(axis=0)
        totals = conf.sum(axis=1)
        ok = totals > 0.0
        weighted = (conf * y_vals).sum(axis=1)
        values[sl] = np.where(ok, weighted / np.where(ok, totals, 1.0), np.nan)
        covered[sl] = ok
    return values, covered


def infer_trace(model: "Model", x) -> dict:
    """Every intermediate of one inference, as plain JSON-friendly types.

    Keys: inputs, input_levels, plane_confidences[group][level][plane],
    group_confidences[group][level], level_values, confidences, crisp,
    no_coverage.
    """
    x = _check_query(model, x)
    idx = [quantize(spec, xi) - 1 for spec, xi in zip(model.input_specs, x)]
    n_y = model.output_spec.levels
    plane_conf = [
        [[float(p.grid[q, t]) for p, q in zip(group.planes, idx)] for t in range(n_y)]
        for group in model.groups
    ]
    group_conf = [[min(level) for level in group] for group in plane_conf]
    fz = infer_fuzzy(model, x)
    try:
        crisp = defuzzify_wsf(fz)
        no_coverage = False
    except NoCoverageError:
        crisp = None
        no_coverage = True
    return {
        "inputs": [float(v) for v in x],
        "input_levels": [q + 1 for q in idx],
        "plane_confidences": plane_conf,
        "group_confidences": group_conf,
        "level_values": fz.level_values.tolist(),
        "confidences": fz.confidences.tolist(),
        "crisp": crisp,
        "no_coverage": no_coverage,
    }


def _check_query(model: "Model", x) -> list[float]:
    xs = [float(v) for v in x]
    if len(xs) != model.n_inputs:
        raise ValueError(f"query has {len(xs)} inputs, model expects {model.n_inputs}")
    return xs
