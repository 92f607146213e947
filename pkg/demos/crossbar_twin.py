"""
Programming the analog twin
===========================

Takes the two-sample model from the worked example, programs it into
behavioral memristor crossbars with a closed-loop program-and-verify
controller, and compares analog inference against the ideal pipeline at
three programming tolerances.
"""

import numpy as np

from inkspread.core import QuantizationSpec, StainRadii
from inkspread.crossbar import crossbar_infer, program_from_model
from inkspread.errors import NoCoverageError
from inkspread.inference import infer
from inkspread.model import Sample, train_full

specs = [QuantizationSpec(1.0, 10.0, 19), QuantizationSpec(1.0, 10.0, 19)]
model = train_full(
    [Sample((1.5, 4.0), 2.0), Sample((3.0, 4.0), 1.0)],
    specs, QuantizationSpec(1.0, 2.0, 2), StainRadii(3.0, 1.5))

# Covered queries only; off the stained region both paths refuse to answer.
rng = np.random.default_rng(7)
queries = []
while len(queries) < 200:
    q = [float(rng.uniform(s.min, s.max)) for s in specs]
    try:
        infer(model, q)
    except NoCoverageError:
        continue
    queries.append(q)

print("epsilon   pulses   worst residual   max |analog - ideal|")
for eps in (0.02, 0.01, 0.002):
    hw = program_from_model(model, eps)
    pulses = sum(r.total_pulses for row in hw.reports for r in row)
    dev = max(abs(crossbar_infer(hw, q) - infer(model, q)) for q in queries)
    print(f"  {eps:5.3f}  {pulses:7d}   {hw.worst_residual:.6f}        {dev:.6f}")

print("\nthe residual is what program-and-verify left on the cells;")
print("the deviation is what survives the min/max stages and the divider")

# The twin inherits the refusal semantics: an uncovered query underflows
# the divider instead of inventing an output.
hw = program_from_model(model, 0.01)
try:
    crossbar_infer(hw, (9.5, 9.5))
except Exception as exc:
    print(f"\nuncovered query on the analog path: {type(exc).__name__}: {exc}")
