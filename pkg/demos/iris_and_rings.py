"""
Two classification benchmarks, honestly reported
================================================

Iris with 100 random 100/50 splits, then the concentric-rings problem.
The rings experiment is shown because it fails: its three classes sit at
nested radii, and the weighted-sum defuzzifier averages ring labels
instead of picking one, dragging most predictions to the middle class.
"""

from collections import Counter

import numpy as np

from inkspread.benchmarks import (
    classify_crisp,
    run_classification_experiment,
    run_iris_experiment,
)
from inkspread.core import QuantizationSpec, StainRadii
from inkspread.datasets import gen_circles
from inkspread.inference import infer_many
from inkspread.model import train_full

rep = run_iris_experiment(100, 0, StainRadii(12.0, 1.0), 64, 3)
print(f"iris, 100 random 100/50 splits: mean accuracy {rep.accuracy:.2f}%")

rep = run_classification_experiment(
    "circles", (300, 1000), StainRadii(50.0, 16.0), (256, 32), 20, 0)
print(f"rings, 20 fresh draws of 300/1000: mean accuracy {rep.accuracy:.2f}%")

# Look at one run to see where the rings accuracy goes.
train = gen_circles(300, 0)
test = gen_circles(1000, 1)
specs = [QuantizationSpec(lo, hi, 256) for lo, hi in train.input_ranges]
model = train_full(train.samples, specs, QuantizationSpec(1.0, 3.0, 32),
                   StainRadii(50.0, 16.0))
preds, covered = infer_many(model, test.inputs_array())
labels = classify_crisp(preds, covered, 3)

print("\npredicted label counts on one rings test set:")
for label, n in sorted(Counter(labels.tolist()).items()):
    name = "no coverage" if label == 0 else f"class {label}"
    print(f"  {name}: {n}")
print(f"crisp outputs span [{preds[covered].min():.2f}, {preds[covered].max():.2f}]; "
      f"averaging between rings pulls them toward {np.mean([1, 2, 3]):.0f}")
