"""
Threshold sweeps
================

Sample sets at multiples of the threshold density, run the matching finder
and count failures.  Only cells at or above the threshold carry a guarantee;
the rest show how quickly success falls off.
"""

from diffsetlab import Box
from diffsetlab.experiments import Target, extremal_probe, run_sweep

rep = run_sweep([Target("ap-diff", m=5)], [64, 256], multipliers=(0.25, 0.5, 1.0),
                trials={"uniform-random": 40, "greedy-avoider": 10}, seed=0, workers=1)
print(f"{'N':>5} {'mult':>5} {'generator':>15} {'found':>6} {'fail':>5}")
for cell in rep.cells():
    print(f"{cell['N']:>5} {cell['multiplier']:>5} {cell['generator']:>15} "
          f"{cell['found']:>3}/{cell['trials']:<2} {cell['failures']:>5}")
print("failures under the hypothesis:", rep.failures)

# a heuristic search for large sets that avoid the target
probe = extremal_probe(Box(24), Target("ap-diff", m=5), restarts=5, steps=100)
print("avoiding set:", [p[0] for p in probe.best.points()], f"density {probe.density:.3f}")
