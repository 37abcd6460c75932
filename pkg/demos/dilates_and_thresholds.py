"""
Dilates of a configuration inside A - A
========================================

A configuration is a list of nonzero vectors v_1..v_l.  We look for one
r >= 1 with r v_j in A - A for every j, and compare the density of A with
the threshold C N^{-1/l} above which such an r must exist.
"""

import numpy as np

from diffsetlab import (Box, Configuration, GridSet, admissible_dilates, ap_in_diffset, find_dilate,
                        make_grid_set, threshold_bound, threshold_constant)
from diffsetlab.dilates import ap_constant, threshold_density

a = make_grid_set(Box(4), [1, 2, 4])
print("admissible r for v=1:", sorted(admissible_dilates(a, 1)))

w = find_dilate(a, Configuration.parse("1;2"))
print("smallest r for {1,2}:", w.r, "realized by", w.realizers)

# an AP of length m in A - A is the dilate of {1, ..., (m-1)/2}, mirrored
print("5-term AP:", ap_in_diffset(a, 5).terms)

# Threshold constants: the refined product formula never beats the simple bound.
for spec in ("1", "1;2", "1,0;0,1", "1,1;1,-1;2,0"):
    c = Configuration.parse(spec)
    print(f"{spec:>14}: C = {threshold_constant(c):.4f}   bound = {threshold_bound(c):.4f}")

ells = np.arange(1, 11)
print("2(2l)^(1/l), l=1..10:", np.round(ap_constant(ells), 3).tolist())

# Above the threshold every random set of that size contains the dilate.
rng = np.random.default_rng(1)
c = Configuration.corner(2)
box = Box(48, 2)
k = int(np.ceil(threshold_density(c, box.n) * box.cells))
hits = sum(find_dilate(GridSet(box, rng.choice(box.cells, k, replace=False)), c) is not None for _ in range(50))
print(f"corner in 48x48, |A|={k}: found in {hits}/50 random sets")
