"""
Difference sets and sumsets on a lattice box
=============================================

Build a small set, look at A - A and A + B, and compare the two kernels.
"""

import numpy as np

from diffsetlab import Box, GridSet, difference_set, make_grid_set, sum_set
from diffsetlab.grid import representation_counts

# A set in [1, 10] is given by its points
a = make_grid_set(Box(10), [1, 2, 4, 8])
ds = difference_set(a)
print("A      :", [p[0] for p in a.points()])
print("A - A  :", [x[0] for x in ds.elements()])

# the difference set is always symmetric and contains 0
assert all(ds.contains((-x[0],)) for x in ds.elements())

# sums live on [2, 2N]; representation counts tell how often each sum occurs
b = make_grid_set(Box(10), [3, 5])
print("A + B  :", [x[0] for x in sum_set(a, b).elements()])
print("counts :", representation_counts(a, b).tolist())

# two dimensions work the same way
sq = make_grid_set(Box(4, 2), [(1, 1), (2, 3), (4, 4)])
print("2-D A - A has", len(difference_set(sq).elements()), "elements")

# Two kernels: chunked pairwise differences and FFT autocorrelation.
rng = np.random.default_rng(0)
big = GridSet(Box(10**5), rng.choice(10**5, 2000, replace=False))
pw = difference_set(big, "pairwise")
fft = difference_set(big, "autocorrelation")
print("default kernel for |A|=2000 in [1,1e5]:", difference_set(big).strategy)
print("kernels agree:", np.array_equal(np.asarray(pw.elements()), np.asarray(fft.elements())))
