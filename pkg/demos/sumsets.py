"""
From difference sets to sumsets
===============================

Translates D_t = B ∩ (t - A) satisfy D_t - D_t + t ⊆ A + B, and they sum
to |A||B| over t in [2, 2N].  A dilate inside the biggest one becomes a
symmetric configuration around t inside A + B.
"""

import numpy as np

from diffsetlab import Box, GridSet, ap_in_sumset, best_translate, make_grid_set

a = make_grid_set(Box(3), [1, 3])
sc = best_translate(a, a)
print("best t =", sc.t, "|D| =", sc.size, "census =", sc.census)

rng = np.random.default_rng(3)
n, m = 512, 5
k = int(np.ceil(np.sqrt(8 * n ** (-2 / (m - 1))) * n))
a = GridSet(Box(n), rng.choice(n, k, replace=False))
b = GridSet(Box(n), rng.choice(n, k, replace=False))
w = ap_in_sumset(a, b, m)
print(f"|A|=|B|={k} in [1,{n}]: AP {w.terms} via {w.witness.method}")
