"""
Polynomial differences
======================

Instead of r v_j we ask for Q_j(r') - Q_j(r'') in A - A for two distinct
r', r'' in [1, N0], with N0 = floor((N/t)^{1/k}).
"""

import numpy as np

from diffsetlab import (Box, GridSet, IntPolynomial, PolySystem, find_poly_witness, literal_witness_poly,
                        make_grid_set, poly_domain, poly_threshold_constant, square_difference_ap)

sq = PolySystem.scalar(IntPolynomial((0, 0, 1)))
a = make_grid_set(Box(8), [1, 4])
w = find_poly_witness(a, sq)
print("r^2 in {1,4}: r'=%d r''=%d difference %s" % (w.r1, w.r2, w.differences))

# systems are written row by row; entries separated by "|"
ps = PolySystem.parse("0,1|0,0,1;0,0,2|1")
print("system", ps, "k =", ps.k, "t =", ps.t, "N0 at N=200:", poly_domain(ps, Box(200, 2)))

# the literal replay agrees on existence
rng = np.random.default_rng(2)
b = GridSet(Box(64), rng.choice(64, 10, replace=False))
print("direct:", find_poly_witness(b, sq) is not None, " literal:", literal_witness_poly(b, sq) is not None)

# APs with square common difference
print("square-step AP in {1,5}:", square_difference_ap(make_grid_set(Box(8), [1, 5]), 3).terms)

print("constant for r^2: general %.1f, positive %.1f" % (poly_threshold_constant(sq), poly_threshold_constant(sq, True)))
