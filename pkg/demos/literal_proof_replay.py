"""
Replaying the averaging argument
=================================

For each shift tuple w in the covering collection W, the fiber R_w holds
the r with r v_j + w_j in A for all j.  Every (r, ℓ-tuple of A) pair lands
in exactly one fiber, so the fiber sizes sum to |A|^l floor(N/s).  Two
members r'' < r' of one fiber give a dilate r' - r'' in A - A.
"""

from diffsetlab import Box, Configuration, build_covering, fiber, literal_witness, make_grid_set
from diffsetlab.proof import averaging_census, odometer_census, pigeonhole_condition

c = Configuration.parse("1;2")
a = make_grid_set(Box(6), [1, 2, 4, 6])

cov = build_covering(a.box, c)
print("intervals:", cov.intervals, " |W| =", cov.size, "<=", cov.size_bound())
print("fiber at w=(0,-2):", sorted(fiber(a, c, cov, ((0,), (-2,))).members))

# the identity, by dual enumeration and by walking W in odometer order
dual = averaging_census(a, c)
odo = odometer_census(a, c)
print("census:", dual.total, "=", odo.total, "=", dual.expected)

lw = literal_witness(a, c)
print(f"fiber {lw.w} holds r''={lw.r2}, r'={lw.r1} -> dilate r={lw.witness.r}")
print("pigeonhole condition met:", pigeonhole_condition(a, c))

# The largest dilate r = floor(N/s) is reached only with r'' = 0, a shift
# that is a point of A^l itself.  The strict replay misses it.
b = make_grid_set(Box(10), [1, 4, 7, 10])
c3 = Configuration.parse("1;2;3")
print("strict:", literal_witness(b, c3, anchored=False))
lw = literal_witness(b, c3)
print("anchored:", lw.anchored, "r =", lw.witness.r)
