# The shift metric, computed exactly on eventually periodic points.
from fractions import Fraction

from omega_scramble import constant, dist_bounds, exact_dist, from_string, periodic, shift, sturmian
from omega_scramble.core import check_expansive_step

zero, one, alt = constant(0), constant(1), periodic((0, 1))
print("d(0^w, 1^w)     =", exact_dist(zero, one))
print("d(0^w, (01)^w)  =", exact_dist(zero, alt))

# close points double their distance under the shift
x, y = from_string("0110(01)"), from_string("0111(0)")
d = exact_dist(x, y)
print(f"d(x, y) = {d},  d(sx, sy) = {exact_dist(shift(x), shift(y))}")
print("expansive step ok:", check_expansive_step(x, y))

# two points agreeing on j+1 symbols are within 2^-j; the bound is attained
j = 6
p, q = from_string("1011010(0)"), from_string("1011010(1)")
print(f"agree on {j + 1} symbols: d = {exact_dist(p, q)}, bound = {Fraction(1, 2 ** j)}")

# aperiodic points only get certified brackets
a = sturmian("0.41421356237309504880168872420969807856967187537694")
b = sturmian("0.38196601125010515179541316563436188227969082019424")
lo, hi = dist_bounds(a, b, Fraction(1, 1 << 20))
print(f"{float(lo):.8f} <= d(silver, golden) <= {float(hi):.8f}")
