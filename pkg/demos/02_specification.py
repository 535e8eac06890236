# Shadowing prescribed orbit pieces by copying symbols.
import itertools
from fractions import Fraction

from omega_scramble import SpecInterval, build_isp_witness, build_spec_pattern, constant, periodic, relaxation_time


def show(x, n=40):
    return "".join(map(str, x.word(0, n)))


delta = Fraction(1, 8)
print("relaxation time for 1/8:", relaxation_time(delta))

y = build_isp_witness([constant(0), constant(1)], [SpecInterval(0, 3), SpecInterval(10, 13)], delta)
print("two-block witness:   ", show(y, 24))

# an infinite stream of targets is consumed only as far as it is read
stride = relaxation_time(delta) + 3
targets = (constant(i % 3 == 0) for i in itertools.count())
intervals = (SpecInterval(stride * i, stride * i + 2) for i in itertools.count())
lazy = build_isp_witness(targets, intervals, delta)
print("lazy stream witness: ", show(lazy, 48))

p, schedule = build_spec_pattern([(constant(0), 2), (periodic((0, 1)), 3), (constant(1), 0)], 5, delta)
print("pattern:             ", show(p, 30))
for seg in schedule.all_segments():
    print(f"  controlled [{seg.a}, {seg.b}], copied through {seg.end}")
