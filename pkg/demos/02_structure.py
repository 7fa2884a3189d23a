"""Inside one proposed basis: partition, cutoff band and symmetry."""

import numpy as np

from hahnpoly import HahnParams, generate_proposed
from hahnpoly.proposed import seam_deviation

p = HahnParams(80, 80, 2000)
B = generate_proposed(p)
plan, mask = B.info["plan"], B.info["p6_mask"]
print(f"plan: rows 0..{plan.M} by x-recurrence, seam column {plan.N2}, mirrored={plan.symmetric}")
print(f"entries cut to zero: {B.info['p6_zeros']} of {p.size ** 2}")
for n in (plan.M + 1, 1200, 1600, 1999):
    z = int(mask[n].sum())
    print(f"  degree {n:4d}: {z:4d} zeroed coordinates, {z // 2} at each end")

sign = np.where(np.arange(p.size) % 2 == 0, 1.0, -1.0)[:, None]
print("reflection error:", np.abs(B.values - sign * B.values[:, ::-1]).max())

for ab in [(100, 40), (20, 30), (300, 1)]:
    q = HahnParams(*ab, 200)
    print(f"seam deviation at {ab}: {seam_deviation(q):.1e}")
