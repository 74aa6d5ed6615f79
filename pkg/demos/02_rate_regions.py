"""
Rate regions with and without rate splitting.

With infinitely long blocks, sweeping how user 1 splits its power between
its two streams walks RSMA along the sum-rate edge of the MAC pentagon,
with no time sharing.  With short blocks every extra stream pays its own
dispersion penalty, so the RSMA sweep bends inward.  At n = 500 some NOMA
operating points (user 2 backing off its power) even lie outside it.
"""

import math

from rsma_fbl import (DecodeOrder, RatePoint, StreamReliability, SystemParams, db_to_linear,
                      noma_fbl_points, region_contains, rsma_fbl_boundary)
from rsma_fbl.region import noma_fbl_curve, pentagon_sum_rate, rsma_fbl_sweep

pt = float(db_to_linear(5.0))
sys = SystemParams(g1=1.0, g2=0.7, noise_var=1.0, p_max=pt)
rel = StreamReliability.uniform(1e-6)

_, r1, r2, _ = rsma_fbl_sweep(math.inf, pt, pt, sys, rel, 5)
print(f"pentagon sum edge: {pentagon_sum_rate(pt, pt, sys):.6f}")
for a, b in zip(r1, r2):
    print(f"  IBL RSMA point ({a:.4f}, {b:.4f})  sum {a + b:.6f}")

for n in (500, 2000):
    boundary = rsma_fbl_boundary(n, pt, pt, sys, rel, 201)
    best = max(p.r1 + p.r2 for p in boundary.points)
    print(f"\nn = {n}: best RSMA sum rate {best:.4f} over {len(boundary.points)} Pareto points")
    for order in DecodeOrder:
        corner = noma_fbl_points(n, pt, pt, sys, (1e-6, 1e-6), order)
        print(f"  NOMA {order.name} corner ({corner.r1:.4f}, {corner.r2:.4f}) inside: "
              f"{region_contains(boundary, corner, tol=1e-6)}")
    _, c1, c2 = noma_fbl_curve(n, pt, pt, sys, (1e-6, 1e-6), DecodeOrder.U1_FIRST, 201)
    outside = sum(not region_contains(boundary, RatePoint(float(a), float(b)), tol=1e-6)
                  for a, b in zip(c1, c2))
    print(f"  backed-off NOMA-12 points outside the RSMA sweep: {outside} of {len(c1)}")
