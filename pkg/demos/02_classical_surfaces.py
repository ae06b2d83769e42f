"""Curvature of the classical surfaces.

The fixture library carries the standard constant-curvature examples; the
Fisher metric of the location-scale normal family ties the package to
information geometry (its sectional curvature is -1/2).
"""

import numpy as np

from dualgeo import (curvature_report, is_constant_sectional, levi_civita, ricci_at,
                     scalar_at, sectional_at)
from dualgeo.fixtures import bumpy_sphere2, fisher_normal, hyperbolic2, sphere2

for M, expected in ((sphere2(), +1.0), (hyperbolic2(), -1.0), (fisher_normal(), -0.5)):
    lc = levi_civita(M)
    p = M.center()
    K = sectional_at(M, p, [1.0, 0.0], [0.0, 1.0])
    S = scalar_at(M, lc, p)
    print(f"{M.name:>13}:  K = {K:+.6f} (expected {expected:+.1f}),  S = {S:+.6f}")

# Einstein property of the unit sphere: Ric = g
sphere = sphere2()
p = sphere.point([1.1, 0.7])
ric = ricci_at(sphere, levi_civita(sphere), p)
print("\nsphere Ricci minus metric:", np.max(np.abs(ric - sphere.metric_at(p))))

# constant-curvature detection over sampled points and random 2-planes
for M in (sphere2(), fisher_normal(), bumpy_sphere2()):
    res = is_constant_sectional(M, samples=16)
    print(f"{M.name:>13}: constant sectional = {res.constant}"
          f"  (kappa = {res.kappa:+.4f}, spread = {res.max_deviation:.2e})")

# a full curvature report at a point
rep = curvature_report(sphere, levi_civita(sphere), [np.pi / 3, 1.0])
print(f"\nreport at th=pi/3: scalar = {rep.scalar}, flat = {rep.flat_at_point}")
