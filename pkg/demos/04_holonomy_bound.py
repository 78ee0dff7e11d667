"""Loop holonomy and the curvature-area bound.

Transporting a frame around a colatitude circle on the unit sphere
rotates it by 2 pi (1 - cos(colatitude)); the Frobenius deviation of the
loop transport from the identity is bounded by min{C l^2, 2 sqrt(dim)}
and scales like length^2 for small loops (on spheres and in hyperbolic
space alike).
"""

import numpy as np

from elastica import bound_probe, holonomy_defect
from elastica.families import hyperbolic_circle, random_sphere_loop, sphere_circle
from elastica.holonomy import rotation_angle

print("colatitude circles on S^2 (N = 2048):")
family = []
for colat in (0.4, 0.2, 0.1, 0.05):
    loop = sphere_circle(2048, colat)
    family.append(loop)
    angle = abs(rotation_angle(loop))
    exact = 2 * np.pi * (1 - np.cos(colat))
    print(f"  colat {colat:4g}: angle {angle:.6f} (exact {exact:.6f}), "
          f"defect {holonomy_defect(loop):.6f}")

reports, fitted, slope = bound_probe(family)
print(f"\nlog-log slope of defect vs length: {slope:.3f}  (curvature-area law: 2)")
print(f"largest defect / length^2:         {fitted:.4f}")

hyp = [hyperbolic_circle(1024, geodesic_radius=r) for r in (0.4, 0.2, 0.1)]
_, fitted_h, slope_h = bound_probe(hyp)
print(f"hyperbolic small loops:            slope {slope_h:.3f}, constant {fitted_h:.4f}")

rng = np.random.default_rng(1)
worst = max(holonomy_defect(random_sphere_loop(192, rng)) for _ in range(25))
print(f"\n25 random loops on S^2: worst defect {worst:.4f} <= 2 sqrt(2) = {2*np.sqrt(2):.4f}")
