"""Empirical probes of the interpolation inequalities.

Two scans over sampled curves and band-limited random fields:

* the general inequality  a^{2k} |D_s^k h|^2 <= C (|h|^2 + a^{2n} |D_s^n h|^2)
  holds with ratios stable across rescaled curves and the whole a-grid;
* on shrinking closed curves the first-derivative ratio decays like
  length^2 (the small-length clamp of the periodic inequality), with the
  same exponent on flat and curved targets.
"""

import numpy as np

from elastica.analysis import ScanConfig, ineq_scan_general, ineq_scan_periodic

gen = ineq_scan_general(ScanConfig(
    manifold={"kind": "euclidean", "dim": 2},
    family="euclidean_circle",
    n_samples=256,
    order_k=1,
    order_n=2,
    field_samples=16,
    a_grid=tuple(np.linspace(1 / 16, 1.0, 16)),
    scales=(0.25, 0.5, 1.0, 2.0, 4.0),
    seed=42,
))
per_scale = {}
for r in gen.rows:
    per_scale.setdefault(r["label"], []).append(r["ratio"])
print("general scan (k=1, n=2), worst ratio per curve scale:")
for label, ratios in per_scale.items():
    print(f"  {label:12s}: {max(ratios):.4f}")
print(f"  -> max ratio {gen.max_ratio:.4f}, finite and stable across scales")

print("\nperiodic scan on shrinking Euclidean circles:")
per = ineq_scan_periodic(ScanConfig(
    manifold={"kind": "euclidean", "dim": 2},
    family="euclidean_circle",
    n_samples=256,
    field_samples=24,
    family_parameter="radius",
    family_values=tuple(0.5**k for k in range(2, 7)),
    seed=42,
))
for r in per.rows:
    print(f"  l = {r['length']:.4f}: worst |D_s h|^2/(|h|^2 + |D_s^2 h|^2) = {r['lhs']:.3e}")
print(f"  fitted log-log slope vs length: {per.slope:.3f}  (expected 2)")

sph = ineq_scan_periodic(ScanConfig(
    manifold={"kind": "sphere", "dim": 2},
    family="sphere_circle",
    n_samples=256,
    field_samples=24,
    family_parameter="colatitude",
    family_values=(0.4, 0.2, 0.1, 0.05),
    seed=42,
))
print(f"\nsphere family: slope {sph.slope:.3f}, fitted constant C^ = {sph.max_ratio:.4f}")
print("(the curvature contributes the zeroth-order term through holonomy,")
print(" but the length^2 scaling survives)")
