"""Parallel transport around closed curves and the curvature-area bound.

The holonomy of a closed discrete curve is the composition of the
segment transports c_0 -> c_1 -> ... -> c_0, expressed as a matrix in a
fixed orthonormal frame at the base point.  Its Frobenius deviation from
the identity is bounded by min{C * length^2, 2 sqrt(dim)}; the probe
fits the quadratic constant over curve families.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class HolonomyReport:
    """Per-curve holonomy diagnostics."""

    curve_id: str
    length: float
    defect: float
    bound_cap: float
    ratio: float        # defect / length^2
    bound: float        # min{1.1 * K_N * sqrt(dim) * length^2, cap}
    passed: bool


def loop_holonomy(curve):
    """Holonomy matrix of a closed curve in an orthonormal frame at node 0.

    Returns a (dim, dim) matrix, orthogonal up to discretization error.
    """
    if not curve.domain.closed:
        raise InvalidArgumentError("holonomy requires a closed curve")
    M = curve.manifold
    pts = curve.points
    frame = M.frame(pts[0])            # (dim, ambient)
    vecs = frame.copy()
    n = curve.n_samples
    for i in range(n):
        a = pts[i]
        b = pts[(i + 1) % n]
        vecs = M.transport(a, b, vecs)
    # matrix entries: g(transported e_b, e_a)
    hol = np.empty((M.dim, M.dim))
    for b in range(M.dim):
        hol[:, b] = M.inner(pts[0], frame, vecs[b])
    return hol


def holonomy_defect(curve):
    """Frobenius norm of Hol_c - id at the base point."""
    hol = loop_holonomy(curve)
    return float(np.linalg.norm(hol - np.eye(hol.shape[0])))


def rotation_angle(curve):
    """Rotation angle of the holonomy (2-dimensional targets only)."""
    hol = loop_holonomy(curve)
    if hol.shape != (2, 2):
        raise InvalidArgumentError("rotation angle is defined for 2-dim targets")
    return float(np.arctan2(hol[1, 0] - hol[0, 1], hol[0, 0] + hol[1, 1]))


def bound_probe(curves, ids=None, slack=0.10, threads=1):
    """Check defect <= min{(1+slack) K_N sqrt(d) l^2, 2 sqrt(d)} per curve.

    Returns (list of HolonomyReport, fitted constant max defect/l^2,
    log-log slope of defect vs length over the family).
    """
    curves = list(curves)
    if not curves:
        raise InvalidArgumentError("bound_probe needs at least one curve")
    M = curves[0].manifold
    for c in curves[1:]:
        if c.manifold != M:
            raise InvalidArgumentError("all curves must live on one manifold")
    if ids is None:
        ids = [f"curve{i}" for i in range(len(curves))]
    cap = 2.0 * np.sqrt(M.dim)
    cstar = M.curvature_bound * np.sqrt(M.dim)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            defects = list(ex.map(holonomy_defect, curves))
    else:
        defects = [holonomy_defect(c) for c in curves]

    reports = []
    for cid, c, d in zip(ids, curves, defects):
        bound = min((1.0 + slack) * cstar * c.length**2, cap + 1e-9)
        reports.append(
            HolonomyReport(
                curve_id=cid,
                length=c.length,
                defect=d,
                bound_cap=cap,
                ratio=d / c.length**2,
                bound=bound,
                passed=bool(d <= bound),
            )
        )
    fitted = max(r.ratio for r in reports)
    slope = float("nan")
    positive = [(r.length, r.defect) for r in reports if r.defect > 0]
    if len(positive) >= 2:
        ls, ds = np.log([p[0] for p in positive]), np.log([p[1] for p in positive])
        slope = float(np.polyfit(ls, ds, 1)[0])
    return reports, fitted, slope
