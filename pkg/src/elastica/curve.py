"""Discrete curves on [0, 2pi] (open) or S^1 (closed) and fields along them.

A curve is a sequence of on-manifold points on the uniform grid; its
derivative c', node speeds |c'|, length and arc-length quadrature weights
are cached at construction.  Covariant derivatives of vector fields use
transported finite differences so everything stays chart-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AdjacencyError,
    ImmersionError,
    InvalidArgumentError,
    UnsupportedOrderError,
)
from .manifold import Manifold

# default immersion threshold for min |c'|
EPS_IMMERSION = 1e-8

# covariant derivative order cap; aliasing makes higher orders meaningless
MAX_DERIV_ORDER = 8


@dataclass(frozen=True)
class Domain:
    """Uniform parameter grid: theta_i = 2*pi*i/N (closed, i < N) or
    theta_i = 2*pi*i/(N-1) (open, endpoints included)."""

    topology: str
    samples: int

    def __post_init__(self):
        if self.topology not in ("open", "closed"):
            raise InvalidArgumentError(
                f"topology must be 'open' or 'closed', got {self.topology!r}"
            )
        if self.samples < 8:
            raise InvalidArgumentError("domain needs at least 8 samples")

    @property
    def closed(self):
        return self.topology == "closed"

    @property
    def dtheta(self):
        n = self.samples if self.closed else self.samples - 1
        return 2.0 * np.pi / n

    @property
    def theta(self):
        return self.dtheta * np.arange(self.samples)

    @property
    def quad_weights(self):
        """Trapezoid weights for integrals in dtheta (sum = 2*pi)."""
        w = np.full(self.samples, self.dtheta)
        if not self.closed:
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def to_spec(self):
        return {"topology": self.topology, "samples": self.samples}


def _roll_pairs(points, shift):
    return np.roll(points, shift, axis=0)


def _derivative(manifold, domain, points):
    """Fourth-order symmetric log-based derivative c'(theta_i).

    Interior/closed nodes use the 5-point stencil on f(k) = log_{c_i}(c_{i+k})
    (the derivative of the log at its base point is the identity); open ends
    use one-sided 4th-order stencils on the same log data.
    """
    n = len(points)
    dth = domain.dtheta
    if domain.closed:
        lp1 = manifold.log(points, _roll_pairs(points, -1))
        lm1 = manifold.log(points, _roll_pairs(points, 1))
        lp2 = manifold.log(points, _roll_pairs(points, -2))
        lm2 = manifold.log(points, _roll_pairs(points, 2))
        return (8.0 * (lp1 - lm1) - (lp2 - lm2)) / (12.0 * dth)

    deriv = np.empty_like(points)
    lp1 = manifold.log(points[1:-1], points[2:])
    lm1 = manifold.log(points[1:-1], points[:-2])
    deriv[1:-1] = (lp1 - lm1) / (2.0 * dth)
    if n >= 5:
        lp2 = manifold.log(points[2:-2], points[4:])
        lm2 = manifold.log(points[2:-2], points[:-4])
        deriv[2:-2] = (8.0 * (lp1[1:-1] - lm1[1:-1]) - (lp2 - lm2)) / (12.0 * dth)
    # one-sided 4th order: f'(0) = (-25 f0 + 48 f1 - 36 f2 + 16 f3 - 3 f4)/(12 h),
    # with f_k = log_{c_0}(c_k) and f_0 = 0
    for idx, sign in ((0, 1), (n - 1, -1)):
        logs = [
            manifold.log(points[idx], points[idx + sign * k]) for k in range(1, 5)
        ]
        deriv[idx] = sign * (
            48.0 * logs[0] - 36.0 * logs[1] + 16.0 * logs[2] - 3.0 * logs[3]
        ) / (12.0 * dth)
    return deriv


@dataclass(frozen=True)
class DiscreteCurve:
    """Immersed discrete curve with cached arc-length data.

    Arrays are read-only; construct with :func:`build_curve`.
    """

    manifold: Manifold
    domain: Domain
    points: np.ndarray          # (N, ambient)
    derivative: np.ndarray = field(repr=False, default=None)   # c'(theta_i)
    speed: np.ndarray = field(repr=False, default=None)        # |c'|_i
    length: float = None
    ds: np.ndarray = field(repr=False, default=None)           # weights for int . ds
    dtheta_weights: np.ndarray = field(repr=False, default=None)

    @property
    def n_samples(self):
        return self.domain.samples

    def unit_tangent_vectors(self):
        return self.derivative / self.speed[:, None]

    def with_points(self, points, eps_imm=EPS_IMMERSION):
        return build_curve(self.manifold, self.domain, points, eps_imm=eps_imm)

    def to_spec(self):
        return {
            "manifold": self.manifold.to_spec(),
            "domain": self.domain.to_spec(),
            "points": self.points.tolist(),
        }


def build_curve(manifold, domain, points, eps_imm=EPS_IMMERSION, validate=True):
    """Validate points and cache speeds/length/quadrature weights.

    Raises
    ------
    ImmersionError
        if any node or segment speed falls below ``eps_imm``.
    AdjacencyError
        if adjacent nodes are farther apart than half the injectivity radius.
    """
    points = np.ascontiguousarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] != domain.samples:
        raise InvalidArgumentError(
            f"points must have shape ({domain.samples}, {manifold.ambient_dim}), "
            f"got {points.shape}"
        )
    if points.shape[1] != manifold.ambient_dim:
        raise InvalidArgumentError(
            f"ambient dimension mismatch: manifold expects {manifold.ambient_dim}, "
            f"points have {points.shape[1]}"
        )
    if validate:
        manifold.check_point(points, tol=1e-10)

    nxt = np.roll(points, -1, axis=0)
    seg = manifold.dist(points, nxt)
    if not domain.closed:
        seg = seg[:-1]
    inj = manifold.injectivity_radius
    if np.isfinite(inj) and np.any(seg >= 0.5 * inj):
        i = int(np.argmax(seg))
        raise AdjacencyError(
            f"adjacent nodes {i}, {i + 1} are {seg.max():.4g} apart, "
            f">= half the injectivity radius {0.5 * inj:.4g}"
        )
    if np.any(seg / domain.dtheta <= eps_imm):
        i = int(np.argmin(seg))
        raise ImmersionError(
            f"segment speed at node {i} is {seg.min() / domain.dtheta:.3e} "
            f"<= immersion threshold {eps_imm:.1e}",
            node=i,
        )

    deriv = _derivative(manifold, domain, points)
    speed = manifold.norm(points, deriv)
    if np.any(speed <= eps_imm):
        i = int(np.argmin(speed))
        raise ImmersionError(
            f"node speed at node {i} is {speed.min():.3e} "
            f"<= immersion threshold {eps_imm:.1e}",
            node=i,
        )

    wtheta = domain.quad_weights
    ds = speed * wtheta
    length = float(np.sum(ds))
    for a in (points, deriv, speed, ds, wtheta):
        a.setflags(write=False)
    return DiscreteCurve(
        manifold=manifold,
        domain=domain,
        points=points,
        derivative=deriv,
        speed=speed,
        length=length,
        ds=ds,
        dtheta_weights=wtheta,
    )


@dataclass(frozen=True)
class VectorField:
    """Tangent vectors along a curve, vectors[i] in T_{points[i]}."""

    curve: DiscreteCurve
    vectors: np.ndarray

    def __add__(self, other):
        _same_curve(self, other)
        return VectorField(self.curve, self.vectors + other.vectors)

    def __sub__(self, other):
        _same_curve(self, other)
        return VectorField(self.curve, self.vectors - other.vectors)

    def __mul__(self, scalar):
        return VectorField(self.curve, self.vectors * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return VectorField(self.curve, -self.vectors)


def _same_curve(h, k):
    if h.curve is not k.curve and not np.array_equal(h.curve.points, k.curve.points):
        raise InvalidArgumentError("vector fields live on different curves")


def make_field(curve, vectors, validate=True):
    vectors = np.ascontiguousarray(vectors, dtype=float)
    if vectors.shape != curve.points.shape:
        raise InvalidArgumentError(
            f"field shape {vectors.shape} does not match curve {curve.points.shape}"
        )
    if validate:
        curve.manifold.check_tangent(curve.points, vectors, tol=1e-10)
    vectors.setflags(write=False)
    return VectorField(curve, vectors)


def unit_tangent(curve):
    """Unit-length tangent field v = c'/|c'|."""
    return VectorField(curve, curve.unit_tangent_vectors())


def _cov_deriv_theta_once(curve, vec):
    """One transported central-difference pass of nabla_{d/dtheta}."""
    M = curve.manifold
    pts = curve.points
    dth = curve.domain.dtheta
    if curve.domain.closed:
        tn = M.transport(_roll_pairs(pts, -1), pts, _roll_pairs(vec, -1))
        tp = M.transport(_roll_pairs(pts, 1), pts, _roll_pairs(vec, 1))
        return (tn - tp) / (2.0 * dth)
    out = np.empty_like(vec)
    tn = M.transport(pts[2:], pts[1:-1], vec[2:])
    tp = M.transport(pts[:-2], pts[1:-1], vec[:-2])
    out[1:-1] = (tn - tp) / (2.0 * dth)
    # one-sided second-order stencils at the endpoints
    out[0] = (
        -3.0 * vec[0]
        + 4.0 * M.transport(pts[1], pts[0], vec[1])
        - M.transport(pts[2], pts[0], vec[2])
    ) / (2.0 * dth)
    out[-1] = (
        3.0 * vec[-1]
        - 4.0 * M.transport(pts[-2], pts[-1], vec[-2])
        + M.transport(pts[-3], pts[-1], vec[-3])
    ) / (2.0 * dth)
    return out


def cov_deriv(curve, h, variable="arclength", order=1):
    """Iterated covariant derivative of a field along the curve.

    Parameters
    ----------
    h : VectorField or (N, ambient) array
    variable : "theta" for nabla_{d/dtheta}, "arclength" for
        nabla_{d/ds} = (1/|c'|) nabla_{d/dtheta} (divided after each pass).
    order : number of derivatives, 1 <= order <= MAX_DERIV_ORDER.
    """
    if variable not in ("theta", "arclength"):
        raise InvalidArgumentError(f"variable must be 'theta' or 'arclength', got {variable!r}")
    if not 1 <= order <= MAX_DERIV_ORDER:
        raise UnsupportedOrderError(
            f"derivative order {order} outside [1, {MAX_DERIV_ORDER}]"
        )
    vec = h.vectors if isinstance(h, VectorField) else np.asarray(h, dtype=float)
    if isinstance(h, VectorField):
        _same_curve(h, VectorField(curve, vec))
    for _ in range(order):
        vec = _cov_deriv_theta_once(curve, vec)
        if variable == "arclength":
            vec = vec / curve.speed[:, None]
    return VectorField(curve, vec)


def _lagrange_weights(offsets, x):
    """Lagrange basis weights at x for integer-offset nodes."""
    offsets = np.asarray(offsets, dtype=float)
    w = np.ones_like(offsets)
    for a, oa in enumerate(offsets):
        for ob in offsets[np.arange(len(offsets)) != a]:
            w[a] *= (x - ob) / (oa - ob)
    return w


def _interp_point(curve, i, alpha):
    """Point at parameter offset alpha in [0,1] past node i, via 5-point
    Lagrange interpolation in the log chart at node i (O(dtheta^5) accurate,
    reduces to the segment geodesic for straight curves)."""
    M = curve.manifold
    n = curve.n_samples
    if curve.domain.closed:
        offs = np.arange(-2, 3)
        idx = (i + offs) % n
    else:
        lo = min(max(i - 2, 0), n - 5)
        idx = np.arange(lo, lo + 5)
        offs = idx - i
    logs = M.log(curve.points[i], curve.points[idx])
    w = _lagrange_weights(offs, alpha)
    return M.exp(curve.points[i], np.tensordot(w, logs, axes=1))


def cumulative_arclength(curve):
    """Trapezoid cumulative arc length; s[0] = 0, s[-1] = length.

    For closed curves the array has N+1 entries (seam segment included)."""
    sp = curve.speed
    dth = curve.domain.dtheta
    if curve.domain.closed:
        pair = 0.5 * (sp + np.roll(sp, -1)) * dth
    else:
        pair = 0.5 * (sp[:-1] + sp[1:]) * dth
    return np.concatenate([[0.0], np.cumsum(pair)])


def reparametrize_arclength(curve, eps_imm=EPS_IMMERSION):
    """Resample the curve at constant speed length/(2*pi), same image."""
    n = curve.n_samples
    s = cumulative_arclength(curve)
    total = s[-1]
    if curve.domain.closed:
        targets = total * np.arange(n) / n
    else:
        targets = total * np.arange(n) / (n - 1)
    seg = np.clip(np.searchsorted(s, targets, side="right") - 1, 0, len(s) - 2)
    new_pts = np.empty_like(curve.points)
    for j in range(n):
        i = int(seg[j])
        width = s[i + 1] - s[i]
        alpha = 0.0 if width == 0 else (targets[j] - s[i]) / width
        new_pts[j] = _interp_point(curve, i, alpha)
    if not curve.domain.closed:
        new_pts[0] = curve.points[0]
        new_pts[-1] = curve.points[-1]
    return build_curve(curve.manifold, curve.domain, new_pts, eps_imm=eps_imm)
