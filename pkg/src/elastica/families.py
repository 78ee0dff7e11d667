"""Parametric curve families and a smooth random-field sampler.

Families back the scans and demos: circles/ellipses/segments in the
plane, colatitude circles on spheres, intrinsic circles in hyperbolic
space, and seeded random Fourier loops.  The field sampler synthesizes
band-limited fields in a parallel frame that is de-twisted by the
holonomy, so fields on closed curves are single-valued and smooth across
the seam.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .curve import Domain, build_curve
from .errors import InvalidArgumentError
from .geodesic_ivp import parallel_frames, from_frame
from .holonomy import loop_holonomy
from .manifold import Euclidean, Hyperbolic, Sphere


def euclidean_circle(n_samples, radius=1.0, center=(0.0, 0.0)):
    dom = Domain("closed", n_samples)
    th = dom.theta
    pts = np.stack(
        [center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)], axis=1
    )
    return build_curve(Euclidean(2), dom, pts)


def euclidean_ellipse(n_samples, a=2.0, b=1.0):
    dom = Domain("closed", n_samples)
    th = dom.theta
    pts = np.stack([a * np.cos(th), b * np.sin(th)], axis=1)
    return build_curve(Euclidean(2), dom, pts)


def euclidean_segment(n_samples, slope=0.0, scale=1.0):
    """The open curve theta -> (scale*theta, slope*theta) on [0, 2pi]."""
    dom = Domain("open", n_samples)
    th = dom.theta
    pts = np.stack([scale * th, slope * th], axis=1)
    return build_curve(Euclidean(2), dom, pts)


def sphere_circle(n_samples, colatitude, radius=1.0):
    """Circle at fixed colatitude on a 2-sphere of the given radius."""
    if not 0 < colatitude < np.pi:
        raise InvalidArgumentError("colatitude must lie in (0, pi)")
    dom = Domain("closed", n_samples)
    th = dom.theta
    s, c = np.sin(colatitude), np.cos(colatitude)
    pts = radius * np.stack([s * np.cos(th), s * np.sin(th), c * np.ones_like(th)], axis=1)
    return build_curve(Sphere(2, radius), dom, pts)


def hyperbolic_circle(n_samples, geodesic_radius=0.5):
    """Intrinsic circle of the given radius around the hyperboloid apex."""
    if geodesic_radius <= 0:
        raise InvalidArgumentError("geodesic_radius must be positive")
    dom = Domain("closed", n_samples)
    th = dom.theta
    r = geodesic_radius
    pts = np.stack(
        [np.sinh(r) * np.cos(th), np.sinh(r) * np.sin(th), np.cosh(r) * np.ones_like(th)],
        axis=1,
    )
    return build_curve(Hyperbolic(2), dom, pts)


def scaled_curve(curve, alpha):
    """Rescale a Euclidean curve about the origin."""
    if curve.manifold.kind != "euclidean":
        raise InvalidArgumentError("scaling is defined for Euclidean targets")
    return curve.with_points(alpha * curve.points)


def random_sphere_loop(n_samples, rng, modes=3, amplitude=0.35, radius=1.0,
                       max_tries=50):
    """Random smooth closed loop on S^2: a Fourier perturbation of a great
    circle, projected to the sphere; retries until the immersion and
    adjacency invariants hold."""
    dom = Domain("closed", n_samples)
    th = dom.theta
    base = np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)
    sphere = Sphere(2, radius)
    for _ in range(max_tries):
        pert = np.zeros((n_samples, 3))
        for m in range(1, modes + 1):
            coef = amplitude / m * rng.standard_normal((2, 3))
            pert += np.outer(np.cos(m * th), coef[0]) + np.outer(np.sin(m * th), coef[1])
        pts = sphere.project_point(radius * (base + pert))
        try:
            return build_curve(sphere, dom, pts)
        except Exception:
            continue
    raise InvalidArgumentError("could not sample a valid random loop")


_PRESETS = {
    "euclidean_circle": euclidean_circle,
    "euclidean_ellipse": euclidean_ellipse,
    "euclidean_segment": euclidean_segment,
    "sphere_circle": sphere_circle,
    "hyperbolic_circle": hyperbolic_circle,
}


def make_curve(preset, n_samples, **params):
    """Instantiate a named curve preset."""
    if preset not in _PRESETS:
        raise InvalidArgumentError(
            f"unknown curve preset {preset!r}; expected one of {sorted(_PRESETS)}"
        )
    return _PRESETS[preset](n_samples, **params)


def detwisted_frames(curve):
    """Parallel frames rotated back by the fractional holonomy.

    On closed curves the parallel frame jumps by the holonomy at the seam;
    multiplying frame i by expm(-theta_i/2pi * logm(Hol)) yields a smooth,
    periodic frame field.  Open curves return the parallel frames as-is.
    """
    frames = parallel_frames(curve)
    if not curve.domain.closed:
        return frames
    hol = loop_holonomy(curve)
    log_h = np.real(scipy.linalg.logm(hol))
    th = curve.domain.theta
    out = np.empty_like(frames)
    for i in range(curve.n_samples):
        mix = scipy.linalg.expm(-(th[i] / (2.0 * np.pi)) * log_h)
        # column b of the holonomy acts on frame coefficients
        out[i] = np.einsum("ab,bm->am", mix.T, frames[i])
    return out


def random_smooth_field(curve, rng, max_mode=None, amplitude=1.0):
    """Band-limited random field along the curve (modes <= N//8 by default).

    Coefficient functions are Fourier polynomials per (de-twisted) frame
    direction, so the field is smooth and, on closed curves, single-valued.
    """
    n = curve.n_samples
    if max_mode is None:
        max_mode = max(1, n // 8)
    frames = detwisted_frames(curve)
    th = curve.domain.theta
    dim = curve.manifold.dim
    coords = np.zeros((n, dim))
    for a in range(dim):
        coefs = rng.standard_normal(2 * max_mode + 1)
        coords[:, a] = coefs[0] / np.sqrt(2.0)
        for m in range(1, max_mode + 1):
            coords[:, a] += (
                coefs[2 * m - 1] * np.cos(m * th) + coefs[2 * m] * np.sin(m * th)
            ) / m
    coords *= amplitude / np.sqrt(max_mode)
    return from_frame(frames, coords)


def fourier_mode_field(curve, direction, mode, phase=0.0):
    """Deterministic single-mode field: cos(mode*theta + phase) * e_dir.

    Uses the de-twisted frame direction ``direction``; the analytic
    derivative norms of these fields back several oracles.
    """
    frames = detwisted_frames(curve)
    th = curve.domain.theta
    coords = np.zeros((curve.n_samples, curve.manifold.dim))
    coords[:, direction] = np.cos(mode * th + phase)
    return from_frame(frames, coords)
