"""Constant-curvature target spaces with closed-form Riemannian primitives.

Three backends share one array-first interface: Euclidean space R^d, the
round sphere of radius ``rho`` (unit vectors in R^{d+1} scaled by ``rho``)
and hyperbolic space in the hyperboloid model (the upper sheet of
<x,x>_M = -1 in Minkowski R^{d,1}, last coordinate timelike).

Points and tangents are plain ndarrays whose last axis is the ambient
dimension; every operation broadcasts over leading axes.  All maps (exp,
log, parallel transport, curvature tensor) are closed-form, with series
fallbacks below ``SERIES_TOL`` to avoid 0/0.
"""

from __future__ import annotations

import numpy as np

from .errors import InjectivityError, InvalidArgumentError

# switch to series expansions for angles/arguments below this size
SERIES_TOL = 1e-6

# tolerance for the on-manifold / tangency constraints
CONSTRAINT_TOL = 1e-12


class Manifold:
    """Common interface of the constant-curvature backends.

    Attributes
    ----------
    dim : int
        Intrinsic dimension d >= 1.
    ambient_dim : int
        Dimension of the ambient representation.
    curvature : float
        Sectional curvature K (constant).
    curvature_bound : float
        K_N = |K|.
    injectivity_radius : float
        Injectivity radius (inf for Euclidean/hyperbolic).
    """

    kind = None

    def inner(self, p, u, v):
        """Riemannian inner product g_p(u, v)."""
        raise NotImplementedError

    def norm(self, p, v):
        return np.sqrt(np.maximum(self.inner(p, v, v), 0.0))

    def exp(self, p, v):
        """Point at geodesic distance |v| from p in direction v."""
        raise NotImplementedError

    def log(self, p, q):
        """Tangent v at p with exp(p, v) = q and |v| = dist(p, q)."""
        raise NotImplementedError

    def transport(self, p, q, v):
        """Parallel transport of v from p to q along the unique geodesic."""
        raise NotImplementedError

    def dist(self, p, q):
        raise NotImplementedError

    def project_point(self, x):
        """Closest-point (or gauge) projection of ambient x onto the manifold."""
        raise NotImplementedError

    def project_tangent(self, p, w):
        """g-orthogonal projection of ambient w onto T_p."""
        raise NotImplementedError

    def curvature_tensor(self, p, x, y, z):
        """R(X,Y)Z = K (g(Y,Z) X - g(X,Z) Y) for constant curvature K.

        Satisfies [nabla_t, nabla_theta] W = R(c_t, c_theta) W for
        two-parameter families, which is the convention used throughout
        the geodesic machinery.
        """
        gyz = self.inner(p, y, z)[..., None]
        gxz = self.inner(p, x, z)[..., None]
        return self.curvature * (gyz * x - gxz * y)

    def euclidean_to_riemannian_gradient(self, p, egrad):
        """Convert an ambient-Euclidean gradient into the Riemannian one.

        The result r satisfies g_p(r, delta) = egrad . delta for every
        tangent delta (ordinary dot product on the right).
        """
        raise NotImplementedError

    # -- validation ------------------------------------------------------

    def point_defect(self, x):
        """Residual of the on-manifold constraint (0 on the manifold)."""
        raise NotImplementedError

    def tangency_defect(self, p, v):
        """Residual of the tangency constraint (0 for tangents at p)."""
        raise NotImplementedError

    def check_point(self, x, tol=CONSTRAINT_TOL):
        d = np.max(np.abs(self.point_defect(x))) if np.size(x) else 0.0
        if d > tol:
            raise InvalidArgumentError(
                f"point not on {self.kind} manifold (constraint residual {d:.3e})"
            )

    def check_tangent(self, p, v, tol=CONSTRAINT_TOL):
        scale = 1.0 + float(np.max(np.abs(v))) if np.size(v) else 1.0
        d = np.max(np.abs(self.tangency_defect(p, v))) if np.size(v) else 0.0
        if d > tol * scale:
            raise InvalidArgumentError(
                f"vector not tangent at base point on {self.kind} manifold "
                f"(residual {d:.3e}); possible base mismatch"
            )

    # -- sampling and frames ---------------------------------------------

    def random_point(self, rng, size=()):
        raise NotImplementedError

    def random_tangent(self, rng, p):
        w = rng.standard_normal(np.shape(p))
        return self.project_tangent(p, w)

    def frame(self, p):
        """Deterministic orthonormal basis of T_p, shape (dim, ambient).

        Gram-Schmidt on the projections of the ambient coordinate axes,
        skipping directions that project to (near) zero.
        """
        p = np.asarray(p, dtype=float)
        m = self.ambient_dim
        basis = []
        for i in range(m):
            e = np.zeros(m)
            e[i] = 1.0
            w = self.project_tangent(p, e)
            for b in basis:
                w = w - self.inner(p, w, b) * b
            n = self.norm(p, w)
            if n > 1e-8:
                basis.append(w / n)
            if len(basis) == self.dim:
                break
        if len(basis) < self.dim:
            raise InvalidArgumentError("frame construction failed (degenerate point)")
        return np.stack(basis)

    # -- (de)serialisation -------------------------------------------------

    def to_spec(self):
        spec = {"kind": self.kind, "dim": self.dim}
        if self.kind == "sphere":
            spec["radius"] = self.radius
        return spec

    def __eq__(self, other):
        return isinstance(other, Manifold) and self.to_spec() == other.to_spec()

    def __hash__(self):
        return hash(tuple(sorted(self.to_spec().items())))

    def __repr__(self):
        args = f"dim={self.dim}"
        if self.kind == "sphere":
            args += f", radius={self.radius}"
        return f"{type(self).__name__}({args})"


class Euclidean(Manifold):
    """Flat R^d."""

    kind = "euclidean"

    def __init__(self, dim):
        if dim < 1:
            raise InvalidArgumentError("dim must be >= 1")
        self.dim = int(dim)
        self.ambient_dim = self.dim
        self.curvature = 0.0
        self.curvature_bound = 0.0
        self.injectivity_radius = np.inf

    def inner(self, p, u, v):
        return np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def exp(self, p, v):
        return np.asarray(p) + np.asarray(v)

    def log(self, p, q):
        return np.asarray(q) - np.asarray(p)

    def transport(self, p, q, v):
        return np.array(v, dtype=float, copy=True)

    def dist(self, p, q):
        return np.linalg.norm(np.asarray(q) - np.asarray(p), axis=-1)

    def project_point(self, x):
        return np.asarray(x, dtype=float)

    def project_tangent(self, p, w):
        return np.asarray(w, dtype=float)

    def euclidean_to_riemannian_gradient(self, p, egrad):
        return np.asarray(egrad, dtype=float)

    def point_defect(self, x):
        return np.zeros(np.shape(x)[:-1])

    def tangency_defect(self, p, v):
        return np.zeros(np.shape(v)[:-1])

    def random_point(self, rng, size=()):
        return rng.standard_normal(tuple(np.atleast_1d(size)) + (self.dim,)) \
            if size != () else rng.standard_normal(self.dim)


class Sphere(Manifold):
    """Round sphere of radius rho, embedded as {|x| = rho} in R^{d+1}."""

    kind = "sphere"

    def __init__(self, dim, radius=1.0):
        if dim < 1:
            raise InvalidArgumentError("dim must be >= 1")
        if radius <= 0:
            raise InvalidArgumentError("radius must be positive")
        self.dim = int(dim)
        self.radius = float(radius)
        self.ambient_dim = self.dim + 1
        self.curvature = 1.0 / self.radius**2
        self.curvature_bound = self.curvature
        self.injectivity_radius = np.pi * self.radius

    def inner(self, p, u, v):
        return np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def _angle(self, p, q):
        c = np.sum(np.asarray(p) * np.asarray(q), axis=-1) / self.radius**2
        return np.arccos(np.clip(c, -1.0, 1.0))

    def _check_injectivity(self, p, q):
        d = self.radius * self._angle(p, q)
        if np.any(d > self.injectivity_radius - 1e-6):
            raise InjectivityError(
                "points at or beyond the injectivity radius (near-antipodal)"
            )

    def exp(self, p, v):
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        alpha = np.linalg.norm(v, axis=-1, keepdims=True) / self.radius
        # np.sinc(a/pi) = sin(a)/a, stable at 0
        return np.cos(alpha) * p + np.sinc(alpha / np.pi) * v

    def log(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        self._check_injectivity(p, q)
        c = np.sum(p * q, axis=-1, keepdims=True) / self.radius**2
        phi = np.arccos(np.clip(c, -1.0, 1.0))
        w = q - c * p
        # phi / sin(phi), series below SERIES_TOL
        small = phi < SERIES_TOL
        safe = np.where(small, 1.0, np.sin(phi))
        factor = np.where(small, 1.0 + phi**2 / 6.0, phi / safe)
        return factor * w

    def transport(self, p, q, v):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        v = np.asarray(v, dtype=float)
        self._check_injectivity(p, q)
        pq = np.sum(p * q, axis=-1, keepdims=True)
        qv = np.sum(q * v, axis=-1, keepdims=True)
        return v - qv / (self.radius**2 + pq) * (p + q)

    def dist(self, p, q):
        return self.radius * self._angle(p, q)

    def project_point(self, x):
        x = np.asarray(x, dtype=float)
        n = np.linalg.norm(x, axis=-1, keepdims=True)
        if np.any(n == 0):
            raise InvalidArgumentError("cannot project the origin onto the sphere")
        return self.radius * x / n

    def project_tangent(self, p, w):
        p = np.asarray(p, dtype=float)
        w = np.asarray(w, dtype=float)
        return w - (np.sum(p * w, axis=-1, keepdims=True) / self.radius**2) * p

    def euclidean_to_riemannian_gradient(self, p, egrad):
        return self.project_tangent(p, egrad)

    def point_defect(self, x):
        x = np.asarray(x, dtype=float)
        return np.sum(x * x, axis=-1) / self.radius**2 - 1.0

    def tangency_defect(self, p, v):
        return np.sum(np.asarray(p) * np.asarray(v), axis=-1) / self.radius

    def random_point(self, rng, size=()):
        shape = (tuple(np.atleast_1d(size)) if size != () else ()) + (self.ambient_dim,)
        return self.project_point(rng.standard_normal(shape))


class Hyperbolic(Manifold):
    """Hyperbolic space H^d, hyperboloid model in Minkowski R^{d,1}.

    Ambient vectors are (x_1, ..., x_d, x_t) with <u,v>_M =
    sum_i u_i v_i - u_t v_t; points satisfy <x,x>_M = -1, x_t > 0.
    Sectional curvature is -1.
    """

    kind = "hyperbolic"

    def __init__(self, dim):
        if dim < 1:
            raise InvalidArgumentError("dim must be >= 1")
        self.dim = int(dim)
        self.ambient_dim = self.dim + 1
        self.curvature = -1.0
        self.curvature_bound = 1.0
        self.injectivity_radius = np.inf

    @staticmethod
    def minkowski(u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        return np.sum(u[..., :-1] * v[..., :-1], axis=-1) - u[..., -1] * v[..., -1]

    def inner(self, p, u, v):
        return self.minkowski(u, v)

    def exp(self, p, v):
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        b2 = np.maximum(self.minkowski(v, v), 0.0)[..., None]
        b = np.sqrt(b2)
        small = b < SERIES_TOL
        safe = np.where(small, 1.0, b)
        sinhc = np.where(small, 1.0 + b2 / 6.0, np.sinh(safe) / safe)
        return np.cosh(b) * p + sinhc * v

    def log(self, p, q):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        alpha = np.maximum(-self.minkowski(p, q), 1.0)[..., None]
        u = alpha - 1.0
        w = q - alpha * p
        # d / sinh(d) with d = arccosh(alpha); series in u = alpha - 1
        small = u < 1e-8
        safe_u = np.where(small, 1.0, u)
        d = np.arccosh(np.where(small, 2.0, alpha))
        factor = np.where(
            small, 1.0 - u / 3.0, d / np.sqrt(safe_u * (safe_u + 2.0))
        )
        return factor * w

    def transport(self, p, q, v):
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        v = np.asarray(v, dtype=float)
        alpha = np.maximum(-self.minkowski(p, q), 1.0)[..., None]
        qv = self.minkowski(q, v)[..., None]
        return v + qv / (alpha + 1.0) * (p + q)

    def dist(self, p, q):
        alpha = np.maximum(-self.minkowski(p, q), 1.0)
        u = alpha - 1.0
        small = u < 1e-8
        # arccosh(1+u) ~ sqrt(2u)(1 - u/12) for small u
        series = np.sqrt(2.0 * np.maximum(u, 0.0)) * (1.0 - u / 12.0)
        return np.where(small, series, np.arccosh(np.where(small, 2.0, alpha)))

    def project_point(self, x):
        x = np.asarray(x, dtype=float)
        s = -self.minkowski(x, x)
        if np.any(s <= 0) or np.any(x[..., -1] <= 0):
            raise InvalidArgumentError(
                "point cannot be gauge-projected onto the upper hyperboloid sheet"
            )
        return x / np.sqrt(s)[..., None]

    def project_tangent(self, p, w):
        p = np.asarray(p, dtype=float)
        w = np.asarray(w, dtype=float)
        return w + self.minkowski(p, w)[..., None] * p

    def euclidean_to_riemannian_gradient(self, p, egrad):
        g = np.array(egrad, dtype=float, copy=True)
        g[..., -1] *= -1.0  # raise the index with the Minkowski metric
        return self.project_tangent(p, g)

    def point_defect(self, x):
        return self.minkowski(x, x) + 1.0

    def tangency_defect(self, p, v):
        return self.minkowski(p, v)

    def random_point(self, rng, size=()):
        shape = (tuple(np.atleast_1d(size)) if size != () else ()) + (self.dim,)
        y = 0.5 * rng.standard_normal(shape)
        t = np.sqrt(1.0 + np.sum(y * y, axis=-1, keepdims=True))
        return np.concatenate([y, t], axis=-1)


_KINDS = {"euclidean": Euclidean, "sphere": Sphere, "hyperbolic": Hyperbolic}


def make_manifold(kind, dim, radius=None):
    """Construct a backend by name; ``radius`` applies to spheres only."""
    if kind not in _KINDS:
        raise InvalidArgumentError(
            f"unknown manifold kind {kind!r}; expected one of {sorted(_KINDS)}"
        )
    if kind == "sphere":
        return Sphere(dim, 1.0 if radius is None else radius)
    if radius is not None:
        raise InvalidArgumentError(f"radius is only meaningful for spheres, not {kind!r}")
    return _KINDS[kind](dim)


def manifold_from_spec(spec):
    """Build a manifold from its JSON fragment {"kind", "dim", "radius"?}."""
    if not isinstance(spec, dict):
        raise InvalidArgumentError("manifold spec must be a JSON object")
    unknown = set(spec) - {"kind", "dim", "radius"}
    if unknown:
        raise InvalidArgumentError(f"unknown manifold spec fields: {sorted(unknown)}")
    try:
        kind = spec["kind"]
        dim = int(spec["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"invalid manifold spec: {exc}") from exc
    return make_manifold(kind, dim, spec.get("radius"))


# validated operations on explicit (manifold, point, tangent) triples

def inner(manifold, p, u, v):
    """g_p(u, v) with tangency validation on both arguments."""
    manifold.check_point(p)
    manifold.check_tangent(p, u)
    manifold.check_tangent(p, v)
    return float(manifold.inner(p, u, v))


def curvature(manifold, p, x, y, z):
    """R(X,Y)Z at p with tangency validation."""
    manifold.check_point(p)
    for w in (x, y, z):
        manifold.check_tangent(p, w)
    return manifold.curvature_tensor(p, np.asarray(x), np.asarray(y), np.asarray(z))
