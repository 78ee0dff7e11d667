"""First-order geodesic flow: inertia operator, forcing terms, RK4 in time.

For the order-1 metric the inertia operator is A_c h = a_0 h - a_1 D_s^2 h.
Fields are trivialized into a frame parallel-transported along the curve,
where A_c becomes a symmetric positive-definite (cyclic-)tridiagonal system
assembled from the arc-length Dirichlet form; the same matrix backs both
``apply_inertia`` and ``solve_inertia``, so solve(apply(h)) = h to solver
precision.

The time stepper advances the state (curve, velocity) with classical RK4,
parallel-transporting stage data between base curves; on flat targets this
reduces to the textbook scheme.  Open curves need Neumann data for the
inertia solve at every stage; see docs/open_curve_boundary_conditions.md
for the derivation of the variational data and the rationale for the
``zero_neumann`` default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from .curve import DiscreteCurve, VectorField, build_curve, cov_deriv, make_field
from .errors import (
    AdjacencyError,
    ImmersionError,
    InvalidArgumentError,
    SolverError,
    UnsupportedOrderError,
)
from .metric import CurvePath, coefficient_derivatives, coefficients, inner_G


@dataclass(frozen=True)
class GeodesicState:
    """A curve together with a velocity field along it."""

    curve: DiscreteCurve
    velocity: VectorField

    def __post_init__(self):
        if self.velocity.curve is not self.curve and not np.array_equal(
            self.velocity.curve.points, self.curve.points
        ):
            raise InvalidArgumentError("velocity field must live on the state's curve")


@dataclass(frozen=True)
class BoundaryData:
    """Neumann values of nabla_theta u at the two ends of an open curve."""

    u0: np.ndarray
    u1: np.ndarray


def _require_order_one(spec):
    if spec.order != 1:
        raise UnsupportedOrderError(
            f"the explicit geodesic flow is implemented for order 1, got {spec.order}"
        )


def parallel_frames(curve):
    """Orthonormal frames (N, dim, ambient) transported along the curve.

    frames[0] is the deterministic frame at node 0; frames[i+1] is the
    segment transport of frames[i].  Closed curves are not closed up at
    the seam (the mismatch is exactly the holonomy).
    """
    M = curve.manifold
    pts = curve.points
    n = curve.n_samples
    frames = np.empty((n, M.dim, M.ambient_dim))
    frames[0] = M.frame(pts[0])
    for i in range(n - 1):
        frames[i + 1] = M.transport(pts[i], pts[i + 1], frames[i])
    return frames


def to_frame(curve, frames, vec):
    """Coefficients (N, dim) of an ambient tangent field in the frames."""
    p = curve.points[:, None, :]
    return curve.manifold.inner(p, frames, vec[:, None, :])


def from_frame(frames, coords):
    return np.einsum("ia,iam->im", coords, frames)


def _edge_ds(curve):
    """Arc length of each edge: 0.5 (|c'|_i + |c'|_{i+1}) dtheta."""
    sp = curve.speed
    dth = curve.domain.dtheta
    if curve.domain.closed:
        return 0.5 * (sp + np.roll(sp, -1)) * dth
    return 0.5 * (sp[:-1] + sp[1:]) * dth


def _seam_matrix(curve, frames):
    """Coordinates of the seam transport (node N-1 -> node 0) between the
    parallel frames; equals the loop holonomy matrix.  Identity on flat
    targets, where the parallel frame closes up exactly."""
    M = curve.manifold
    moved = M.transport(curve.points[-1], curve.points[0], frames[-1])
    p0 = curve.points[0]
    s = np.empty((M.dim, M.dim))
    for b in range(M.dim):
        s[:, b] = M.inner(p0, frames[0], moved[b])
    return s


def _boundary_flux_coords(curve, coords):
    """One-sided second-order estimates of nabla_s at the open endpoints
    (frame coefficients)."""
    dth = curve.domain.dtheta
    f0 = (-3.0 * coords[0] + 4.0 * coords[1] - coords[2]) / (2.0 * dth) / curve.speed[0]
    f1 = (3.0 * coords[-1] - 4.0 * coords[-2] + coords[-3]) / (2.0 * dth) / curve.speed[-1]
    return f0, f1


def apply_inertia(spec, curve, h):
    """A_c h = a_0 h - a_1 D_s^2 h with the compact self-adjoint stencil.

    In the parallel frame, -D_s^2 is assembled from the edge Dirichlet form
    sum_e (dH/ds_e)^2 ds_e; at open endpoints the boundary flux is the
    field's own one-sided estimate, which makes solve_inertia an exact
    inverse when fed the matching Neumann data.
    """
    _require_order_one(spec)
    a = coefficients(spec, curve.length)
    frames = parallel_frames(curve)
    hv = h.vectors if isinstance(h, VectorField) else np.asarray(h, dtype=float)
    H = to_frame(curve, frames, hv)
    edge = _edge_ds(curve)
    mass = curve.ds
    if curve.domain.closed:
        # chain fluxes share coordinates at both end nodes of their edge;
        # the seam flux is twisted by the holonomy S of the parallel frame
        S = _seam_matrix(curve, frames)
        flux = (H[1:] - H[:-1]) / edge[:-1, None]
        seam_at_last = (S.T @ H[0] - H[-1]) / edge[-1]
        seam_at_first = (H[0] - S @ H[-1]) / edge[-1]
        up = np.concatenate([flux, seam_at_last[None]], axis=0)
        down = np.concatenate([seam_at_first[None], flux], axis=0)
        lap = (up - down) / mass[:, None]
    else:
        flux = (H[1:] - H[:-1]) / edge[:, None]
        f0, f1 = _boundary_flux_coords(curve, H)
        fl = np.concatenate([f0[None], flux, f1[None]], axis=0)
        lap = (fl[1:] - fl[:-1]) / mass[:, None]
    out = a[0] * H - a[1] * lap
    return make_field(curve, from_frame(frames, out), validate=False)


def _chain_banded(a0, a1, mass, edge_chain):
    """Upper banded storage of the SPD tridiagonal a0*M + a1*E (open chain,
    N-1 edges; edge (i, i+1) adds 1/ds_e to both adjacent diagonal entries)."""
    n = len(mass)
    diag = a0 * mass
    diag[:-1] += a1 / edge_chain
    diag[1:] += a1 / edge_chain
    ab = np.zeros((2, n))
    ab[1] = diag
    ab[0, 1:] = -a1 / edge_chain
    return ab


def solve_inertia(spec, curve, f, bc=None):
    """Solve A_c u = f; open curves take Neumann data nabla_theta u at the ends.

    Closed curves assemble the cyclic SPD tridiagonal system and solve it
    via a rank-one (Woodbury) correction of the open-chain solve; open
    curves add the prescribed boundary fluxes to the weak-form right side.
    """
    _require_order_one(spec)
    a = coefficients(spec, curve.length)
    if a[1] <= 0:
        raise InvalidArgumentError("solve_inertia needs a_1 > 0")
    frames = parallel_frames(curve)
    fv = f.vectors if isinstance(f, VectorField) else np.asarray(f, dtype=float)
    F = to_frame(curve, frames, fv)
    mass = curve.ds
    edge = _edge_ds(curve)
    rhs = mass[:, None] * F

    try:
        if curve.domain.closed:
            # The seam edge adds beta |H_0 - S H_{N-1}|^2 to the chain
            # Dirichlet form, with S the frame holonomy.  Its diagonal
            # parts fold into the banded matrix; the component-mixing
            # cross terms are a rank-2d Woodbury correction
            # C = U B U^T, U = [E_0, E_{N-1}], B = -beta [[0, S], [S^T, 0]].
            n = len(mass)
            d = rhs.shape[1]
            S = _seam_matrix(curve, frames)
            beta = a[1] / edge[-1]
            ab = _chain_banded(a[0], a[1], mass, edge[:-1])
            ab[1, 0] += beta
            ab[1, -1] += beta
            ends = np.zeros((n, 2))
            ends[0, 0] = 1.0
            ends[-1, 1] = 1.0
            sol = solveh_banded(ab, np.concatenate([rhs, ends], axis=1), lower=False)
            ti_rhs, t0, tL = sol[:, :d], sol[:, d], sol[:, d + 1]
            eye = np.eye(d)
            binv = np.zeros((2 * d, 2 * d))
            binv[:d, d:] = -S / beta
            binv[d:, :d] = -S.T / beta
            core = binv.copy()
            core[:d, :d] += t0[0] * eye
            core[:d, d:] += tL[0] * eye
            core[d:, :d] += t0[-1] * eye
            core[d:, d:] += tL[-1] * eye
            proj = np.concatenate([ti_rhs[0], ti_rhs[-1]])
            mid = np.linalg.solve(core, proj)
            U = ti_rhs - np.outer(t0, mid[:d]) - np.outer(tL, mid[d:])
        else:
            if bc is None:
                bc = BoundaryData(
                    u0=np.zeros(curve.manifold.ambient_dim),
                    u1=np.zeros(curve.manifold.ambient_dim),
                )
            M = curve.manifold
            b0 = M.inner(curve.points[0], frames[0], np.asarray(bc.u0, dtype=float))
            b1 = M.inner(curve.points[-1], frames[-1], np.asarray(bc.u1, dtype=float))
            rhs[0] -= a[1] * b0 / curve.speed[0]
            rhs[-1] += a[1] * b1 / curve.speed[-1]
            ab = _chain_banded(a[0], a[1], mass, edge)
            U = solveh_banded(ab, rhs, lower=False)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"inertia system is not SPD: {exc}") from exc
    return make_field(curve, from_frame(frames, U), validate=False)


def neumann_data_of(curve, h):
    """Neumann data (nabla_theta h at both ends) matching apply_inertia's
    boundary flux convention, for round-trip solves on open curves."""
    frames = parallel_frames(curve)
    hv = h.vectors if isinstance(h, VectorField) else np.asarray(h, dtype=float)
    H = to_frame(curve, frames, hv)
    f0, f1 = _boundary_flux_coords(curve, H)
    u0 = from_frame(frames[:1], (f0 * curve.speed[0])[None])[0]
    u1 = from_frame(frames[-1:], (f1 * curve.speed[-1])[None])[0]
    return BoundaryData(u0=u0, u1=u1)


def psi_form(spec, curve, w):
    """The quadratic form Psi(w, w) as a scalar field over the nodes:
    a_0 g(w,w) + a_0' int g(w,w) ds - a_1 g(D_s w, D_s w) + a_1' int ... ds."""
    _require_order_one(spec)
    a = coefficients(spec, curve.length)
    ad = coefficient_derivatives(spec, curve.length)
    g = curve.manifold.inner
    p = curve.points
    wv = w.vectors if isinstance(w, VectorField) else np.asarray(w, dtype=float)
    sw = cov_deriv(curve, wv, "arclength", 1).vectors
    w2 = g(p, wv, wv)
    sw2 = g(p, sw, sw)
    return (
        a[0] * w2
        + ad[0] * np.sum(w2 * curve.ds)
        - a[1] * sw2
        + ad[1] * np.sum(sw2 * curve.ds)
    )


def _geodesic_rhs(spec, curve, wv, boundary):
    """Right-hand side of A_c (D_t w) = ... and the Neumann data for it."""
    M = curve.manifold
    g = M.inner
    p = curve.points
    a = coefficients(spec, curve.length)
    ad = coefficient_derivatives(spec, curve.length)

    v = curve.unit_tangent_vectors()
    sv = cov_deriv(curve, v, "arclength", 1).vectors
    sw = cov_deriv(curve, wv, "arclength", 1).vectors
    ssw = cov_deriv(curve, sw, "arclength", 1).vectors
    q = g(p, v, sw)                       # g(v, D_s w), scalar field
    elldot = float(np.sum(q * curve.ds))  # d l / dt along the flow
    Aw = apply_inertia(spec, curve, wv).vectors
    psi = psi_form(spec, curve, wv)

    R = M.curvature_tensor
    # (D_t A_c) w, expanded with dl/dt and the derivative-swap commutator
    # [D_t, D_s] k = -g(v, D_s w) D_s k + R(w, v) k  (w = c_t); the sign of
    # the curvature term follows the numerically pinned convention
    # [D_t, D_theta] = R(c_t, c_theta), cf. TestCurvature in the test suite
    dq = g(p, sv, sw) + g(p, v, ssw)
    comm = (
        -2.0 * q[:, None] * ssw
        + 2.0 * R(p, wv, v, sw)
        - dq[:, None] * sw
        + R(p, sw, v, wv)
        + R(p, wv, sv, wv)
    )
    dtA_w = ad[0] * elldot * wv - ad[1] * elldot * ssw - a[1] * comm

    rhs = (
        -dtA_w
        - q[:, None] * Aw
        - 0.5 * psi[:, None] * sv
        - g(p, sw, Aw)[:, None] * v
        - a[1] * R(p, wv, sw, v)
    )

    bc = None
    if not curve.domain.closed:
        if boundary == "zero_neumann":
            m = M.ambient_dim
            bc = BoundaryData(u0=np.zeros(m), u1=np.zeros(m))
        elif boundary == "variational":
            data = []
            for idx in (0, -1):
                val = (
                    0.5 * psi[idx] / a[1] * v[idx]
                    - (ad[1] / a[1]) * elldot * sw[idx]
                    + q[idx] * sw[idx]
                    - R(p[idx], wv[idx], v[idx], wv[idx])
                )
                data.append(curve.speed[idx] * val)
            bc = BoundaryData(u0=data[0], u1=data[1])
        else:
            raise InvalidArgumentError(
                f"boundary must be 'zero_neumann' or 'variational', got {boundary!r}"
            )
    return rhs, bc


@dataclass
class IvpResult:
    """Integrated path plus per-step diagnostics."""

    path: CurvePath
    final_state: GeodesicState
    times: np.ndarray
    energies: np.ndarray
    lengths: np.ndarray
    min_speeds: np.ndarray
    completed: bool
    reason: str = ""

    @property
    def energy_drift(self):
        return float(np.max(np.abs(self.energies - self.energies[0])) / self.energies[0])


def ivp_integrate(spec, state, T, steps, boundary="zero_neumann", eps_imm=1e-8):
    """Integrate the first-order geodesic flow with classical RK4.

    Each stage evaluates the forcing, solves the inertia system for D_t w,
    and transports stage derivatives to the step's base curve; the state
    is advanced by exp (points) and parallel transport (velocity).
    Aborts with the partial path if the immersion invariant fails.
    """
    _require_order_one(spec)
    if steps < 1 or T <= 0:
        raise InvalidArgumentError("need steps >= 1 and T > 0")
    curve = state.curve
    wv = np.array(state.velocity.vectors, dtype=float)
    M = curve.manifold
    dt = T / steps

    def derivative(c, w):
        rhs, bc = _geodesic_rhs(spec, c, w, boundary)
        u = solve_inertia(spec, c, rhs, bc=bc)
        return w, u.vectors  # (dc/dt, covariant dw/dt)

    curves = [curve]
    energies = [inner_G(spec, curve, wv, wv)]
    lengths = [curve.length]
    min_speeds = [float(curve.speed.min())]
    completed = True
    reason = ""

    for _ in range(steps):
        try:
            kc1, kw1 = derivative(curve, wv)

            def stage(frac, kc, kw):
                pts = M.exp(curve.points, (dt * frac) * kc)
                c_stage = build_curve(M, curve.domain, pts, eps_imm=eps_imm)
                w_stage = M.transport(
                    curve.points, pts, wv + (dt * frac) * kw
                )
                dc, dw = derivative(c_stage, w_stage)
                # transport stage derivatives back to the step base
                return (
                    M.transport(pts, curve.points, dc),
                    M.transport(pts, curve.points, dw),
                )

            kc2, kw2 = stage(0.5, kc1, kw1)
            kc3, kw3 = stage(0.5, kc2, kw2)
            kc4, kw4 = stage(1.0, kc3, kw3)

            inc_c = (dt / 6.0) * (kc1 + 2.0 * kc2 + 2.0 * kc3 + kc4)
            inc_w = (dt / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4)
            new_pts = M.exp(curve.points, inc_c)
            new_w = M.transport(curve.points, new_pts, wv + inc_w)
            curve = build_curve(M, curve.domain, new_pts, eps_imm=eps_imm)
            wv = new_w
        except (ImmersionError, AdjacencyError) as exc:
            completed = False
            reason = f"{type(exc).__name__}: {exc}"
            break
        curves.append(curve)
        energies.append(inner_G(spec, curve, wv, wv))
        lengths.append(curve.length)
        min_speeds.append(float(curve.speed.min()))

    n_done = len(curves) - 1
    path = CurvePath(curves, total_time=dt * n_done) if n_done >= 2 else None
    return IvpResult(
        path=path,
        final_state=GeodesicState(curve, make_field(curve, wv, validate=False)),
        times=dt * np.arange(n_done + 1),
        energies=np.array(energies),
        lengths=np.array(lengths),
        min_speeds=np.array(min_speeds),
        completed=completed,
        reason=reason,
    )
