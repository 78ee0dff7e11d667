import numpy as np
import pytest

from conftest import all_manifolds
from elastica.errors import InjectivityError, InvalidArgumentError
from elastica.manifold import (
    Euclidean,
    Hyperbolic,
    Sphere,
    curvature,
    inner,
    make_manifold,
    manifold_from_spec,
)


def geodesic_ode_oracle(p, v, n_steps=4000):
    """Integrate the unit-sphere geodesic ODE x'' = -|x'|^2 x with RK4."""
    x, xd = np.array(p, dtype=float), np.array(v, dtype=float)

    def acc(x, xd):
        return -np.dot(xd, xd) * x

    h = 1.0 / n_steps
    for _ in range(n_steps):
        k1x, k1v = xd, acc(x, xd)
        k2x, k2v = xd + 0.5 * h * k1v, acc(x + 0.5 * h * k1x, xd + 0.5 * h * k1v)
        k3x, k3v = xd + 0.5 * h * k2v, acc(x + 0.5 * h * k2x, xd + 0.5 * h * k2v)
        k4x, k4v = xd + h * k3v, acc(x + h * k3x, xd + h * k3v)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        xd = xd + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return x


def transport_ode_oracle(p, v, w, n_steps=4000):
    """Parallel transport w along the unit-sphere geodesic from p with
    initial velocity v: dw/dt = -<w, x'> x."""
    x, xd = np.array(p, dtype=float), np.array(v, dtype=float)
    wv = np.array(w, dtype=float)
    h = 1.0 / n_steps

    def derivs(x, xd, wv):
        return xd, -np.dot(xd, xd) * x, -np.dot(wv, xd) * x

    for _ in range(n_steps):
        k1 = derivs(x, xd, wv)
        k2 = derivs(x + 0.5 * h * k1[0], xd + 0.5 * h * k1[1], wv + 0.5 * h * k1[2])
        k3 = derivs(x + 0.5 * h * k2[0], xd + 0.5 * h * k2[1], wv + 0.5 * h * k2[2])
        k4 = derivs(x + h * k3[0], xd + h * k3[1], wv + h * k3[2])
        x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        xd = xd + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        wv = wv + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    return x, wv


class TestInner:
    def test_euclidean_orthogonal(self):
        M = Euclidean(2)
        assert inner(M, np.zeros(2), np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_sphere_north_pole(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        u = np.array([1.0, 0.0, 0.0])
        assert inner(M, p, u, u) == pytest.approx(1.0)

    def test_hyperbolic_minkowski_form(self):
        # tangent with Minkowski norm squared 4 at the apex
        M = Hyperbolic(2)
        p = np.array([0.0, 0.0, 1.0])
        u = np.array([2.0, 0.0, 0.0])
        assert inner(M, p, u, u) == pytest.approx(4.0)

    def test_base_mismatch_rejected(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        q = np.array([1.0, 0.0, 0.0])
        u_at_q = np.array([0.0, 0.0, 1.0])  # tangent at q, not at p
        with pytest.raises(InvalidArgumentError):
            inner(M, p, u_at_q, u_at_q)


class TestExpLog:
    @pytest.mark.parametrize("M", all_manifolds(), ids=lambda m: repr(m))
    def test_exp_zero(self, M, rng):
        p = M.random_point(rng)
        assert np.allclose(M.exp(p, np.zeros(M.ambient_dim)), p, atol=1e-14)

    def test_euclidean_exp_log(self, rng):
        M = Euclidean(3)
        p, v = rng.standard_normal(3), rng.standard_normal(3)
        assert np.allclose(M.exp(p, v), p + v)
        assert np.allclose(M.log(p, p + v), v)

    def test_sphere_quarter_turn_vs_ode(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        v = np.array([np.pi / 2, 0.0, 0.0])
        q = M.exp(p, v)
        assert np.allclose(q, [1.0, 0.0, 0.0], atol=1e-12)
        q_ode = geodesic_ode_oracle(p, v)
        assert np.allclose(q, q_ode, atol=1e-9)

    def test_sphere_log_inverts_exp_example(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        q = np.array([1.0, 0.0, 0.0])
        v = M.log(p, q)
        assert np.linalg.norm(v) == pytest.approx(np.pi / 2, abs=1e-12)
        assert np.allclose(v / np.linalg.norm(v), [1.0, 0.0, 0.0], atol=1e-12)

    def test_log_at_same_point(self, rng):
        for M in all_manifolds():
            p = M.random_point(rng)
            assert np.allclose(M.log(p, p), 0.0, atol=1e-12)

    @pytest.mark.parametrize("M", all_manifolds(), ids=lambda m: repr(m))
    def test_exp_log_inversion_random(self, M, rng):
        for _ in range(25):
            p = M.random_point(rng)
            v = M.random_tangent(rng, p)
            cap = 0.9 * min(M.injectivity_radius, 3.0)
            v = cap * rng.uniform(0.01, 1.0) * v / max(M.norm(p, v), 1e-12)
            back = M.log(p, M.exp(p, v))
            assert np.max(np.abs(back - v)) <= 1e-9 * (1.0 + M.norm(p, v))

    def test_sphere_antipodal_log_raises(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        with pytest.raises(InjectivityError):
            M.log(p, -p)

    def test_near_zero_series_branch(self, rng):
        for M in all_manifolds():
            p = M.random_point(rng)
            v = 1e-9 * M.random_tangent(rng, p)
            back = M.log(p, M.exp(p, v))
            assert np.max(np.abs(back - v)) <= 1e-18 + 1e-6 * np.max(np.abs(v))


class TestTransport:
    @pytest.mark.parametrize("M", all_manifolds(), ids=lambda m: repr(m))
    def test_isometry_and_reversibility(self, M, rng):
        for _ in range(25):
            p = M.random_point(rng)
            v = M.random_tangent(rng, p)
            step = M.random_tangent(rng, p)
            step *= 0.4 * min(M.injectivity_radius, 3.0) / max(M.norm(p, step), 1e-12)
            q = M.exp(p, step)
            t = M.transport(p, q, v)
            assert abs(M.norm(q, t) - M.norm(p, v)) <= 1e-12 * (1 + M.norm(p, v))
            back = M.transport(q, p, t)
            assert np.max(np.abs(back - v)) <= 1e-9 * (1 + np.max(np.abs(v)))

    def test_transport_to_same_point(self, rng):
        for M in all_manifolds():
            p = M.random_point(rng)
            v = M.random_tangent(rng, p)
            assert np.allclose(M.transport(p, p, v), v, atol=1e-14)

    def test_euclidean_transport_is_identity(self, rng):
        M = Euclidean(4)
        p, q, v = (rng.standard_normal(4) for _ in range(3))
        assert np.array_equal(M.transport(p, q, v), v)

    def test_sphere_normal_to_great_circle_fixed(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        q = np.array([1.0, 0.0, 0.0])
        v = np.array([0.0, 1.0, 0.0])
        assert np.allclose(M.transport(p, q, v), v, atol=1e-12)

    def test_sphere_transport_vs_ode(self, rng):
        M = Sphere(2)
        p = M.random_point(rng)
        direction = M.random_tangent(rng, p)
        direction /= M.norm(p, direction)
        v = 1.2 * direction
        w = M.random_tangent(rng, p)
        q = M.exp(p, v)
        q_ode, w_ode = transport_ode_oracle(p, v, w)
        assert np.allclose(q, q_ode, atol=1e-9)
        assert np.allclose(M.transport(p, q, w), w_ode, atol=1e-8)


class TestCurvature:
    def test_flat_curvature_zero(self, rng):
        M = Euclidean(3)
        p = M.random_point(rng)
        x, y, z = (rng.standard_normal(3) for _ in range(3))
        assert np.allclose(M.curvature_tensor(p, x, y, z), 0.0)

    def test_antisymmetric_in_first_pair(self, rng):
        for M in all_manifolds():
            p = M.random_point(rng)
            x = M.random_tangent(rng, p)
            z = M.random_tangent(rng, p)
            assert np.allclose(M.curvature_tensor(p, x, x, z), 0.0, atol=1e-12)

    def test_unit_sphere_sectional_value(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        x = np.array([1.0, 0.0, 0.0])
        y = np.array([0.0, 1.0, 0.0])
        assert np.allclose(M.curvature_tensor(p, x, y, y), x, atol=1e-14)

    @pytest.mark.parametrize("M", all_manifolds(), ids=lambda m: repr(m))
    def test_symmetries_random(self, M, rng):
        R = M.curvature_tensor
        g = M.inner
        for _ in range(10):
            p = M.random_point(rng)
            x, y, z, w = (M.random_tangent(rng, p) for _ in range(4))
            assert np.allclose(R(p, x, y, z), -R(p, y, x, z), atol=1e-12)
            assert abs(g(p, R(p, x, y, z), w) + g(p, R(p, x, y, w), z)) <= 1e-12 * (
                1 + abs(g(p, R(p, x, y, z), w))
            )
            bianchi = R(p, x, y, z) + R(p, y, z, x) + R(p, z, x, y)
            assert np.allclose(bianchi, 0.0, atol=1e-12)

    def test_commutator_sign_convention(self):
        # [nabla_t, nabla_theta] W = R(c_t, c_theta) W on the unit sphere,
        # checked with transported finite differences on a 2-parameter family
        M = Sphere(2)

        def point(t, th):
            colat = 0.8 + 0.3 * t
            return np.array(
                [
                    np.sin(colat) * np.cos(th),
                    np.sin(colat) * np.sin(th),
                    np.cos(colat),
                ]
            )

        def field(t, th):
            # smooth ambient field projected to the tangent space
            raw = np.array([np.sin(th) + t, np.cos(2 * th), 0.5 * t * th])
            return M.project_tangent(point(t, th), raw)

        t0, th0, eps = 0.3, 0.7, 1e-4
        p = point(t0, th0)

        def cov_t(t, th):
            # nabla_t W at (t, th) by transported central difference
            wp = M.transport(point(t + eps, th), point(t, th), field(t + eps, th))
            wm = M.transport(point(t - eps, th), point(t, th), field(t - eps, th))
            return (wp - wm) / (2 * eps)

        def cov_th(t, th):
            wp = M.transport(point(t, th + eps), point(t, th), field(t, th + eps))
            wm = M.transport(point(t, th - eps), point(t, th), field(t, th - eps))
            return (wp - wm) / (2 * eps)

        # second derivatives via transported differences of the first ones
        def cov_t_of_covth(t, th):
            wp = M.transport(point(t + eps, th), p, cov_th(t + eps, th))
            wm = M.transport(point(t - eps, th), p, cov_th(t - eps, th))
            return (wp - wm) / (2 * eps)

        def cov_th_of_covt(t, th):
            wp = M.transport(point(t, th + eps), p, cov_t(t, th + eps))
            wm = M.transport(point(t, th - eps), p, cov_t(t, th - eps))
            return (wp - wm) / (2 * eps)

        comm = cov_t_of_covth(t0, th0) - cov_th_of_covt(t0, th0)
        ct = (M.log(p, point(t0 + eps, th0)) - M.log(p, point(t0 - eps, th0))) / (2 * eps)
        cth = (M.log(p, point(t0, th0 + eps)) - M.log(p, point(t0, th0 - eps))) / (2 * eps)
        expected = M.curvature_tensor(p, ct, cth, field(t0, th0))
        assert np.max(np.abs(comm - expected)) < 5e-4


class TestSpec:
    def test_round_trip(self):
        for M in all_manifolds():
            assert manifold_from_spec(M.to_spec()) == M

    def test_bad_specs(self):
        with pytest.raises(InvalidArgumentError):
            make_manifold("torus", 2)
        with pytest.raises(InvalidArgumentError):
            make_manifold("euclidean", 0)
        with pytest.raises(InvalidArgumentError):
            make_manifold("sphere", 2, radius=-1.0)
        with pytest.raises(InvalidArgumentError):
            make_manifold("hyperbolic", 2, radius=2.0)
        with pytest.raises(InvalidArgumentError):
            manifold_from_spec({"kind": "sphere", "dim": 2, "color": "red"})

    def test_derived_quantities(self):
        s = Sphere(2, radius=2.0)
        assert s.curvature == pytest.approx(0.25)
        assert s.curvature_bound == pytest.approx(0.25)
        assert s.injectivity_radius == pytest.approx(2 * np.pi)
        h = Hyperbolic(2)
        assert h.curvature == -1.0
        assert h.curvature_bound == 1.0
        assert np.isinf(h.injectivity_radius)
        e = Euclidean(5)
        assert e.curvature == 0.0
        assert np.isinf(e.injectivity_radius)

    def test_curvature_op_validates(self):
        M = Sphere(2)
        p = np.array([0.0, 0.0, 1.0])
        bad = np.array([0.0, 0.0, 1.0])  # not tangent at p
        with pytest.raises(InvalidArgumentError):
            curvature(M, p, bad, bad, bad)
