import numpy as np
import pytest

from conftest import colatitude_circle, straight_segment, unit_circle
from elastica.curve import Domain, build_curve, make_field
from elastica.errors import AdjacencyError, InvalidArgumentError
from elastica.manifold import Euclidean, Sphere
from elastica.metric import (
    CurvePath,
    MetricSpec,
    coefficient_derivatives,
    coefficients,
    constant_speed_reparametrization,
    field_norm,
    inner_G,
    inner_H,
    path_energy,
    path_speed_profile,
)


class TestCoefficients:
    def test_constant_ignores_length(self):
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        assert np.allclose(coefficients(spec, 17.0), [1.0, 0.0, 1.0])

    def test_scale_invariant_graded_rule(self):
        spec = MetricSpec.scale_invariant(1.0, 0.0, 1.0)
        assert np.allclose(coefficients(spec, 2.0), [2.0**-3, 0.0, 2.0])

    def test_custom_evaluation(self):
        spec = MetricSpec.custom(lambda l: 1.0, lambda l: 1.0 / l, lambda l: 1.0)
        assert coefficients(spec, 4.0)[1] == pytest.approx(0.25)

    def test_invalid_length(self):
        spec = MetricSpec.constant(1.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            coefficients(spec, 0.0)
        with pytest.raises(InvalidArgumentError):
            coefficients(spec, -1.0)

    def test_degenerate_families_rejected(self):
        with pytest.raises(InvalidArgumentError):
            MetricSpec.constant(0.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            MetricSpec.constant(1.0, 0.0)
        with pytest.raises(InvalidArgumentError):
            MetricSpec.constant(1.0, -0.5, 1.0)

    def test_derivatives(self):
        si = MetricSpec.scale_invariant(1.0, 1.0)
        # a_0 = l^-3, a_1 = l^-1
        d = coefficient_derivatives(si, 2.0)
        assert d[0] == pytest.approx(-3.0 * 2.0**-4)
        assert d[1] == pytest.approx(-(2.0**-2))
        cu = MetricSpec.custom(lambda l: l**2, lambda l: l**3)
        d = coefficient_derivatives(cu, 1.5)
        assert d[0] == pytest.approx(3.0, rel=1e-9)
        assert d[1] == pytest.approx(3 * 1.5**2, rel=1e-9)


class TestInnerG:
    def test_constant_field_l2_term_only(self):
        c = unit_circle(512)
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        h = np.tile([1.0, 0.0], (512, 1))
        assert inner_G(spec, c, h, h) == pytest.approx(2 * np.pi, abs=1e-4)

    def test_radial_field_value(self):
        c = unit_circle(1024)
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        th = c.domain.theta
        h = np.stack([np.cos(th), np.sin(th)], axis=1)
        assert inner_G(spec, c, h, h) == pytest.approx(4 * np.pi, abs=1e-3)

    def test_scale_invariance_exact(self):
        spec = MetricSpec.scale_invariant(1.0, 0.0, 1.0)
        dom = Domain("closed", 256)
        th = dom.theta
        base = np.stack([np.cos(th) + 0.3 * np.cos(2 * th), np.sin(th)], axis=1)
        h = np.stack([np.sin(3 * th), np.cos(th)], axis=1)
        c = build_curve(Euclidean(2), dom, base)
        g0 = inner_G(spec, c, h, h)
        for alpha in (0.5, 2.0):
            ca = build_curve(Euclidean(2), dom, alpha * base)
            ga = inner_G(spec, ca, alpha * h, alpha * h)
            assert abs(ga - g0) / g0 < 1e-6

    def test_symmetry_and_bilinearity(self, rng):
        c = unit_circle(128)
        spec = MetricSpec.constant(1.0, 0.5, 2.0)
        h = rng.standard_normal((128, 2))
        k = rng.standard_normal((128, 2))
        ghk = inner_G(spec, c, h, k)
        assert ghk == pytest.approx(inner_G(spec, c, k, h), rel=1e-12)
        assert inner_G(spec, c, 2.0 * h, k) == pytest.approx(2 * ghk, rel=1e-12)
        l = rng.standard_normal((128, 2))
        assert inner_G(spec, c, h + l, k) == pytest.approx(
            ghk + inner_G(spec, c, l, k), rel=1e-10
        )

    def test_positive_definite(self, rng):
        c = unit_circle(128)
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        for _ in range(10):
            h = rng.standard_normal((128, 2))
            assert inner_G(spec, c, h, h) > 0

    def test_mismatched_curve_rejected(self):
        a, b = unit_circle(128), unit_circle(256)
        spec = MetricSpec.constant(1.0, 1.0)
        h = make_field(b, np.zeros((256, 2)))
        with pytest.raises(InvalidArgumentError):
            inner_G(spec, a, h, h)

    @pytest.mark.parametrize(
        "case", ["euclidean_circle", "open_curve", "sphere_circle"]
    )
    def test_reparametrization_invariance_order_two(self, case):
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        errs = []
        ns = (64, 128, 256, 512)
        for n in ns:
            if case == "open_curve":
                dom = Domain("open", n)
                th = dom.theta
                phi = th + 0.25 * np.sin(th)  # fixes the endpoints
            else:
                dom = Domain("closed", n)
                th = dom.theta
                phi = th + 0.25 * np.sin(th)

            def curve_and_field(grid):
                if case == "euclidean_circle":
                    pts = np.stack([np.cos(grid), np.sin(grid)], axis=1)
                    man = Euclidean(2)
                    h = np.stack([np.sin(2 * grid), np.cos(grid)], axis=1)
                elif case == "open_curve":
                    pts = np.stack([grid, 0.3 * np.sin(grid)], axis=1)
                    man = Euclidean(2)
                    h = np.stack([np.sin(grid), np.cos(2 * grid)], axis=1)
                else:
                    s, co = np.sin(0.8), np.cos(0.8)
                    pts = np.stack(
                        [s * np.cos(grid), s * np.sin(grid), co * np.ones_like(grid)],
                        axis=1,
                    )
                    man = Sphere(2)
                    raw = np.stack(
                        [np.sin(grid), np.cos(2 * grid), 0.2 * np.ones_like(grid)],
                        axis=1,
                    )
                    h = man.project_tangent(pts, raw)
                return build_curve(man, dom, pts), h

            c, h = curve_and_field(th)
            cphi, hphi = curve_and_field(phi)
            errs.append(
                abs(inner_G(spec, cphi, hphi, hphi) - inner_G(spec, c, h, h))
            )
        orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
        assert np.mean(orders) == pytest.approx(2.0, abs=0.3)


class TestInnerH:
    def test_constant_field_straight_segment(self):
        c = straight_segment(256)
        h = np.tile([0.3, 0.4], (256, 1))
        expected = 2 * np.pi * 0.25
        assert inner_H(c, h, h, order=2) == pytest.approx(expected, abs=1e-6)

    def test_unit_circle_radial(self):
        c = unit_circle(1024)
        th = c.domain.theta
        h = np.stack([np.cos(th), np.sin(th)], axis=1)
        assert inner_H(c, h, h, order=2) == pytest.approx(4 * np.pi, abs=1e-3)

    def test_bilinearity_exact(self, rng):
        c = unit_circle(128)
        h = rng.standard_normal((128, 2))
        k = rng.standard_normal((128, 2))
        assert inner_H(c, 2.0 * h, k, 2) == pytest.approx(2 * inner_H(c, h, k, 2), rel=1e-14)


class TestFieldNorm:
    def test_constant_unit_field(self):
        c = unit_circle(256)
        h = np.tile([1.0, 0.0], (256, 1))
        assert field_norm(c, h, "L2_ds") == pytest.approx(np.sqrt(2 * np.pi), abs=1e-6)

    def test_radius_two_measures(self):
        dom = Domain("closed", 256)
        th = dom.theta
        c = build_curve(Euclidean(2), dom, 2 * np.stack([np.cos(th), np.sin(th)], axis=1))
        h = np.tile([1.0, 0.0], (256, 1))
        assert field_norm(c, h, "L2_ds") == pytest.approx(np.sqrt(4 * np.pi), abs=1e-6)
        assert field_norm(c, h, "L2_dtheta") == pytest.approx(np.sqrt(2 * np.pi), abs=1e-8)

    def test_linf(self):
        c = unit_circle(256)
        th = c.domain.theta
        h = np.stack([np.sin(th), np.zeros_like(th)], axis=1)
        assert field_norm(c, h, "Linf") == pytest.approx(1.0, abs=1e-6)

    def test_zero_iff_zero(self):
        c = unit_circle(64)
        z = np.zeros((64, 2))
        for which in ("L2_ds", "L2_dtheta", "Linf"):
            assert field_norm(c, z, which) == 0.0
        with pytest.raises(InvalidArgumentError):
            field_norm(c, z, "L3")


def translation_path(n=128, m_steps=8, spec_n=2):
    c0 = straight_segment(n)
    curves = [c0]
    for j in range(1, m_steps + 1):
        t = j / m_steps
        curves.append(c0.with_points(c0.points + [0.0, t]))
    return CurvePath(curves)


class TestPathEnergy:
    def test_stationary_path(self):
        c = unit_circle(64)
        path = CurvePath([c, c, c, c])
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        e, l = path_energy(spec, path)
        assert e == pytest.approx(0.0, abs=1e-14)
        assert l == pytest.approx(0.0, abs=1e-14)

    def test_translated_segment_energy(self):
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        e, l = path_energy(spec, translation_path())
        assert e == pytest.approx(2 * np.pi, abs=1e-3)
        assert l == pytest.approx(np.sqrt(2 * np.pi), abs=1e-3)

    def test_cauchy_schwarz_and_equality(self, rng):
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        # non-constant-speed path: translate with quadratic schedule
        c0 = straight_segment(96)
        curves = [c0.with_points(c0.points + [0.0, (j / 8) ** 2]) for j in range(9)]
        path = CurvePath(curves)
        e, l = path_energy(spec, path)
        assert l**2 <= e + 1e-9
        norm = constant_speed_reparametrization(spec, path, passes=4)
        e2, l2 = path_energy(spec, norm)
        assert l2**2 <= e2 + 1e-9
        assert abs(l2**2 - e2) / e2 < 1e-8
        # endpoints preserved exactly
        assert np.array_equal(norm.curves[0].points, path.curves[0].points)
        assert np.array_equal(norm.curves[-1].points, path.curves[-1].points)

    def test_time_adjacency_validation(self):
        a = colatitude_circle(64, colat=0.3)
        b = build_curve(a.manifold, a.domain, -a.points)  # antipodal image
        with pytest.raises(AdjacencyError):
            CurvePath([a, b, a])

    def test_mixed_domains_rejected(self):
        with pytest.raises(InvalidArgumentError):
            CurvePath([unit_circle(64), unit_circle(128), unit_circle(64)])

    def test_speed_profile_constant_for_uniform_translation(self):
        spec = MetricSpec.constant(1.0, 0.0, 1.0)
        q = path_speed_profile(spec, translation_path())
        assert np.allclose(q, 2 * np.pi, rtol=1e-12)
