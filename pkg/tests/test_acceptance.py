"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance below is fixed here, not tuned at runtime.
"""

import json
import time

import numpy as np
import pytest

from conftest import colatitude_circle, straight_segment, unit_circle
from elastica._autodiff import get_energy_functions
from elastica.analysis import ScanConfig, incompleteness_demo, ineq_scan_general, ineq_scan_periodic
from elastica.cli import main as cli_main
from elastica.curve import Domain, build_curve, make_field
from elastica.families import random_sphere_loop
from elastica.geodesic_bvp import BvpOptions, init_path, minimize
from elastica.geodesic_ivp import (
    GeodesicState,
    apply_inertia,
    ivp_integrate,
    neumann_data_of,
    solve_inertia,
)
from elastica.holonomy import bound_probe, holonomy_defect, rotation_angle
from elastica.io import save_curve
from elastica.manifold import Euclidean, Sphere
from elastica.metric import MetricSpec, inner_G

SPEC_N2 = MetricSpec.constant(1.0, 0.0, 1.0)
SPEC_N1 = MetricSpec.constant(1.0, 1.0)


def report(criterion, text):
    print(f"[ACCEPTANCE] criterion {criterion}: PASS - {text}")


def test_criterion_1_incompleteness_path():
    t0 = time.time()
    demo = incompleteness_demo("f0g0", 512, 200, SPEC_N2)
    elapsed = time.time() - t0
    target = np.sqrt(2 * np.pi) * (np.pi / np.sqrt(3)) * (2.0 / 3.0)  # 3.0312
    assert abs(demo["path_length"] - target) / target < 0.01
    assert abs(demo["path_length"] - demo["reference_length"]) / target < 0.01
    for row in demo["rows"]:
        assert row["curve_length"] == pytest.approx(
            2 * np.pi * (1 - row["t"]), rel=1e-6
        )
    assert elapsed < 30.0
    report(1, f"path length {demo['path_length']:.5f} ~ {target:.5f} (1%), "
              f"curve lengths 2pi(1-t) to 1e-6, {elapsed:.1f}s < 30s")


def test_criterion_2_holonomy():
    t0 = time.time()
    loop = colatitude_circle(2048, colat=0.2)
    angle = abs(rotation_angle(loop))
    expected_angle = 2 * np.pi * (1 - np.cos(0.2))
    assert abs(angle - expected_angle) < 1e-4
    defect = holonomy_defect(loop)
    expected_defect = 2 * np.sqrt(2) * abs(np.sin(expected_angle / 2))
    assert abs(defect - expected_defect) < 1e-3

    family = [colatitude_circle(2048, colat=c) for c in (0.4, 0.2, 0.1, 0.05)]
    reports, fitted, slope = bound_probe(family)
    assert all(r.passed for r in reports)
    assert abs(slope - 2.0) <= 0.1

    rng = np.random.default_rng(2024)
    cap = 2 * np.sqrt(2)
    worst = 0.0
    for _ in range(100):
        worst = max(worst, holonomy_defect(random_sphere_loop(192, rng)))
    assert worst <= cap + 1e-9
    elapsed = time.time() - t0
    assert elapsed < 60.0
    report(2, f"angle err {abs(angle - expected_angle):.2e} < 1e-4, defect err "
              f"{abs(defect - expected_defect):.2e} < 1e-3, slope {slope:.3f} = 2 +- 0.1, "
              f"cap {worst:.3f} <= 2sqrt(2), {elapsed:.1f}s < 60s")


def _reparam_case(case, n):
    if case == "euclidean_circle":
        dom = Domain("closed", n)
        grid0 = dom.theta
        make = lambda g: (
            Euclidean(2),
            np.stack([np.cos(g), np.sin(g)], axis=1),
            np.stack([np.sin(2 * g), np.cos(g)], axis=1),
        )
    elif case == "open_curve":
        dom = Domain("open", n)
        grid0 = dom.theta
        make = lambda g: (
            Euclidean(2),
            np.stack([g, 0.3 * np.sin(g)], axis=1),
            np.stack([np.sin(g), np.cos(2 * g)], axis=1),
        )
    else:
        dom = Domain("closed", n)
        grid0 = dom.theta
        s, co = np.sin(0.8), np.cos(0.8)

        def make(g):
            M = Sphere(2)
            pts = np.stack([s * np.cos(g), s * np.sin(g), co * np.ones_like(g)], axis=1)
            h = M.project_tangent(
                pts, np.stack([np.sin(g), np.cos(2 * g), 0.2 * np.ones_like(g)], axis=1)
            )
            return M, pts, h

    phi = grid0 + 0.25 * np.sin(grid0)
    M, p0, h0 = make(grid0)
    Mp, p1, h1 = make(phi)
    c0 = build_curve(M, dom, p0)
    c1 = build_curve(Mp, dom, p1)
    return abs(inner_G(SPEC_N2, c1, h1, h1) - inner_G(SPEC_N2, c0, h0, h0))


def test_criterion_3_metric_correctness():
    orders = []
    for case in ("euclidean_circle", "open_curve", "sphere_circle"):
        errs = [_reparam_case(case, n) for n in (64, 128, 256, 512)]
        fit = np.polyfit(np.log([64, 128, 256, 512]), np.log(errs), 1)[0]
        orders.append(-fit)
        assert abs(-fit - 2.0) <= 0.3

    spec = MetricSpec.scale_invariant(1.0, 0.0, 1.0)
    dom = Domain("closed", 256)
    th = dom.theta
    base = np.stack([np.cos(th) + 0.3 * np.cos(2 * th), np.sin(th)], axis=1)
    h = np.stack([np.sin(3 * th), np.cos(th)], axis=1)
    c = build_curve(Euclidean(2), dom, base)
    g0 = inner_G(spec, c, h, h)
    worst = 0.0
    for alpha in (0.5, 2.0):
        ca = build_curve(Euclidean(2), dom, alpha * base)
        worst = max(worst, abs(inner_G(spec, ca, alpha * h, alpha * h) - g0) / g0)
    assert worst < 1e-6
    report(3, f"reparametrization-invariance orders {[f'{o:.2f}' for o in orders]} "
              f"= 2 +- 0.3, scale-invariance defect {worst:.2e} < 1e-6")


def test_criterion_4_geodesic_ivp():
    seg = straight_segment(64)
    w = make_field(seg, np.tile([0.0, 1.0], (64, 1)))
    res = ivp_integrate(SPEC_N1, GeodesicState(seg, w), T=1.0, steps=50)
    node_err = np.abs(res.final_state.curve.points - (seg.points + [0.0, 1.0])).max()
    assert node_err < 1e-8

    circ = unit_circle(512)
    wc = make_field(circ, np.tile([1.0, 0.0], (512, 1)))
    drift_res = ivp_integrate(SPEC_N1, GeodesicState(circ, wc), T=0.5, steps=200)
    assert drift_res.completed
    assert drift_res.energy_drift < 1e-6

    c = unit_circle(128)
    th = c.domain.theta
    w0 = make_field(c, np.stack([1 + 0.3 * np.sin(th), 0.2 * np.cos(2 * th)], axis=1))
    finals = []
    for steps in (8, 16, 32, 64):
        r = ivp_integrate(SPEC_N1, GeodesicState(c, w0), T=0.5, steps=steps)
        finals.append(r.final_state.curve.points)
    errs = [np.abs(f - finals[-1]).max() for f in finals[:-1]]
    order = np.mean([np.log2(a / b) for a, b in zip(errs, errs[1:])])
    assert abs(order - 4.0) <= 0.3
    report(4, f"translation node error {node_err:.1e} < 1e-8, circle drift "
              f"{drift_res.energy_drift:.2e} < 1e-6, RK4 order {order:.2f} = 4 +- 0.3")


def test_criterion_5_inertia_solver():
    rng = np.random.default_rng(7)
    circ = unit_circle(256)
    h = rng.standard_normal((256, 2))
    u = solve_inertia(SPEC_N1, circ, apply_inertia(SPEC_N1, circ, h))
    closed_err = np.abs(u.vectors - h).max()
    assert closed_err < 1e-8

    dom = Domain("open", 128)
    th = dom.theta
    seg = build_curve(Euclidean(2), dom, np.stack([th, 0.2 * np.sin(th)], axis=1))
    ho = np.stack([np.sin(th), np.cos(2 * th)], axis=1)
    uo = solve_inertia(
        SPEC_N1, seg, apply_inertia(SPEC_N1, seg, ho), bc=neumann_data_of(seg, ho)
    )
    open_err = np.abs(uo.vectors - ho).max()
    assert open_err < 1e-8

    defects = []
    for n in (64, 128, 256, 512):
        c = unit_circle(n)
        tt = c.domain.theta
        hh = np.stack([np.sin(2 * tt), np.cos(tt)], axis=1)
        kk = np.stack([np.sin(2 * tt) + 0.5 * np.cos(3 * tt), 0.7 * np.cos(tt)], axis=1)
        ah = apply_inertia(SPEC_N1, c, hh).vectors
        pairing = float(np.sum(np.sum(ah * kk, axis=1) * c.ds))
        defects.append(abs(pairing - inner_G(SPEC_N1, c, hh, kk)))
    order = -np.polyfit(np.log([64, 128, 256, 512]), np.log(defects), 1)[0]
    assert abs(order - 2.0) <= 0.4
    report(5, f"round trips {closed_err:.1e} / {open_err:.1e} < 1e-8, "
              f"self-adjointness defect order {order:.2f} ~ 2")


def test_criterion_6_geodesic_bvp(rng):
    dom = Domain("open", 256)
    th = dom.theta
    c0 = build_curve(Euclidean(2), dom, np.stack([th, 0 * th], axis=1))
    c1 = c0.with_points(c0.points + [0.0, 1.0])
    opts = BvpOptions(time_steps=16, max_iters=300, gtol=1e-4)
    res = minimize(SPEC_N2, c0, c1, opts)
    target = np.sqrt(2 * np.pi)
    dist_dev = abs(res.distance - target) / target
    assert dist_dev < 0.005
    assert np.all(np.diff(res.energy_history) <= 1e-12)

    # analytic vs central finite differences on the benchmark-size path
    path = init_path(c0, c1, time_steps=16)
    M = c0.manifold
    efun, vag = get_energy_functions(M, dom, SPEC_N2, 16, 1.0)
    pts = np.stack([c.points for c in path.curves])
    pts[1:-1] += 0.01 * rng.standard_normal(pts[1:-1].shape)  # generic point
    _, egrad = vag(pts)
    grad = M.euclidean_to_riemannian_gradient(pts[1:-1], np.asarray(egrad)[1:-1])
    worst_fd = 0.0
    for _ in range(20):
        delta = rng.standard_normal(grad.shape)
        delta /= np.sqrt(np.sum(delta**2))
        eps = 1e-6
        moved_p, moved_m = pts.copy(), pts.copy()
        moved_p[1:-1] = pts[1:-1] + eps * delta
        moved_m[1:-1] = pts[1:-1] - eps * delta
        fd = (float(efun(moved_p)) - float(efun(moved_m))) / (2 * eps)
        analytic = float(np.sum(grad * delta))
        worst_fd = max(worst_fd, abs(fd - analytic) / abs(fd))
    assert worst_fd < 1e-5

    # triangle inequality over 10 random Euclidean triples
    tri_dom = Domain("closed", 32)
    tth = tri_dom.theta
    tri_opts = BvpOptions(time_steps=6, max_iters=100, gtol=1e-5)

    def random_curve():
        r = 1.0 + 0.1 * rng.standard_normal()
        p = r * np.stack([np.cos(tth), np.sin(tth)], axis=1)
        p += 0.05 * rng.standard_normal(p.shape) + 0.2 * rng.standard_normal(2)
        return build_curve(Euclidean(2), tri_dom, p)

    worst_tri = 0.0
    for _ in range(10):
        a, b, c = random_curve(), random_curve(), random_curve()
        dab = minimize(SPEC_N2, a, b, tri_opts).distance
        dbc = minimize(SPEC_N2, b, c, tri_opts).distance
        dac = minimize(SPEC_N2, a, c, tri_opts).distance
        worst_tri = max(worst_tri, dac / (dab + dbc))
        assert dac <= (dab + dbc) * 1.02
    report(6, f"distance dev {dist_dev:.2%} < 0.5%, FD gradient err {worst_fd:.1e} "
              f"< 1e-5, energy monotone, triangle ratio {worst_tri:.3f} <= 1.02")


def test_criterion_7_interpolation_scans():
    t0 = time.time()
    gen = ineq_scan_general(ScanConfig(
        manifold={"kind": "euclidean", "dim": 2},
        family="euclidean_circle",
        n_samples=256,
        order_k=1,
        order_n=2,
        field_samples=16,
        a_grid=tuple(np.linspace(1.0 / 16.0, 1.0, 16)),
        scales=(0.25, 0.5, 1.0, 2.0, 4.0),
        seed=42,
    ))
    assert np.isfinite(gen.max_ratio)
    per_scale = {}
    for r in gen.rows:
        per_scale.setdefault(r["label"], []).append(r["ratio"])
    maxima = [max(v) for v in per_scale.values()]
    stability = max(maxima) / min(maxima)
    assert stability < 2.0

    per = ineq_scan_periodic(ScanConfig(
        manifold={"kind": "euclidean", "dim": 2},
        family="euclidean_circle",
        n_samples=256,
        order_k=1,
        order_n=2,
        field_samples=24,
        family_parameter="radius",
        family_values=tuple(0.5**k for k in range(2, 7)),
        seed=42,
    ))
    assert abs(per.slope - 2.0) <= 0.1

    sph = ineq_scan_periodic(ScanConfig(
        manifold={"kind": "sphere", "dim": 2},
        family="sphere_circle",
        n_samples=256,
        order_k=1,
        order_n=2,
        field_samples=24,
        family_parameter="colatitude",
        family_values=(0.4, 0.2, 0.1, 0.05),
        seed=42,
    ))
    assert np.isfinite(sph.max_ratio)
    for r in sph.rows:
        assert r["lhs"] <= sph.max_ratio * min(1.0, r["length"] ** 2) + 1e-15
    elapsed = time.time() - t0
    assert elapsed < 300.0
    report(7, f"general stable x{stability:.2f} < 2, euclidean slope {per.slope:.3f} "
              f"= 2 +- 0.1, sphere C^ {sph.max_ratio:.3f} finite, {elapsed:.1f}s < 5min")


def test_criterion_8_cli_determinism(tmp_path, capsys):
    cfg = tmp_path / "scan.json"
    cfg.write_text(json.dumps({
        "kind": "periodic",
        "manifold": {"kind": "euclidean", "dim": 2},
        "family": "euclidean_circle",
        "n_samples": 64,
        "field_samples": 8,
        "family_parameter": "radius",
        "family_values": [0.5, 0.25, 0.125],
    }))
    loop = tmp_path / "loop.json"
    save_curve(loop, colatitude_circle(256, colat=0.3))

    artifacts = {}
    for threads in ("1", "4"):
        scan_out = tmp_path / f"scan{threads}.csv"
        hol_out = tmp_path / f"hol{threads}.csv"
        assert cli_main(["ineq-scan", "--config", str(cfg), "--seed", "3",
                         "--threads", threads, "--format", "csv",
                         "--out", str(scan_out)]) == 0
        assert cli_main(["holonomy", str(loop), "--seed", "3",
                         "--threads", threads, "--format", "csv",
                         "--out", str(hol_out)]) == 0
        artifacts[threads] = (scan_out.read_bytes(), hol_out.read_bytes())
    capsys.readouterr()
    assert artifacts["1"] == artifacts["4"]
    report(8, "scan and holonomy artifacts byte-identical for --threads 1 vs 4")
