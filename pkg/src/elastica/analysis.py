"""Empirical probes of the interpolation inequalities and completeness
phenomena.

Nothing here proves anything: the scans evaluate both sides of the
inequalities on sampled curves and fields, report the worst ratios and
fitted scaling exponents, and flag violations of the asserted structure
(finiteness, quadratic small-length scaling, vanishing-length escape).
All randomness is seeded; identical configurations produce byte-identical
reports.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .curve import Domain, build_curve, cov_deriv
from .errors import ImmersionError, InvalidArgumentError
from .families import make_curve, random_smooth_field, scaled_curve
from .manifold import Euclidean, manifold_from_spec
from .metric import (
    CurvePath,
    MetricSpec,
    coefficients,
    completeness_case,
    field_norm,
    inner_G,
    inner_H,
    path_energy,
    path_speed_profile,
)


@dataclass(frozen=True)
class ScanConfig:
    """Configuration of an inequality scan.

    ``family`` is a curve preset name plus parameters; ``scales`` (general
    scan) multiplies Euclidean curves, ``family_values`` (periodic scan)
    sweeps the preset's size parameter to drive the length to zero.
    """

    manifold: dict
    family: str
    family_params: dict = field(default_factory=dict)
    n_samples: int = 256
    order_k: int = 1
    order_n: int = 2
    field_samples: int = 32
    a_grid: tuple = ()
    a_relative: bool = True   # interpret a-grid as fractions of the curve length
    scales: tuple = (1.0,)
    family_values: tuple = ()
    family_parameter: str = ""
    max_mode: int = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not 0 < self.order_k < self.order_n:
            raise InvalidArgumentError("orders must satisfy 0 < k < n")


@dataclass
class ScanReport:
    """Rows of (curve label, a, LHS, RHS, ratio) plus aggregates."""

    kind: str
    rows: list
    max_ratio: float
    slope: float = float("nan")
    skipped: int = 0
    meta: dict = field(default_factory=dict)

    def csv_lines(self):
        yield "label,length,a,lhs,rhs,ratio"
        for r in self.rows:
            yield (
                f"{r['label']},{r['length']!r},{r['a']!r},"
                f"{r['lhs']!r},{r['rhs']!r},{r['ratio']!r}"
            )


def _derivative_norms(curve, h, orders):
    """||D_s^k h||^2_{L2(ds)} for the requested orders (0 included as ||h||^2)."""
    out = {}
    vec = h
    if 0 in orders:
        out[0] = field_norm(curve, vec, "L2_ds") ** 2
    top = max(orders)
    for k in range(1, top + 1):
        vec = cov_deriv(curve, vec, "arclength", 1).vectors
        if k in orders:
            out[k] = float(
                np.sum(curve.manifold.inner(curve.points, vec, vec) * curve.ds)
            )
    return out


def _sample_fields(curve, cfg, rng_seeds):
    return [
        random_smooth_field(curve, np.random.default_rng(s), max_mode=cfg.max_mode)
        for s in rng_seeds
    ]


def ineq_scan_general(cfg):
    """Scan a^{2k} ||D_s^k h||^2 <= C (||h||^2 + a^{2n} ||D_s^n h||^2).

    Evaluates the ratio over sampled fields, an a-grid, and scaled copies
    of the base curve; asserts nothing beyond finiteness, reports max.
    """
    manifold = manifold_from_spec(cfg.manifold)
    base = make_curve(cfg.family, cfg.n_samples, **cfg.family_params)
    if base.manifold != manifold:
        raise InvalidArgumentError("family preset does not match the manifold spec")
    k, n = cfg.order_k, cfg.order_n
    rows = []
    skipped = 0
    seeds = [cfg.seed + 1000 * t for t in range(cfg.field_samples)]

    def curve_for_scale(alpha):
        return base if alpha == 1.0 else scaled_curve(base, alpha)

    def scan_curve(args):
        label, curve = args
        local_rows = []
        if cfg.a_grid:
            a_grid = [
                float(a) * curve.length if cfg.a_relative else float(a)
                for a in cfg.a_grid
            ]
        else:
            a_grid = [curve.length]
        fields = _sample_fields(curve, cfg, seeds)
        for h in fields:
            norms = _derivative_norms(curve, h, {0, k, n})
            for a in a_grid:
                a = min(float(a), curve.length)
                lhs = a ** (2 * k) * norms[k]
                rhs = norms[0] + a ** (2 * n) * norms[n]
                local_rows.append(
                    {
                        "label": label,
                        "length": curve.length,
                        "a": a,
                        "lhs": lhs,
                        "rhs": rhs,
                        "ratio": lhs / rhs if rhs > 0 else 0.0,
                    }
                )
        return local_rows

    jobs = []
    for alpha in cfg.scales:
        try:
            jobs.append((f"scale={alpha!r}", curve_for_scale(alpha)))
        except ImmersionError:
            skipped += 1
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            for chunk in ex.map(scan_curve, jobs):
                rows.extend(chunk)
    else:
        for job in jobs:
            rows.extend(scan_curve(job))
    ratios = np.array([r["ratio"] for r in rows])
    if not np.all(np.isfinite(ratios)):
        raise InvalidArgumentError("scan produced non-finite ratios")
    return ScanReport(
        kind="general",
        rows=rows,
        max_ratio=float(ratios.max()),
        skipped=skipped,
        meta={"k": k, "n": n, "seed": cfg.seed},
    )


def ineq_scan_periodic(cfg):
    """Shrink study of ||D_s^k h||^2 <= C min{1, l^2}(||h||^2 + ||D_s^n h||^2).

    Sweeps the family parameter (driving the length to zero), records the
    worst ratio per curve, and fits the log-log slope of ratio vs length
    over the sub-unit-length part of the family.
    """
    manifold = manifold_from_spec(cfg.manifold)
    if not cfg.family_values or not cfg.family_parameter:
        raise InvalidArgumentError(
            "periodic scan needs family_parameter and family_values"
        )
    k, n = cfg.order_k, cfg.order_n
    seeds = [cfg.seed + 1000 * t for t in range(cfg.field_samples)]
    rows = []
    skipped = 0

    def scan_value(val):
        params = dict(cfg.family_params)
        params[cfg.family_parameter] = val
        try:
            curve = make_curve(cfg.family, cfg.n_samples, **params)
        except ImmersionError:
            return None
        if curve.domain.topology != "closed":
            raise InvalidArgumentError("periodic scan requires closed curves")
        worst = 0.0
        for h in _sample_fields(curve, cfg, seeds):
            norms = _derivative_norms(curve, h, {0, k, n})
            denom = norms[0] + norms[n]
            if denom > 0:
                worst = max(worst, norms[k] / denom)
        return {
            "label": f"{cfg.family_parameter}={val!r}",
            "length": curve.length,
            "a": float("nan"),
            "lhs": worst,
            "rhs": min(1.0, curve.length**2),
            "ratio": worst / min(1.0, curve.length**2),
        }

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(scan_value, cfg.family_values))
    else:
        results = [scan_value(v) for v in cfg.family_values]
    for r in results:
        if r is None:
            skipped += 1
        else:
            rows.append(r)
    lengths = np.array([r["length"] for r in rows])
    worsts = np.array([r["lhs"] for r in rows])
    mask = (lengths < 1.0) & (worsts > 0)
    slope = float("nan")
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log(lengths[mask]), np.log(worsts[mask]), 1)[0])
    ratios = np.array([r["ratio"] for r in rows])
    if not np.all(np.isfinite(ratios)):
        raise InvalidArgumentError("scan produced non-finite ratios")
    return ScanReport(
        kind="periodic",
        rows=rows,
        max_ratio=float(ratios.max()),
        slope=slope,
        skipped=skipped,
        meta={"k": k, "n": n, "seed": cfg.seed},
    )


def equivalence_probe(spec, curve, samples=64, seed=0):
    """Sample ||h||_G / ||h||_H over random fields.

    Requires the metric to satisfy the structural completeness conditions;
    returns (min ratio, max ratio, condition number).
    """
    completeness_case(spec, curve.domain.topology)
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(samples):
        h = random_smooth_field(curve, rng)
        g = inner_G(spec, curve, h, h)
        hn = inner_H(curve, h, h, spec.order)
        if hn > 0:
            ratios.append(np.sqrt(g / hn))
    ratios = np.array(ratios)
    if not (np.all(np.isfinite(ratios)) and np.all(ratios > 0)):
        raise InvalidArgumentError("equivalence probe produced degenerate ratios")
    return float(ratios.min()), float(ratios.max()), float(ratios.max() / ratios.min())


# -- vanishing-length path demos ---------------------------------------------


def _shrink_presets(x0=1.0, y0=0.0):
    def zero(t):
        return np.zeros_like(t)

    return {
        "f0g0": (zero, zero, zero, zero),
        "translate": (
            lambda t: x0 * t,
            lambda t: y0 * t,
            lambda t: x0 * np.ones_like(t),
            lambda t: y0 * np.ones_like(t),
        ),
        "log_escape": (
            lambda t: -np.log1p(-t),
            zero,
            lambda t: 1.0 / (1.0 - t),
            zero,
        ),
        "oscillate": (
            lambda t: np.sin(-np.log1p(-t)),
            zero,
            lambda t: np.cos(np.log1p(-t)) / (1.0 - t),
            zero,
        ),
    }


def shrink_path_curves(preset, n_samples, m_steps, x0=1.0, y0=0.0):
    """The vanishing-length family c(t,theta) = ((1-t)(theta-pi)+f(t), g(t))
    on t in [0, 1 - 1/M]; returns (CurvePath, f', g' callables)."""
    presets = _shrink_presets(x0, y0)
    if preset not in presets:
        raise InvalidArgumentError(
            f"unknown preset {preset!r}; expected one of {sorted(presets)}"
        )
    f, g, fp, gp = presets[preset]
    dom = Domain("open", n_samples)
    th = dom.theta
    manifold = Euclidean(2)
    t_end = 1.0 - 1.0 / m_steps
    ts = np.linspace(0.0, t_end, m_steps + 1)
    curves = []
    for t in ts:
        pts = np.stack(
            [(1.0 - t) * (th - np.pi) + float(f(np.array(t))),
             np.full_like(th, float(g(np.array(t))))],
            axis=1,
        )
        curves.append(build_curve(manifold, dom, pts))
    return CurvePath(curves, total_time=t_end), fp, gp


def reference_shrink_length(spec, preset, t_end, x0=1.0, y0=0.0):
    """1-D quadrature of the closed-form path-speed integrand
    sqrt(2 pi (1-t)) * sqrt(a_0 (pi^2/3 + f'^2 + g'^2)) over [0, t_end].

    Valid for constant coefficients (higher-derivative terms vanish for
    these paths since D_s c_t is theta-independent and D_s^2 c_t = 0)."""
    from scipy.integrate import quad

    if spec.family != "constant":
        raise InvalidArgumentError("reference length assumes constant coefficients")
    _, _, fp, gp = _shrink_presets(x0, y0)[preset]
    a0 = spec.coeffs[0]

    def integrand(t):
        tt = np.array(t)
        return np.sqrt(
            2.0 * np.pi * (1.0 - t) * a0
            * (np.pi**2 / 3.0 + float(fp(tt)) ** 2 + float(gp(tt)) ** 2)
        )

    val, _ = quad(integrand, 0.0, t_end, limit=200)
    return float(val)


def incompleteness_demo(preset, n_samples, m_steps, spec, x0=1.0, y0=0.0):
    """Build the vanishing-length path and compare against closed forms.

    Returns a dict with the discrete path length/energy, the quadrature
    reference length, and the per-node table of t, discrete curve length,
    the exact length 2 pi (1-t), and the discrete speed G(cdot,cdot).
    """
    path, _, _ = shrink_path_curves(preset, n_samples, m_steps, x0, y0)
    energy, length = path_energy(spec, path)
    q = path_speed_profile(spec, path)
    ts = path.times
    lengths = path.lengths()
    ref = reference_shrink_length(spec, preset, path.total_time, x0, y0)
    rows = [
        {
            "t": float(t),
            "curve_length": float(l),
            "curve_length_exact": float(2.0 * np.pi * (1.0 - t)),
            "speed_G": float(qq),
        }
        for t, l, qq in zip(ts, lengths, q)
    ]
    return {
        "preset": preset,
        "n_samples": n_samples,
        "m_steps": m_steps,
        "path_length": length,
        "path_energy": energy,
        "reference_length": ref,
        "rows": rows,
    }


def preset_distance_bound(preset_a, preset_b, n_samples, spec, times,
                          tau_steps=16, x0=1.0, y0=0.0):
    """Upper bound on the distance between two shrink presets at fixed t,
    via the affine homotopy between the corresponding curves.

    Returns rows of (t, bound) and the fitted slope of log(bound) against
    log(1-t); for presets with f-offset growing like t the bound behaves
    like t * sqrt(2 pi (1-t)), so the fitted slope tends to 1/2.
    """
    pa = _shrink_presets(x0, y0)[preset_a]
    pb = _shrink_presets(x0, y0)[preset_b]
    dom = Domain("open", n_samples)
    th = dom.theta
    manifold = Euclidean(2)
    rows = []
    for t in times:
        tt = np.array(t)
        curves = []
        for tau in np.linspace(0.0, 1.0, tau_steps + 1):
            fx = tau * float(pa[0](tt)) + (1 - tau) * float(pb[0](tt))
            gy = tau * float(pa[1](tt)) + (1 - tau) * float(pb[1](tt))
            pts = np.stack(
                [(1.0 - t) * (th - np.pi) + fx, np.full_like(th, gy)], axis=1
            )
            curves.append(build_curve(manifold, dom, pts))
        homotopy = CurvePath(curves, total_time=1.0)
        _, bound = path_energy(spec, homotopy)
        rows.append({"t": float(t), "bound": float(bound)})
    ts = np.array([r["t"] for r in rows])
    bs = np.array([r["bound"] for r in rows])
    mask = bs > 0
    slope = float("nan")
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log1p(-ts[mask]), np.log(bs[mask]), 1)[0])
    return rows, slope


def shrinkage_probe(spec, path, threshold=1e-3):
    """Check the Lipschitz behavior of l^{3/2} along a path.

    Computes the smallest feasible constant L with
    |l(t_a)^{3/2} - l(t_b)^{3/2}| <= L * pathlength(t_a, t_b) over all
    pairs, and flags times where the curve length drops below the
    threshold (the only escape route from the space).
    """
    if spec.family != "constant":
        raise InvalidArgumentError("shrinkage probe assumes constant coefficients")
    q = path_speed_profile(spec, path)
    lam = np.sqrt(np.maximum(q, 0.0))
    seg = 0.5 * (lam[:-1] + lam[1:]) * path.dt
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    lengths = path.lengths()
    l32 = lengths**1.5
    best = 0.0
    for a in range(len(l32)):
        for b in range(a + 1, len(l32)):
            d = cum[b] - cum[a]
            if d > 1e-14:
                best = max(best, abs(l32[b] - l32[a]) / d)
    flagged = [
        {"t": float(t), "curve_length": float(l)}
        for t, l in zip(path.times, lengths)
        if l < threshold
    ]
    return {
        "lipschitz_hat": float(best),
        "flagged": flagged,
        "min_length": float(lengths.min()),
        "path_length": float(cum[-1]),
    }
