"""Command-line front end.

Subcommands map one-to-one onto the library modules; structured results
are emitted as JSON (with a meta header echoing inputs and seed) and
tabular scan data as CSV with '#' comment headers.  Outputs contain no
timestamps, and worker threads never change the emitted bytes, so a
fixed seed reproduces artifacts exactly.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .analysis import (
    ScanConfig,
    equivalence_probe,
    incompleteness_demo,
    ineq_scan_general,
    ineq_scan_periodic,
    shrinkage_probe,
)
from .errors import ElasticaError, InvalidArgumentError
from .geodesic_bvp import BvpOptions, distance, minimize
from .geodesic_ivp import GeodesicState, ivp_integrate
from .holonomy import bound_probe
from .io import (
    _read,
    load_curve,
    load_field,
    load_path,
    metric_from_dict,
    save_path,
    write_csv,
)
from .manifold import make_manifold


def _meta(args, command):
    # no timestamps and no thread count: outputs must be byte-identical
    # for a fixed seed regardless of worker parallelism
    options = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "threads", "out", "diag") and v is not None
    }
    return {"tool": "elastica", "version": __version__, "command": command,
            "seed": args.seed, "inputs": json.dumps(options, sort_keys=True)}


def _emit_json(args, command, result):
    payload = {"meta": _meta(args, command), "result": result}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(args, command, header, rows, aggregates=None):
    meta = _meta(args, command)
    if aggregates:
        meta.update(aggregates)
    if args.format == "csv":
        target = args.out if args.out else sys.stdout
        write_csv(target, meta, header, rows)
    else:
        _emit_json(args, command, {"rows": rows, **(aggregates or {})})


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="random seed echoed in outputs")
    p.add_argument("--threads", type=int, default=1, help="worker threads for probes")
    p.add_argument("--out", default=None, help="output file (stdout if omitted)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="elastica",
        description="Sobolev metrics on manifold-valued curves: geodesics, "
        "holonomy and completeness probes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("manifold-info", help="curvature/injectivity data of a backend")
    p.add_argument("--kind", required=True, choices=("euclidean", "sphere", "hyperbolic"))
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--radius", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("distance", help="geodesic distance between two curves")
    p.add_argument("--metric", required=True)
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.add_argument("--time-steps", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--gtol", type=float, default=1e-6)
    p.add_argument("--c-hat", type=float, default=1.0,
                   help="constant for the informational existence radius")
    _add_common(p)

    p = sub.add_parser("geodesic-bvp", help="minimizing path between two curves")
    p.add_argument("--metric", required=True)
    p.add_argument("curve_a")
    p.add_argument("curve_b")
    p.add_argument("--time-steps", type=int, default=16)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--gtol", type=float, default=1e-6)
    _add_common(p)

    p = sub.add_parser("geodesic-ivp", help="shoot the order-1 geodesic flow")
    p.add_argument("--metric", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--velocity", required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--boundary", choices=("zero_neumann", "variational"),
                   default="zero_neumann")
    p.add_argument("--diag", default=None, help="write per-step diagnostics CSV here")
    _add_common(p)

    p = sub.add_parser("holonomy", help="loop holonomy defects and bound check")
    p.add_argument("curves", nargs="+")
    _add_common(p)

    p = sub.add_parser("ineq-scan", help="interpolation-inequality scans")
    p.add_argument("--config", required=True)
    _add_common(p)

    p = sub.add_parser("incompleteness", help="vanishing-length path demo")
    p.add_argument("--preset", required=True,
                   choices=("f0g0", "translate", "log_escape", "oscillate"))
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--grid", default="512x200", help="NxM space/time resolution")
    p.add_argument("--metric", required=True)
    _add_common(p)

    p = sub.add_parser("equivalence", help="G-vs-H norm ratio probe")
    p.add_argument("--metric", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--samples", type=int, default=64)
    _add_common(p)

    p = sub.add_parser("shrinkage", help="length^{3/2} Lipschitz probe along a path")
    p.add_argument("--metric", default=None, help="defaults to the path file's metric")
    p.add_argument("--path", required=True)
    p.add_argument("--threshold", type=float, default=1e-3)
    _add_common(p)
    return parser


def _cmd_manifold_info(args):
    m = make_manifold(args.kind, args.dim, args.radius)
    info = {
        "kind": m.kind,
        "dim": m.dim,
        "ambient_dim": m.ambient_dim,
        "curvature": m.curvature,
        "curvature_bound": m.curvature_bound,
        "injectivity_radius": (
            "inf" if np.isinf(m.injectivity_radius) else m.injectivity_radius
        ),
    }
    if m.kind == "sphere":
        info["radius"] = m.radius
    _emit_json(args, "manifold-info", info)


def _bvp_opts(args):
    return BvpOptions(
        time_steps=args.time_steps,
        max_iters=args.max_iters,
        gtol=args.gtol,
        seed=args.seed,
    )


def _cmd_distance(args):
    spec = metric_from_dict(_read(args.metric))
    a = load_curve(args.curve_a)
    b = load_curve(args.curve_b)
    info = distance(spec, a, b, opts=_bvp_opts(args), c_hat=args.c_hat)
    _emit_json(args, "distance", {
        "distance": info.distance,
        "energy": info.energy,
        "iterations": info.iterations,
        "converged": info.converged,
        "grad_norm": info.grad_norm,
        "r0_hat": info.r0_hat,
    })


def _cmd_geodesic_bvp(args):
    spec = metric_from_dict(_read(args.metric))
    a = load_curve(args.curve_a)
    b = load_curve(args.curve_b)
    res = minimize(spec, a, b, opts=_bvp_opts(args))
    summary = {
        "distance": res.distance,
        "energy": res.energy,
        "length": res.length,
        "iterations": res.iterations,
        "converged": res.converged,
        "grad_norm": res.grad_norm,
    }
    if args.out:
        save_path(args.out, res.path, metric=spec)
        sys.stdout.write(json.dumps(
            {"meta": _meta(args, "geodesic-bvp"), "result": summary},
            indent=2, sort_keys=True) + "\n")
    else:
        _emit_json(args, "geodesic-bvp", summary)


def _cmd_geodesic_ivp(args):
    spec = metric_from_dict(_read(args.metric))
    curve = load_curve(args.curve)
    velocity = load_field(curve, args.velocity)
    res = ivp_integrate(
        spec, GeodesicState(curve, velocity), T=args.T, steps=args.steps,
        boundary=args.boundary,
    )
    summary = {
        "completed": res.completed,
        "reason": res.reason,
        "steps_done": len(res.times) - 1,
        "energy_initial": float(res.energies[0]),
        "energy_final": float(res.energies[-1]),
        "energy_drift": res.energy_drift,
    }
    if args.diag:
        rows = [
            {"step": i, "t": float(t), "energy": float(e), "length": float(l),
             "min_speed": float(s)}
            for i, (t, e, l, s) in enumerate(
                zip(res.times, res.energies, res.lengths, res.min_speeds))
        ]
        write_csv(args.diag, _meta(args, "geodesic-ivp"),
                  ["step", "t", "energy", "length", "min_speed"], rows)
    if args.out and res.path is not None:
        save_path(args.out, res.path, metric=spec)
        sys.stdout.write(json.dumps(
            {"meta": _meta(args, "geodesic-ivp"), "result": summary},
            indent=2, sort_keys=True) + "\n")
    else:
        _emit_json(args, "geodesic-ivp", summary)


def _cmd_holonomy(args):
    curves = [load_curve(f) for f in args.curves]
    reports, fitted, slope = bound_probe(
        curves, ids=list(args.curves), threads=args.threads
    )
    rows = [
        {"curve_id": r.curve_id, "length": r.length, "defect": r.defect,
         "ratio": r.ratio, "cap": r.bound_cap, "pass": r.passed}
        for r in reports
    ]
    _emit_rows(args, "holonomy",
               ["curve_id", "length", "defect", "ratio", "cap", "pass"], rows,
               aggregates={"fitted_constant": fitted, "loglog_slope": slope})


def _scan_config(args):
    data = _read(args.config)
    kind = data.pop("kind", "general")
    if "a_grid" in data:
        data["a_grid"] = tuple(data["a_grid"])
    for key in ("scales", "family_values"):
        if key in data:
            data[key] = tuple(data[key])
    if "family_params" in data:
        data["family_params"] = dict(data["family_params"])
    data.setdefault("seed", args.seed)
    data.setdefault("threads", args.threads)
    try:
        cfg = ScanConfig(**data)
    except TypeError as exc:
        raise InvalidArgumentError(f"scan config: {exc}") from exc
    return kind, cfg


def _cmd_ineq_scan(args):
    kind, cfg = _scan_config(args)
    if kind == "general":
        report = ineq_scan_general(cfg)
    elif kind == "periodic":
        report = ineq_scan_periodic(cfg)
    else:
        raise InvalidArgumentError(f"unknown scan kind {kind!r}")
    rows = report.rows
    aggregates = {"max_ratio": report.max_ratio, "slope": report.slope,
                  "skipped": report.skipped}
    if args.format == "json":
        _emit_json(args, "ineq-scan", {"rows": rows, **aggregates})
    else:
        _emit_rows(args, "ineq-scan",
                   ["label", "length", "a", "lhs", "rhs", "ratio"], rows,
                   aggregates=aggregates)


def _cmd_incompleteness(args):
    try:
        n_str, m_str = args.grid.lower().split("x")
        n_samples, m_steps = int(n_str), int(m_str)
    except ValueError as exc:
        raise InvalidArgumentError(f"--grid expects NxM, got {args.grid!r}") from exc
    spec = metric_from_dict(_read(args.metric))
    demo = incompleteness_demo(args.preset, n_samples, m_steps, spec,
                               x0=args.x0, y0=args.y0)
    aggregates = {
        "path_length": demo["path_length"],
        "path_energy": demo["path_energy"],
        "reference_length": demo["reference_length"],
    }
    if args.format == "csv":
        _emit_rows(args, "incompleteness",
                   ["t", "curve_length", "curve_length_exact", "speed_G"],
                   demo["rows"], aggregates=aggregates)
    else:
        _emit_json(args, "incompleteness", {**aggregates, "rows": demo["rows"]})


def _cmd_equivalence(args):
    spec = metric_from_dict(_read(args.metric))
    curve = load_curve(args.curve)
    lo, hi, cond = equivalence_probe(spec, curve, samples=args.samples, seed=args.seed)
    _emit_json(args, "equivalence",
               {"min_ratio": lo, "max_ratio": hi, "condition_number": cond})


def _cmd_shrinkage(args):
    path, metric = load_path(args.path)
    if args.metric is not None:
        metric = metric_from_dict(_read(args.metric))
    if metric is None:
        raise InvalidArgumentError("no metric: pass --metric or embed one in the path file")
    report = shrinkage_probe(metric, path, threshold=args.threshold)
    _emit_json(args, "shrinkage", report)


_HANDLERS = {
    "manifold-info": _cmd_manifold_info,
    "distance": _cmd_distance,
    "geodesic-bvp": _cmd_geodesic_bvp,
    "geodesic-ivp": _cmd_geodesic_ivp,
    "holonomy": _cmd_holonomy,
    "ineq-scan": _cmd_ineq_scan,
    "incompleteness": _cmd_incompleteness,
    "equivalence": _cmd_equivalence,
    "shrinkage": _cmd_shrinkage,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _HANDLERS[args.command](args)
    except ElasticaError as exc:
        print(f"elastica {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
