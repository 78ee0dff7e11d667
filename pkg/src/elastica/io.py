"""JSON file formats for manifolds, metrics, curves, fields and paths.

Schemas (see docs/file_formats.md):

* manifold: {"kind": "euclidean"|"sphere"|"hyperbolic", "dim": d, "radius": rho?}
* metric:   {"order": n, "family": "constant"|"scale_invariant", "coeffs": [...]}
* curve:    {"manifold": {...}, "domain": {"topology": ..., "samples": N},
             "points": [[...], ...]}
* field:    {"vectors": [[...], ...]}  (paired with a curve file)
* path:     {"metric": {...}?, "total_time": T?, "curves": [curve, ...]}

Loaders reject invalid data with a diagnostic naming the offending field
or node index.  Points written by this module re-load bit-identically
(floats go through repr-exact JSON serialisation).
"""

from __future__ import annotations

import json

import numpy as np

from .curve import Domain, build_curve, make_field
from .errors import ElasticaError, InvalidArgumentError
from .manifold import manifold_from_spec
from .metric import CurvePath, MetricSpec


def _read(path_or_dict):
    if isinstance(path_or_dict, dict):
        return path_or_dict
    with open(path_or_dict) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"{path_or_dict}: invalid JSON: {exc}") from exc


def _write(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def metric_from_dict(data):
    data = _read(data)
    unknown = set(data) - {"order", "family", "coeffs"}
    if unknown:
        raise InvalidArgumentError(f"metric: unknown fields {sorted(unknown)}")
    try:
        order = int(data["order"])
        family = data["family"]
        coeffs = [float(c) for c in data["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"metric: {exc}") from exc
    if len(coeffs) != order + 1:
        raise InvalidArgumentError(
            f"metric: order {order} needs {order + 1} coeffs, got {len(coeffs)}"
        )
    if family == "constant":
        return MetricSpec.constant(*coeffs)
    if family == "scale_invariant":
        return MetricSpec.scale_invariant(*coeffs)
    raise InvalidArgumentError(f"metric: unknown family {family!r}")


def curve_from_dict(data, eps_imm=1e-8):
    data = _read(data)
    for key in ("manifold", "domain", "points"):
        if key not in data:
            raise InvalidArgumentError(f"curve: missing field {key!r}")
    manifold = manifold_from_spec(data["manifold"])
    dom_spec = data["domain"]
    try:
        domain = Domain(dom_spec["topology"], int(dom_spec["samples"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"curve.domain: {exc}") from exc
    points = np.asarray(data["points"], dtype=float)
    if points.ndim != 2:
        raise InvalidArgumentError("curve.points: expected a list of coordinate rows")
    # per-node on-manifold validation with index diagnostics
    defects = np.abs(manifold.point_defect(points))
    bad = np.nonzero(defects > 1e-8)[0]
    if bad.size:
        raise InvalidArgumentError(
            f"curve.points[{bad[0]}]: not on the {manifold.kind} manifold "
            f"(constraint residual {defects[bad[0]]:.3e})"
        )
    try:
        return build_curve(manifold, domain, points, eps_imm=eps_imm)
    except ElasticaError as exc:
        raise type(exc)(f"curve: {exc}") from exc


def save_curve(path, curve):
    _write(path, curve.to_spec())


def load_curve(path, eps_imm=1e-8):
    return curve_from_dict(_read(path), eps_imm=eps_imm)


def field_from_dict(curve, data):
    data = _read(data)
    if "vectors" not in data:
        raise InvalidArgumentError("field: missing field 'vectors'")
    vectors = np.asarray(data["vectors"], dtype=float)
    if vectors.shape != curve.points.shape:
        raise InvalidArgumentError(
            f"field.vectors: shape {vectors.shape} does not match the curve "
            f"{curve.points.shape}"
        )
    defects = np.abs(curve.manifold.tangency_defect(curve.points, vectors))
    bad = np.nonzero(defects > 1e-8 * (1.0 + np.abs(vectors).max()))[0]
    if bad.size:
        raise InvalidArgumentError(
            f"field.vectors[{bad[0]}]: not tangent at the corresponding node "
            f"(residual {defects[bad[0]]:.3e})"
        )
    return make_field(curve, vectors)


def save_field(path, fld):
    _write(path, {"vectors": fld.vectors.tolist()})


def load_field(curve, path):
    return field_from_dict(curve, _read(path))


def path_from_dict(data, eps_imm=1e-8):
    data = _read(data)
    if "curves" not in data or not isinstance(data["curves"], list):
        raise InvalidArgumentError("path: missing list field 'curves'")
    curves = []
    for j, cd in enumerate(data["curves"]):
        try:
            curves.append(curve_from_dict(cd, eps_imm=eps_imm))
        except ElasticaError as exc:
            raise type(exc)(f"path.curves[{j}]: {exc}") from exc
    metric = metric_from_dict(data["metric"]) if "metric" in data else None
    total_time = float(data.get("total_time", 1.0))
    return CurvePath(curves, total_time=total_time), metric


def save_path(path, curve_path, metric=None):
    obj = {
        "total_time": curve_path.total_time,
        "curves": [c.to_spec() for c in curve_path.curves],
    }
    if metric is not None:
        obj["metric"] = metric.to_spec()
    _write(path, obj)


def load_path(path, eps_imm=1e-8):
    return path_from_dict(_read(path), eps_imm=eps_imm)


def write_csv(path, meta, header, rows):
    """CSV with '# key: value' comment lines, deterministic float repr."""
    def fmt(v):
        if isinstance(v, float):
            return repr(v)
        return str(v)

    lines = [f"# {k}: {meta[k]}" for k in meta]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(row[h]) for h in header))
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
    return text
