"""Sobolev metrics on manifold-valued curves.

A numpy/scipy library for the Riemannian geometry of discrete immersed
curves with values in constant-curvature spaces: reparametrization
invariant Sobolev metrics, geodesic initial and boundary value problems,
loop holonomy, and numerical probes of completeness phenomena.
"""

__version__ = "0.1.0"

from .curve import (
    Domain,
    DiscreteCurve,
    VectorField,
    build_curve,
    cov_deriv,
    make_field,
    reparametrize_arclength,
    unit_tangent,
)
from .errors import (
    AdjacencyError,
    ElasticaError,
    ImmersionError,
    InitFailureError,
    InjectivityError,
    InvalidArgumentError,
    SolverError,
    UnsupportedOrderError,
)
from .geodesic_bvp import (
    BvpOptions,
    DistanceInfo,
    GeodesicResult,
    distance,
    energy_gradient,
    existence_radius,
    init_path,
    minimize,
)
from .geodesic_ivp import (
    BoundaryData,
    GeodesicState,
    IvpResult,
    apply_inertia,
    ivp_integrate,
    neumann_data_of,
    parallel_frames,
    psi_form,
    solve_inertia,
)
from .holonomy import HolonomyReport, bound_probe, holonomy_defect, loop_holonomy
from .manifold import Euclidean, Hyperbolic, Manifold, Sphere, make_manifold
from .metric import (
    CurvePath,
    MetricSpec,
    coefficients,
    constant_speed_reparametrization,
    field_norm,
    inner_G,
    inner_H,
    path_energy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
