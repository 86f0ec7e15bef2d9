"""manidim: dimension formulas, a constructive Dirichlet-style solver,
rational point family enumeration and fractal probes for weighted
simultaneous rational approximation on polynomial graph charts."""

__version__ = "0.1.0"

from .core import (
    DomainBox,
    Hyperrectangle,
    MongeManifold,
    Polynomial,
    RationalPoint,
    WeightVector,
    as_fraction,
    dilate,
    nearest_int,
    rect_intersects_box,
    snap_to_binary,
)
from .errors import (
    CapExceededError,
    ConfigError,
    HypothesisError,
    TheoremViolationError,
)
from .formulas import (
    DimensionResult,
    UpperOrderEstimate,
    blvv_simultaneous,
    check_manifold_hypotheses,
    diagnose_weights,
    estimate_upper_order,
    jarnik_besicovitch,
    manifold_lower_bound,
    manifold_lower_bound_via_rectangles,
    planar_curve_dimension,
    proof_weight_vector_manifold,
    proof_weight_vector_rynne,
    rynne_dimension,
    wwx_rectangle_bound,
)
from .dirichlet import (
    DirichletSolution,
    ManifoldConstants,
    certify_solution,
    compute_Q0,
    infinitude_sweep,
    manifold_constants,
    scan_dirichlet,
    solve_dirichlet,
)
from .enumeration import (
    PointFamily,
    build_balls,
    build_rectangles,
    containment_constant,
    enumerate_points,
)
from .fractal import (
    BOX_DIMENSION_CAVEAT,
    CoverageReport,
    DimensionProbeResult,
    ScaleCountTable,
    box_count,
    coverage,
    coverage_sweep,
    dimension_experiment,
)
from .config import BENCHMARKS, benchmark_manifold, load_manifold, resolve_manifold

__all__ = [name for name in dir() if not name.startswith("_")]
