"""Geometry toolkit for the quadratic Wasserstein space of the real line.

Exact distances and displacement geodesics through quantile functions,
maximal geodesic extension intervals, the full isometry group (including
the shape flow that fixes every Dirac mass), comparison-triangle
curvature diagnostics, isometric embeddings of sorted-coordinate cones,
and a small exact discrete optimal-transport solver for R^n.
"""

from .measures import (
    CANON_TOL,
    CMP_TOL,
    Measure1D,
    QuantilePieces,
    SizeCapError,
    barycenter,
    deviation,
    dirac,
    from_atoms,
    from_mixture,
    measure_from_json,
    measure_from_quantile,
    measure_to_json,
    pushforward_affine,
    quantile,
    second_moment_about,
    to_quantile,
    uniform_measure,
)
from .transport1d import (
    Geodesic1D,
    Interval,
    extension_interval,
    geodesic,
    geodesic_eval,
    geodesic_to_json,
    wasserstein2,
)
from .isometry1d import (
    IDENTITY,
    Delta2Params,
    IsometryElement,
    apply_isometry,
    compose,
    delta2_distance,
    delta2_params,
    delta3_closed_form_candidate,
    delta3_discrepancy_report,
    exotic_flow,
    inverse,
    measure_from_params,
    quantization_error_bound,
    quantize_to_atoms,
    reflect_about_barycenter,
    weak_convergence_profile,
)
from .transport_rn import (
    Coupling,
    MeasureRn,
    brute_force_assignment,
    cyclical_monotonicity_check,
    dilate,
    dilation_distance,
    discrete_ot,
    geodesic_inequality_witness,
    independent_coupling_cost,
    is_translation_coupling,
    measure_rn,
    measure_rn_from_json,
    measure_rn_to_json,
    translate,
)
from .curvature import (
    BranchingWitness,
    branching_witness,
    comparison_defect,
    displacement_interpolation,
)
from .rank_embed import embed_sorted_tuple, flat_triangle, unscaled_embedding_distance

__version__ = "0.1.0"
