"""Tradeoff relations between the four equivalent CHSH forms.

For any two-qubit state and any projective arrangement, the expectations of
the four CHSH forms I0..I3 satisfy <I_mu>^2 + <I_nu>^2 <= 8 for every pair:
at most one inequality can be violated, and Tsirelson's bound is the
corollary at mu = nu.  The package derives the bounding ellipse behind that
statement, checks the operator identities that enforce it, and ships seeded
Monte Carlo scans plus a CLI for reproducing the standard pictures.

Heavy kernels run on a compiled extension when it is importable and on a
line-for-line pure-Python twin otherwise (CHSH_PURE=1 forces the latter);
results are bit-identical either way.
"""
from ._backend import backend_name
from .bell import (
    FORM_SIGNS,
    LHV_BOUND,
    TSIRELSON_BOUND,
    BellQuad,
    CorrelationTensor,
    bell_operator,
    correlation_tensor,
    horodecki_value,
    i0_by_tensor,
    lhv_max,
    observable,
    optimize_settings,
    quad_by_trace,
)
from .errors import ChshError
from .explore import (
    ScanPoint,
    ScanSummary,
    containment_sweep,
    identity_sweep,
    scan_random_directions,
    scan_star,
    summarize,
    verify_run,
    verify_sample,
)
from .geometry import (
    AngleTuple,
    BobFrame,
    Direction,
    ImageFrame,
    Settings,
    admissible_box,
    angle_tuple,
    bob_midframe,
    image_frame,
    random_direction,
    random_settings,
)
from .rng import PhiloxStream, stream_id
from .states import (
    DensityMatrix,
    isotropic,
    maximally_mixed,
    mix,
    random_mixed,
    random_pure,
    schmidt_pure,
)
from .tradeoff import (
    DeltaGap,
    EllipseCase,
    EllipseCoeffs,
    PrincipalAxes,
    SceneReport,
    VarianceReport,
    delta_gap,
    ellipse_case_from_scene,
    ellipse_coeffs,
    maximize_m2sum,
    operator_identity_residuals,
    pair_radius,
    principal_axes,
    scene_report,
    solve_image_magnitudes,
    variances,
    vertex_delta,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    "AngleTuple",
    "BellQuad",
    "BobFrame",
    "ChshError",
    "CorrelationTensor",
    "DeltaGap",
    "DensityMatrix",
    "Direction",
    "EllipseCase",
    "EllipseCoeffs",
    "FORM_SIGNS",
    "ImageFrame",
    "LHV_BOUND",
    "PhiloxStream",
    "PrincipalAxes",
    "ScanPoint",
    "ScanSummary",
    "SceneReport",
    "Settings",
    "TSIRELSON_BOUND",
    "VarianceReport",
    "admissible_box",
    "angle_tuple",
    "bell_operator",
    "bob_midframe",
    "containment_sweep",
    "correlation_tensor",
    "delta_gap",
    "ellipse_case_from_scene",
    "ellipse_coeffs",
    "horodecki_value",
    "i0_by_tensor",
    "identity_sweep",
    "image_frame",
    "isotropic",
    "lhv_max",
    "maximally_mixed",
    "maximize_m2sum",
    "mix",
    "observable",
    "operator_identity_residuals",
    "optimize_settings",
    "pair_radius",
    "principal_axes",
    "quad_by_trace",
    "random_direction",
    "random_mixed",
    "random_pure",
    "random_settings",
    "scan_random_directions",
    "scan_star",
    "scene_report",
    "schmidt_pure",
    "solve_image_magnitudes",
    "stream_id",
    "summarize",
    "variances",
    "verify_run",
    "verify_sample",
    "vertex_delta",
]
