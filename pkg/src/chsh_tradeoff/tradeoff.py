"""Tradeoff machinery: pair radii, operator identities, the bounding
ellipse, and second-moment sums.

The headline fact is that for any two-qubit state and any arrangement at
most one of the four CHSH forms can be violated: every pair of expectations
satisfies i_mu^2 + i_nu^2 <= 8, a circle of radius 2 sqrt(2).  The proof
route implemented here bounds the point (i0, i1) by an ellipse

    A x^2 + B y^2 + 2 C x y <= r^2

built from five scene angles, rotates it to principal axes, and shows the
major squared semi-axis V^2 = 8 - 2 Delta never exceeds 8.  The same
operators obey exact algebraic identities (I0^2 + I2^2 = 8) that give the
circle directly, so the two routes cross-check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import linalg
from ._backend import impl as _impl
from .bell import BellQuad, bell_operator, correlation_tensor, observable, quad_by_trace
from .errors import (
    BadIndex,
    BadInterval,
    ChshError,
    DegenerateBob,
    DegenerateEllipse,
    NoBranch,
    SameIndex,
    SingularSystem,
)
from .geometry import Direction, ImageFrame, Settings
from .rng import PhiloxStream
from .states import DensityMatrix

# interval slack when validating recovered rotation angles; matches the
# branch-recovery tolerance in the angle pipeline
_INTERVAL_SLACK = 1e-9


class EllipseCoeffs(NamedTuple):
    u: float
    v: float
    a: float
    b: float
    c: float
    r2: float


class PrincipalAxes(NamedTuple):
    a_rot: float
    b_rot: float
    xi: float
    parity: str
    u2: float
    v2: float


class DeltaGap(NamedTuple):
    gap: float
    gap_sq: float
    v2: float


class VarianceReport(NamedTuple):
    """Variances of the first two forms and the sum of their second
    moments; var0, var1 >= 0 and m2sum <= 16 always."""

    var0: float
    var1: float
    m2sum: float


@dataclass(frozen=True)
class EllipseCase:
    """One fully derived bounding-ellipse scene.

    Angles are radians; everything else is dimensionless.  Invariants
    (asserted by the verification flows, not the constructor): (u, v) falls
    in the admissible box of (alpha, alphap, beta); quad_a, quad_b >= 0;
    a_rot * b_rot = quad_a * quad_b - quad_c^2 within 1e-10; v2 <= 8 + 1e-9.
    """

    alpha: float
    alphap: float
    beta: float
    delta: float
    deltap: float
    theta: float
    u: float
    v: float
    quad_a: float
    quad_b: float
    quad_c: float
    r2: float
    xi: float
    parity: str
    a_rot: float
    b_rot: float
    u2: float
    v2: float
    gap: float
    gap_sq: float


@dataclass(frozen=True)
class SceneReport:
    """EllipseCase plus the measured point and its containment data.

    solved_magnitude / solved_magnitudep are the image magnitudes
    reconstructed from (i0, i1); None when the linear system is singular
    (the quadratic-form containment check needs no division and is still
    performed).
    """

    case: EllipseCase
    quad: BellQuad
    image: ImageFrame
    imagep: ImageFrame
    solved_magnitude: float | None
    solved_magnitudep: float | None
    singular: bool
    form_value: float
    contained: bool


def pair_radius(q: BellQuad, mu: int, nu: int) -> float:
    """Squared distance from the origin in the (i_mu, i_nu) plane.

    The tradeoff theorem caps this at 8 for mu != nu; verification flows
    assert that, this function just computes.
    """
    for idx in (mu, nu):
        if idx not in (0, 1, 2, 3):
            raise BadIndex(f"form index {idx!r} outside 0..3")
    if mu == nu:
        raise SameIndex(f"pair needs two distinct forms, got ({mu}, {nu})")
    return q[mu] * q[mu] + q[nu] * q[nu]


def _commutator2(a, b):
    ab = linalg.matmul2(a, b)
    ba = linalg.matmul2(b, a)
    return (ab[0] - ba[0], ab[1] - ba[1], ab[2] - ba[2], ab[3] - ba[3])


def operator_identity_residuals(s: Settings) -> tuple[float, float, float]:
    """Max-entry residuals of the three operator identities, for any
    arrangement:

        I0^2 + I2^2 = 8 * identity
        I0^2 + I3^2 = 8 * identity
        I0^2 = 4 * identity - [A1, A2] (x) [B1, B2]

    All three are exact, so the residuals are rounding-level (<= 1e-12).
    """
    op0 = bell_operator(0, s)
    op2 = bell_operator(2, s)
    op3 = bell_operator(3, s)
    sq0 = linalg.matmul4(op0, op0)
    sq2 = linalg.matmul4(op2, op2)
    sq3 = linalg.matmul4(op3, op3)
    eight = linalg.scale4(complex(8.0, 0.0), linalg.IDENTITY4)
    four = linalg.scale4(complex(4.0, 0.0), linalg.IDENTITY4)
    r02 = linalg.max_abs4(linalg.sub4(linalg.add4(sq0, sq2), eight))
    r03 = linalg.max_abs4(linalg.sub4(linalg.add4(sq0, sq3), eight))
    comm = linalg.kron(
        _commutator2(observable(s.a1), observable(s.a2)),
        _commutator2(observable(s.b1), observable(s.b2)),
    )
    rcomm = linalg.max_abs4(linalg.add4(linalg.sub4(sq0, four), comm))
    return (r02, r03, rcomm)


def _check_rotation_interval(name: str, value: float, opening: float) -> None:
    if value < -_INTERVAL_SLACK or value > 2.0 * opening + _INTERVAL_SLACK:
        raise BadInterval(
            f"{name} = {value!r} outside [0, {2.0 * opening!r}]"
        )


def _check_box(name: str, value: float, lo: float, hi: float) -> None:
    if value < lo - _INTERVAL_SLACK or value > hi + _INTERVAL_SLACK:
        raise BadInterval(
            f"{name} = {value!r} outside the admissible box [{lo!r}, {hi!r}]"
        )


def ellipse_coeffs(
    alpha: float, alphap: float, beta: float, delta: float, deltap: float
) -> EllipseCoeffs:
    """Quadratic-form data of the bounding ellipse.

    u = cos(alpha + beta - delta), v = cos(alphap + beta - deltap),
    A = u^2 + v^2, B = cos^2 alpha + cos^2 alphap, C = u cos(alphap)
    - v cos(alpha), and r^2 is the squared four-cosine sum.

    The rotation angles must lie in their geometric intervals [0, 2 alpha]
    and [0, 2 alphap], and the cosines they induce must stay inside the
    admissible box of (alpha, alphap, beta): a delta inside its interval
    can still push u past a cosine extremum, and no directions realize such
    a tuple (the bound genuinely fails there).  Raises BadInterval naming
    the constraint that failed.
    """
    _check_rotation_interval("delta", delta, alpha)
    _check_rotation_interval("deltap", deltap, alphap)
    co = EllipseCoeffs(*_impl.ellipse_coeffs_raw(alpha, alphap, beta, delta, deltap))
    box = _impl.ellipse_box(alpha, alphap, beta)
    _check_box("u", co.u, box[0], box[1])
    _check_box("v", co.v, box[2], box[3])
    return co


def principal_axes(
    a: float, b: float, c: float, r2: float, parity: str = "even"
) -> PrincipalAxes:
    """Rotate the quadratic form to principal axes.

    Both branches of 2 xi + eta = k pi kill the cross term; they differ by
    a quarter turn, which swaps the two principal coefficients.  The even
    branch puts the smaller coefficient at b_rot, making v2 = r2 / b_rot
    the squared major semi-axis.  u2 = r2 / a_rot likewise.

    Raises DegenerateEllipse when an axis coefficient underflows (< 1e-14)
    while r2 > 0: the region is unbounded in that direction and the squared
    semi-axis has no finite value.
    """
    if a < 0.0 or b < 0.0 or r2 < 0.0:
        raise ValueError("quadratic form pieces must be nonnegative")
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    ax = _impl.axes_raw(a, b, c)
    if parity == "even":
        a_rot, b_rot, xi = ax[2], ax[3], ax[4]
    else:
        a_rot, b_rot, xi = ax[5], ax[6], ax[7]
    out = []
    for coeff in (a_rot, b_rot):
        if coeff < 1e-14:
            if r2 > 0.0:
                raise DegenerateEllipse(
                    f"axis coefficient {coeff!r} with r2 = {r2!r}"
                )
            out.append(0.0)
        else:
            out.append(r2 / coeff)
    return PrincipalAxes(a_rot, b_rot, xi, parity, out[0], out[1])


def delta_gap(
    alpha: float, alphap: float, beta: float, delta: float, deltap: float
) -> DeltaGap:
    """Tradeoff slack of a scene, without building the ellipse.

    gap = L - R with L = 2 - u^2 - v^2 + sin^2 alpha + sin^2 alphap and R
    the two-norm product; gap_sq = L^2 - R^2 is the polynomial form that is
    provably nonnegative; v2 = 8 - 2 gap equals the principal-axes route's
    v2 (even parity) to 1e-9.
    """
    g = _impl.gap_raw(alpha, alphap, beta, delta, deltap)
    return DeltaGap(g[2], g[3], g[4])


def vertex_delta(alpha: float, alphap: float, beta: float, x: int, y: int) -> float:
    """gap_sq evaluated at a corner of the admissible box.

    x, y in {0, 1} pick the cosine branch per axis; the closed form
    [cos(2 s_x alpha + beta) + cos(2 s_y alphap + beta) - 2 cos beta]^2 is
    manifestly nonnegative, which (with convexity of the comparison in
    (u, v)) proves the gap nonnegative everywhere.
    """
    if x not in (0, 1) or y not in (0, 1):
        raise BadIndex(f"vertex bits must be 0 or 1, got ({x!r}, {y!r})")
    return _impl.vertex_raw(alpha, alphap, beta, x, y)


def solve_image_magnitudes(
    theta: float, alpha: float, alphap: float, u: float, v: float,
    i0: float, i1: float,
) -> tuple[float, float]:
    """Invert the linear system tying (i0, i1) to the image magnitudes.

    The first two forms read, in the midframe,

        i0 = 2 [ D cos(alpha) cos(theta) + D' cos(alphap) sin(theta) ]
        i1 = 2 [ D v cos(theta) - D' u sin(theta) ]

    whose solution is

        D  = (u i0 + cos(alphap) i1) / (2 cos(theta) (u cos(alpha) + v cos(alphap)))
        D' = (v i0 - cos(alpha)  i1) / (2 sin(theta) (u cos(alpha) + v cos(alphap)))

    Raises SingularSystem when |cos(theta) sin(theta) (u cos(alpha)
    + v cos(alphap))| < 1e-12; physical magnitudes satisfy |D|, |D'| <= 1.
    """
    ca = math.cos(alpha)
    cap = math.cos(alphap)
    ct = math.cos(theta)
    st = math.sin(theta)
    den = u * ca + v * cap
    if math.fabs(ct * st * den) < 1e-12:
        raise SingularSystem(
            f"determinant factor {ct * st * den!r} below 1e-12"
        )
    big = (u * i0 + cap * i1) / (2.0 * ct * den)
    bigp = (v * i0 - ca * i1) / (2.0 * st * den)
    return (big, bigp)


_SCENE_ERRORS = {
    1: (DegenerateBob, "b1 and b2 are parallel or antiparallel"),
    2: (NoBranch, "no rotation branch reproduces the measured cosine"),
    3: (DegenerateEllipse, "axis coefficient underflow with r2 > 0"),
}


def _scene(rho: DensityMatrix, s: Settings):
    raw = _impl.scene_raw(rho.entries, s.flat())
    status = int(raw[0])
    if status != 0:
        err, msg = _SCENE_ERRORS[status]
        raise err(msg)
    return raw


def _case_from_raw(raw) -> EllipseCase:
    return EllipseCase(
        alpha=raw[10], alphap=raw[11], beta=raw[12],
        delta=raw[13], deltap=raw[14], theta=raw[1],
        u=raw[15], v=raw[16],
        quad_a=raw[17], quad_b=raw[18], quad_c=raw[19], r2=raw[20],
        xi=raw[21], parity="even", a_rot=raw[22], b_rot=raw[23],
        u2=raw[24], v2=raw[25],
        gap=raw[28], gap_sq=raw[29],
    )


def scene_report(rho: DensityMatrix, s: Settings) -> SceneReport:
    """Derive the full scene: ellipse case, measured quad, image frames,
    reconstructed magnitudes, and the containment verdict.

    Containment is the division-free form A i0^2 + B i1^2 + 2 C i0 i1
    <= r^2 (1 + 1e-9) + 1e-12, well defined even when the ellipse
    degenerates toward a segment.  Raises DegenerateBob / NoBranch /
    DegenerateEllipse when the scene has no derivable ellipse.
    """
    raw = _scene(rho, s)
    case = _case_from_raw(raw)
    singular = raw[35] != 0.0
    return SceneReport(
        case=case,
        quad=BellQuad(raw[31], raw[32], raw[33], raw[34]),
        image=ImageFrame(raw[2], Direction(raw[3], raw[4], raw[5]), raw[2] < 1e-12),
        imagep=ImageFrame(raw[6], Direction(raw[7], raw[8], raw[9]), raw[6] < 1e-12),
        solved_magnitude=None if singular else raw[36],
        solved_magnitudep=None if singular else raw[37],
        singular=singular,
        form_value=raw[38],
        contained=raw[39] != 0.0,
    )


def ellipse_case_from_scene(rho: DensityMatrix, s: Settings) -> EllipseCase:
    """scene_report reduced to the EllipseCase, with the containment
    contract enforced: the measured point must lie in the (inflated)
    ellipse and any reconstructed magnitude must satisfy |D| <= 1 + 1e-9.
    A breach would falsify the derivation, so it raises ChshError rather
    than returning quietly.
    """
    raw = _scene(rho, s)
    if raw[39] == 0.0:
        raise ChshError(
            f"containment breach: form value {raw[38]!r} vs r2 {raw[20]!r}"
        )
    if raw[35] == 0.0:
        for mag in (raw[36], raw[37]):
            if math.fabs(mag) > 1.0 + 1e-9:
                raise ChshError(f"image magnitude {mag!r} beyond 1")
    return _case_from_raw(raw)


def variances(rho: DensityMatrix, s: Settings) -> VarianceReport:
    """Variances of the first two forms by direct traces of I_mu and
    I_mu^2.  var_mu >= 0 up to rounding; each second moment is at most 8
    (operator identities), so m2sum <= 16.
    """
    q = quad_by_trace(rho, s)
    moments = []
    for mu in (0, 1):
        op = bell_operator(mu, s)
        sq = linalg.matmul4(op, op)
        moments.append(linalg.trace4(linalg.matmul4(rho.entries, sq)).real)
    return VarianceReport(
        var0=moments[0] - q.i0 * q.i0,
        var1=moments[1] - q.i1 * q.i1,
        m2sum=moments[0] + moments[1],
    )


def maximize_m2sum(rho: DensityMatrix, rng: PhiloxStream) -> tuple[Settings, float]:
    """Best arrangement for <I0^2> + <I1^2> = 8 + 8 (a1 x a2) . T (b1 x b2).

    Power iteration on T pushes the cross products onto the top singular
    pair (eight restarts replaying the stream named by the rng, like
    optimize_settings).  The maximum is 8 + 8 sigma_max(T): 16 for any
    state whose tensor has a unit singular value, which includes every
    Bell state and also pure product states.
    """
    t = correlation_tensor(rho)
    s12, value = _impl.msum_one(t.entries, rng.seed, rng.stream)
    return Settings.from_flat(s12), value
