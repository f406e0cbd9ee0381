"""The tradeoff pipeline: pair radii, operator identities, the bounding
ellipse, the gap route, and the second-moment optimizer."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chsh_tradeoff import bell, states, tradeoff
from chsh_tradeoff.errors import (
    BadIndex,
    BadInterval,
    DegenerateEllipse,
    SameIndex,
    SingularSystem,
)
from chsh_tradeoff.geometry import admissible_box, random_settings
from chsh_tradeoff.rng import PhiloxStream

from helpers import admissible_tuple, bell_operator_np, np4

ROOT8 = 2.0 * math.sqrt(2.0)

angle = st.floats(1e-3, math.pi - 1e-3)
frac = st.floats(0.0, 1.0)


def _tuple_from(alpha, alphap, beta, fu, fv):
    umin, umax, vmin, vmax = admissible_box(alpha, alphap, beta)
    u = umin + (umax - umin) * fu
    v = vmin + (vmax - vmin) * fv
    delta = alpha + beta - math.acos(max(-1.0, min(1.0, u)))
    deltap = alphap + beta - math.acos(max(-1.0, min(1.0, v)))
    return alpha, alphap, beta, delta, deltap


def test_pair_radius():
    q = bell.BellQuad(ROOT8, 0.0, 0.0, 0.0)
    assert tradeoff.pair_radius(q, 0, 1) == pytest.approx(8.0, rel=1e-15)
    assert tradeoff.pair_radius(bell.BellQuad(0, 0, 0, 0), 2, 3) == 0.0
    with pytest.raises(SameIndex):
        tradeoff.pair_radius(q, 1, 1)
    with pytest.raises(BadIndex):
        tradeoff.pair_radius(q, 0, 4)
    with pytest.raises(BadIndex):
        tradeoff.pair_radius(q, 5, 5)  # range is checked before equality


def test_identity_residuals_random_settings():
    rng = PhiloxStream(1, 0)
    for _ in range(50):
        r = tradeoff.operator_identity_residuals(random_settings(rng))
        assert max(r) <= 1e-12


def test_identity_commuting_bob():
    # b1 = b2 kills [B1, B2], so the first form squares to 4 exactly
    rng = PhiloxStream(2, 0)
    s0 = random_settings(rng)
    s = type(s0)(a1=s0.a1, a2=s0.a2, b1=s0.b1, b2=s0.b1)
    op = bell_operator_np(0, s)
    assert np.max(np.abs(op @ op - 4.0 * np.eye(4))) < 1e-12
    assert max(tradeoff.operator_identity_residuals(s)) <= 1e-12


def test_ellipse_coeffs_aligned():
    co = tradeoff.ellipse_coeffs(0.0, 0.0, 0.0, 0.0, 0.0)
    assert co == pytest.approx((1.0, 1.0, 2.0, 2.0, 0.0, 16.0), abs=1e-15)


def test_ellipse_coeffs_direct_cosine_oracle():
    rng = PhiloxStream(3, 0)
    for _ in range(200):
        alpha, alphap, beta, delta, deltap = admissible_tuple(rng)
        co = tradeoff.ellipse_coeffs(alpha, alphap, beta, delta, deltap)
        u = math.cos(alpha + beta - delta)
        v = math.cos(alphap + beta - deltap)
        ca, cap = math.cos(alpha), math.cos(alphap)
        assert co.u == pytest.approx(u, abs=1e-13)
        assert co.v == pytest.approx(v, abs=1e-13)
        assert co.a == pytest.approx(u * u + v * v, abs=1e-13)
        assert co.b == pytest.approx(ca * ca + cap * cap, abs=1e-13)
        assert co.c == pytest.approx(u * cap - v * ca, abs=1e-13)
        r = (
            math.cos(2.0 * alpha + beta - delta)
            + math.cos(2.0 * alphap + beta - deltap)
            + math.cos(beta - delta)
            + math.cos(beta - deltap)
        )
        assert co.r2 == pytest.approx(r * r, abs=1e-12)


def test_ellipse_coeffs_coplanar():
    rng = PhiloxStream(4, 0)
    for _ in range(50):
        alpha = rng.u01() * math.pi / 2
        alphap = rng.u01() * math.pi / 2
        beta = rng.u01() * (math.pi - max(alpha, alphap))
        co = tradeoff.ellipse_coeffs(alpha, alphap, beta, 0.0, 0.0)
        r = math.cos(2 * alpha + beta) + math.cos(2 * alphap + beta) + 2 * math.cos(beta)
        assert co.r2 == pytest.approx(r * r, abs=1e-12)


def test_ellipse_coeffs_rejects_out_of_interval():
    with pytest.raises(BadInterval):
        tradeoff.ellipse_coeffs(0.5, 0.5, 0.5, -0.1, 0.0)
    with pytest.raises(BadInterval):
        tradeoff.ellipse_coeffs(0.5, 0.5, 0.5, 1.2, 0.0)  # delta > 2 alpha
    with pytest.raises(BadInterval):
        tradeoff.ellipse_coeffs(0.5, 0.5, 0.5, 0.0, -0.1)


def test_ellipse_coeffs_rejects_out_of_box():
    # delta inside [0, 2 alpha] but past the cosine extremum: alpha + beta > pi
    # makes low deltas walk u out of the reachable band
    with pytest.raises(BadInterval):
        tradeoff.ellipse_coeffs(3 * math.pi / 4, 0.3, 3 * math.pi / 4, math.pi / 2, 0.1)


def test_principal_axes_diagonal():
    ax = tradeoff.principal_axes(3.0, 1.0, 0.0, 6.0)
    assert (ax.a_rot, ax.b_rot) == (3.0, 1.0)
    assert ax.xi == pytest.approx(0.0, abs=1e-15)
    assert ax.parity == "even"
    assert (ax.u2, ax.v2) == (2.0, 6.0)
    # A < B flips the rotation to land the big coefficient first
    ax = tradeoff.principal_axes(1.0, 3.0, 0.0, 6.0)
    assert (ax.a_rot, ax.b_rot) == (3.0, 1.0)
    assert abs(ax.xi) == pytest.approx(math.pi / 2, abs=1e-15)


def test_principal_axes_symmetric():
    ax = tradeoff.principal_axes(2.0, 2.0, 0.5, 1.0)
    assert ax.a_rot == pytest.approx(2.5, abs=1e-14)
    assert ax.b_rot == pytest.approx(1.5, abs=1e-14)
    assert abs(ax.xi) == pytest.approx(math.pi / 4, abs=1e-14)


def test_principal_axes_parity_branches():
    even = tradeoff.principal_axes(2.0, 1.0, 0.4, 5.0, parity="even")
    odd = tradeoff.principal_axes(2.0, 1.0, 0.4, 5.0, parity="odd")
    assert (odd.a_rot, odd.b_rot) == (even.b_rot, even.a_rot)
    assert odd.xi == pytest.approx(even.xi + math.pi / 2, abs=1e-14)
    assert even.v2 >= even.u2
    with pytest.raises(ValueError):
        tradeoff.principal_axes(2.0, 1.0, 0.4, 5.0, parity="both")


def test_principal_axes_substitution_oracle():
    gen = np.random.default_rng(30)
    for _ in range(50):
        a, b = gen.uniform(0.1, 4.0, size=2)
        c = gen.uniform(-1.0, 1.0) * math.sqrt(a * b) * 0.95  # keep it elliptic
        ax = tradeoff.principal_axes(a, b, c, 1.0)
        for _ in range(5):
            x, y = gen.uniform(-2.0, 2.0, size=2)
            orig = a * x * x + b * y * y + 2.0 * c * x * y
            cx, sx = math.cos(ax.xi), math.sin(ax.xi)
            rot = ax.a_rot * (cx * x - sx * y) ** 2 + ax.b_rot * (sx * x + cx * y) ** 2
            assert rot == pytest.approx(orig, abs=1e-11)


def test_principal_axes_determinant_preserved():
    gen = np.random.default_rng(31)
    for _ in range(100):
        a, b = gen.uniform(0.0, 3.0, size=2)
        c = gen.uniform(-1.0, 1.0) * math.sqrt(a * b)
        try:
            ax = tradeoff.principal_axes(a, b, c, 2.0)
        except DegenerateEllipse:
            continue
        assert ax.a_rot * ax.b_rot == pytest.approx(a * b - c * c, abs=1e-10)
        assert ax.a_rot >= ax.b_rot >= 0.0


def test_principal_axes_degenerate_and_invalid():
    with pytest.raises(DegenerateEllipse):
        tradeoff.principal_axes(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(DegenerateEllipse):
        tradeoff.principal_axes(1.0, 1.0, 2.0, 1.0)  # indefinite: B' < 0
    # r2 = 0 keeps the zero form representable
    ax = tradeoff.principal_axes(0.0, 0.0, 0.0, 0.0)
    assert (ax.u2, ax.v2) == (0.0, 0.0)
    with pytest.raises(ValueError):
        tradeoff.principal_axes(-1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        tradeoff.principal_axes(1.0, 1.0, 0.0, -1.0)


def test_delta_gap_aligned():
    g = tradeoff.delta_gap(0.0, 0.0, 0.0, 0.0, 0.0)
    assert g.gap == pytest.approx(0.0, abs=1e-14)
    assert g.gap_sq == pytest.approx(0.0, abs=1e-14)
    assert g.v2 == pytest.approx(8.0, abs=1e-13)


def test_delta_gap_quadratic_identity():
    # L^2 - R^2 collapses to 4 (Rbar^2 - Q) with the double-primed
    # coefficients; the factor 4 is exact (L + R and L - R each carry a 2)
    rng = PhiloxStream(5, 0)
    for _ in range(300):
        alpha, alphap, beta, delta, deltap = admissible_tuple(rng)
        g = tradeoff.delta_gap(alpha, alphap, beta, delta, deltap)
        u = math.cos(alpha + beta - delta)
        v = math.cos(alphap + beta - deltap)
        ca, cap = math.cos(alpha), math.cos(alphap)
        app = 2.0 - ca * ca
        bpp = 2.0 - cap * cap
        cpp = -ca * cap
        rbar2 = 4.0 - 2.0 * ca * ca - 2.0 * cap * cap
        q = app * u * u + bpp * v * v + 2.0 * cpp * u * v
        assert g.gap_sq == pytest.approx(4.0 * (rbar2 - q), abs=1e-11)


def test_delta_gap_never_validates():
    # the gap route is pure arithmetic; rotations outside the reachable band
    # simply produce a negative certificate instead of raising
    g = tradeoff.delta_gap(3 * math.pi / 4, 0.3, 3 * math.pi / 4, math.pi / 2, 0.1)
    assert g.gap_sq < 0.0


def test_vertex_delta_closed_form():
    assert tradeoff.vertex_delta(0.0, 0.0, 1.0, 0, 0) == 0.0
    want = (math.cos(math.pi / 2) + math.cos(math.pi / 2) - 2.0) ** 2
    assert tradeoff.vertex_delta(math.pi / 4, math.pi / 4, 0.0, 0, 0) == pytest.approx(
        want, abs=1e-12
    )
    with pytest.raises(BadIndex):
        tradeoff.vertex_delta(0.5, 0.6, 0.7, 2, 0)
    with pytest.raises(BadIndex):
        tradeoff.vertex_delta(0.5, 0.6, 0.7, 0, -1)


def test_vertex_delta_matches_gap_route():
    # the four corners of the box are delta in {0, 2 alpha} x {0, 2 alpha'}
    rng = PhiloxStream(6, 0)
    for _ in range(100):
        alpha = rng.u01() * math.pi
        alphap = rng.u01() * math.pi
        beta = rng.u01() * math.pi
        for x in (0, 1):
            for y in (0, 1):
                want = tradeoff.vertex_delta(alpha, alphap, beta, x, y)
                g = tradeoff.delta_gap(
                    alpha, alphap, beta, 2.0 * alpha * x, 2.0 * alphap * y
                )
                assert g.gap_sq == pytest.approx(want, abs=1e-10)
                assert want >= -1e-10


def test_solve_image_magnitudes_round_trip():
    rng = PhiloxStream(7, 0)
    done = 0
    while done < 100:
        alpha = rng.u01() * math.pi
        alphap = rng.u01() * math.pi
        theta = rng.u01() * math.pi / 2
        u = 2.0 * rng.u01() - 1.0
        v = 2.0 * rng.u01() - 1.0
        big = 2.0 * rng.u01() - 1.0
        bigp = 2.0 * rng.u01() - 1.0
        ca, cap = math.cos(alpha), math.cos(alphap)
        den = u * ca + v * cap
        if abs(den) < 0.1 or abs(math.sin(theta) * math.cos(theta)) < 0.05:
            continue
        i0 = 2.0 * (big * ca * math.cos(theta) + bigp * cap * math.sin(theta))
        i1 = 2.0 * (big * v * math.cos(theta) - bigp * u * math.sin(theta))
        got = tradeoff.solve_image_magnitudes(theta, alpha, alphap, u, v, i0, i1)
        assert got[0] == pytest.approx(big, abs=1e-10)
        assert got[1] == pytest.approx(bigp, abs=1e-10)
        done += 1


def test_solve_image_magnitudes_singular():
    with pytest.raises(SingularSystem):
        tradeoff.solve_image_magnitudes(0.0, 0.5, 0.5, 0.3, 0.4, 1.0, 1.0)


def test_scene_report_bell_optimal():
    rho = states.schmidt_pure(math.pi / 4)
    s, value = bell.optimize_settings(rho, 0, PhiloxStream(8, 0))
    rep = tradeoff.scene_report(rho, s)
    assert rep.quad.i0 == pytest.approx(ROOT8, abs=1e-6)
    assert abs(rep.quad.i1) <= 1e-6
    assert rep.contained
    # the optimum parks both cross cosines at zero, so the magnitude
    # inversion is degenerate exactly there; the point is still checked
    assert rep.singular
    assert rep.solved_magnitude is None and rep.solved_magnitudep is None
    assert rep.case.v2 <= 8.0 + 1e-9


def test_scene_report_generic_pure():
    rng = PhiloxStream(20, 0)
    rep = None
    while rep is None or rep.singular:
        rep = tradeoff.scene_report(states.random_pure(rng), random_settings(rng))
    assert rep.contained
    assert abs(rep.solved_magnitude) <= 1.0 + 1e-9
    assert abs(rep.solved_magnitudep) <= 1.0 + 1e-9


def test_scene_report_maximally_mixed():
    s = random_settings(PhiloxStream(9, 0))
    rep = tradeoff.scene_report(states.maximally_mixed(), s)
    assert rep.quad == pytest.approx((0.0, 0.0, 0.0, 0.0), abs=1e-14)
    assert rep.contained


def test_ellipse_case_invariants():
    rng = PhiloxStream(10, 0)
    for _ in range(100):
        rho = states.random_pure(rng)
        s = random_settings(rng)
        case = tradeoff.ellipse_case_from_scene(rho, s)
        assert 0.0 <= case.theta <= math.pi / 2 + 1e-12
        assert case.parity == "even"
        assert case.quad_a >= 0.0 and case.quad_b >= 0.0
        assert case.a_rot * case.b_rot == pytest.approx(
            case.quad_a * case.quad_b - case.quad_c * case.quad_c, abs=1e-10
        )
        umin, umax, vmin, vmax = admissible_box(case.alpha, case.alphap, case.beta)
        assert umin - 1e-9 <= case.u <= umax + 1e-9
        assert vmin - 1e-9 <= case.v <= vmax + 1e-9
        assert case.v2 <= 8.0 + 1e-9
        assert case.gap_sq >= -1e-10


def test_variances_bell_optimal():
    rho = states.schmidt_pure(math.pi / 4)
    s, _ = bell.optimize_settings(rho, 0, PhiloxStream(11, 0))
    rep = tradeoff.variances(rho, s)
    assert rep.var0 == pytest.approx(0.0, abs=1e-10)  # eigenstate of the form
    assert rep.var1 >= -1e-10
    assert rep.m2sum <= 16.0 + 1e-9


def test_variances_maximally_mixed():
    s = random_settings(PhiloxStream(12, 0))
    rho = states.maximally_mixed()
    rep = tradeoff.variances(rho, s)
    q = bell.quad_by_trace(rho, s)
    assert rep.var0 == pytest.approx(rep.m2sum - rep.var1, abs=1e-12)
    assert q.i0 * q.i0 + q.i1 * q.i1 <= rep.m2sum + 1e-10


def test_variances_match_numpy():
    rng = PhiloxStream(13, 0)
    for _ in range(20):
        rho = states.random_mixed(rng, 4)
        s = random_settings(rng)
        rep = tradeoff.variances(rho, s)
        r = np4(rho.entries)
        moments = []
        for mu in (0, 1):
            op = bell_operator_np(mu, s)
            moments.append(np.trace(r @ (op @ op)).real)
        q = bell.quad_by_trace(rho, s)
        assert rep.var0 == pytest.approx(moments[0] - q.i0**2, abs=1e-11)
        assert rep.var1 == pytest.approx(moments[1] - q.i1**2, abs=1e-11)
        assert rep.m2sum == pytest.approx(moments[0] + moments[1], abs=1e-11)
        assert rep.var0 >= -1e-10 and rep.var1 >= -1e-10


def test_maximize_m2sum_bell():
    rho = states.schmidt_pure(math.pi / 4)
    s, value = tradeoff.maximize_m2sum(rho, PhiloxStream(14, 0))
    assert value == pytest.approx(16.0, abs=1e-6)
    assert value <= 16.0 + 1e-9
    assert tradeoff.variances(rho, s).m2sum == pytest.approx(value, abs=1e-9)


def test_maximize_m2sum_maximally_mixed():
    # zero tensor: the cross term dies and the sum pins at 8
    _, value = tradeoff.maximize_m2sum(states.maximally_mixed(), PhiloxStream(15, 0))
    assert value == pytest.approx(8.0, abs=1e-9)


def test_maximize_m2sum_product_state():
    # a product state still has a unit singular value (outer product of two
    # unit Bloch vectors), so the optimized sum reaches 16 even though the
    # first moments stay inside the classical square
    rho = states.schmidt_pure(0.0)
    _, value = tradeoff.maximize_m2sum(rho, PhiloxStream(16, 0))
    assert value == pytest.approx(16.0, abs=1e-6)


def test_maximize_m2sum_deterministic():
    rho = states.random_mixed(PhiloxStream(17, 0), 2)
    s1, v1 = tradeoff.maximize_m2sum(rho, PhiloxStream(18, 4))
    s2, v2 = tradeoff.maximize_m2sum(rho, PhiloxStream(18, 4))
    assert v1 == v2 and s1.flat() == s2.flat()


def test_mixture_point_is_convex_combination():
    rng = PhiloxStream(19, 0)
    a = states.random_mixed(rng, 2)
    b = states.random_mixed(rng, 3)
    s = random_settings(rng)
    m = states.mix([(0.3, a), (0.7, b)])
    qa, qb, qm = (bell.quad_by_trace(x, s) for x in (a, b, m))
    for mu in range(4):
        assert qm[mu] == pytest.approx(0.3 * qa[mu] + 0.7 * qb[mu], abs=1e-12)


@given(angle, angle, angle, frac, frac)
def test_pipeline_bounds_hold(alpha, alphap, beta, fu, fv):
    alpha, alphap, beta, delta, deltap = _tuple_from(alpha, alphap, beta, fu, fv)
    co = tradeoff.ellipse_coeffs(alpha, alphap, beta, delta, deltap)
    g = tradeoff.delta_gap(alpha, alphap, beta, delta, deltap)
    assert g.gap_sq >= -1e-10
    assert g.v2 <= 8.0 + 1e-9
    try:
        ax = tradeoff.principal_axes(co.a, co.b, co.c, co.r2)
    except DegenerateEllipse:
        return
    assert ax.v2 <= 8.0 + 1e-9
    assert abs(ax.v2 - g.v2) <= 1e-9
