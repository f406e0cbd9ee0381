"""Bit-level agreement between the pure and compiled kernel backends.

Every comparison here is exact equality on IEEE doubles, not approx: the
compiled module promises the same scalar-operation order as the reference,
so any drift is a bug in one of the twins.  The whole file is skipped when
the extension was not built.
"""
from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chsh_tradeoff import _kernels as pure
from chsh_tradeoff.rng import DOMAIN_USER, PhiloxStream, stream_id

fast = pytest.importorskip("chsh_tradeoff._fastcore")

angles = st.floats(min_value=0.0, max_value=math.pi, allow_nan=False)
reals = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def _stream(idx):
    return PhiloxStream(20250817, stream_id(DOMAIN_USER, idx))


def _rand_complex(rng, n):
    return tuple(complex(rng.normal(), rng.normal()) for _ in range(n))


def test_backend_tags():
    assert pure.BACKEND == "pure"
    assert fast.BACKEND == "cython"


# --------------------------------------------------------------------------
# draw protocols (stream replay and position bookkeeping)


def test_draw_protocols_match_bitwise():
    for idx in range(30):
        r1 = _stream(idx)
        r2 = r1.clone()
        assert pure._draw_settings(r1) == fast._draw_settings(r2)
        assert r1.pos == r2.pos
        assert pure._draw_pure(r1) == fast._draw_pure(r2)
        assert r1.pos == r2.pos
        for rank in (1, 2, 3, 4):
            assert pure._draw_mixed_weights(r1, rank) == fast._draw_mixed_weights(
                r2, rank
            )
        assert pure._draw_verify_state(r1) == fast._draw_verify_state(r2)
        assert r1.pos == r2.pos


# --------------------------------------------------------------------------
# dense linear algebra


def test_dense_complex_ops_match_bitwise():
    for idx in range(25):
        rng = _stream(200 + idx)
        a = _rand_complex(rng, 16)
        b = _rand_complex(rng, 16)
        assert pure.mat4_mul(a, b) == fast.mat4_mul(a, b)
        assert pure.mat4_trace(a) == fast.mat4_trace(a)
        u = _rand_complex(rng, 4)
        w = _rand_complex(rng, 4)
        assert pure.mat2_kron(u, w) == fast.mat2_kron(u, w)


def test_herm4_eigvals_match_bitwise():
    for idx in range(40):
        rng = _stream(300 + idx)
        ent = _rand_complex(rng, 16)
        m = []
        for i in range(4):
            for j in range(4):
                m.append(ent[4 * i + j] + ent[4 * j + i].conjugate())
        m = tuple(m)
        assert pure.herm4_eigvals(m) == fast.herm4_eigvals(m)


def test_sym3_eigvals_match_bitwise():
    for idx in range(40):
        rng = _stream(400 + idx)
        g = [rng.normal() for _ in range(6)]
        m = (g[0], g[1], g[2], g[1], g[3], g[4], g[2], g[4], g[5])
        assert pure.sym3_eigvals(m) == fast.sym3_eigvals(m)


# --------------------------------------------------------------------------
# expectation values


def test_state_pipeline_matches_bitwise():
    for idx in range(30):
        rng = _stream(500 + idx)
        rho = pure._draw_verify_state(rng)
        s = pure._draw_settings(rng)
        assert pure.quad_trace(rho, s) == fast.quad_trace(rho, s)
        tp = pure.corr_tensor(rho)
        assert tp == fast.corr_tensor(rho)
        t9 = tp[0]
        assert pure.i0_midframe(t9, s) == fast.i0_midframe(t9, s)
        assert pure.horodecki(t9) == fast.horodecki(t9)


# --------------------------------------------------------------------------
# frames and angles


def test_bobframe_matches_bitwise():
    for idx in range(40):
        rng = _stream(600 + idx)
        b1 = rng.unit3()
        b2 = rng.unit3()
        assert pure.bobframe(*b1, *b2) == fast.bobframe(*b1, *b2)
        # exact degenerate sides take the completion branches
        assert pure.bobframe(*b1, *b1) == fast.bobframe(*b1, *b1)
        neg = (-b1[0], -b1[1], -b1[2])
        assert pure.bobframe(*b1, *neg) == fast.bobframe(*b1, *neg)


def test_angle_kernels_match_bitwise():
    for idx in range(50):
        rng = _stream(700 + idx)
        rho = pure._draw_verify_state(rng)
        t9 = pure.corr_tensor(rho)[0]
        s = pure._draw_settings(rng)
        bf = pure.bobframe(s[6], s[7], s[8], s[9], s[10], s[11])
        im1 = pure.imageframe(t9, bf[0], bf[1], bf[2])
        im2 = pure.imageframe(t9, bf[3], bf[4], bf[5])
        assert im1 == fast.imageframe(t9, bf[0], bf[1], bf[2])
        assert im2 == fast.imageframe(t9, bf[3], bf[4], bf[5])
        args = (
            s[0], s[1], s[2], s[3], s[4], s[5],
            im1[1], im1[2], im1[3], im2[1], im2[2], im2[3],
        )
        assert pure.angletuple(*args) == fast.angletuple(*args)


def test_imageframe_collapsed_matches():
    z9 = (0.0,) * 9
    assert pure.imageframe(z9, 1.0, 0.0, 0.0) == fast.imageframe(z9, 1.0, 0.0, 0.0)


# --------------------------------------------------------------------------
# scalar geometry kernels (any finite input is fair game)


@given(angles, angles, angles, angles, angles)
def test_ellipse_and_gap_match_bitwise(alpha, alphap, beta, delta, deltap):
    assert pure.ellipse_box(alpha, alphap, beta) == fast.ellipse_box(
        alpha, alphap, beta
    )
    assert pure.ellipse_coeffs_raw(
        alpha, alphap, beta, delta, deltap
    ) == fast.ellipse_coeffs_raw(alpha, alphap, beta, delta, deltap)
    assert pure.gap_raw(alpha, alphap, beta, delta, deltap) == fast.gap_raw(
        alpha, alphap, beta, delta, deltap
    )
    for x in (0, 1):
        for y in (0, 1):
            assert pure.vertex_raw(alpha, alphap, beta, x, y) == fast.vertex_raw(
                alpha, alphap, beta, x, y
            )


@given(reals, reals, reals)
def test_axes_raw_matches_bitwise(a, b, c):
    assert pure.axes_raw(a, b, c) == fast.axes_raw(a, b, c)


# --------------------------------------------------------------------------
# full scenes


def test_scene_raw_matches_bitwise():
    n_ok = 0
    for idx in range(150):
        rng = _stream(800 + idx)
        rho = pure._draw_pure(rng)
        s = pure._draw_settings(rng)
        sp = pure.scene_raw(rho, s)
        assert sp == fast.scene_raw(rho, s)
        if sp[0] == 0.0:
            n_ok += 1
    # the sweep must mostly exercise the full pipeline, not error exits
    assert n_ok > 100


def test_scene_raw_sincos_fusion_canary():
    # this exact scene diverged by 1 ulp when the compiler fused paired
    # sin/cos calls into a single sincos; the build disables that rewrite
    # (-fno-builtin-sin/-cos) and this case guards against it coming back
    rng = PhiloxStream(7, stream_id(DOMAIN_USER, 33))
    rho = pure._draw_pure(rng)
    s = pure._draw_settings(rng)
    assert pure.scene_raw(rho, s) == fast.scene_raw(rho, s)


def test_scene_raw_degenerate_bob_matches():
    rng = _stream(950)
    rho = pure._draw_pure(rng)
    a1 = rng.unit3()
    a2 = rng.unit3()
    v = rng.unit3()
    s = a1 + a2 + v + v
    sp = pure.scene_raw(rho, s)
    assert sp[0] == float(pure.SCENE_DEGENERATE_BOB)
    assert sp == fast.scene_raw(rho, s)


def test_scene_raw_collapsed_tensor_matches():
    # maximally mixed state: both image frames collapse
    rho = tuple(complex(0.25, 0.0) if i % 5 == 0 else complex(0.0, 0.0) for i in range(16))
    rng = _stream(960)
    s = pure._draw_settings(rng)
    assert pure.scene_raw(rho, s) == fast.scene_raw(rho, s)


# --------------------------------------------------------------------------
# optimizers and batch kernels (replayed streams inside)


def test_optimizers_match_bitwise():
    for idx in range(3):
        rng = _stream(1000 + idx)
        rho = pure._draw_verify_state(rng)
        t9 = pure.corr_tensor(rho)[0]
        for mu in range(4):
            assert pure.optimize_one(t9, mu, 77, 5000 + idx) == fast.optimize_one(
                t9, mu, 77, 5000 + idx
            )
        assert pure.msum_one(t9, 77, 6000 + idx) == fast.msum_one(t9, 77, 6000 + idx)


def test_scan_batch_matches_bitwise():
    rho = pure._draw_verify_state(_stream(1100))
    assert pure.scan_batch(rho, 31337, 0, 40) == fast.scan_batch(rho, 31337, 0, 40)
    assert pure.scan_batch(rho, 31337, 17, 5) == fast.scan_batch(rho, 31337, 17, 5)


def test_verify_batch_matches_bitwise():
    assert pure.verify_batch(424242, 0, 60) == fast.verify_batch(424242, 0, 60)
    assert pure.verify_batch(424242, 1000, 25) == fast.verify_batch(424242, 1000, 25)


def test_star_batch_matches_bitwise():
    for quarter in range(4):
        assert pure.star_batch(99, 5, quarter, 1, 2) == fast.star_batch(
            99, 5, quarter, 1, 2
        )
