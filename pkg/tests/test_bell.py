"""Form operators, expectations, and the two classical bounds."""
import math

import numpy as np
import pytest

from chsh_tradeoff import bell, states
from chsh_tradeoff.errors import BadIndex
from chsh_tradeoff.geometry import Direction, Settings, random_settings
from chsh_tradeoff.rng import PhiloxStream

from helpers import (
    bell_operator_np,
    correlation_tensor_np,
    np2,
    np4,
    observable_np,
)

ROOT8 = 2.0 * math.sqrt(2.0)


def test_bounds():
    assert bell.LHV_BOUND == 2.0
    assert bell.TSIRELSON_BOUND == ROOT8


def test_observable_matches_numpy():
    rng = PhiloxStream(1, 0)
    for _ in range(20):
        v = rng.unit3()
        n = Direction(*v)
        assert np.max(np.abs(np2(bell.observable(n)) - observable_np(n))) < 1e-15


def test_observable_squares_to_identity():
    n = Direction.normalized(0.2, -0.7, 0.4)
    o = observable_np(n)
    assert np.max(np.abs(o @ o - np.eye(2))) < 1e-15


def test_bell_operator_matches_numpy():
    rng = PhiloxStream(2, 0)
    for _ in range(25):
        s = random_settings(rng)
        for mu in range(4):
            got = np4(bell.bell_operator(mu, s))
            assert np.max(np.abs(got - bell_operator_np(mu, s))) < 1e-14


def test_form_signs_single_minus():
    # each form flips exactly one of the four correlators
    for mu, g in enumerate(bell.FORM_SIGNS):
        assert sorted(g) == [-1, 1, 1, 1]
        assert g.count(-1) == 1
        assert g.index(-1) == (3, 0, 1, 2)[mu]


def test_quad_by_trace_matches_numpy():
    rng = PhiloxStream(3, 0)
    for _ in range(20):
        rho = states.random_mixed(rng, 4)
        s = random_settings(rng)
        q = bell.quad_by_trace(rho, s)
        for mu in range(4):
            want = np.trace(np4(rho.entries) @ bell_operator_np(mu, s)).real
            assert q[mu] == pytest.approx(want, abs=1e-12)


def test_correlation_tensor_matches_numpy():
    rng = PhiloxStream(4, 0)
    for rank in (1, 2, 3, 4):
        rho = states.random_mixed(rng, rank)
        t = bell.correlation_tensor(rho)
        want = correlation_tensor_np(rho)
        assert np.max(np.abs(np.array(t.entries).reshape(3, 3) - want)) < 1e-12


def test_schmidt_tensor_closed_form():
    th = 0.7
    t = bell.correlation_tensor(states.schmidt_pure(th))
    s2 = math.sin(2.0 * th)
    want = np.diag([s2, -s2, 1.0])
    assert np.max(np.abs(np.array(t.entries).reshape(3, 3) - want)) < 1e-12


def test_tensor_validation():
    with pytest.raises(ValueError):
        bell.CorrelationTensor((0.0,) * 8)
    with pytest.raises(ValueError):
        bell.CorrelationTensor((1.5,) + (0.0,) * 8)


def test_tensor_matvec():
    t = bell.CorrelationTensor(tuple(x / 10.0 for x in range(9)))
    v = Direction.normalized(1.0, 2.0, 3.0)
    want = np.array(t.entries).reshape(3, 3) @ np.array(v.as_tuple())
    assert np.max(np.abs(np.array(t.matvec(v)) - want)) < 1e-15


def test_i0_by_tensor_agrees_with_trace():
    rng = PhiloxStream(5, 0)
    for _ in range(50):
        rho = states.random_mixed(rng, 4)
        s = random_settings(rng)
        t = bell.correlation_tensor(rho)
        assert bell.i0_by_tensor(t, s) == pytest.approx(
            bell.quad_by_trace(rho, s).i0, abs=1e-11
        )


def test_horodecki_matches_numpy_svd():
    rng = PhiloxStream(6, 0)
    for rank in (1, 2, 3, 4):
        rho = states.random_mixed(rng, rank)
        t = bell.correlation_tensor(rho)
        sv = np.linalg.svd(np.array(t.entries).reshape(3, 3), compute_uv=False)
        want = 2.0 * math.sqrt(sv[0] ** 2 + sv[1] ** 2)
        assert bell.horodecki_value(t) == pytest.approx(want, abs=1e-10)


def test_horodecki_isotropic_closed_form():
    # T = V diag(sin 2t, -sin 2t, 1), so the value is 2 V sqrt(1 + sin^2 2t)
    for v, th in [(1.0, math.pi / 4), (0.5, math.pi / 4), (0.8, 0.3)]:
        t = bell.correlation_tensor(states.isotropic(v, th))
        want = 2.0 * v * math.sqrt(1.0 + math.sin(2.0 * th) ** 2)
        assert bell.horodecki_value(t) == pytest.approx(want, abs=1e-12)


def test_lhv_max_exact():
    for mu in range(4):
        assert bell.lhv_max(mu) == 2.0
    with pytest.raises(BadIndex):
        bell.lhv_max(4)
    with pytest.raises(BadIndex):
        bell.lhv_max(-1)


def test_optimize_settings_bell_state():
    rho = states.schmidt_pure(math.pi / 4)
    for mu in range(4):
        s, value = bell.optimize_settings(rho, mu, PhiloxStream(11, mu))
        assert value == pytest.approx(ROOT8, abs=1e-6)
        q = bell.quad_by_trace(rho, s)
        assert q[mu] == pytest.approx(value, abs=1e-12)


def test_optimize_settings_product_state():
    rho = states.schmidt_pure(0.0)
    _, value = bell.optimize_settings(rho, 0, PhiloxStream(12, 0))
    assert value == pytest.approx(2.0, abs=1e-6)
    assert value <= 2.0 + 1e-9


def test_optimize_settings_deterministic():
    rho = states.random_mixed(PhiloxStream(13, 0), 3)
    s1, v1 = bell.optimize_settings(rho, 1, PhiloxStream(14, 9))
    s2, v2 = bell.optimize_settings(rho, 1, PhiloxStream(14, 9))
    assert v1 == v2
    assert s1.flat() == s2.flat()
    # the caller's cursor is not consumed: the stream is replayed by name
    rng = PhiloxStream(14, 9)
    bell.optimize_settings(rho, 1, rng)
    assert rng.pos == 0


def test_optimize_settings_reaches_horodecki():
    rng = PhiloxStream(15, 0)
    for i in range(10):
        rho = states.random_mixed(rng, 1 + i % 4)
        t = bell.correlation_tensor(rho)
        hor = bell.horodecki_value(t)
        _, value = bell.optimize_settings(rho, 0, PhiloxStream(16, i))
        assert value <= hor + 1e-9
        assert value == pytest.approx(hor, abs=1e-5)


def test_optimize_settings_rejects_bad_index():
    rho = states.maximally_mixed()
    with pytest.raises(BadIndex):
        bell.optimize_settings(rho, 7, PhiloxStream(1, 0))
