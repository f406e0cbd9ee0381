"""linalg against numpy on the same inputs."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chsh_tradeoff import linalg
from chsh_tradeoff.errors import NotHermitian, NotSymmetric

from helpers import np2, np4, flat16

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


def _rand2(gen):
    m = gen.normal(size=(2, 2)) + 1j * gen.normal(size=(2, 2))
    return tuple(complex(z) for z in m.reshape(4))


def _rand4(gen):
    m = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
    return flat16(m)


def test_pauli_algebra():
    for p in linalg.PAULI:
        assert linalg.matmul2(p, p) == linalg.IDENTITY2
    # sigma_x sigma_y = i sigma_z and cyclic
    sx, sy, sz = linalg.PAULI
    assert linalg.matmul2(sx, sy) == tuple(1j * z for z in sz)
    assert linalg.matmul2(sy, sz) == tuple(1j * z for z in sx)
    assert linalg.matmul2(sz, sx) == tuple(1j * z for z in sy)
    for p in linalg.PAULI:
        assert linalg.trace2(p) == 0


def test_kron_matches_numpy():
    gen = np.random.default_rng(10)
    for _ in range(50):
        a, b = _rand2(gen), _rand2(gen)
        got = np4(linalg.kron(a, b))
        want = np.kron(np2(a), np2(b))
        assert np.max(np.abs(got - want)) < 1e-14


def test_matmul_trace_dagger_match_numpy():
    gen = np.random.default_rng(11)
    for _ in range(50):
        a, b = _rand4(gen), _rand4(gen)
        assert np.max(np.abs(np4(linalg.matmul4(a, b)) - np4(a) @ np4(b))) < 1e-12
        assert abs(linalg.trace4(a) - np.trace(np4(a))) < 1e-13
        assert np.max(np.abs(np4(linalg.dagger4(a)) - np4(a).conj().T)) == 0.0
        a2, b2 = _rand2(gen), _rand2(gen)
        assert np.max(np.abs(np2(linalg.matmul2(a2, b2)) - np2(a2) @ np2(b2))) < 1e-13
        assert np.max(np.abs(np2(linalg.dagger2(a2)) - np2(a2).conj().T)) == 0.0


def test_add_sub_scale():
    gen = np.random.default_rng(12)
    a, b = _rand4(gen), _rand4(gen)
    assert np.max(np.abs(np4(linalg.add4(a, b)) - (np4(a) + np4(b)))) == 0.0
    assert np.max(np.abs(np4(linalg.sub4(a, b)) - (np4(a) - np4(b)))) == 0.0
    s = 2.5 - 0.5j
    assert np.max(np.abs(np4(linalg.scale4(s, a)) - s * np4(a))) < 1e-14


def test_max_abs4():
    m = (0j, 3 + 4j, 0j, 0j) + (0j,) * 12
    assert linalg.max_abs4(m) == 5.0
    gen = np.random.default_rng(13)
    a = _rand4(gen)
    assert linalg.max_abs4(a) == pytest.approx(np.max(np.abs(np4(a))), abs=1e-15)


def test_hermitian_eigenvalues_vs_numpy():
    gen = np.random.default_rng(14)
    for _ in range(40):
        m = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
        h = m + m.conj().T
        got = linalg.hermitian_eigenvalues(flat16(h))
        want = np.linalg.eigvalsh(h)  # ascending, same as ours
        assert np.max(np.abs(np.array(got) - want)) < 1e-10


def test_hermitian_eigenvalues_rejects():
    bad = flat16(np.diag([1.0, 2.0, 3.0, 4.0]) + 1e-6 * np.triu(np.ones((4, 4)), 1) * 1j)
    with pytest.raises(NotHermitian):
        linalg.hermitian_eigenvalues(bad)


def test_sym3_eigenvalues_vs_numpy():
    gen = np.random.default_rng(15)
    for _ in range(40):
        m = gen.normal(size=(3, 3))
        s = m + m.T
        got = linalg.sym3_eigenvalues(tuple(s.reshape(9)))
        want = np.linalg.eigvalsh(s)[::-1]  # ours are descending
        assert np.max(np.abs(np.array(got) - want)) < 1e-10
    with pytest.raises(NotSymmetric):
        linalg.sym3_eigenvalues((1.0, 0.5, 0.0, 0.4, 1.0, 0.0, 0.0, 0.0, 1.0))


def test_hermiticity_defect():
    gen = np.random.default_rng(16)
    m = gen.normal(size=(4, 4)) + 1j * gen.normal(size=(4, 4))
    h = m + m.conj().T
    assert linalg.hermiticity_defect(flat16(h)) < 1e-15
    assert linalg.hermiticity_defect(flat16(h + 1e-3j * np.eye(4))) == pytest.approx(
        2e-3, rel=1e-9
    )


def test_constructors_validate():
    flat = linalg.complex_matrix2([[1, 0], [0, 1]])
    assert flat == linalg.complex_matrix2([1, 0, 0, 1])
    with pytest.raises(ValueError):
        linalg.complex_matrix2([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValueError):
        linalg.complex_matrix2([[float("nan"), 0], [0, 1]])
    with pytest.raises(ValueError):
        linalg.complex_matrix4([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        linalg.real_matrix3([[1, 0], [0, 1]])


@given(st.lists(finite, min_size=16, max_size=16))
def test_eigenvalue_sum_is_trace(vals):
    m = np.array(vals).reshape(4, 4) + 1j * np.array(vals[::-1]).reshape(4, 4)
    h = m + m.conj().T
    eig = linalg.hermitian_eigenvalues(flat16(h))
    assert sum(eig) == pytest.approx(np.trace(h).real, abs=1e-9 * max(1.0, np.abs(h).max()))


@given(st.lists(finite, min_size=9, max_size=9))
def test_sym3_descending(vals):
    m = np.array(vals).reshape(3, 3)
    s = m + m.T
    eig = linalg.sym3_eigenvalues(tuple(s.reshape(9)))
    assert eig[0] >= eig[1] >= eig[2]
