"""Shared test utilities.

Everything here recomputes package quantities through an independent route
(numpy, direct trigonometry) so the modules under test never get to check
themselves.
"""
import math

import numpy as np

from chsh_tradeoff.geometry import Settings, admissible_box
from chsh_tradeoff.states import DensityMatrix

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_NP = (SX, SY, SZ)

# sign placements of the four equivalent forms, one minus each,
# on (A1B1, A1B2, A2B1, A2B2)
SIGNS = (
    (1, 1, 1, -1),
    (-1, 1, 1, 1),
    (1, -1, 1, 1),
    (1, 1, -1, 1),
)


def np2(flat):
    """2x2 complex ndarray from a flat 4-tuple."""
    return np.array(flat, dtype=complex).reshape(2, 2)


def np4(flat):
    """4x4 complex ndarray from a flat 16-tuple."""
    return np.array(flat, dtype=complex).reshape(4, 4)


def flat16(arr):
    return tuple(complex(z) for z in np.asarray(arr).reshape(16))


def observable_np(n):
    return n.x * SX + n.y * SY + n.z * SZ


def bell_operator_np(mu, s: Settings):
    a1, a2 = observable_np(s.a1), observable_np(s.a2)
    b1, b2 = observable_np(s.b1), observable_np(s.b2)
    g = SIGNS[mu]
    return (
        g[0] * np.kron(a1, b1)
        + g[1] * np.kron(a1, b2)
        + g[2] * np.kron(a2, b1)
        + g[3] * np.kron(a2, b2)
    )


def correlation_tensor_np(rho: DensityMatrix):
    r = np4(rho.entries)
    t = np.empty((3, 3))
    for m in range(3):
        for n in range(3):
            t[m, n] = np.trace(r @ np.kron(PAULI_NP[m], PAULI_NP[n])).real
    return t


def admissible_tuple(rng):
    """Random (alpha, alphap, beta, delta, deltap) with the cosines (u, v)
    uniform in the admissible box; delta is recovered from u, so the tuple
    is in range by construction."""
    alpha = rng.u01() * math.pi
    alphap = rng.u01() * math.pi
    beta = rng.u01() * math.pi
    umin, umax, vmin, vmax = admissible_box(alpha, alphap, beta)
    u = umin + (umax - umin) * rng.u01()
    v = vmin + (vmax - vmin) * rng.u01()
    delta = alpha + beta - math.acos(max(-1.0, min(1.0, u)))
    deltap = alphap + beta - math.acos(max(-1.0, min(1.0, v)))
    return alpha, alphap, beta, delta, deltap


def random_separable(gen, parts=3):
    """Convex mixture of product pure states, assembled with numpy only."""
    eye = np.eye(2, dtype=complex)
    weights = gen.dirichlet(np.ones(parts))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        na = gen.normal(size=3)
        nb = gen.normal(size=3)
        na /= np.linalg.norm(na)
        nb /= np.linalg.norm(nb)
        pa = 0.5 * (eye + na[0] * SX + na[1] * SY + na[2] * SZ)
        pb = 0.5 * (eye + nb[0] * SX + nb[1] * SY + nb[2] * SZ)
        rho = rho + w * np.kron(pa, pb)
    return DensityMatrix(flat16(rho))
