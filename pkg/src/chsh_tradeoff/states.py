"""Two-qubit density matrices and the standard constructions.

Basis order is |00>, |01>, |10>, |11>.  A DensityMatrix validates itself on
construction: Hermitian within 1e-12, unit trace within 1e-12, and smallest
eigenvalue above -1e-10.  Random states follow the frozen draw protocols of
the rng module so that corpora can be replayed sample by sample.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from . import _kernels as _proto
from ._backend import impl as _impl
from .errors import BadRank, BadWeights, NotHermitian
from .rng import PhiloxStream


@dataclass(frozen=True)
class DensityMatrix:
    """A validated two-qubit state, entries as a flat row-major tuple."""

    entries: linalg.ComplexMatrix4

    def __post_init__(self):
        entries = linalg.complex_matrix4(self.entries)
        object.__setattr__(self, "entries", entries)
        defect = linalg.hermiticity_defect(entries)
        if defect > 1e-12:
            raise NotHermitian(f"state is not Hermitian (defect {defect:.3e})")
        tr = linalg.trace4(entries)
        if math.fabs(tr.real - 1.0) > 1e-12 or math.fabs(tr.imag) > 1e-12:
            raise ValueError(f"state trace is {tr}, expected 1")
        lo = _impl.herm4_eigvals(entries)[0]
        if lo < -1e-10:
            raise ValueError(f"state has negative eigenvalue {lo:.3e}")

    def purity(self) -> float:
        """tr(rho^2)."""
        return linalg.trace4(linalg.matmul4(self.entries, self.entries)).real

    def eigenvalues(self) -> tuple[float, float, float, float]:
        return _impl.herm4_eigvals(self.entries)


def schmidt_pure(theta: float) -> DensityMatrix:
    """Pure state cos(theta)|00> + sin(theta)|11>.

    theta = pi/4 is the maximally entangled case; its correlation tensor is
    diag(sin 2theta, -sin 2theta, 1).
    """
    c = math.cos(theta)
    s = math.sin(theta)
    amps = (complex(c, 0.0), 0j, 0j, complex(s, 0.0))
    entries = tuple(
        amps[i] * amps[j].conjugate() for i in range(4) for j in range(4)
    )
    return DensityMatrix(entries)


def isotropic(v: float, theta: float) -> DensityMatrix:
    """Mixture v * (Schmidt state) + (1 - v) * I/4 for 0 <= v <= 1."""
    if not 0.0 <= v <= 1.0:
        raise BadWeights(f"visibility {v} outside [0, 1]")
    pure = schmidt_pure(theta).entries
    q = (1.0 - v) * 0.25
    entries = tuple(
        v * pure[4 * i + j] + (q if i == j else 0.0)
        for i in range(4)
        for j in range(4)
    )
    return DensityMatrix(entries)


def mix(components: list[tuple[float, DensityMatrix]]) -> DensityMatrix:
    """Convex mixture of states.

    Weights must be non-negative and sum to 1 within 1e-12; raises
    BadWeights otherwise.
    """
    if not components:
        raise BadWeights("empty mixture")
    total = 0.0
    for w, _ in components:
        if w < 0.0:
            raise BadWeights(f"negative weight {w}")
        total += w
    if math.fabs(total - 1.0) > 1e-12:
        raise BadWeights(f"weights sum to {total!r}, expected 1")
    out = [0j] * 16
    for w, st in components:
        for j in range(16):
            out[j] = out[j] + st.entries[j] * w
    return DensityMatrix(tuple(out))


def random_pure(rng: PhiloxStream) -> DensityMatrix:
    """Haar-uniform pure state.

    Draw protocol (frozen): eight standard normals become the four complex
    amplitudes in order, and the projector is divided by the squared norm.
    The protocol lives in the pure kernels module, which both backends
    reproduce bit for bit, so corpora drawn here match kernel-internal ones.
    """
    return DensityMatrix(_proto._draw_pure(rng))


def random_mixed(rng: PhiloxStream, rank: int) -> DensityMatrix:
    """Random mixed state of the given rank (1..4).

    Draw protocol (frozen): `rank` unit-rate exponentials, normalized to the
    simplex (this is the uniform Dirichlet), then `rank` pure states; draws
    happen in that order.
    """
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise BadRank(f"rank must be an int, got {rank!r}")
    if not 1 <= rank <= 4:
        raise BadRank(f"rank {rank} outside 1..4")
    ws = _proto._draw_mixed_weights(rng, rank)
    out = [0j] * 16
    for w in ws:
        p = _proto._draw_pure(rng)
        for j in range(16):
            out[j] = out[j] + p[j] * w
    return DensityMatrix(tuple(out))


def maximally_mixed() -> DensityMatrix:
    """I/4."""
    return DensityMatrix(tuple((0.25 + 0j) if i % 5 == 0 else 0j for i in range(16)))
