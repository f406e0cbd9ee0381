"""The four CHSH forms, correlation tensors, and the arrangement optimizer.

With A_i = a_i . sigma and B_j = b_j . sigma, the four equivalent forms
differ only in which correlator carries the minus sign:

    I0 = A1 B1 + A1 B2 + A2 B1 - A2 B2
    I1 = -A1 B1 + A1 B2 + A2 B1 + A2 B2
    I2 = A1 B1 - A1 B2 + A2 B1 + A2 B2
    I3 = A1 B1 + A1 B2 - A2 B1 + A2 B2

Local hidden variables cap each at 2, quantum mechanics at 2 sqrt(2), and
for a fixed state the best reachable value is 2 sqrt(tau1 + tau2) with tau
the two largest eigenvalues of T^T T (the Horodecki criterion).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import linalg
from ._backend import impl as _impl
from .errors import BadIndex, NonRealCorrelation
from .geometry import Direction, Settings
from .rng import PhiloxStream
from .states import DensityMatrix

LHV_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

# sign patterns of the four forms on (A1B1, A1B2, A2B1, A2B2)
FORM_SIGNS = (
    (1.0, 1.0, 1.0, -1.0),
    (-1.0, 1.0, 1.0, 1.0),
    (1.0, -1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0, 1.0),
)


class BellQuad(NamedTuple):
    """The four form expectations of one scene.

    Theorem-level facts (|i_mu| <= 2 sqrt(2), pair sums <= 8) are checked by
    the verification flows, not by this container.
    """

    i0: float
    i1: float
    i2: float
    i3: float


@dataclass(frozen=True)
class CorrelationTensor:
    """Flat row-major 3x3 tensor t[m,n] = tr rho (sigma_m x sigma_n);
    entries are bounded by 1 in magnitude for a valid state."""

    entries: tuple[float, ...]

    def __post_init__(self):
        e = tuple(float(x) for x in self.entries)
        if len(e) != 9:
            raise ValueError(f"expected 9 entries, got {len(e)}")
        for x in e:
            if math.fabs(x) > 1.0 + 1e-12:
                raise ValueError(f"tensor entry {x!r} exceeds 1 in magnitude")
        object.__setattr__(self, "entries", e)

    def matvec(self, v: Direction) -> tuple[float, float, float]:
        t = self.entries
        return (
            t[0] * v.x + t[1] * v.y + t[2] * v.z,
            t[3] * v.x + t[4] * v.y + t[5] * v.z,
            t[6] * v.x + t[7] * v.y + t[8] * v.z,
        )


def observable(n: Direction) -> linalg.ComplexMatrix2:
    """Spin observable n . sigma."""
    return (
        complex(n.z, 0.0),
        complex(n.x, -n.y),
        complex(n.x, n.y),
        complex(-n.z, 0.0),
    )


def bell_operator(mu: int, s: Settings) -> linalg.ComplexMatrix4:
    """The mu-th CHSH form as a 4x4 operator."""
    _check_form_index(mu)
    k11 = linalg.kron(observable(s.a1), observable(s.b1))
    k12 = linalg.kron(observable(s.a1), observable(s.b2))
    k21 = linalg.kron(observable(s.a2), observable(s.b1))
    k22 = linalg.kron(observable(s.a2), observable(s.b2))
    sg = FORM_SIGNS[mu]
    return tuple(
        k11[j] * sg[0] + k12[j] * sg[1] + k21[j] * sg[2] + k22[j] * sg[3]
        for j in range(16)
    )


def correlation_tensor(rho: DensityMatrix) -> CorrelationTensor:
    """Correlation tensor of a state.

    Raises NonRealCorrelation if any entry's imaginary part exceeds 1e-10
    (impossible for a valid density matrix; guards corrupted input).
    """
    t, max_imag = _impl.corr_tensor(rho.entries)
    if max_imag > 1e-10:
        raise NonRealCorrelation(f"imaginary part {max_imag:.3e} in tensor entry")
    return CorrelationTensor(t)


def quad_by_trace(rho: DensityMatrix, s: Settings) -> BellQuad:
    """All four form expectations, evaluated as tr(rho I_mu)."""
    q = _impl.quad_trace(rho.entries, s.flat())
    return BellQuad(q[0], q[1], q[2], q[3])


def i0_by_tensor(t: CorrelationTensor, s: Settings) -> float:
    """First form via the midframe route:
    2 [ (a1, T c) cos(theta) + (a2, T c') sin(theta) ].

    Agrees with the trace route to rounding (degenerate Bob pairs
    included, since the completed axis is weighted by zero there).
    """
    return _impl.i0_midframe(t.entries, s.flat())


def horodecki_value(t: CorrelationTensor) -> float:
    """2 sqrt(tau1 + tau2), the exact maximum of any single form over
    arrangements."""
    return _impl.horodecki(t.entries)


def lhv_max(mu: int) -> float:
    """Exact deterministic local-hidden-variable maximum of the mu-th form.

    Enumerates the sixteen sign assignments; the result is exactly 2.0 for
    every mu.
    """
    _check_form_index(mu)
    sg = FORM_SIGNS[mu]
    best = -4.0
    for a1 in (-1.0, 1.0):
        for a2 in (-1.0, 1.0):
            for b1 in (-1.0, 1.0):
                for b2 in (-1.0, 1.0):
                    val = (
                        sg[0] * (a1 * b1) + sg[1] * (a1 * b2)
                        + sg[2] * (a2 * b1) + sg[3] * (a2 * b2)
                    )
                    if val > best:
                        best = val
    return best


def optimize_settings(
    rho: DensityMatrix, mu: int, rng: PhiloxStream
) -> tuple[Settings, float]:
    """Best arrangement for the mu-th form by alternating closed-form
    ascent (eight restarts drawn from `rng`'s stream, 500 alternations max,
    stop at 1e-12 value change).

    Returns (settings, value); the value matches the form at the returned
    settings exactly and lands within optimizer tolerance of
    horodecki_value for any mu.
    """
    _check_form_index(mu)
    t = correlation_tensor(rho)
    s12, value = _impl.optimize_one(t.entries, mu, rng.seed, rng.stream)
    return Settings.from_flat(s12), value


def _check_form_index(mu: int) -> None:
    if mu not in (0, 1, 2, 3):
        raise BadIndex(f"form index {mu!r} outside 0..3")
