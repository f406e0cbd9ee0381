"""Dense linear algebra for the tiny sizes this package needs.

Matrices are flat row-major tuples: ComplexMatrix2 has 4 complex entries,
ComplexMatrix4 has 16, RealMatrix3 has 9 floats.  Everything a two-qubit
computation needs fits in these three shapes, and flat tuples keep the
compiled and pure backends trivially interchangeable.

Eigenvalues are computed by cyclic Jacobi rotations (stop: off-diagonal
Frobenius norm below 1e-13 or 64 sweeps), which is exact to rounding at
these dimensions and has no external dependencies.
"""
from __future__ import annotations

import cmath
import math
from typing import Iterable, Sequence

from ._backend import impl as _impl
from .errors import NotHermitian, NotSymmetric

ComplexMatrix2 = tuple  # 4 complex entries, row-major
ComplexMatrix4 = tuple  # 16 complex entries, row-major
RealMatrix3 = tuple  # 9 float entries, row-major

IDENTITY2: ComplexMatrix2 = (1 + 0j, 0j, 0j, 1 + 0j)
IDENTITY4: ComplexMatrix4 = tuple(1 + 0j if i % 5 == 0 else 0j for i in range(16))

PAULI_X: ComplexMatrix2 = (0j, 1 + 0j, 1 + 0j, 0j)
PAULI_Y: ComplexMatrix2 = (0j, -1j, 1j, 0j)
PAULI_Z: ComplexMatrix2 = (1 + 0j, 0j, 0j, -1 + 0j)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)


def _flatten(rows, side: int, what: str):
    flat = []
    if len(rows) == side * side and not isinstance(rows[0], (list, tuple)):
        flat = list(rows)
    else:
        if len(rows) != side:
            raise ValueError(f"{what}: expected {side} rows, got {len(rows)}")
        for r in rows:
            if len(r) != side:
                raise ValueError(f"{what}: expected {side} columns, got {len(r)}")
            flat.extend(r)
    return flat


def complex_matrix2(rows: Sequence) -> ComplexMatrix2:
    """Build a 2x2 complex matrix from nested rows (or a flat sequence),
    validating finiteness."""
    flat = [complex(z) for z in _flatten(rows, 2, "complex_matrix2")]
    for z in flat:
        if not (cmath.isfinite(z)):
            raise ValueError("complex_matrix2: non-finite entry")
    return tuple(flat)


def complex_matrix4(rows: Sequence) -> ComplexMatrix4:
    """Build a 4x4 complex matrix from nested rows (or a flat sequence),
    validating finiteness."""
    flat = [complex(z) for z in _flatten(rows, 4, "complex_matrix4")]
    for z in flat:
        if not (cmath.isfinite(z)):
            raise ValueError("complex_matrix4: non-finite entry")
    return tuple(flat)


def real_matrix3(rows: Sequence) -> RealMatrix3:
    """Build a 3x3 real matrix from nested rows (or a flat sequence),
    validating finiteness."""
    flat = [float(x) for x in _flatten(rows, 3, "real_matrix3")]
    for x in flat:
        if not math.isfinite(x):
            raise ValueError("real_matrix3: non-finite entry")
    return tuple(flat)


def matmul2(a: ComplexMatrix2, b: ComplexMatrix2) -> ComplexMatrix2:
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def matmul4(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
    return _impl.mat4_mul(tuple(a), tuple(b))


def kron(a: ComplexMatrix2, b: ComplexMatrix2) -> ComplexMatrix4:
    """Kronecker product of two 2x2 matrices."""
    return _impl.mat2_kron(tuple(a), tuple(b))


def trace2(a: ComplexMatrix2) -> complex:
    return a[0] + a[3]


def trace4(a: ComplexMatrix4) -> complex:
    return _impl.mat4_trace(tuple(a))


def dagger2(a: ComplexMatrix2) -> ComplexMatrix2:
    return (a[0].conjugate(), a[2].conjugate(), a[1].conjugate(), a[3].conjugate())


def dagger4(a: ComplexMatrix4) -> ComplexMatrix4:
    return tuple(a[4 * j + i].conjugate() for i in range(4) for j in range(4))


def add4(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
    return tuple(x + y for x, y in zip(a, b))


def sub4(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
    return tuple(x - y for x, y in zip(a, b))


def scale4(s: complex, a: ComplexMatrix4) -> ComplexMatrix4:
    return tuple(s * x for x in a)


def max_abs4(a: Iterable[complex]) -> float:
    """Largest entry magnitude (sqrt(re^2 + im^2)) of a complex matrix."""
    best = 0.0
    for z in a:
        m = math.sqrt(z.real * z.real + z.imag * z.imag)
        if m > best:
            best = m
    return best


def hermiticity_defect(a: ComplexMatrix4) -> float:
    """max |a - a^dagger| entrywise."""
    return max_abs4(sub4(a, dagger4(a)))


def hermitian_eigenvalues(a: ComplexMatrix4, tol: float = 1e-12) -> tuple[float, float, float, float]:
    """Eigenvalues of a Hermitian 4x4 matrix, ascending.

    Raises NotHermitian when the hermiticity defect exceeds tol.
    """
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return _impl.herm4_eigvals(tuple(a))


def sym3_eigenvalues(m: RealMatrix3, tol: float = 1e-12) -> tuple[float, float, float]:
    """Eigenvalues of a symmetric real 3x3 matrix, descending.

    Raises NotSymmetric when max |m - m^T| exceeds tol.
    """
    defect = max(
        math.fabs(m[1] - m[3]), math.fabs(m[2] - m[6]), math.fabs(m[5] - m[7])
    )
    if defect > tol:
        raise NotSymmetric(f"symmetry defect {defect:.3e} exceeds {tol:.1e}")
    return _impl.sym3_eigvals(tuple(float(x) for x in m))
