"""Pure-Python compute kernels (reference backend).

The compiled backend (chsh_tradeoff._fastcore) mirrors every public function
in this module line for line.  To keep the two bit-identical:

* scalar operations appear in one frozen order (no algebraic "equivalent"
  rewrites on one side only),
* complex magnitudes are written as sqrt(re*re + im*im), never abs(),
* complex values are only added, subtracted, multiplied, or divided by a
  real; complex/complex division never appears,
* x*x instead of x**2, multiplications by 0.5 instead of /2,
* the extension is compiled with -ffp-contract=off so no FMA contraction.

Kernels trust their inputs: validation (hermiticity, unit norms, index
ranges) lives in the public modules.  Matrices are flat row-major tuples:
4x4 complex as 16 entries, the real correlation tensor as 9 floats, a full
measurement arrangement as 12 floats (a1, a2, b1, b2).
"""
from __future__ import annotations

import math

from .rng import (
    DOMAIN_SCAN,
    DOMAIN_STAR,
    DOMAIN_STAR_OPT,
    DOMAIN_VERIFY,
    PhiloxStream,
    stream_id,
)

BACKEND = "pure"

_HALF_PI = 0.5 * math.pi
_JACOBI_SWEEPS = 64
_JACOBI_TOL = 1e-13

# sign patterns of the four CHSH forms on (A1B1, A1B2, A2B1, A2B2)
_SIGNS = (
    (1.0, 1.0, 1.0, -1.0),
    (-1.0, 1.0, 1.0, 1.0),
    (1.0, -1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0, 1.0),
)

_PAULI = (
    (complex(0.0, 0.0), complex(1.0, 0.0), complex(1.0, 0.0), complex(0.0, 0.0)),
    (complex(0.0, 0.0), complex(0.0, -1.0), complex(0.0, 1.0), complex(0.0, 0.0)),
    (complex(1.0, 0.0), complex(0.0, 0.0), complex(0.0, 0.0), complex(-1.0, 0.0)),
)


# --------------------------------------------------------------------------
# small real-vector helpers


def _dot3(x0, x1, x2, y0, y1, y2):
    return x0 * y0 + x1 * y1 + x2 * y2


def _matvec3(t, v0, v1, v2):
    return (
        t[0] * v0 + t[1] * v1 + t[2] * v2,
        t[3] * v0 + t[4] * v1 + t[5] * v2,
        t[6] * v0 + t[7] * v1 + t[8] * v2,
    )


def _tmatvec3(t, v0, v1, v2):
    return (
        t[0] * v0 + t[3] * v1 + t[6] * v2,
        t[1] * v0 + t[4] * v1 + t[7] * v2,
        t[2] * v0 + t[5] * v1 + t[8] * v2,
    )


def _cross3(x0, x1, x2, y0, y1, y2):
    return (x1 * y2 - x2 * y1, x2 * y0 - x0 * y2, x0 * y1 - x1 * y0)


def _perp3(p0, p1, p2):
    """First canonical axis made orthogonal to p (|p| = 1), normalized."""
    if math.fabs(p0) < 0.9:
        w0 = 1.0 - p0 * p0
        w1 = -p0 * p1
        w2 = -p0 * p2
    elif math.fabs(p1) < 0.9:
        w0 = -p1 * p0
        w1 = 1.0 - p1 * p1
        w2 = -p1 * p2
    else:
        w0 = -p2 * p0
        w1 = -p2 * p1
        w2 = 1.0 - p2 * p2
    inv = 1.0 / math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    return (w0 * inv, w1 * inv, w2 * inv)


def _clamp1(x):
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


# --------------------------------------------------------------------------
# dense complex linear algebra (4x4 / 2x2 kron / 3x3 real)


def mat4_mul(a, b):
    """Row-major product of two flat 4x4 complex matrices."""
    out = [complex(0.0, 0.0)] * 16
    for i in range(4):
        for j in range(4):
            acc = complex(0.0, 0.0)
            for k in range(4):
                acc = acc + a[4 * i + k] * b[4 * k + j]
            out[4 * i + j] = acc
    return tuple(out)


def mat2_kron(a, b):
    """Kronecker product of two flat 2x2 complex matrices (4x4 result)."""
    out = [complex(0.0, 0.0)] * 16
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    out[4 * (2 * i + k) + (2 * j + l)] = a[2 * i + j] * b[2 * k + l]
    return tuple(out)


def mat4_trace(a):
    return a[0] + a[5] + a[10] + a[15]


def herm4_eigvals(a):
    """Eigenvalues of a flat 4x4 Hermitian matrix, ascending.

    Cyclic complex Jacobi rotations; stops when the off-diagonal Frobenius
    norm drops below 1e-13 or after 64 sweeps.  Input hermiticity is the
    caller's responsibility.
    """
    m = [complex(z) for z in a]
    for _ in range(_JACOBI_SWEEPS):
        off2 = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                z = m[4 * p + q]
                off2 += z.real * z.real + z.imag * z.imag
        if math.sqrt(2.0 * off2) < _JACOBI_TOL:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                apq = m[4 * p + q]
                b2 = apq.real * apq.real + apq.imag * apq.imag
                if b2 == 0.0:
                    continue
                b = math.sqrt(b2)
                eph = complex(apq.real / b, apq.imag / b)
                app = m[4 * p + p].real
                aqq = m[4 * q + q].real
                tau = (aqq - app) / (2.0 * b)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                seph = (t * c) * eph
                sephc = seph.conjugate()
                for k in range(4):
                    akp = m[4 * k + p]
                    akq = m[4 * k + q]
                    m[4 * k + p] = c * akp - sephc * akq
                    m[4 * k + q] = seph * akp + c * akq
                for k in range(4):
                    apk = m[4 * p + k]
                    aqk = m[4 * q + k]
                    m[4 * p + k] = c * apk - seph * aqk
                    m[4 * q + k] = sephc * apk + c * aqk
    e = [m[0].real, m[5].real, m[10].real, m[15].real]
    for i in range(3):
        for j in range(3 - i):
            if e[j] > e[j + 1]:
                e[j], e[j + 1] = e[j + 1], e[j]
    return (e[0], e[1], e[2], e[3])


def sym3_eigvals(t):
    """Eigenvalues of a flat 3x3 real symmetric matrix, descending."""
    m = [float(x) for x in t]
    for _ in range(_JACOBI_SWEEPS):
        off = m[1] * m[1] + m[2] * m[2] + m[5] * m[5]
        if math.sqrt(2.0 * off) < _JACOBI_TOL:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = m[3 * p + q]
                if apq == 0.0:
                    continue
                tau = (m[3 * q + q] - m[3 * p + p]) / (2.0 * apq)
                if tau >= 0.0:
                    tt = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + tt * tt)
                s = tt * c
                for k in range(3):
                    akp = m[3 * k + p]
                    akq = m[3 * k + q]
                    m[3 * k + p] = c * akp - s * akq
                    m[3 * k + q] = s * akp + c * akq
                for k in range(3):
                    apk = m[3 * p + k]
                    aqk = m[3 * q + k]
                    m[3 * p + k] = c * apk - s * aqk
                    m[3 * q + k] = s * apk + c * aqk
    e = [m[0], m[4], m[8]]
    for i in range(2):
        for j in range(2 - i):
            if e[j] < e[j + 1]:
                e[j], e[j + 1] = e[j + 1], e[j]
    return (e[0], e[1], e[2])


# --------------------------------------------------------------------------
# expectation values


def _obs2(n0, n1, n2):
    """Flat 2x2 spin observable n . sigma."""
    return (complex(n2, 0.0), complex(n0, -n1), complex(n0, n1), complex(-n2, 0.0))


def _trace_against(rho, m):
    """tr(rho m) for flat 4x4 matrices."""
    acc = complex(0.0, 0.0)
    for i in range(4):
        for k in range(4):
            acc = acc + rho[4 * i + k] * m[4 * k + i]
    return acc


def corr_tensor(rho):
    """Correlation tensor t[m,n] = tr rho (sigma_m x sigma_n).

    Returns (flat 3x3 tuple, largest |imaginary part| seen) so the caller
    can assert realness.
    """
    t = [0.0] * 9
    max_imag = 0.0
    for mi in range(3):
        for ni in range(3):
            big = mat2_kron(_PAULI[mi], _PAULI[ni])
            tr = _trace_against(rho, big)
            t[3 * mi + ni] = tr.real
            ai = math.fabs(tr.imag)
            if ai > max_imag:
                max_imag = ai
    return tuple(t), max_imag


def quad_trace(rho, s):
    """All four CHSH expectation values tr(rho I_mu) at the arrangement s."""
    a1 = _obs2(s[0], s[1], s[2])
    a2 = _obs2(s[3], s[4], s[5])
    b1 = _obs2(s[6], s[7], s[8])
    b2 = _obs2(s[9], s[10], s[11])
    k11 = mat2_kron(a1, b1)
    k12 = mat2_kron(a1, b2)
    k21 = mat2_kron(a2, b1)
    k22 = mat2_kron(a2, b2)
    out = [0.0] * 4
    for mu in range(4):
        sg = _SIGNS[mu]
        op = [complex(0.0, 0.0)] * 16
        for j in range(16):
            op[j] = k11[j] * sg[0] + k12[j] * sg[1] + k21[j] * sg[2] + k22[j] * sg[3]
        out[mu] = _trace_against(rho, op).real
    return (out[0], out[1], out[2], out[3])


def i0_midframe(t, s):
    """First CHSH form via the midframe decomposition of Bob's pair.

    2 [ (a1, T c) cos(theta) + (a2, T c') sin(theta) ] with 2 c cos(theta)
    = b1 + b2 and 2 c' sin(theta) = b1 - b2.  A degenerate Bob pair is
    harmless here: the completed axis enters multiplied by a vanishing
    cos(theta) or sin(theta), so the expression stays exact.
    """
    bf = bobframe(s[6], s[7], s[8], s[9], s[10], s[11])
    c0, c1, c2 = bf[0], bf[1], bf[2]
    d0, d1, d2 = bf[3], bf[4], bf[5]
    theta = bf[6]
    w = _matvec3(t, c0, c1, c2)
    wp = _matvec3(t, d0, d1, d2)
    val = 2.0 * (
        _dot3(s[0], s[1], s[2], w[0], w[1], w[2]) * math.cos(theta)
        + _dot3(s[3], s[4], s[5], wp[0], wp[1], wp[2]) * math.sin(theta)
    )
    return val


def horodecki(t):
    """Largest CHSH expectation over all arrangements: 2 sqrt(tau1 + tau2)
    with tau the two largest eigenvalues of T^T T."""
    m = [0.0] * 9
    for i in range(3):
        for j in range(3):
            m[3 * i + j] = (
                t[i] * t[j] + t[3 + i] * t[3 + j] + t[6 + i] * t[6 + j]
            )
    e = sym3_eigvals(tuple(m))
    return 2.0 * math.sqrt(e[0] + e[1])


# --------------------------------------------------------------------------
# optimizers


def _alice_combos(mu, b1, b2):
    if mu == 0:
        return (
            (b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]),
            (b1[0] - b2[0], b1[1] - b2[1], b1[2] - b2[2]),
        )
    if mu == 1:
        return (
            (b2[0] - b1[0], b2[1] - b1[1], b2[2] - b1[2]),
            (b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]),
        )
    if mu == 2:
        return (
            (b1[0] - b2[0], b1[1] - b2[1], b1[2] - b2[2]),
            (b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]),
        )
    return (
        (b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]),
        (b2[0] - b1[0], b2[1] - b1[1], b2[2] - b1[2]),
    )


def _bob_combos(mu, a1, a2):
    if mu == 0:
        return (
            (a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]),
            (a1[0] - a2[0], a1[1] - a2[1], a1[2] - a2[2]),
        )
    if mu == 1:
        return (
            (a2[0] - a1[0], a2[1] - a1[1], a2[2] - a1[2]),
            (a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]),
        )
    if mu == 2:
        return (
            (a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]),
            (a2[0] - a1[0], a2[1] - a1[1], a2[2] - a1[2]),
        )
    return (
        (a1[0] - a2[0], a1[1] - a2[1], a1[2] - a2[2]),
        (a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]),
    )


def optimize_one(t, mu, seed, stream):
    """Maximize the mu-th CHSH form over arrangements by alternating
    closed-form half-steps (Cauchy-Schwarz argmax per side).

    Eight random restarts, at most 500 alternations each, stopping when the
    value changes by less than 1e-12.  After the Bob half-step the value
    equals the form at the returned arrangement exactly, so no separate
    evaluation is needed.  Returns (flat arrangement, value).
    """
    rng = PhiloxStream(seed, stream)
    best_val = -1.0
    best = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
    for _ in range(8):
        b1 = rng.unit3()
        b2 = rng.unit3()
        a1 = (1.0, 0.0, 0.0)
        a2 = (0.0, 1.0, 0.0)
        prev = -1.0
        val = 0.0
        for _ in range(500):
            p, q = _alice_combos(mu, b1, b2)
            w1 = _matvec3(t, p[0], p[1], p[2])
            w2 = _matvec3(t, q[0], q[1], q[2])
            n1 = math.sqrt(w1[0] * w1[0] + w1[1] * w1[1] + w1[2] * w1[2])
            n2 = math.sqrt(w2[0] * w2[0] + w2[1] * w2[1] + w2[2] * w2[2])
            if n1 > 1e-15:
                inv = 1.0 / n1
                a1 = (w1[0] * inv, w1[1] * inv, w1[2] * inv)
            if n2 > 1e-15:
                inv = 1.0 / n2
                a2 = (w2[0] * inv, w2[1] * inv, w2[2] * inv)
            pb, qb = _bob_combos(mu, a1, a2)
            v1 = _tmatvec3(t, pb[0], pb[1], pb[2])
            v2 = _tmatvec3(t, qb[0], qb[1], qb[2])
            m1 = math.sqrt(v1[0] * v1[0] + v1[1] * v1[1] + v1[2] * v1[2])
            m2 = math.sqrt(v2[0] * v2[0] + v2[1] * v2[1] + v2[2] * v2[2])
            if m1 > 1e-15:
                inv = 1.0 / m1
                b1 = (v1[0] * inv, v1[1] * inv, v1[2] * inv)
            if m2 > 1e-15:
                inv = 1.0 / m2
                b2 = (v2[0] * inv, v2[1] * inv, v2[2] * inv)
            val = m1 + m2
            if math.fabs(val - prev) < 1e-12:
                break
            prev = val
        if val > best_val:
            best_val = val
            best = a1 + a2 + b1 + b2
    return best, best_val


def msum_one(t, seed, stream):
    """Maximize <I0^2> + <I1^2> = 8 + 8 (a1 x a2) . T (b1 x b2) over
    arrangements.

    Power iteration on T (the cross products sweep the unit ball, so the
    optimum is the largest singular value), eight restarts, then an explicit
    orthonormal completion turns the singular pair back into directions.
    Returns (flat arrangement, value at that arrangement).
    """
    rng = PhiloxStream(seed, stream)
    best_val = -1.0
    bp = (0.0, 0.0, 1.0)
    bq = (0.0, 0.0, 1.0)
    for _ in range(8):
        q = rng.unit3()
        p = (1.0, 0.0, 0.0)
        prev = -1.0
        val = 8.0
        for _ in range(500):
            w = _matvec3(t, q[0], q[1], q[2])
            n1 = math.sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2])
            if n1 > 1e-15:
                inv = 1.0 / n1
                p = (w[0] * inv, w[1] * inv, w[2] * inv)
            z = _tmatvec3(t, p[0], p[1], p[2])
            n2 = math.sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2])
            if n2 > 1e-15:
                inv = 1.0 / n2
                q = (z[0] * inv, z[1] * inv, z[2] * inv)
            val = 8.0 + 8.0 * n2
            if math.fabs(val - prev) < 1e-12:
                break
            prev = val
        if val > best_val:
            best_val = val
            bp = p
            bq = q
    a1 = _perp3(bp[0], bp[1], bp[2])
    a2 = _cross3(bp[0], bp[1], bp[2], a1[0], a1[1], a1[2])
    b1 = _perp3(bq[0], bq[1], bq[2])
    b2 = _cross3(bq[0], bq[1], bq[2], b1[0], b1[1], b1[2])
    wa = _cross3(a1[0], a1[1], a1[2], a2[0], a2[1], a2[2])
    wb = _cross3(b1[0], b1[1], b1[2], b2[0], b2[1], b2[2])
    tw = _matvec3(t, wb[0], wb[1], wb[2])
    value = 8.0 + 8.0 * _dot3(wa[0], wa[1], wa[2], tw[0], tw[1], tw[2])
    return a1 + a2 + b1 + b2, value


# --------------------------------------------------------------------------
# midframe / image-frame / angle pipeline


def bobframe(b1x, b1y, b1z, b2x, b2y, b2z):
    """Midframe of Bob's pair: axes c, c' and weight angle theta with
    2 c cos(theta) = b1 + b2 and 2 c' sin(theta) = b1 - b2.

    Never raises: a degenerate side (b1 close to -b2 or to b2, threshold
    1e-9) gets a canonical perpendicular completion and a flag.  Returns
    (c0,c1,c2, c'0,c'1,c'2, theta, sum_degenerate, diff_degenerate).
    """
    sx = b1x + b2x
    sy = b1y + b2y
    sz = b1z + b2z
    dx = b1x - b2x
    dy = b1y - b2y
    dz = b1z - b2z
    ns = math.sqrt(sx * sx + sy * sy + sz * sz)
    nd = math.sqrt(dx * dx + dy * dy + dz * dz)
    sum_deg = 1 if ns < 1e-9 else 0
    diff_deg = 1 if nd < 1e-9 else 0
    if sum_deg:
        inv = 1.0 / nd
        cp = (dx * inv, dy * inv, dz * inv)
        c = _perp3(cp[0], cp[1], cp[2])
    elif diff_deg:
        inv = 1.0 / ns
        c = (sx * inv, sy * inv, sz * inv)
        cp = _perp3(c[0], c[1], c[2])
    else:
        inv = 1.0 / ns
        c = (sx * inv, sy * inv, sz * inv)
        inv = 1.0 / nd
        cp = (dx * inv, dy * inv, dz * inv)
    theta = math.acos(_clamp1(ns * 0.5))
    return (c[0], c[1], c[2], cp[0], cp[1], cp[2], theta, sum_deg, diff_deg)


def imageframe(t, c0, c1, c2):
    """Image of a midframe axis under T: magnitude and unit direction.

    A collapsed image (magnitude < 1e-12) gets the canonical x direction
    and a flag.  Returns (D, d0, d1, d2, collapsed).
    """
    w = _matvec3(t, c0, c1, c2)
    big = math.sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2])
    if big < 1e-12:
        return (big, 1.0, 0.0, 0.0, 1)
    inv = 1.0 / big
    return (big, w[0] * inv, w[1] * inv, w[2] * inv, 0)


def _recover_rotation(alpha, beta, uu):
    """Rotation angle delta in [0, 2 alpha] with cos(alpha+beta-delta) = uu.

    The pipeline depends on delta only through that cosine, so any in-range
    branch is equivalent; the smallest is returned.  Second return is 0 when
    no branch reproduces uu within 1e-9.
    """
    base = math.acos(_clamp1(uu))
    hi = 2.0 * alpha
    best = -1.0
    found = 0
    for psi in (base, -base, 2.0 * math.pi - base):
        dl = alpha + beta - psi
        if dl >= -1e-9 and dl <= hi + 1e-9:
            if math.fabs(math.cos(alpha + beta - dl) - uu) <= 1e-9:
                if found == 0 or dl < best:
                    best = dl
                    found = 1
    return best, found


def angletuple(a1x, a1y, a1z, a2x, a2y, a2z, dx, dy, dz, px, py, pz):
    """Angle data of a scene: (alpha, alpha', beta, delta, delta', u, v,
    status), where alpha = angle(a1, d), alpha' = angle(a2, d'),
    beta = angle(d, d'), u = a1 . d', v = a2 . d, and delta/delta' are the
    recovered rotation angles.  status: 0 ok, 2 no usable branch.
    """
    ad = _dot3(a1x, a1y, a1z, dx, dy, dz)
    apdp = _dot3(a2x, a2y, a2z, px, py, pz)
    ddp = _dot3(dx, dy, dz, px, py, pz)
    u = _dot3(a1x, a1y, a1z, px, py, pz)
    v = _dot3(a2x, a2y, a2z, dx, dy, dz)
    alpha = math.acos(_clamp1(ad))
    alphap = math.acos(_clamp1(apdp))
    beta = math.acos(_clamp1(ddp))
    delta, ok1 = _recover_rotation(alpha, beta, u)
    deltap, ok2 = _recover_rotation(alphap, beta, v)
    status = 0 if (ok1 and ok2) else 2
    return (alpha, alphap, beta, delta, deltap, u, v, status)


def ellipse_box(alpha, alphap, beta):
    """Reachable rectangle for (u, v): each cosine lies between
    cos(angle + beta) and cos(beta - angle)."""
    c1 = math.cos(alpha + beta)
    c2 = math.cos(beta - alpha)
    umin = c1 if c1 < c2 else c2
    umax = c2 if c1 < c2 else c1
    c3 = math.cos(alphap + beta)
    c4 = math.cos(beta - alphap)
    vmin = c3 if c3 < c4 else c4
    vmax = c4 if c3 < c4 else c3
    return (umin, umax, vmin, vmax)


def ellipse_coeffs_raw(alpha, alphap, beta, delta, deltap):
    """Quadratic-form data (u, v, A, B, C, r2) of the bounding ellipse
    A x^2 + B y^2 + 2 C x y <= r2 in the (first form, second form) plane."""
    u = math.cos(alpha + beta - delta)
    v = math.cos(alphap + beta - deltap)
    ca = math.cos(alpha)
    cap = math.cos(alphap)
    a = u * u + v * v
    b = ca * ca + cap * cap
    c = u * cap - v * ca
    tmp = (
        math.cos(2.0 * alpha + beta - delta)
        + math.cos(2.0 * alphap + beta - deltap)
        + math.cos(beta - delta)
        + math.cos(beta - deltap)
    )
    r2 = tmp * tmp
    return (u, v, a, b, c, r2)


def axes_raw(a, b, c):
    """Principal-axis data of the quadratic form: splitting s, rotation
    source angle eta, then (A', B', xi) for the even branch and the odd
    branch (the odd branch swaps the semi-axes).  Returns
    (s, eta, A'_even, B'_even, xi_even, A'_odd, B'_odd, xi_odd).

    The small coefficient is computed as 2 (a b - c^2) / (a + b + s), not
    (a + b - s) / 2: near-degenerate forms (a b close to c^2) cancel in the
    difference and would poison r^2 / B', which divides by this number.
    """
    dd = a - b
    s = math.sqrt(dd * dd + 4.0 * c * c)
    eta = math.atan2(2.0 * c, dd)
    ape = (a + b + s) * 0.5
    den = a + b + s
    if den > 0.0:
        bpe = 2.0 * (a * b - c * c) / den
    else:
        bpe = 0.0
    xie = -0.5 * eta
    xio = (math.pi - eta) * 0.5
    return (s, eta, ape, bpe, xie, bpe, ape, xio)


def gap_raw(alpha, alphap, beta, delta, deltap):
    """Gap quantities (L, R, Delta, Delta', V^2): Delta = L - R >= 0 is the
    tradeoff slack, Delta' = L^2 - R^2 its polynomial form, and
    V^2 = 8 - 2 Delta the squared major semi-axis."""
    u = math.cos(alpha + beta - delta)
    v = math.cos(alphap + beta - deltap)
    ca = math.cos(alpha)
    cap = math.cos(alphap)
    sa = math.sin(alpha)
    sap = math.sin(alphap)
    ell = 2.0 - u * u - v * v + sa * sa + sap * sap
    t1 = u - ca
    t2 = v - cap
    t3 = u + ca
    t4 = v + cap
    r = math.sqrt(t1 * t1 + t2 * t2) * math.sqrt(t3 * t3 + t4 * t4)
    dl = ell - r
    dlp = ell * ell - r * r
    v2 = 8.0 - 2.0 * dl
    return (ell, r, dl, dlp, v2)


def vertex_raw(alpha, alphap, beta, x, y):
    """Closed form of Delta' at a box vertex (x, y in {0, 1} pick the
    cosine branch per axis)."""
    sx = 1.0 if x == 0 else -1.0
    sy = 1.0 if y == 0 else -1.0
    tmp = (
        math.cos(2.0 * sx * alpha + beta)
        + math.cos(2.0 * sy * alphap + beta)
        - 2.0 * math.cos(beta)
    )
    return tmp * tmp


# scene_raw status codes
SCENE_OK = 0
SCENE_DEGENERATE_BOB = 1
SCENE_NO_BRANCH = 2
SCENE_DEGENERATE_ELLIPSE = 3

# scene_raw slot layout (flat tuple of 40 floats):
#  0 status | 1 theta | 2 D | 3..5 d | 6 D' | 7..9 d'
# 10 alpha | 11 alpha' | 12 beta | 13 delta | 14 delta' | 15 u | 16 v
# 17 A | 18 B | 19 C | 20 r2 | 21 xi | 22 A' | 23 B' | 24 U2 | 25 V2(axes)
# 26 L | 27 R | 28 Delta | 29 Delta' | 30 V2(gap)
# 31..34 i0..i3 | 35 singular | 36 D_solved | 37 D'_solved
# 38 form value | 39 contained


def scene_raw(rho, s):
    """Full tradeoff pipeline for one (state, arrangement) scene.

    Runs midframe -> image frames -> angles -> ellipse -> gap, evaluates
    the first two forms by trace, solves back the image magnitudes when the
    linear system is well-conditioned, and checks containment of the
    measured point in the ellipse (quadratic form inflated by 1e-9).
    Returns the flat 40-slot layout documented above.
    """
    zero = tuple([0.0] * 39)
    bf = bobframe(s[6], s[7], s[8], s[9], s[10], s[11])
    if bf[7] != 0 or bf[8] != 0:
        return (float(SCENE_DEGENERATE_BOB),) + zero
    theta = bf[6]
    t, _ = corr_tensor(rho)
    im1 = imageframe(t, bf[0], bf[1], bf[2])
    im2 = imageframe(t, bf[3], bf[4], bf[5])
    big, d0, d1, d2 = im1[0], im1[1], im1[2], im1[3]
    bigp, p0, p1, p2 = im2[0], im2[1], im2[2], im2[3]
    at = angletuple(s[0], s[1], s[2], s[3], s[4], s[5], d0, d1, d2, p0, p1, p2)
    if at[7] != 0:
        return (float(SCENE_NO_BRANCH),) + zero
    alpha, alphap, beta, delta, deltap = at[0], at[1], at[2], at[3], at[4]
    u, v, a, b, c, r2 = ellipse_coeffs_raw(alpha, alphap, beta, delta, deltap)
    ax = axes_raw(a, b, c)
    ape, bpe, xie = ax[2], ax[3], ax[4]
    if ape < 1e-14:
        if r2 > 1e-12:
            return (float(SCENE_DEGENERATE_ELLIPSE),) + zero
        u2 = 0.0
    else:
        u2 = r2 / ape
    if bpe < 1e-14:
        if r2 > 1e-12:
            return (float(SCENE_DEGENERATE_ELLIPSE),) + zero
        v2ax = 0.0
    else:
        v2ax = r2 / bpe
    gp = gap_raw(alpha, alphap, beta, delta, deltap)
    quad = quad_trace(rho, s)
    i0, i1 = quad[0], quad[1]
    ca = math.cos(alpha)
    cap = math.cos(alphap)
    ct = math.cos(theta)
    st = math.sin(theta)
    den = u * ca + v * cap
    detmag = math.fabs(ct * st * den)
    if detmag < 1e-12:
        singular = 1.0
        dsol = 0.0
        dpsol = 0.0
    else:
        singular = 0.0
        dsol = (u * i0 + cap * i1) / (2.0 * ct * den)
        dpsol = (v * i0 - ca * i1) / (2.0 * st * den)
    formval = a * i0 * i0 + b * i1 * i1 + 2.0 * c * i0 * i1
    contained = 1.0 if formval <= r2 * (1.0 + 1e-9) + 1e-12 else 0.0
    return (
        0.0,
        theta,
        big, d0, d1, d2,
        bigp, p0, p1, p2,
        alpha, alphap, beta, delta, deltap,
        u, v,
        a, b, c, r2,
        xie, ape, bpe, u2, v2ax,
        gp[0], gp[1], gp[2], gp[3], gp[4],
        quad[0], quad[1], quad[2], quad[3],
        singular, dsol, dpsol,
        formval, contained,
    )


# --------------------------------------------------------------------------
# corpus draw protocols (frozen; replayed by the public modules)


def _draw_settings(rng):
    a1 = rng.unit3()
    a2 = rng.unit3()
    b1 = rng.unit3()
    b2 = rng.unit3()
    return a1 + a2 + b1 + b2


def _draw_pure(rng):
    """Haar-uniform pure state as a flat density matrix (16 doubles of
    Gaussian amplitude, projector divided by the squared norm)."""
    while True:
        g = [rng.normal() for _ in range(8)]
        n2 = (
            g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]
            + g[4] * g[4] + g[5] * g[5] + g[6] * g[6] + g[7] * g[7]
        )
        if n2 > 1e-24:
            break
    c = (
        complex(g[0], g[1]),
        complex(g[2], g[3]),
        complex(g[4], g[5]),
        complex(g[6], g[7]),
    )
    out = [complex(0.0, 0.0)] * 16
    for i in range(4):
        for j in range(4):
            out[4 * i + j] = (c[i] * c[j].conjugate()) / n2
    return tuple(out)


def _draw_mixed_weights(rng, rank):
    ws = [rng.exponential() for _ in range(rank)]
    total = 0.0
    for w in ws:
        total += w
    return [w / total for w in ws]


def _draw_verify_state(rng):
    """Random mixed state: rank uniform on 1..4, normalized exponential
    weights (drawn first), then that many pure states."""
    rank = 1 + int(rng.u01() * 4.0)
    ws = _draw_mixed_weights(rng, rank)
    out = [complex(0.0, 0.0)] * 16
    for w in ws:
        p = _draw_pure(rng)
        for j in range(16):
            out[j] = out[j] + p[j] * w
    return tuple(out)


# --------------------------------------------------------------------------
# batch kernels


def scan_batch(rho, seed, start, count):
    """Quads at `count` random arrangements (sample idx reads stream
    (scan domain, idx)), for the fixed state rho."""
    out = []
    for idx in range(start, start + count):
        rng = PhiloxStream(seed, stream_id(DOMAIN_SCAN, idx))
        s = _draw_settings(rng)
        out.append(quad_trace(rho, s))
    return out


def verify_batch(seed, start, count):
    """Theorem sweep over `count` random (mixed state, arrangement) samples.

    Checks every ordered pair mu < nu for i_mu^2 + i_nu^2 <= 8 + 1e-9.
    Returns (max pair sum, max |component|, violation count, first violating
    sample index or -1).
    """
    max_pair = 0.0
    max_abs = 0.0
    nviol = 0
    first = -1
    for idx in range(start, start + count):
        rng = PhiloxStream(seed, stream_id(DOMAIN_VERIFY, idx))
        rho = _draw_verify_state(rng)
        s = _draw_settings(rng)
        q = quad_trace(rho, s)
        bad = 0
        for m in range(4):
            am = math.fabs(q[m])
            if am > max_abs:
                max_abs = am
            for n in range(m + 1, 4):
                ps = q[m] * q[m] + q[n] * q[n]
                if ps > max_pair:
                    max_pair = ps
                if ps > 8.0 + 1e-9:
                    bad = 1
        if bad:
            nviol += 1
            if first < 0:
                first = idx
    return (max_pair, max_abs, nviol, first)


def star_batch(seed, nq, quarter, j0, count):
    """Extremal-arrangement scan for one star quarter.

    Sample j of quarter Q has global index g = Q*nq + j; stream (star, g)
    yields V = u01() and theta = u01() * pi/2 for an isotropic-type state,
    the optimizer runs on stream (star-opt, g), quarters 1 and 3 flip
    Alice's directions to turn the maximizing ascent into minimization.
    Returns a list of (V, theta, i0, i1, i2, i3).
    """
    mu = 0 if quarter < 2 else 1
    flip = 1 if (quarter == 1 or quarter == 3) else 0
    out = []
    for j in range(j0, j0 + count):
        g = quarter * nq + j
        rng = PhiloxStream(seed, stream_id(DOMAIN_STAR, g))
        vis = rng.u01()
        th = rng.u01() * _HALF_PI
        s2 = math.sin(2.0 * th)
        t0 = vis * s2
        t = (t0, 0.0, 0.0, 0.0, -t0, 0.0, 0.0, 0.0, vis)
        s, _val = optimize_one(t, mu, seed, stream_id(DOMAIN_STAR_OPT, g))
        if flip:
            s = (-s[0], -s[1], -s[2], -s[3], -s[4], -s[5],
                 s[6], s[7], s[8], s[9], s[10], s[11])
        ch = math.cos(th)
        sh = math.sin(th)
        off = vis * (ch * sh)
        q4 = (1.0 - vis) * 0.25
        rho = (
            complex(vis * (ch * ch) + q4, 0.0), complex(0.0, 0.0),
            complex(0.0, 0.0), complex(off, 0.0),
            complex(0.0, 0.0), complex(q4, 0.0),
            complex(0.0, 0.0), complex(0.0, 0.0),
            complex(0.0, 0.0), complex(0.0, 0.0),
            complex(q4, 0.0), complex(0.0, 0.0),
            complex(off, 0.0), complex(0.0, 0.0),
            complex(0.0, 0.0), complex(vis * (sh * sh) + q4, 0.0),
        )
        quad = quad_trace(rho, s)
        out.append((vis, th, quad[0], quad[1], quad[2], quad[3]))
    return out
