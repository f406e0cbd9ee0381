# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
# cython: initializedcheck=False
"""Compiled compute kernels.

Twin of _kernels.py: same public functions, same frozen scalar-operation
order (the parity rules live in that module's docstring).  The Philox
generator and the corpus draw recipes are repeated here in C so the batch
kernels run without Python object traffic.  Complex arithmetic is spelled
out on explicit (re, im) pairs with the exact formulas the interpreter
uses; libc.math calls hit the same libm as the math module, and setup.py
compiles with -ffp-contract=off.  tests/test_backend_parity.py holds the
two modules together.
"""

from libc.math cimport M_PI, acos, atan2, cos, fabs, ldexp, log, sin, sqrt

BACKEND = "cython"

cdef double _TWO_NEG53 = ldexp(1.0, -53)
cdef double _TWO_PI = 6.283185307179586476925286766559
cdef double _HALF_PI = 0.5 * M_PI
cdef int _JACOBI_SWEEPS = 64
cdef double _JACOBI_TOL = 1e-13

cdef unsigned long long _M0 = 0xD2511F53
cdef unsigned long long _M1 = 0xCD9E8D57
cdef unsigned int _W0 = 0x9E3779B9
cdef unsigned int _W1 = 0xBB67AE85

# stream-id domains, as in rng.py: id = (domain << 48) | index
cdef unsigned long long _DOMAIN_SCAN = 1
cdef unsigned long long _DOMAIN_VERIFY = 2
cdef unsigned long long _DOMAIN_STAR = 6
cdef unsigned long long _DOMAIN_STAR_OPT = 7

# sign patterns of the four CHSH forms on (A1B1, A1B2, A2B1, A2B2)
cdef double _SIGNS_C[4][4]
cdef double _PAULI_R[3][4]
cdef double _PAULI_I[3][4]

_signs_py = (
    (1.0, 1.0, 1.0, -1.0),
    (-1.0, 1.0, 1.0, 1.0),
    (1.0, -1.0, 1.0, 1.0),
    (1.0, 1.0, -1.0, 1.0),
)
_pauli_re_py = (
    (0.0, 1.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 0.0),
    (1.0, 0.0, 0.0, -1.0),
)
_pauli_im_py = (
    (0.0, 0.0, 0.0, 0.0),
    (0.0, -1.0, 1.0, 0.0),
    (0.0, 0.0, 0.0, 0.0),
)

cdef int _ti, _tj
for _ti in range(4):
    for _tj in range(4):
        _SIGNS_C[_ti][_tj] = _signs_py[_ti][_tj]
for _ti in range(3):
    for _tj in range(4):
        _PAULI_R[_ti][_tj] = _pauli_re_py[_ti][_tj]
        _PAULI_I[_ti][_tj] = _pauli_im_py[_ti][_tj]
del _signs_py, _pauli_re_py, _pauli_im_py

_ZERO39 = tuple([0.0] * 39)


# --------------------------------------------------------------------------
# Philox4x32-10 and the sequential draws (C mirror of rng.py)


cdef struct CStream:
    unsigned long long seed
    unsigned long long stream
    unsigned long long pos


cdef inline void _philox_block(unsigned long long seed, unsigned long long stream,
                               unsigned long long block, unsigned int* w) noexcept:
    cdef unsigned int c0 = <unsigned int> block
    cdef unsigned int c1 = <unsigned int> (block >> 32)
    cdef unsigned int c2 = <unsigned int> stream
    cdef unsigned int c3 = <unsigned int> (stream >> 32)
    cdef unsigned int k0 = <unsigned int> seed
    cdef unsigned int k1 = <unsigned int> (seed >> 32)
    cdef unsigned long long p0, p1
    cdef unsigned int hi0, lo0, hi1, lo1
    cdef int r
    for r in range(10):
        p0 = (<unsigned long long> c0) * _M0
        p1 = (<unsigned long long> c2) * _M1
        hi0 = <unsigned int> (p0 >> 32)
        lo0 = <unsigned int> p0
        hi1 = <unsigned int> (p1 >> 32)
        lo1 = <unsigned int> p1
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    w[0] = c0
    w[1] = c1
    w[2] = c2
    w[3] = c3


cdef inline double _double_at(unsigned long long seed, unsigned long long stream,
                              unsigned long long pos) noexcept:
    cdef unsigned int w[4]
    cdef unsigned long long u64
    _philox_block(seed, stream, pos >> 1, w)
    if pos & 1:
        u64 = ((<unsigned long long> w[3]) << 32) | w[2]
    else:
        u64 = ((<unsigned long long> w[1]) << 32) | w[0]
    return (<double> (u64 >> 11)) * _TWO_NEG53


cdef inline double _u01_c(CStream* st) noexcept:
    cdef double v = _double_at(st.seed, st.stream, st.pos)
    st.pos += 1
    return v


cdef inline double _normal_c(CStream* st) noexcept:
    cdef double a = _u01_c(st)
    cdef double b = _u01_c(st)
    return sqrt(-2.0 * log(1.0 - a)) * cos(_TWO_PI * b)


cdef inline double _exponential_c(CStream* st) noexcept:
    return -log(1.0 - _u01_c(st))


cdef inline void _unit3_c(CStream* st, double* out) noexcept:
    cdef double g0, g1, g2, n2, inv
    while True:
        g0 = _normal_c(st)
        g1 = _normal_c(st)
        g2 = _normal_c(st)
        n2 = g0 * g0 + g1 * g1 + g2 * g2
        if n2 > 1e-24:
            break
    inv = 1.0 / sqrt(n2)
    out[0] = g0 * inv
    out[1] = g1 * inv
    out[2] = g2 * inv


cdef inline void _open_stream(object rng, CStream* st):
    st.seed = <unsigned long long> (rng.seed & 0xFFFFFFFFFFFFFFFF)
    st.stream = <unsigned long long> (rng.stream & 0xFFFFFFFFFFFFFFFF)
    st.pos = <unsigned long long> rng.pos


# --------------------------------------------------------------------------
# small real-vector helpers


cdef inline double _dot3_c(double x0, double x1, double x2,
                           double y0, double y1, double y2) noexcept:
    return x0 * y0 + x1 * y1 + x2 * y2


cdef inline void _matvec3_c(double* t, double v0, double v1, double v2,
                            double* out) noexcept:
    out[0] = t[0] * v0 + t[1] * v1 + t[2] * v2
    out[1] = t[3] * v0 + t[4] * v1 + t[5] * v2
    out[2] = t[6] * v0 + t[7] * v1 + t[8] * v2


cdef inline void _tmatvec3_c(double* t, double v0, double v1, double v2,
                             double* out) noexcept:
    out[0] = t[0] * v0 + t[3] * v1 + t[6] * v2
    out[1] = t[1] * v0 + t[4] * v1 + t[7] * v2
    out[2] = t[2] * v0 + t[5] * v1 + t[8] * v2


cdef inline void _cross3_c(double x0, double x1, double x2,
                           double y0, double y1, double y2, double* out) noexcept:
    out[0] = x1 * y2 - x2 * y1
    out[1] = x2 * y0 - x0 * y2
    out[2] = x0 * y1 - x1 * y0


cdef inline void _perp3_c(double p0, double p1, double p2, double* out) noexcept:
    cdef double w0, w1, w2, inv
    if fabs(p0) < 0.9:
        w0 = 1.0 - p0 * p0
        w1 = -p0 * p1
        w2 = -p0 * p2
    elif fabs(p1) < 0.9:
        w0 = -p1 * p0
        w1 = 1.0 - p1 * p1
        w2 = -p1 * p2
    else:
        w0 = -p2 * p0
        w1 = -p2 * p1
        w2 = 1.0 - p2 * p2
    inv = 1.0 / sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    out[0] = w0 * inv
    out[1] = w1 * inv
    out[2] = w2 * inv


cdef inline double _clamp1_c(double x) noexcept:
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


# --------------------------------------------------------------------------
# dense complex linear algebra on explicit (re, im) pairs


cdef inline void _mat4mul_c(double* ar, double* ai, double* br, double* bi,
                            double* outr, double* outi) noexcept:
    cdef int i, j, k
    cdef double accr, acci, xr, xi, yr, yi
    for i in range(4):
        for j in range(4):
            accr = 0.0
            acci = 0.0
            for k in range(4):
                xr = ar[4 * i + k]
                xi = ai[4 * i + k]
                yr = br[4 * k + j]
                yi = bi[4 * k + j]
                accr = accr + (xr * yr - xi * yi)
                acci = acci + (xr * yi + xi * yr)
            outr[4 * i + j] = accr
            outi[4 * i + j] = acci


cdef inline void _kron2_c(double* ar, double* ai, double* br, double* bi,
                          double* outr, double* outi) noexcept:
    cdef int i, j, k, l, idx
    cdef double xr, xi, yr, yi
    for i in range(2):
        for j in range(2):
            xr = ar[2 * i + j]
            xi = ai[2 * i + j]
            for k in range(2):
                for l in range(2):
                    yr = br[2 * k + l]
                    yi = bi[2 * k + l]
                    idx = 4 * (2 * i + k) + (2 * j + l)
                    outr[idx] = xr * yr - xi * yi
                    outi[idx] = xr * yi + xi * yr


cdef inline void _trace_c(double* rr, double* ri, double* mr, double* mi,
                          double* out) noexcept:
    # tr(rho m); out holds (re, im)
    cdef double accr = 0.0
    cdef double acci = 0.0
    cdef int i, k
    cdef double xr, xi, yr, yi
    for i in range(4):
        for k in range(4):
            xr = rr[4 * i + k]
            xi = ri[4 * i + k]
            yr = mr[4 * k + i]
            yi = mi[4 * k + i]
            accr = accr + (xr * yr - xi * yi)
            acci = acci + (xr * yi + xi * yr)
    out[0] = accr
    out[1] = acci


cdef void _herm4_c(double* mr, double* mi, double* evals) noexcept:
    cdef int sweep, p, q, k, i, j
    cdef double off2, zr, zi, b2, b, ephr, ephi, app, aqq, tau, t, c, tc
    cdef double sephr, sephi, sephcr, sephci
    cdef double akpr, akpi, akqr, akqi, apkr, apki, aqkr, aqki
    cdef double t1r, t1i, t2r, t2i, tmp
    cdef double e[4]
    for sweep in range(_JACOBI_SWEEPS):
        off2 = 0.0
        for p in range(3):
            for q in range(p + 1, 4):
                zr = mr[4 * p + q]
                zi = mi[4 * p + q]
                off2 += zr * zr + zi * zi
        if sqrt(2.0 * off2) < _JACOBI_TOL:
            break
        for p in range(3):
            for q in range(p + 1, 4):
                zr = mr[4 * p + q]
                zi = mi[4 * p + q]
                b2 = zr * zr + zi * zi
                if b2 == 0.0:
                    continue
                b = sqrt(b2)
                ephr = zr / b
                ephi = zi / b
                app = mr[4 * p + p]
                aqq = mr[4 * q + q]
                tau = (aqq - app) / (2.0 * b)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                tc = t * c
                sephr = tc * ephr
                sephi = tc * ephi
                sephcr = sephr
                sephci = -sephi
                for k in range(4):
                    akpr = mr[4 * k + p]
                    akpi = mi[4 * k + p]
                    akqr = mr[4 * k + q]
                    akqi = mi[4 * k + q]
                    t1r = sephcr * akqr - sephci * akqi
                    t1i = sephcr * akqi + sephci * akqr
                    mr[4 * k + p] = c * akpr - t1r
                    mi[4 * k + p] = c * akpi - t1i
                    t2r = sephr * akpr - sephi * akpi
                    t2i = sephr * akpi + sephi * akpr
                    mr[4 * k + q] = t2r + c * akqr
                    mi[4 * k + q] = t2i + c * akqi
                for k in range(4):
                    apkr = mr[4 * p + k]
                    apki = mi[4 * p + k]
                    aqkr = mr[4 * q + k]
                    aqki = mi[4 * q + k]
                    t1r = sephr * aqkr - sephi * aqki
                    t1i = sephr * aqki + sephi * aqkr
                    mr[4 * p + k] = c * apkr - t1r
                    mi[4 * p + k] = c * apki - t1i
                    t2r = sephcr * apkr - sephci * apki
                    t2i = sephcr * apki + sephci * apkr
                    mr[4 * q + k] = t2r + c * aqkr
                    mi[4 * q + k] = t2i + c * aqki
    e[0] = mr[0]
    e[1] = mr[5]
    e[2] = mr[10]
    e[3] = mr[15]
    for i in range(3):
        for j in range(3 - i):
            if e[j] > e[j + 1]:
                tmp = e[j]
                e[j] = e[j + 1]
                e[j + 1] = tmp
    evals[0] = e[0]
    evals[1] = e[1]
    evals[2] = e[2]
    evals[3] = e[3]


cdef void _sym3_c(double* m, double* evals) noexcept:
    cdef int sweep, p, q, k, i, j
    cdef double off, apq, tau, tt, c, s
    cdef double akp, akq, apk, aqk, tmp
    cdef double e[3]
    for sweep in range(_JACOBI_SWEEPS):
        off = m[1] * m[1] + m[2] * m[2] + m[5] * m[5]
        if sqrt(2.0 * off) < _JACOBI_TOL:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = m[3 * p + q]
                if apq == 0.0:
                    continue
                tau = (m[3 * q + q] - m[3 * p + p]) / (2.0 * apq)
                if tau >= 0.0:
                    tt = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    tt = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + tt * tt)
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
    e[0] = m[0]
    e[1] = m[4]
    e[2] = m[8]
    for i in range(2):
        for j in range(2 - i):
            if e[j] < e[j + 1]:
                tmp = e[j]
                e[j] = e[j + 1]
                e[j + 1] = tmp
    evals[0] = e[0]
    evals[1] = e[1]
    evals[2] = e[2]


# --------------------------------------------------------------------------
# expectation values


cdef inline void _obs2_c(double n0, double n1, double n2,
                         double* mr, double* mi) noexcept:
    mr[0] = n2
    mi[0] = 0.0
    mr[1] = n0
    mi[1] = -n1
    mr[2] = n0
    mi[2] = n1
    mr[3] = -n2
    mi[3] = 0.0


cdef double _corr_c(double* rr, double* ri, double* t) noexcept:
    # fills the flat 3x3 tensor; returns the largest |imaginary part| seen
    cdef int mrow, ncol
    cdef double bigr[16]
    cdef double bigi[16]
    cdef double tr[2]
    cdef double max_imag = 0.0
    cdef double ai
    for mrow in range(3):
        for ncol in range(3):
            _kron2_c(&_PAULI_R[mrow][0], &_PAULI_I[mrow][0],
                     &_PAULI_R[ncol][0], &_PAULI_I[ncol][0], bigr, bigi)
            _trace_c(rr, ri, bigr, bigi, tr)
            t[3 * mrow + ncol] = tr[0]
            ai = fabs(tr[1])
            if ai > max_imag:
                max_imag = ai
    return max_imag


cdef void _quad_c(double* rr, double* ri, double* sv, double* out) noexcept:
    cdef double a1r[4]
    cdef double a1i[4]
    cdef double a2r[4]
    cdef double a2i[4]
    cdef double b1r[4]
    cdef double b1i[4]
    cdef double b2r[4]
    cdef double b2i[4]
    cdef double k11r[16]
    cdef double k11i[16]
    cdef double k12r[16]
    cdef double k12i[16]
    cdef double k21r[16]
    cdef double k21i[16]
    cdef double k22r[16]
    cdef double k22i[16]
    cdef double opr[16]
    cdef double opi[16]
    cdef double tr[2]
    cdef int mu, j
    cdef double sg0, sg1, sg2, sg3
    _obs2_c(sv[0], sv[1], sv[2], a1r, a1i)
    _obs2_c(sv[3], sv[4], sv[5], a2r, a2i)
    _obs2_c(sv[6], sv[7], sv[8], b1r, b1i)
    _obs2_c(sv[9], sv[10], sv[11], b2r, b2i)
    _kron2_c(a1r, a1i, b1r, b1i, k11r, k11i)
    _kron2_c(a1r, a1i, b2r, b2i, k12r, k12i)
    _kron2_c(a2r, a2i, b1r, b1i, k21r, k21i)
    _kron2_c(a2r, a2i, b2r, b2i, k22r, k22i)
    for mu in range(4):
        sg0 = _SIGNS_C[mu][0]
        sg1 = _SIGNS_C[mu][1]
        sg2 = _SIGNS_C[mu][2]
        sg3 = _SIGNS_C[mu][3]
        for j in range(16):
            opr[j] = k11r[j] * sg0 + k12r[j] * sg1 + k21r[j] * sg2 + k22r[j] * sg3
            opi[j] = k11i[j] * sg0 + k12i[j] * sg1 + k21i[j] * sg2 + k22i[j] * sg3
        _trace_c(rr, ri, opr, opi, tr)
        out[mu] = tr[0]


cdef inline void _bobframe_c(double b1x, double b1y, double b1z,
                             double b2x, double b2y, double b2z,
                             double* out, int* sum_deg, int* diff_deg) noexcept:
    cdef double sx = b1x + b2x
    cdef double sy = b1y + b2y
    cdef double sz = b1z + b2z
    cdef double dx = b1x - b2x
    cdef double dy = b1y - b2y
    cdef double dz = b1z - b2z
    cdef double ns = sqrt(sx * sx + sy * sy + sz * sz)
    cdef double nd = sqrt(dx * dx + dy * dy + dz * dz)
    cdef int sdeg = 1 if ns < 1e-9 else 0
    cdef int ddeg = 1 if nd < 1e-9 else 0
    cdef double inv
    cdef double c[3]
    cdef double cp[3]
    if sdeg:
        inv = 1.0 / nd
        cp[0] = dx * inv
        cp[1] = dy * inv
        cp[2] = dz * inv
        _perp3_c(cp[0], cp[1], cp[2], c)
    elif ddeg:
        inv = 1.0 / ns
        c[0] = sx * inv
        c[1] = sy * inv
        c[2] = sz * inv
        _perp3_c(c[0], c[1], c[2], cp)
    else:
        inv = 1.0 / ns
        c[0] = sx * inv
        c[1] = sy * inv
        c[2] = sz * inv
        inv = 1.0 / nd
        cp[0] = dx * inv
        cp[1] = dy * inv
        cp[2] = dz * inv
    out[0] = c[0]
    out[1] = c[1]
    out[2] = c[2]
    out[3] = cp[0]
    out[4] = cp[1]
    out[5] = cp[2]
    out[6] = acos(_clamp1_c(ns * 0.5))
    sum_deg[0] = sdeg
    diff_deg[0] = ddeg


cdef inline double _i0mid_c(double* t, double* sv) noexcept:
    cdef double bf[7]
    cdef int sdeg, ddeg
    cdef double w[3]
    cdef double wp[3]
    _bobframe_c(sv[6], sv[7], sv[8], sv[9], sv[10], sv[11], bf, &sdeg, &ddeg)
    _matvec3_c(t, bf[0], bf[1], bf[2], w)
    _matvec3_c(t, bf[3], bf[4], bf[5], wp)
    return 2.0 * (
        _dot3_c(sv[0], sv[1], sv[2], w[0], w[1], w[2]) * cos(bf[6])
        + _dot3_c(sv[3], sv[4], sv[5], wp[0], wp[1], wp[2]) * sin(bf[6])
    )


cdef inline double _horodecki_c(double* t) noexcept:
    cdef double m[9]
    cdef double e[3]
    cdef int i, j
    for i in range(3):
        for j in range(3):
            m[3 * i + j] = (
                t[i] * t[j] + t[3 + i] * t[3 + j] + t[6 + i] * t[6 + j]
            )
    _sym3_c(m, e)
    return 2.0 * sqrt(e[0] + e[1])


# --------------------------------------------------------------------------
# optimizers


cdef inline void _alice_combos_c(int mu, double* b1, double* b2,
                                 double* p, double* q) noexcept:
    if mu == 0:
        p[0] = b1[0] + b2[0]
        p[1] = b1[1] + b2[1]
        p[2] = b1[2] + b2[2]
        q[0] = b1[0] - b2[0]
        q[1] = b1[1] - b2[1]
        q[2] = b1[2] - b2[2]
    elif mu == 1:
        p[0] = b2[0] - b1[0]
        p[1] = b2[1] - b1[1]
        p[2] = b2[2] - b1[2]
        q[0] = b1[0] + b2[0]
        q[1] = b1[1] + b2[1]
        q[2] = b1[2] + b2[2]
    elif mu == 2:
        p[0] = b1[0] - b2[0]
        p[1] = b1[1] - b2[1]
        p[2] = b1[2] - b2[2]
        q[0] = b1[0] + b2[0]
        q[1] = b1[1] + b2[1]
        q[2] = b1[2] + b2[2]
    else:
        p[0] = b1[0] + b2[0]
        p[1] = b1[1] + b2[1]
        p[2] = b1[2] + b2[2]
        q[0] = b2[0] - b1[0]
        q[1] = b2[1] - b1[1]
        q[2] = b2[2] - b1[2]


cdef inline void _bob_combos_c(int mu, double* a1, double* a2,
                               double* p, double* q) noexcept:
    if mu == 0:
        p[0] = a1[0] + a2[0]
        p[1] = a1[1] + a2[1]
        p[2] = a1[2] + a2[2]
        q[0] = a1[0] - a2[0]
        q[1] = a1[1] - a2[1]
        q[2] = a1[2] - a2[2]
    elif mu == 1:
        p[0] = a2[0] - a1[0]
        p[1] = a2[1] - a1[1]
        p[2] = a2[2] - a1[2]
        q[0] = a1[0] + a2[0]
        q[1] = a1[1] + a2[1]
        q[2] = a1[2] + a2[2]
    elif mu == 2:
        p[0] = a1[0] + a2[0]
        p[1] = a1[1] + a2[1]
        p[2] = a1[2] + a2[2]
        q[0] = a2[0] - a1[0]
        q[1] = a2[1] - a1[1]
        q[2] = a2[2] - a1[2]
    else:
        p[0] = a1[0] - a2[0]
        p[1] = a1[1] - a2[1]
        p[2] = a1[2] - a2[2]
        q[0] = a1[0] + a2[0]
        q[1] = a1[1] + a2[1]
        q[2] = a1[2] + a2[2]


cdef double _optimize_c(double* t, int mu, unsigned long long seed,
                        unsigned long long stream, double* best) noexcept:
    cdef CStream st
    cdef double b1[3]
    cdef double b2[3]
    cdef double a1[3]
    cdef double a2[3]
    cdef double p[3]
    cdef double q[3]
    cdef double w1[3]
    cdef double w2[3]
    cdef double v1[3]
    cdef double v2[3]
    cdef double best_val = -1.0
    cdef double prev, val, n1, n2, m1, m2, inv
    cdef int r, it, i
    st.seed = seed
    st.stream = stream
    st.pos = 0
    best[0] = 1.0
    best[1] = 0.0
    best[2] = 0.0
    best[3] = 0.0
    best[4] = 1.0
    best[5] = 0.0
    best[6] = 1.0
    best[7] = 0.0
    best[8] = 0.0
    best[9] = 0.0
    best[10] = 1.0
    best[11] = 0.0
    for r in range(8):
        _unit3_c(&st, b1)
        _unit3_c(&st, b2)
        a1[0] = 1.0
        a1[1] = 0.0
        a1[2] = 0.0
        a2[0] = 0.0
        a2[1] = 1.0
        a2[2] = 0.0
        prev = -1.0
        val = 0.0
        for it in range(500):
            _alice_combos_c(mu, b1, b2, p, q)
            _matvec3_c(t, p[0], p[1], p[2], w1)
            _matvec3_c(t, q[0], q[1], q[2], w2)
            n1 = sqrt(w1[0] * w1[0] + w1[1] * w1[1] + w1[2] * w1[2])
            n2 = sqrt(w2[0] * w2[0] + w2[1] * w2[1] + w2[2] * w2[2])
            if n1 > 1e-15:
                inv = 1.0 / n1
                a1[0] = w1[0] * inv
                a1[1] = w1[1] * inv
                a1[2] = w1[2] * inv
            if n2 > 1e-15:
                inv = 1.0 / n2
                a2[0] = w2[0] * inv
                a2[1] = w2[1] * inv
                a2[2] = w2[2] * inv
            _bob_combos_c(mu, a1, a2, p, q)
            _tmatvec3_c(t, p[0], p[1], p[2], v1)
            _tmatvec3_c(t, q[0], q[1], q[2], v2)
            m1 = sqrt(v1[0] * v1[0] + v1[1] * v1[1] + v1[2] * v1[2])
            m2 = sqrt(v2[0] * v2[0] + v2[1] * v2[1] + v2[2] * v2[2])
            if m1 > 1e-15:
                inv = 1.0 / m1
                b1[0] = v1[0] * inv
                b1[1] = v1[1] * inv
                b1[2] = v1[2] * inv
            if m2 > 1e-15:
                inv = 1.0 / m2
                b2[0] = v2[0] * inv
                b2[1] = v2[1] * inv
                b2[2] = v2[2] * inv
            val = m1 + m2
            if fabs(val - prev) < 1e-12:
                break
            prev = val
        if val > best_val:
            best_val = val
            for i in range(3):
                best[i] = a1[i]
                best[3 + i] = a2[i]
                best[6 + i] = b1[i]
                best[9 + i] = b2[i]
    return best_val


cdef double _msum_c(double* t, unsigned long long seed, unsigned long long stream,
                    double* arr) noexcept:
    cdef CStream st
    cdef double q[3]
    cdef double p[3]
    cdef double w[3]
    cdef double z[3]
    cdef double bp[3]
    cdef double bq[3]
    cdef double a1[3]
    cdef double a2[3]
    cdef double b1[3]
    cdef double b2[3]
    cdef double wa[3]
    cdef double wb[3]
    cdef double tw[3]
    cdef double best_val = -1.0
    cdef double prev, val, n1, n2, inv, value
    cdef int r, it, i
    st.seed = seed
    st.stream = stream
    st.pos = 0
    bp[0] = 0.0
    bp[1] = 0.0
    bp[2] = 1.0
    bq[0] = 0.0
    bq[1] = 0.0
    bq[2] = 1.0
    for r in range(8):
        _unit3_c(&st, q)
        p[0] = 1.0
        p[1] = 0.0
        p[2] = 0.0
        prev = -1.0
        val = 8.0
        for it in range(500):
            _matvec3_c(t, q[0], q[1], q[2], w)
            n1 = sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2])
            if n1 > 1e-15:
                inv = 1.0 / n1
                p[0] = w[0] * inv
                p[1] = w[1] * inv
                p[2] = w[2] * inv
            _tmatvec3_c(t, p[0], p[1], p[2], z)
            n2 = sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2])
            if n2 > 1e-15:
                inv = 1.0 / n2
                q[0] = z[0] * inv
                q[1] = z[1] * inv
                q[2] = z[2] * inv
            val = 8.0 + 8.0 * n2
            if fabs(val - prev) < 1e-12:
                break
            prev = val
        if val > best_val:
            best_val = val
            for i in range(3):
                bp[i] = p[i]
                bq[i] = q[i]
    _perp3_c(bp[0], bp[1], bp[2], a1)
    _cross3_c(bp[0], bp[1], bp[2], a1[0], a1[1], a1[2], a2)
    _perp3_c(bq[0], bq[1], bq[2], b1)
    _cross3_c(bq[0], bq[1], bq[2], b1[0], b1[1], b1[2], b2)
    _cross3_c(a1[0], a1[1], a1[2], a2[0], a2[1], a2[2], wa)
    _cross3_c(b1[0], b1[1], b1[2], b2[0], b2[1], b2[2], wb)
    _matvec3_c(t, wb[0], wb[1], wb[2], tw)
    value = 8.0 + 8.0 * _dot3_c(wa[0], wa[1], wa[2], tw[0], tw[1], tw[2])
    for i in range(3):
        arr[i] = a1[i]
        arr[3 + i] = a2[i]
        arr[6 + i] = b1[i]
        arr[9 + i] = b2[i]
    return value


# --------------------------------------------------------------------------
# midframe / image-frame / angle pipeline


cdef inline int _image_c(double* t, double c0, double c1, double c2,
                         double* out) noexcept:
    cdef double w[3]
    cdef double big, inv
    _matvec3_c(t, c0, c1, c2, w)
    big = sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2])
    if big < 1e-12:
        out[0] = big
        out[1] = 1.0
        out[2] = 0.0
        out[3] = 0.0
        return 1
    inv = 1.0 / big
    out[0] = big
    out[1] = w[0] * inv
    out[2] = w[1] * inv
    out[3] = w[2] * inv
    return 0


cdef inline int _recover_c(double alpha, double beta, double uu,
                           double* out) noexcept:
    cdef double base = acos(_clamp1_c(uu))
    cdef double hi = 2.0 * alpha
    cdef double best = -1.0
    cdef int found = 0
    cdef double psis[3]
    cdef double psi, dl
    cdef int i
    psis[0] = base
    psis[1] = -base
    psis[2] = 2.0 * M_PI - base
    for i in range(3):
        psi = psis[i]
        dl = alpha + beta - psi
        if dl >= -1e-9 and dl <= hi + 1e-9:
            if fabs(cos(alpha + beta - dl) - uu) <= 1e-9:
                if found == 0 or dl < best:
                    best = dl
                    found = 1
    out[0] = best
    return found


cdef inline int _angles_c(double a1x, double a1y, double a1z,
                          double a2x, double a2y, double a2z,
                          double dx, double dy, double dz,
                          double px, double py, double pz,
                          double* out) noexcept:
    # out: alpha, alpha', beta, delta, delta', u, v; returns the status
    cdef double ad = _dot3_c(a1x, a1y, a1z, dx, dy, dz)
    cdef double apdp = _dot3_c(a2x, a2y, a2z, px, py, pz)
    cdef double ddp = _dot3_c(dx, dy, dz, px, py, pz)
    cdef double u = _dot3_c(a1x, a1y, a1z, px, py, pz)
    cdef double v = _dot3_c(a2x, a2y, a2z, dx, dy, dz)
    cdef double alpha = acos(_clamp1_c(ad))
    cdef double alphap = acos(_clamp1_c(apdp))
    cdef double beta = acos(_clamp1_c(ddp))
    cdef double delta, deltap
    cdef int ok1 = _recover_c(alpha, beta, u, &delta)
    cdef int ok2 = _recover_c(alphap, beta, v, &deltap)
    out[0] = alpha
    out[1] = alphap
    out[2] = beta
    out[3] = delta
    out[4] = deltap
    out[5] = u
    out[6] = v
    return 0 if (ok1 and ok2) else 2


cdef inline void _box_c(double alpha, double alphap, double beta,
                        double* out) noexcept:
    cdef double c1 = cos(alpha + beta)
    cdef double c2 = cos(beta - alpha)
    cdef double c3 = cos(alphap + beta)
    cdef double c4 = cos(beta - alphap)
    out[0] = c1 if c1 < c2 else c2
    out[1] = c2 if c1 < c2 else c1
    out[2] = c3 if c3 < c4 else c4
    out[3] = c4 if c3 < c4 else c3


cdef inline void _coeffs_c(double alpha, double alphap, double beta,
                           double delta, double deltap, double* out) noexcept:
    cdef double u = cos(alpha + beta - delta)
    cdef double v = cos(alphap + beta - deltap)
    cdef double ca = cos(alpha)
    cdef double cap = cos(alphap)
    cdef double tmp = (
        cos(2.0 * alpha + beta - delta)
        + cos(2.0 * alphap + beta - deltap)
        + cos(beta - delta)
        + cos(beta - deltap)
    )
    out[0] = u
    out[1] = v
    out[2] = u * u + v * v
    out[3] = ca * ca + cap * cap
    out[4] = u * cap - v * ca
    out[5] = tmp * tmp


cdef inline void _axes_c(double a, double b, double c, double* out) noexcept:
    # out: s, eta, A'_even, B'_even, xi_even, xi_odd; B' in the stable
    # 2 (a b - c^2) / (a + b + s) form, as in the pure twin
    cdef double dd = a - b
    cdef double s = sqrt(dd * dd + 4.0 * c * c)
    cdef double eta = atan2(2.0 * c, dd)
    cdef double ape = (a + b + s) * 0.5
    cdef double den = a + b + s
    cdef double bpe
    if den > 0.0:
        bpe = 2.0 * (a * b - c * c) / den
    else:
        bpe = 0.0
    out[0] = s
    out[1] = eta
    out[2] = ape
    out[3] = bpe
    out[4] = -0.5 * eta
    out[5] = (M_PI - eta) * 0.5


cdef inline void _gap_c(double alpha, double alphap, double beta,
                        double delta, double deltap, double* out) noexcept:
    cdef double u = cos(alpha + beta - delta)
    cdef double v = cos(alphap + beta - deltap)
    cdef double ca = cos(alpha)
    cdef double cap = cos(alphap)
    cdef double sa = sin(alpha)
    cdef double sap = sin(alphap)
    cdef double ell = 2.0 - u * u - v * v + sa * sa + sap * sap
    cdef double t1 = u - ca
    cdef double t2 = v - cap
    cdef double t3 = u + ca
    cdef double t4 = v + cap
    cdef double r = sqrt(t1 * t1 + t2 * t2) * sqrt(t3 * t3 + t4 * t4)
    cdef double dl = ell - r
    out[0] = ell
    out[1] = r
    out[2] = dl
    out[3] = ell * ell - r * r
    out[4] = 8.0 - 2.0 * dl


cdef inline double _vertex_c(double alpha, double alphap, double beta,
                             int x, int y) noexcept:
    cdef double sx = 1.0 if x == 0 else -1.0
    cdef double sy = 1.0 if y == 0 else -1.0
    cdef double tmp = (
        cos(2.0 * sx * alpha + beta)
        + cos(2.0 * sy * alphap + beta)
        - 2.0 * cos(beta)
    )
    return tmp * tmp


# --------------------------------------------------------------------------
# corpus draw recipes (C mirror of the pure protocols)


cdef inline void _settings_c(CStream* st, double* s) noexcept:
    _unit3_c(st, s)
    _unit3_c(st, s + 3)
    _unit3_c(st, s + 6)
    _unit3_c(st, s + 9)


cdef void _pure_state_c(CStream* st, double* rr, double* ri) noexcept:
    cdef double g[8]
    cdef double n2, ar, ai, br, nbi
    cdef int i, j
    while True:
        for i in range(8):
            g[i] = _normal_c(st)
        n2 = (
            g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]
            + g[4] * g[4] + g[5] * g[5] + g[6] * g[6] + g[7] * g[7]
        )
        if n2 > 1e-24:
            break
    for i in range(4):
        ar = g[2 * i]
        ai = g[2 * i + 1]
        for j in range(4):
            br = g[2 * j]
            nbi = -g[2 * j + 1]
            rr[4 * i + j] = (ar * br - ai * nbi) / n2
            ri[4 * i + j] = (ar * nbi + ai * br) / n2


cdef void _verify_state_c(CStream* st, double* rr, double* ri) noexcept:
    cdef int rank = 1 + <int> (_u01_c(st) * 4.0)
    cdef double ws[4]
    cdef double pr[16]
    cdef double pim[16]
    cdef double total = 0.0
    cdef double wgt
    cdef int i, j
    for i in range(rank):
        ws[i] = _exponential_c(st)
    for i in range(rank):
        total += ws[i]
    for i in range(rank):
        ws[i] = ws[i] / total
    for j in range(16):
        rr[j] = 0.0
        ri[j] = 0.0
    for i in range(rank):
        _pure_state_c(st, pr, pim)
        wgt = ws[i]
        for j in range(16):
            rr[j] = rr[j] + pr[j] * wgt
            ri[j] = ri[j] + pim[j] * wgt


# --------------------------------------------------------------------------
# public surface (same names and shapes as the pure twin)


def mat4_mul(a, b):
    """Row-major product of two flat 4x4 complex matrices."""
    cdef double ar[16]
    cdef double ai[16]
    cdef double br[16]
    cdef double bi[16]
    cdef double outr[16]
    cdef double outi[16]
    cdef int i
    cdef double complex z
    for i in range(16):
        z = a[i]
        ar[i] = z.real
        ai[i] = z.imag
        z = b[i]
        br[i] = z.real
        bi[i] = z.imag
    _mat4mul_c(ar, ai, br, bi, outr, outi)
    return tuple([complex(outr[i], outi[i]) for i in range(16)])


def mat2_kron(a, b):
    """Kronecker product of two flat 2x2 complex matrices (4x4 result)."""
    cdef double ar[4]
    cdef double ai[4]
    cdef double br[4]
    cdef double bi[4]
    cdef double outr[16]
    cdef double outi[16]
    cdef int i
    cdef double complex z
    for i in range(4):
        z = a[i]
        ar[i] = z.real
        ai[i] = z.imag
        z = b[i]
        br[i] = z.real
        bi[i] = z.imag
    _kron2_c(ar, ai, br, bi, outr, outi)
    return tuple([complex(outr[i], outi[i]) for i in range(16)])


def mat4_trace(a):
    cdef double complex z0 = a[0]
    cdef double complex z1 = a[5]
    cdef double complex z2 = a[10]
    cdef double complex z3 = a[15]
    return complex(z0.real + z1.real + z2.real + z3.real,
                   z0.imag + z1.imag + z2.imag + z3.imag)


def herm4_eigvals(a):
    """Eigenvalues of a flat 4x4 Hermitian matrix, ascending."""
    cdef double mr[16]
    cdef double mi[16]
    cdef double e[4]
    cdef int i
    cdef double complex z
    for i in range(16):
        z = a[i]
        mr[i] = z.real
        mi[i] = z.imag
    _herm4_c(mr, mi, e)
    return (e[0], e[1], e[2], e[3])


def sym3_eigvals(t):
    """Eigenvalues of a flat 3x3 real symmetric matrix, descending."""
    cdef double m[9]
    cdef double e[3]
    cdef int i
    for i in range(9):
        m[i] = t[i]
    _sym3_c(m, e)
    return (e[0], e[1], e[2])


def corr_tensor(rho):
    """Correlation tensor t[m,n] = tr rho (sigma_m x sigma_n) and the
    largest |imaginary part| seen."""
    cdef double rr[16]
    cdef double ri[16]
    cdef double t[9]
    cdef double mx
    cdef int i
    cdef double complex z
    for i in range(16):
        z = rho[i]
        rr[i] = z.real
        ri[i] = z.imag
    mx = _corr_c(rr, ri, t)
    return (t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8]), mx


def quad_trace(rho, s):
    """All four CHSH expectation values tr(rho I_mu) at the arrangement s."""
    cdef double rr[16]
    cdef double ri[16]
    cdef double sv[12]
    cdef double out[4]
    cdef int i
    cdef double complex z
    for i in range(16):
        z = rho[i]
        rr[i] = z.real
        ri[i] = z.imag
    for i in range(12):
        sv[i] = s[i]
    _quad_c(rr, ri, sv, out)
    return (out[0], out[1], out[2], out[3])


def i0_midframe(t, s):
    """First CHSH form via the midframe decomposition of Bob's pair."""
    cdef double tv[9]
    cdef double sv[12]
    cdef int i
    for i in range(9):
        tv[i] = t[i]
    for i in range(12):
        sv[i] = s[i]
    return _i0mid_c(tv, sv)


def horodecki(t):
    """Largest CHSH expectation over all arrangements: 2 sqrt(tau1 + tau2)
    with tau the two largest eigenvalues of T^T T."""
    cdef double tv[9]
    cdef int i
    for i in range(9):
        tv[i] = t[i]
    return _horodecki_c(tv)


def optimize_one(t, mu, seed, stream):
    """Maximize the mu-th CHSH form over arrangements (eight restarts of
    alternating closed-form half-steps; see the pure twin)."""
    cdef double tv[9]
    cdef double best[12]
    cdef int i
    cdef unsigned long long cseed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long cstream = <unsigned long long> (stream & 0xFFFFFFFFFFFFFFFF)
    cdef double val
    for i in range(9):
        tv[i] = t[i]
    val = _optimize_c(tv, mu, cseed, cstream, best)
    return (
        (best[0], best[1], best[2], best[3], best[4], best[5],
         best[6], best[7], best[8], best[9], best[10], best[11]),
        val,
    )


def msum_one(t, seed, stream):
    """Maximize <I0^2> + <I1^2> over arrangements by power iteration, then
    complete the singular pair into explicit directions."""
    cdef double tv[9]
    cdef double arr[12]
    cdef int i
    cdef unsigned long long cseed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long cstream = <unsigned long long> (stream & 0xFFFFFFFFFFFFFFFF)
    cdef double val
    for i in range(9):
        tv[i] = t[i]
    val = _msum_c(tv, cseed, cstream, arr)
    return (
        (arr[0], arr[1], arr[2], arr[3], arr[4], arr[5],
         arr[6], arr[7], arr[8], arr[9], arr[10], arr[11]),
        val,
    )


def bobframe(b1x, b1y, b1z, b2x, b2y, b2z):
    """Midframe of Bob's pair: axes c, c', weight angle theta, and the two
    degeneracy flags."""
    cdef double o[7]
    cdef int sdeg, ddeg
    _bobframe_c(b1x, b1y, b1z, b2x, b2y, b2z, o, &sdeg, &ddeg)
    return (o[0], o[1], o[2], o[3], o[4], o[5], o[6], sdeg, ddeg)


def imageframe(t, c0, c1, c2):
    """Image of a midframe axis under T: magnitude, unit direction, and a
    collapse flag."""
    cdef double tv[9]
    cdef double o[4]
    cdef int i, collapsed
    for i in range(9):
        tv[i] = t[i]
    collapsed = _image_c(tv, c0, c1, c2, o)
    return (o[0], o[1], o[2], o[3], collapsed)


def angletuple(a1x, a1y, a1z, a2x, a2y, a2z, dx, dy, dz, px, py, pz):
    """Angle data of a scene (alpha, alpha', beta, delta, delta', u, v,
    status); status 2 means no usable rotation branch."""
    cdef double o[7]
    cdef int status
    status = _angles_c(a1x, a1y, a1z, a2x, a2y, a2z, dx, dy, dz, px, py, pz, o)
    return (o[0], o[1], o[2], o[3], o[4], o[5], o[6], status)


def ellipse_box(alpha, alphap, beta):
    """Reachable rectangle for (u, v)."""
    cdef double o[4]
    _box_c(alpha, alphap, beta, o)
    return (o[0], o[1], o[2], o[3])


def ellipse_coeffs_raw(alpha, alphap, beta, delta, deltap):
    """Quadratic-form data (u, v, A, B, C, r2) of the bounding ellipse."""
    cdef double o[6]
    _coeffs_c(alpha, alphap, beta, delta, deltap, o)
    return (o[0], o[1], o[2], o[3], o[4], o[5])


def axes_raw(a, b, c):
    """Principal-axis data (s, eta, A'_even, B'_even, xi_even, A'_odd,
    B'_odd, xi_odd); the odd branch swaps the semi-axes."""
    cdef double o[6]
    _axes_c(a, b, c, o)
    return (o[0], o[1], o[2], o[3], o[4], o[3], o[2], o[5])


def gap_raw(alpha, alphap, beta, delta, deltap):
    """Gap quantities (L, R, Delta, Delta', V^2)."""
    cdef double o[5]
    _gap_c(alpha, alphap, beta, delta, deltap, o)
    return (o[0], o[1], o[2], o[3], o[4])


def vertex_raw(alpha, alphap, beta, x, y):
    """Closed form of Delta' at a box vertex."""
    return _vertex_c(alpha, alphap, beta, x, y)


# scene_raw status codes (as in the pure twin)
SCENE_OK = 0
SCENE_DEGENERATE_BOB = 1
SCENE_NO_BRANCH = 2
SCENE_DEGENERATE_ELLIPSE = 3


def scene_raw(rho, s):
    """Full tradeoff pipeline for one (state, arrangement) scene; returns
    the flat 40-slot layout documented in the pure twin."""
    cdef double rr[16]
    cdef double ri[16]
    cdef double sv[12]
    cdef double bf[7]
    cdef double t[9]
    cdef double im1[4]
    cdef double im2[4]
    cdef double ang[7]
    cdef double co[6]
    cdef double ax[6]
    cdef double gp[5]
    cdef double qv[4]
    cdef int i, sdeg, ddeg, status
    cdef double complex z
    for i in range(16):
        z = rho[i]
        rr[i] = z.real
        ri[i] = z.imag
    for i in range(12):
        sv[i] = s[i]
    _bobframe_c(sv[6], sv[7], sv[8], sv[9], sv[10], sv[11], bf, &sdeg, &ddeg)
    if sdeg != 0 or ddeg != 0:
        return (float(SCENE_DEGENERATE_BOB),) + _ZERO39
    cdef double theta = bf[6]
    _corr_c(rr, ri, t)
    _image_c(t, bf[0], bf[1], bf[2], im1)
    _image_c(t, bf[3], bf[4], bf[5], im2)
    status = _angles_c(sv[0], sv[1], sv[2], sv[3], sv[4], sv[5],
                       im1[1], im1[2], im1[3], im2[1], im2[2], im2[3], ang)
    if status != 0:
        return (float(SCENE_NO_BRANCH),) + _ZERO39
    cdef double alpha = ang[0]
    cdef double alphap = ang[1]
    cdef double beta = ang[2]
    cdef double delta = ang[3]
    cdef double deltap = ang[4]
    _coeffs_c(alpha, alphap, beta, delta, deltap, co)
    cdef double u = co[0]
    cdef double v = co[1]
    cdef double qa = co[2]
    cdef double qb = co[3]
    cdef double qc = co[4]
    cdef double r2 = co[5]
    _axes_c(qa, qb, qc, ax)
    cdef double ape = ax[2]
    cdef double bpe = ax[3]
    cdef double xie = ax[4]
    cdef double u2, v2ax
    if ape < 1e-14:
        if r2 > 1e-12:
            return (float(SCENE_DEGENERATE_ELLIPSE),) + _ZERO39
        u2 = 0.0
    else:
        u2 = r2 / ape
    if bpe < 1e-14:
        if r2 > 1e-12:
            return (float(SCENE_DEGENERATE_ELLIPSE),) + _ZERO39
        v2ax = 0.0
    else:
        v2ax = r2 / bpe
    _gap_c(alpha, alphap, beta, delta, deltap, gp)
    _quad_c(rr, ri, sv, qv)
    cdef double i0 = qv[0]
    cdef double i1 = qv[1]
    cdef double ca = cos(alpha)
    cdef double cap = cos(alphap)
    cdef double ct = cos(theta)
    cdef double sth = sin(theta)
    cdef double den = u * ca + v * cap
    cdef double detmag = fabs(ct * sth * den)
    cdef double singular, dsol, dpsol
    if detmag < 1e-12:
        singular = 1.0
        dsol = 0.0
        dpsol = 0.0
    else:
        singular = 0.0
        dsol = (u * i0 + cap * i1) / (2.0 * ct * den)
        dpsol = (v * i0 - ca * i1) / (2.0 * sth * den)
    cdef double formval = qa * i0 * i0 + qb * i1 * i1 + 2.0 * qc * i0 * i1
    cdef double contained = 1.0 if formval <= r2 * (1.0 + 1e-9) + 1e-12 else 0.0
    return (
        0.0,
        theta,
        im1[0], im1[1], im1[2], im1[3],
        im2[0], im2[1], im2[2], im2[3],
        alpha, alphap, beta, delta, deltap,
        u, v,
        qa, qb, qc, r2,
        xie, ape, bpe, u2, v2ax,
        gp[0], gp[1], gp[2], gp[3], gp[4],
        qv[0], qv[1], qv[2], qv[3],
        singular, dsol, dpsol,
        formval, contained,
    )


# --------------------------------------------------------------------------
# corpus draw protocols (Python-visible, for the parity tests; they update
# the caller's stream position exactly like the pure versions)


def _draw_settings(rng):
    cdef CStream st
    cdef double s[12]
    _open_stream(rng, &st)
    _settings_c(&st, s)
    rng.pos = st.pos
    return (s[0], s[1], s[2], s[3], s[4], s[5],
            s[6], s[7], s[8], s[9], s[10], s[11])


def _draw_pure(rng):
    """Haar-uniform pure state as a flat density matrix."""
    cdef CStream st
    cdef double rr[16]
    cdef double ri[16]
    cdef int i
    _open_stream(rng, &st)
    _pure_state_c(&st, rr, ri)
    rng.pos = st.pos
    return tuple([complex(rr[i], ri[i]) for i in range(16)])


def _draw_mixed_weights(rng, rank):
    cdef CStream st
    cdef Py_ssize_t n = rank
    cdef Py_ssize_t i
    cdef double w
    cdef double total = 0.0
    _open_stream(rng, &st)
    ws = [0.0] * n
    for i in range(n):
        w = _exponential_c(&st)
        ws[i] = w
    for i in range(n):
        w = ws[i]
        total += w
    out = [0.0] * n
    for i in range(n):
        w = ws[i]
        out[i] = w / total
    rng.pos = st.pos
    return out


def _draw_verify_state(rng):
    """Random mixed state: rank uniform on 1..4, normalized exponential
    weights (drawn first), then that many pure states."""
    cdef CStream st
    cdef double rr[16]
    cdef double ri[16]
    cdef int i
    _open_stream(rng, &st)
    _verify_state_c(&st, rr, ri)
    rng.pos = st.pos
    return tuple([complex(rr[i], ri[i]) for i in range(16)])


# --------------------------------------------------------------------------
# batch kernels


def scan_batch(rho, seed, start, count):
    """Quads at `count` random arrangements (sample idx reads stream
    (scan domain, idx)), for the fixed state rho."""
    cdef double rr[16]
    cdef double ri[16]
    cdef double sv[12]
    cdef double qv[4]
    cdef unsigned long long cseed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef long long cstart = start
    cdef long long ccount = count
    cdef long long idx
    cdef CStream st
    cdef int i
    cdef double complex z
    for i in range(16):
        z = rho[i]
        rr[i] = z.real
        ri[i] = z.imag
    out = []
    for idx in range(cstart, cstart + ccount):
        st.seed = cseed
        st.stream = (_DOMAIN_SCAN << 48) | (<unsigned long long> idx)
        st.pos = 0
        _settings_c(&st, sv)
        _quad_c(rr, ri, sv, qv)
        out.append((qv[0], qv[1], qv[2], qv[3]))
    return out


def verify_batch(seed, start, count):
    """Theorem sweep over `count` random (mixed state, arrangement) samples;
    returns (max pair sum, max |component|, violation count, first violating
    sample index or -1)."""
    cdef double rr[16]
    cdef double ri[16]
    cdef double sv[12]
    cdef double qv[4]
    cdef unsigned long long cseed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef long long cstart = start
    cdef long long ccount = count
    cdef long long idx
    cdef long long first = -1
    cdef long long nviol = 0
    cdef CStream st
    cdef double max_pair = 0.0
    cdef double max_abs = 0.0
    cdef double am, ps
    cdef int m, n, bad
    for idx in range(cstart, cstart + ccount):
        st.seed = cseed
        st.stream = (_DOMAIN_VERIFY << 48) | (<unsigned long long> idx)
        st.pos = 0
        _verify_state_c(&st, rr, ri)
        _settings_c(&st, sv)
        _quad_c(rr, ri, sv, qv)
        bad = 0
        for m in range(4):
            am = fabs(qv[m])
            if am > max_abs:
                max_abs = am
            for n in range(m + 1, 4):
                ps = qv[m] * qv[m] + qv[n] * qv[n]
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
    """Extremal-arrangement scan for one star quarter; see the pure twin for
    the stream and flip conventions."""
    cdef unsigned long long cseed = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef long long cnq = nq
    cdef int cquarter = quarter
    cdef long long cj0 = j0
    cdef long long ccount = count
    cdef long long j, g
    cdef int mu = 0 if cquarter < 2 else 1
    cdef int flip = 1 if (cquarter == 1 or cquarter == 3) else 0
    cdef CStream st
    cdef double t[9]
    cdef double sarr[12]
    cdef double rr[16]
    cdef double ri[16]
    cdef double qv[4]
    cdef double vis, th, s2, t0, ch, sh, off, q4
    cdef int i
    out = []
    for j in range(cj0, cj0 + ccount):
        g = cquarter * cnq + j
        st.seed = cseed
        st.stream = (_DOMAIN_STAR << 48) | (<unsigned long long> g)
        st.pos = 0
        vis = _u01_c(&st)
        th = _u01_c(&st) * _HALF_PI
        s2 = sin(2.0 * th)
        t0 = vis * s2
        t[0] = t0
        t[1] = 0.0
        t[2] = 0.0
        t[3] = 0.0
        t[4] = -t0
        t[5] = 0.0
        t[6] = 0.0
        t[7] = 0.0
        t[8] = vis
        _optimize_c(t, mu, cseed,
                    (_DOMAIN_STAR_OPT << 48) | (<unsigned long long> g), sarr)
        if flip:
            for i in range(6):
                sarr[i] = -sarr[i]
        ch = cos(th)
        sh = sin(th)
        off = vis * (ch * sh)
        q4 = (1.0 - vis) * 0.25
        for i in range(16):
            rr[i] = 0.0
            ri[i] = 0.0
        rr[0] = vis * (ch * ch) + q4
        rr[3] = off
        rr[5] = q4
        rr[10] = q4
        rr[12] = off
        rr[15] = vis * (sh * sh) + q4
        _quad_c(rr, ri, sarr, qv)
        out.append((vis, th, qv[0], qv[1], qv[2], qv[3]))
    return out
