"""Counter-based random streams (Philox4x32-10).

Every randomized routine in this package draws from a PhiloxStream, which is
a pure function of (seed, stream id, position). That buys three things:

* byte-identical reruns for any seeded command,
* worker-count independence: sample i of a corpus always reads stream
  ``(domain << 48) | i`` regardless of how samples are chunked over processes,
* replay: a verification counterexample can be reconstructed from its index.

Philox4x32-10 (Salmon et al., the Random123 suite) with the standard
multipliers 0xD2511F53 / 0xCD9E8D57 and Weyl constants 0x9E3779B9 /
0xBB67AE85.  Known-answer vectors (Random123 distribution, checked in
tests/test_rng.py):

    counter = key = 0          -> 6627e8d5 e169c58d bc57ac4c 9b00dbd8
    counter = key = all ones   -> 408f276d 41c83b0e a20bc7c6 6d5451fd
    pi-digit counter and key   -> d16cfe09 94fdcceb 5001e420 24126ea1

Layout. key = (seed & 0xffffffff, seed >> 32); counter = (block lo, block hi,
stream lo, stream hi).  Each block yields four 32-bit words w0..w3, i.e. two
doubles: double 2k   from (w1 << 32 | w0), double 2k+1 from (w3 << 32 | w2),
each mapped as (u64 >> 11) * 2**-53 into [0, 1).

Derived draws are deliberately stateless beyond the double position so the
compiled and pure backends cannot diverge:

    normal():      a, b = u01(), u01();  sqrt(-2 ln(1-a)) * cos(2 pi b)
                   (the sine mate is never used -- no cache to keep in sync)
    exponential(): -ln(1 - u01())
    unit3():       three normals, rejected and redrawn if the squared norm
                   underflows 1e-24, then scaled by the reciprocal norm

The compiled backend re-implements exactly these recipes; parity is enforced
bit-for-bit in tests/test_backend_parity.py.
"""
from __future__ import annotations

import math

_M0 = 0xD2511F53
_M1 = 0xCD9E8D57
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
_MASK32 = 0xFFFFFFFF
_MASK64 = 0xFFFFFFFFFFFFFFFF

_TWO_NEG53 = 2.0 ** -53
_TWO_PI = 6.283185307179586476925286766559

# Stream-id domains.  A stream id is (domain << 48) | index, so each corpus
# gets 2**48 per-sample substreams and domains never collide.
DOMAIN_USER = 0
DOMAIN_SCAN = 1
DOMAIN_VERIFY = 2
DOMAIN_CONTAIN = 3
DOMAIN_IDENT = 4
DOMAIN_ROUTE = 5
DOMAIN_STAR = 6
DOMAIN_STAR_OPT = 7
DOMAIN_OPT = 8

_INDEX_LIMIT = 1 << 48


def stream_id(domain: int, index: int) -> int:
    """Stream id for sample `index` of the given domain."""
    if not 0 <= index < _INDEX_LIMIT:
        raise ValueError(f"stream index out of range: {index}")
    return (domain << 48) | index


def philox4x32(c0: int, c1: int, c2: int, c3: int, k0: int, k1: int):
    """One Philox4x32-10 block: four 32-bit output words."""
    for _ in range(10):
        p0 = c0 * _M0
        p1 = c2 * _M1
        hi0 = (p0 >> 32) & _MASK32
        lo0 = p0 & _MASK32
        hi1 = (p1 >> 32) & _MASK32
        lo1 = p1 & _MASK32
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = (k0 + _W0) & _MASK32
        k1 = (k1 + _W1) & _MASK32
    return c0, c1, c2, c3


def block_words(seed: int, stream: int, block: int):
    """The four output words of a given block of a given stream."""
    seed &= _MASK64
    stream &= _MASK64
    return philox4x32(
        block & _MASK32,
        (block >> 32) & _MASK32,
        stream & _MASK32,
        (stream >> 32) & _MASK32,
        seed & _MASK32,
        (seed >> 32) & _MASK32,
    )


def double_at(seed: int, stream: int, pos: int) -> float:
    """The pos-th double of a stream, with no stream state involved."""
    w = block_words(seed, stream, pos >> 1)
    if pos & 1:
        u64 = (w[3] << 32) | w[2]
    else:
        u64 = (w[1] << 32) | w[0]
    return (u64 >> 11) * _TWO_NEG53


class PhiloxStream:
    """Sequential view of one (seed, stream) pair.

    The only mutable state is the double position, so a stream can be
    re-opened at any offset and two backends walking the same stream see the
    same values.
    """

    __slots__ = ("seed", "stream", "pos")

    def __init__(self, seed: int, stream: int = 0, pos: int = 0):
        self.seed = seed & _MASK64
        self.stream = stream & _MASK64
        self.pos = pos

    def clone(self) -> "PhiloxStream":
        return PhiloxStream(self.seed, self.stream, self.pos)

    def u01(self) -> float:
        """Next double, uniform on [0, 1)."""
        v = double_at(self.seed, self.stream, self.pos)
        self.pos += 1
        return v

    def normal(self) -> float:
        """Standard normal (Box-Muller cosine branch, two doubles)."""
        a = self.u01()
        b = self.u01()
        return math.sqrt(-2.0 * math.log(1.0 - a)) * math.cos(_TWO_PI * b)

    def exponential(self) -> float:
        """Unit-rate exponential (one double)."""
        return -math.log(1.0 - self.u01())

    def unit3(self) -> tuple[float, float, float]:
        """Uniform direction on the unit sphere (normalized Gaussian triple)."""
        while True:
            g0 = self.normal()
            g1 = self.normal()
            g2 = self.normal()
            n2 = g0 * g0 + g1 * g1 + g2 * g2
            if n2 > 1e-24:
                inv = 1.0 / math.sqrt(n2)
                return (g0 * inv, g1 * inv, g2 * inv)
