"""Directions, measurement arrangements, and the midframe geometry.

The tradeoff pipeline rewrites Bob's pair as a midframe (c, c', theta) with
2 c cos(theta) = b1 + b2 and 2 c' sin(theta) = b1 - b2, maps the axes
through the correlation tensor to image frames (D, d), and reduces a scene
to five angles: alpha = angle(a1, d), alpha' = angle(a2, d'),
beta = angle(d, d') and the rotation angles delta, delta' that place a1, a2
on their cones.  The derived cosines u = a1 . d', v = a2 . d live in a
spherical-triangle box, which is what makes the ellipse bound work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ._backend import impl as _impl
from .errors import NoBranch
from .rng import PhiloxStream


@dataclass(frozen=True)
class Direction:
    """Unit vector in R^3 (validated to |v| = 1 within 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if math.fabs(n - 1.0) > 1e-12:
            raise ValueError(f"direction norm {n!r} is not 1")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "Direction":
        n = math.sqrt(x * x + y * y + z * z)
        if n < 1e-300:
            raise ValueError("cannot normalize the zero vector")
        inv = 1.0 / n
        return cls(x * inv, y * inv, z * inv)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def dot(self, other: "Direction") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "Direction":
        return Direction(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class Settings:
    """A full measurement arrangement: Alice's pair and Bob's pair."""

    a1: Direction
    a2: Direction
    b1: Direction
    b2: Direction

    def flat(self) -> tuple[float, ...]:
        return self.a1.as_tuple() + self.a2.as_tuple() + self.b1.as_tuple() + self.b2.as_tuple()

    @classmethod
    def from_flat(cls, values) -> "Settings":
        v = [float(x) for x in values]
        if len(v) != 12:
            raise ValueError(f"expected 12 components, got {len(v)}")
        return cls(
            Direction(v[0], v[1], v[2]),
            Direction(v[3], v[4], v[5]),
            Direction(v[6], v[7], v[8]),
            Direction(v[9], v[10], v[11]),
        )


@dataclass(frozen=True)
class BobFrame:
    """Midframe of Bob's pair; degenerate flags mark a completed axis."""

    c: Direction
    cp: Direction
    theta: float
    sum_degenerate: bool
    diff_degenerate: bool

    @property
    def degenerate(self) -> bool:
        return self.sum_degenerate or self.diff_degenerate


@dataclass(frozen=True)
class ImageFrame:
    """Image of a midframe axis under the correlation tensor."""

    magnitude: float
    direction: Direction
    collapsed: bool


@dataclass(frozen=True)
class AngleTuple:
    """The five scene angles plus the derived cosines u, v."""

    alpha: float
    alphap: float
    beta: float
    delta: float
    deltap: float
    u: float
    v: float


def bob_midframe(b1: Direction, b2: Direction) -> BobFrame:
    """Midframe (c, c', theta) of Bob's pair.

    Never raises: when b1 is within 1e-9 of -b2 (sum side) or of b2
    (difference side) the undefined axis is completed with the first
    canonical axis not parallel to the defined one, and the corresponding
    flag is set.  theta is in [0, pi/2].
    """
    r = _impl.bobframe(b1.x, b1.y, b1.z, b2.x, b2.y, b2.z)
    return BobFrame(
        c=Direction(r[0], r[1], r[2]),
        cp=Direction(r[3], r[4], r[5]),
        theta=r[6],
        sum_degenerate=bool(r[7]),
        diff_degenerate=bool(r[8]),
    )


def image_frame(tensor_entries, c: Direction) -> ImageFrame:
    """Map a midframe axis through the correlation tensor.

    `tensor_entries` is the flat 3x3 tensor (a CorrelationTensor's
    .entries works).  A magnitude below 1e-12 collapses to the canonical x
    direction with the flag set.
    """
    r = _impl.imageframe(tuple(tensor_entries), c.x, c.y, c.z)
    return ImageFrame(
        magnitude=r[0],
        direction=Direction(r[1], r[2], r[3]),
        collapsed=bool(r[4]),
    )


def angle_tuple(a1: Direction, a2: Direction, d: Direction, dp: Direction) -> AngleTuple:
    """Scene angles for Alice's pair against the image directions.

    The rotation angles delta, delta' are recovered from u, v by branch
    search (the pipeline depends on them only through the cosines, so the
    smallest in-range branch is returned).  Raises NoBranch if no branch
    reproduces the measured cosine within 1e-9, which cannot happen for
    genuine direction data.
    """
    r = _impl.angletuple(
        a1.x, a1.y, a1.z, a2.x, a2.y, a2.z, d.x, d.y, d.z, dp.x, dp.y, dp.z
    )
    if r[7] != 0:
        raise NoBranch(
            f"no rotation branch reproduces u={r[5]!r} or v={r[6]!r} "
            f"(alpha={r[0]!r}, alpha'={r[1]!r}, beta={r[2]!r})"
        )
    return AngleTuple(
        alpha=r[0], alphap=r[1], beta=r[2], delta=r[3], deltap=r[4], u=r[5], v=r[6]
    )


def admissible_box(alpha: float, alphap: float, beta: float) -> tuple[float, float, float, float]:
    """Reachable rectangle (umin, umax, vmin, vmax) for the cosines u, v:
    spherical triangle inequality bounds each between cos(angle + beta) and
    cos(beta - angle)."""
    return _impl.ellipse_box(alpha, alphap, beta)


def random_direction(rng: PhiloxStream) -> Direction:
    """Uniform direction on the sphere (normalized Gaussian triple)."""
    v = rng.unit3()
    return Direction(v[0], v[1], v[2])


def random_settings(rng: PhiloxStream) -> Settings:
    """Four independent uniform directions, in the order a1, a2, b1, b2."""
    a1 = random_direction(rng)
    a2 = random_direction(rng)
    b1 = random_direction(rng)
    b2 = random_direction(rng)
    return Settings(a1, a2, b1, b2)
