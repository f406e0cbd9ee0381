"""Seeded Monte Carlo sweeps over states and arrangements.

Three flavors: direction clouds for a fixed state (the (i0, i1) plane
filling a disc of radius given by the state), the eight-pointed star scan
(random isotropic-type states with one form pushed to its extremum), and
the verification corpus (random mixed states x random arrangements checked
against the pair circle, plus operator-identity and containment sweeps).

Every sample owns a counter-based stream keyed by its index, so results
are bit-identical no matter how the index range is split across workers;
parallel runs merge chunks back in index order.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

from . import _kernels as _proto
from ._backend import impl as _impl
from .bell import BellQuad
from .geometry import Settings, random_settings
from .rng import (
    DOMAIN_CONTAIN,
    DOMAIN_IDENT,
    DOMAIN_VERIFY,
    PhiloxStream,
    stream_id,
)
from .states import DensityMatrix
from .tradeoff import operator_identity_residuals

# (i0, i1) region constants: quantum circle i0^2 + i1^2 <= 8, LHV square
# |i| <= 2
CIRCLE_SQ = 8.0
LHV_HALF_SIDE = 2.0

QUARTERS = ("i0max", "i0min", "i1max", "i1min")


@dataclass(frozen=True)
class ScanPoint:
    """One sampled point of the (i0, i1) plane.

    visibility / theta tag the state the sample came from when the caller
    knows them (star scans always do); quarter tags star samples.
    """

    index: int
    i0: float
    i1: float
    i2: float
    i3: float
    visibility: float | None = None
    theta: float | None = None
    quarter: str | None = None


class ScanSummary(NamedTuple):
    n: int
    max_radius: float
    count_outside_lhv_square: int
    count_outside_circle: int
    seed: int


class VerifyReport(NamedTuple):
    """Theorem sweep outcome.  first_violation is -1 when clean."""

    n: int
    seed: int
    max_pair: float
    max_component: float
    violations: int
    first_violation: int


class IdentReport(NamedTuple):
    n: int
    seed: int
    max_residual: float


class ContainReport(NamedTuple):
    """Pure-state containment sweep outcome.

    max_magnitude is the largest reconstructed |D| or |D'| across
    non-singular scenes; skipped counts scenes with no derivable ellipse
    (degenerate Bob pair or no rotation branch; zero on honest corpora).
    """

    n: int
    seed: int
    violations: int
    first_violation: int
    max_magnitude: float
    singular: int
    skipped: int


def summarize(points, seed: int = 0) -> ScanSummary:
    """Radius and region counts of a point list."""
    max_radius = 0.0
    outside_lhv = 0
    outside_circle = 0
    for p in points:
        rr = p.i0 * p.i0 + p.i1 * p.i1
        r = math.sqrt(rr)
        if r > max_radius:
            max_radius = r
        if math.fabs(p.i0) > LHV_HALF_SIDE or math.fabs(p.i1) > LHV_HALF_SIDE:
            outside_lhv += 1
        if rr > CIRCLE_SQ + 1e-9:
            outside_circle += 1
    return ScanSummary(len(points), max_radius, outside_lhv, outside_circle, seed)


def _chunks(total: int, pieces: int):
    """Contiguous (start, count) split of range(total) into <= pieces parts."""
    size = (total + pieces - 1) // pieces
    start = 0
    while start < total:
        count = size if start + size <= total else total - start
        yield (start, count)
        start += count


def _scan_chunk(args):
    entries, seed, start, count = args
    return _impl.scan_batch(entries, seed, start, count)


def _star_chunk(args):
    seed, nq, quarter, j0, count = args
    return _impl.star_batch(seed, nq, quarter, j0, count)


def _verify_chunk(args):
    seed, start, count = args
    return _impl.verify_batch(seed, start, count)


def _run_tasks(fn, tasks, workers):
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def scan_random_directions(
    rho: DensityMatrix,
    n: int,
    seed: int,
    workers: int | None = None,
    visibility: float | None = None,
    theta: float | None = None,
) -> tuple[list[ScanPoint], ScanSummary]:
    """Quads of the fixed state at n arrangements drawn uniformly (four
    independent sphere directions per sample).  visibility / theta are
    pass-through tags stamped on every point.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    pieces = workers if workers is not None and workers > 1 else 1
    tasks = [
        (rho.entries, seed, start, count) for start, count in _chunks(n, pieces)
    ]
    points = []
    for chunk in _run_tasks(_scan_chunk, tasks, workers):
        for q in chunk:
            points.append(
                ScanPoint(
                    index=len(points), i0=q[0], i1=q[1], i2=q[2], i3=q[3],
                    visibility=visibility, theta=theta,
                )
            )
    return points, summarize(points, seed)


def scan_star(
    n_per_quarter: int, seed: int, workers: int | None = None
) -> tuple[list[ScanPoint], ScanSummary]:
    """The eight-pointed star: per quarter (i0 maximized, i0 minimized, i1
    maximized, i1 minimized), draw a random visibility and Schmidt angle,
    push the designated form to its extremum with the settings optimizer,
    and record the resulting quad.  Sample j of quarter Q has global index
    Q * n_per_quarter + j.
    """
    if n_per_quarter < 1:
        raise ValueError(f"need at least one sample, got {n_per_quarter}")
    pieces = workers if workers is not None and workers > 1 else 1
    tasks = []
    for quarter in range(4):
        for j0, count in _chunks(n_per_quarter, pieces):
            tasks.append((seed, n_per_quarter, quarter, j0, count))
    results = _run_tasks(_star_chunk, tasks, workers)
    points = []
    for (_seed, nq, quarter, j0, _count), chunk in zip(tasks, results):
        for k, row in enumerate(chunk):
            points.append(
                ScanPoint(
                    index=quarter * nq + j0 + k,
                    i0=row[2], i1=row[3], i2=row[4], i3=row[5],
                    visibility=row[0], theta=row[1],
                    quarter=QUARTERS[quarter],
                )
            )
    return points, summarize(points, seed)


def verify_run(
    n: int,
    seed: int,
    workers: int | None = None,
    inject: tuple[float, float] | None = None,
) -> VerifyReport:
    """Theorem sweep: n random (mixed state, arrangement) samples, every
    form pair checked against i_mu^2 + i_nu^2 <= 8 + 1e-9.

    inject appends one synthetic (i0, i1) point after the real samples
    (index n); it exists so the failure path can be exercised without a
    counterexample to the theorem.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    pieces = workers if workers is not None and workers > 1 else 1
    tasks = [(seed, start, count) for start, count in _chunks(n, pieces)]
    max_pair = 0.0
    max_component = 0.0
    violations = 0
    first = -1
    for part in _run_tasks(_verify_chunk, tasks, workers):
        if part[0] > max_pair:
            max_pair = part[0]
        if part[1] > max_component:
            max_component = part[1]
        violations += part[2]
        if part[3] >= 0 and (first < 0 or part[3] < first):
            first = part[3]
    if inject is not None:
        fake = inject[0] * inject[0] + inject[1] * inject[1]
        if fake > max_pair:
            max_pair = fake
        for comp in inject:
            if math.fabs(comp) > max_component:
                max_component = math.fabs(comp)
        if fake > CIRCLE_SQ + 1e-9:
            violations += 1
            if first < 0:
                first = n
    return VerifyReport(n, seed, max_pair, max_component, violations, first)


def verify_sample(seed: int, index: int) -> tuple[DensityMatrix, Settings, BellQuad]:
    """Replay one verification sample in full, for counterexample reports.

    The draw protocol is replayed through the reference kernels; both
    backends produce bit-identical streams, so the replay matches what the
    sweep saw.
    """
    rng = PhiloxStream(seed, stream_id(DOMAIN_VERIFY, index))
    entries = _proto._draw_verify_state(rng)
    s12 = _proto._draw_settings(rng)
    q = _impl.quad_trace(entries, s12)
    return (
        DensityMatrix(entries),
        Settings.from_flat(s12),
        BellQuad(q[0], q[1], q[2], q[3]),
    )


def identity_sweep(n: int, seed: int) -> IdentReport:
    """Largest operator-identity residual over n random arrangements;
    rounding-level (<= 1e-12) always, for any n."""
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    worst = 0.0
    for index in range(n):
        rng = PhiloxStream(seed, stream_id(DOMAIN_IDENT, index))
        r = operator_identity_residuals(random_settings(rng))
        for val in r:
            if val > worst:
                worst = val
    return IdentReport(n, seed, worst)


def containment_sweep(n: int, seed: int) -> ContainReport:
    """Pure-state containment: n random (pure state, arrangement) scenes,
    each checked for the measured point falling inside its derived ellipse
    and for reconstructed image magnitudes staying physical (|D| <= 1 +
    1e-9)."""
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    violations = 0
    first = -1
    max_mag = 0.0
    singular = 0
    skipped = 0
    for index in range(n):
        rng = PhiloxStream(seed, stream_id(DOMAIN_CONTAIN, index))
        entries = _proto._draw_pure(rng)
        s12 = _proto._draw_settings(rng)
        raw = _impl.scene_raw(entries, s12)
        if raw[0] != 0.0:
            skipped += 1
            continue
        bad = raw[39] == 0.0
        if raw[35] != 0.0:
            singular += 1
        else:
            for mag in (raw[36], raw[37]):
                am = math.fabs(mag)
                if am > max_mag:
                    max_mag = am
                if am > 1.0 + 1e-9:
                    bad = True
        if bad:
            violations += 1
            if first < 0:
                first = index
    return ContainReport(n, seed, violations, first, max_mag, singular, skipped)
