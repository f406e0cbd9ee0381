#!/usr/bin/env python3
"""Timing comparison of the pure-Python and compiled kernel backends.

Runs the hot kernels on identical inputs through both modules and prints
a per-kernel table (best of `--repeat` timings).  The two backends are
bit-identical by contract, so outputs are also cross-checked here; a
mismatch aborts the run.

Usage: python3 benchmarks/bench_backends.py [--scale N] [--repeat K]
"""
from __future__ import annotations

import argparse
import sys
import time

from chsh_tradeoff import _kernels as pure
from chsh_tradeoff.rng import DOMAIN_USER, PhiloxStream, stream_id

try:
    from chsh_tradeoff import _fastcore as fast
except ImportError:
    print("compiled backend not built; run pip install -e . first",
          file=sys.stderr)
    raise SystemExit(1)


def _best_of(repeat, fn):
    best = None
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        if best is None or dt < best:
            best = dt
    return best, out


def _cases(scale):
    rng = PhiloxStream(20250817, stream_id(DOMAIN_USER, 0))
    rho = pure._draw_verify_state(rng)
    herms = []
    for _ in range(200 * scale):
        ent = [complex(rng.normal(), rng.normal()) for _ in range(16)]
        m = []
        for i in range(4):
            for j in range(4):
                m.append(ent[4 * i + j] + ent[4 * j + i].conjugate())
        herms.append(tuple(m))
    scenes = []
    for _ in range(100 * scale):
        r = PhiloxStream(7, stream_id(DOMAIN_USER, len(scenes) + 1))
        scenes.append((pure._draw_pure(r), pure._draw_settings(r)))
    t9 = pure.corr_tensor(rho)[0]
    return {
        "scan_batch (quads)": (
            lambda mod: mod.scan_batch(rho, 31337, 0, 500 * scale),
        ),
        "verify_batch (theorem sweep)": (
            lambda mod: mod.verify_batch(424242, 0, 500 * scale),
        ),
        "star_batch (optimizer-heavy)": (
            lambda mod: mod.star_batch(99, 4 * scale, 0, 0, 4 * scale),
        ),
        "scene_raw x %d" % (100 * scale): (
            lambda mod: [mod.scene_raw(r, s) for r, s in scenes],
        ),
        "herm4_eigvals x %d" % (200 * scale): (
            lambda mod: [mod.herm4_eigvals(m) for m in herms],
        ),
        "optimize_one": (
            lambda mod: mod.optimize_one(t9, 0, 77, 5000),
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=1,
                    help="problem-size multiplier (default 1)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timings per kernel, best is reported (default 3)")
    args = ap.parse_args(argv)

    width = 30
    print(f"{'kernel':<{width}} {'pure':>10} {'cython':>10} {'speedup':>9}")
    for name, (fn,) in _cases(args.scale).items():
        tp, outp = _best_of(args.repeat, lambda: fn(pure))
        tf, outf = _best_of(args.repeat, lambda: fn(fast))
        if outp != outf:
            print(f"{name}: backend outputs differ", file=sys.stderr)
            raise SystemExit(1)
        print(f"{name:<{width}} {tp * 1e3:>8.1f}ms {tf * 1e3:>8.1f}ms"
              f" {tp / tf:>8.1f}x")


if __name__ == "__main__":
    main()
