"""Command-line front end.

Commands: eval, verify, optimize, scan, star, ellipse, uncertainty.  Seeded
commands are bit-reproducible: identical arguments give byte-identical
CSV/JSON/SVG output, independent of worker count.  Numbers are serialized
with 17 significant digits so files round-trip exactly.

Exit codes: 0 success, 1 verification counterexample (or a scan point
outside the quantum circle, which is the same thing), 2 configuration
error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import explore, svgplot
from ._backend import backend_name
from .bell import (
    correlation_tensor,
    horodecki_value,
    lhv_max,
    optimize_settings,
    quad_by_trace,
)
from .errors import ChshError, ConfigError
from .geometry import Direction, Settings, admissible_box, random_settings
from .rng import DOMAIN_OPT, DOMAIN_USER, PhiloxStream, stream_id
from .states import DensityMatrix, isotropic, schmidt_pure
from .tradeoff import (
    delta_gap,
    ellipse_coeffs,
    maximize_m2sum,
    pair_radius,
    principal_axes,
    variances,
    vertex_delta,
)

_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_CONFIG_KEYS = frozenset(
    (
        "seed", "state", "settings", "n", "format", "out", "workers", "mu",
        "ident", "contain", "alpha", "alphap", "beta", "delta", "deltap",
        "theta",
    )
)

CSV_HEADER = "idx,V,theta,i0,i1,i2,i3,quarter"


# --------------------------------------------------------------------------
# serialization: fixed 17-significant-digit floats everywhere


def _fmt(x: float) -> str:
    return "%.17g" % x


def _json_value(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return '"' + escaped + '"'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, dict):
        inner = ", ".join(
            '"%s": %s' % (k, _json_value(v)) for k, v in value.items()
        )
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _points_csv(points) -> str:
    lines = [CSV_HEADER]
    for p in points:
        lines.append(
            "%d,%s,%s,%s,%s,%s,%s,%s"
            % (
                p.index,
                "" if p.visibility is None else _fmt(p.visibility),
                "" if p.theta is None else _fmt(p.theta),
                _fmt(p.i0), _fmt(p.i1), _fmt(p.i2), _fmt(p.i3),
                p.quarter or "",
            )
        )
    return "\n".join(lines) + "\n"


def _point_record(p) -> dict:
    return {
        "idx": p.index,
        "V": p.visibility,
        "theta": p.theta,
        "i0": p.i0, "i1": p.i1, "i2": p.i2, "i3": p.i3,
        "quarter": p.quarter,
    }


def _summary_record(summary) -> dict:
    return {
        "n": summary.n,
        "max_radius": summary.max_radius,
        "count_outside_lhv_square": summary.count_outside_lhv_square,
        "count_outside_circle": summary.count_outside_circle,
        "seed": summary.seed,
    }


# --------------------------------------------------------------------------
# config resolution: flag, then --config file, then environment (seed only)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            cfg[key] = value.strip()
    return cfg


def _merged(args, cfg: dict, key: str) -> str | None:
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    return cfg.get(key)


def _as_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None


def _as_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {value!r}") from None


def _resolve_seed(args, cfg) -> int | None:
    value = _merged(args, cfg, "seed")
    if value is None:
        value = os.environ.get("CHSH_SEED")
    if value is None:
        return None
    return _as_int(value, "seed")


def _need_seed(seed: int | None, why: str) -> int:
    if seed is None:
        raise ConfigError(f"seed required for {why} (flag, config, or CHSH_SEED)")
    return seed


def _resolve_format(args, cfg, allowed: tuple, default: str) -> str:
    value = _merged(args, cfg, "format")
    if value is None:
        return default
    if value not in allowed:
        raise ConfigError(
            f"format {value!r} not one of {', '.join(allowed)}"
        )
    return value


def _resolve_workers(args, cfg) -> int | None:
    value = _merged(args, cfg, "workers")
    if value is None:
        return None
    workers = _as_int(value, "workers")
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    return workers


def _resolve_n(args, cfg) -> int:
    value = _merged(args, cfg, "n")
    if value is None:
        raise ConfigError("n required")
    n = _as_int(value, "n")
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    return n


def _load_state_file(path: str) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, list) or len(data) != 4:
        raise ConfigError(f"{path}: expected a 4x4 array of [re, im] pairs")
    entries = []
    for row in data:
        if not isinstance(row, list) or len(row) != 4:
            raise ConfigError(f"{path}: expected a 4x4 array of [re, im] pairs")
        for cell in row:
            if not isinstance(cell, list) or len(cell) != 2:
                raise ConfigError(f"{path}: entry {cell!r} is not [re, im]")
            entries.append(complex(float(cell[0]), float(cell[1])))
    try:
        return DensityMatrix(tuple(entries))
    except (ChshError, ValueError) as exc:
        raise ConfigError(f"{path}: not a density matrix ({exc})") from None


def _parse_state(spec: str | None):
    """State spec -> (DensityMatrix, visibility tag, theta tag).

    schmidt:THETA | isotropic:V,THETA | mixed-file:PATH; tags are None for
    file states (the parameters are unknown)."""
    if spec is None:
        raise ConfigError("state required")
    kind, _, rest = spec.partition(":")
    if kind == "schmidt":
        theta = _as_float(rest, "schmidt angle")
        return schmidt_pure(theta), 1.0, theta
    if kind == "isotropic":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ConfigError(f"isotropic needs V,THETA, got {rest!r}")
        vis = _as_float(parts[0], "visibility")
        theta = _as_float(parts[1], "theta")
        try:
            return isotropic(vis, theta), vis, theta
        except ChshError as exc:
            raise ConfigError(str(exc)) from None
    if kind == "mixed-file":
        if not rest:
            raise ConfigError("mixed-file needs a path")
        return _load_state_file(rest), None, None
    raise ConfigError(
        f"unknown state spec {spec!r} (schmidt:THETA | isotropic:V,THETA"
        " | mixed-file:PATH)"
    )


def _parse_settings(spec: str | None, rho: DensityMatrix, seed: int | None) -> Settings:
    """Settings spec -> Settings.

    random | optimal:MU | 12 comma-separated components (each direction
    triple is normalized on input)."""
    if spec is None:
        raise ConfigError("settings required")
    if spec == "random":
        rng = PhiloxStream(_need_seed(seed, "random settings"), stream_id(DOMAIN_USER, 0))
        return random_settings(rng)
    if spec.startswith("optimal:"):
        mu = _as_int(spec.partition(":")[2], "mu")
        if mu not in (0, 1, 2, 3):
            raise ConfigError(f"mu must be 0..3, got {mu}")
        rng = PhiloxStream(_need_seed(seed, "settings optimization"), stream_id(DOMAIN_OPT, 0))
        return optimize_settings(rho, mu, rng)[0]
    parts = spec.split(",")
    if len(parts) != 12:
        raise ConfigError(
            f"explicit settings need 12 components, got {len(parts)}"
        )
    vals = [_as_float(p, "settings component") for p in parts]
    dirs = []
    for k in range(4):
        try:
            dirs.append(Direction.normalized(vals[3 * k], vals[3 * k + 1], vals[3 * k + 2]))
        except ValueError as exc:
            raise ConfigError(f"settings triple {k}: {exc}") from None
    return Settings(dirs[0], dirs[1], dirs[2], dirs[3])


# --------------------------------------------------------------------------
# commands


def _cmd_eval(args, cfg) -> int:
    seed = _resolve_seed(args, cfg)
    rho, _, _ = _parse_state(_merged(args, cfg, "state"))
    s = _parse_settings(_merged(args, cfg, "settings"), rho, seed)
    fmt = _resolve_format(args, cfg, ("text", "json"), "text")
    out = _merged(args, cfg, "out")
    q = quad_by_trace(rho, s)
    pairs = {
        "r%d%d" % (m, n): pair_radius(q, m, n) for m, n in _PAIRS
    }
    hor = horodecki_value(correlation_tensor(rho))
    if fmt == "json":
        record = {
            "command": "eval",
            "i0": q.i0, "i1": q.i1, "i2": q.i2, "i3": q.i3,
            "pairs": pairs,
            "horodecki": hor,
            "lhv_bound": lhv_max(0),
        }
        _emit(_json_value(record) + "\n", out)
    else:
        lines = [
            "i0 = %s" % _fmt(q.i0),
            "i1 = %s" % _fmt(q.i1),
            "i2 = %s" % _fmt(q.i2),
            "i3 = %s" % _fmt(q.i3),
        ]
        for name, value in pairs.items():
            lines.append("pair %s = %s" % (name, _fmt(value)))
        lines.append("horodecki = %s" % _fmt(hor))
        lines.append("lhv bound = %s" % _fmt(lhv_max(0)))
        _emit("\n".join(lines) + "\n", out)
    return 0


def _density_record(rho: DensityMatrix) -> list:
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            z = rho.entries[4 * i + j]
            row.append([z.real, z.imag])
        rows.append(row)
    return rows


def _cmd_verify(args, cfg) -> int:
    n = _resolve_n(args, cfg)
    seed = _need_seed(_resolve_seed(args, cfg), "verify")
    workers = _resolve_workers(args, cfg)
    out = _merged(args, cfg, "out")
    ident_raw = _merged(args, cfg, "ident")
    contain_raw = _merged(args, cfg, "contain")
    n_ident = _as_int(ident_raw, "ident") if ident_raw is not None else min(n, 1000)
    n_contain = _as_int(contain_raw, "contain") if contain_raw is not None else min(n, 10000)
    inject = None
    if args.inject is not None:
        parts = args.inject.split(",")
        if len(parts) != 2:
            raise ConfigError("inject needs i0,i1")
        inject = (_as_float(parts[0], "inject"), _as_float(parts[1], "inject"))

    rep = explore.verify_run(n, seed, workers=workers, inject=inject)
    record = {
        "command": "verify",
        "seed": seed,
        "backend": backend_name(),
        "theorem": {
            "n": rep.n,
            "max_pair": rep.max_pair,
            "max_component": rep.max_component,
            "violations": rep.violations,
            "first_violation": rep.first_violation,
        },
    }
    ok = rep.violations == 0
    if n_ident > 0:
        idr = explore.identity_sweep(n_ident, seed)
        record["identity"] = {"n": idr.n, "max_residual": idr.max_residual}
        ok = ok and idr.max_residual <= 1e-12
    if n_contain > 0:
        cr = explore.containment_sweep(n_contain, seed)
        record["containment"] = {
            "n": cr.n,
            "violations": cr.violations,
            "first_violation": cr.first_violation,
            "max_magnitude": cr.max_magnitude,
            "singular": cr.singular,
            "skipped": cr.skipped,
        }
        ok = ok and cr.violations == 0 and cr.skipped == 0
    record["ok"] = ok
    if rep.violations > 0:
        if rep.first_violation < rep.n:
            rho, s, q = explore.verify_sample(seed, rep.first_violation)
            record["counterexample"] = {
                "index": rep.first_violation,
                "state": _density_record(rho),
                "settings": list(s.flat()),
                "quad": [q.i0, q.i1, q.i2, q.i3],
            }
        else:
            record["counterexample"] = {
                "index": rep.first_violation,
                "injected": True,
                "i0": inject[0],
                "i1": inject[1],
            }
    _emit(_json_value(record) + "\n", out)
    return 0 if ok else 1


def _cmd_optimize(args, cfg) -> int:
    seed = _need_seed(_resolve_seed(args, cfg), "optimize")
    rho, _, _ = _parse_state(_merged(args, cfg, "state"))
    mu_raw = _merged(args, cfg, "mu")
    mu = _as_int(mu_raw, "mu") if mu_raw is not None else 0
    if mu not in (0, 1, 2, 3):
        raise ConfigError(f"mu must be 0..3, got {mu}")
    fmt = _resolve_format(args, cfg, ("text", "json"), "text")
    out = _merged(args, cfg, "out")
    rng = PhiloxStream(seed, stream_id(DOMAIN_OPT, 0))
    s, value = optimize_settings(rho, mu, rng)
    hor = horodecki_value(correlation_tensor(rho))
    if fmt == "json":
        record = {
            "command": "optimize",
            "mu": mu,
            "value": value,
            "horodecki": hor,
            "distance": math.fabs(value - hor),
            "settings": list(s.flat()),
        }
        _emit(_json_value(record) + "\n", out)
    else:
        flat = s.flat()
        lines = [
            "mu = %d" % mu,
            "value = %s" % _fmt(value),
            "horodecki = %s" % _fmt(hor),
            "distance = %s" % _fmt(math.fabs(value - hor)),
        ]
        for name, k in (("a1", 0), ("a2", 3), ("b1", 6), ("b2", 9)):
            lines.append(
                "%s = %s %s %s"
                % (name, _fmt(flat[k]), _fmt(flat[k + 1]), _fmt(flat[k + 2]))
            )
        _emit("\n".join(lines) + "\n", out)
    return 0


def _emit_points(points, summary, fmt: str, out: str | None, command: str, title: str) -> int:
    if fmt == "csv":
        _emit(_points_csv(points), out)
    elif fmt == "json":
        record = {
            "command": command,
            "seed": summary.seed,
            "points": [_point_record(p) for p in points],
            "summary": _summary_record(summary),
        }
        _emit(_json_value(record) + "\n", out)
    else:
        _emit(svgplot.render_scatter(points, title=title), out)
    return 0 if summary.count_outside_circle == 0 else 1


def _cmd_scan(args, cfg) -> int:
    n = _resolve_n(args, cfg)
    seed = _need_seed(_resolve_seed(args, cfg), "scan")
    workers = _resolve_workers(args, cfg)
    spec = _merged(args, cfg, "state")
    rho, vis, theta = _parse_state(spec)
    fmt = _resolve_format(args, cfg, ("csv", "json", "svg"), "csv")
    out = _merged(args, cfg, "out")
    points, summary = explore.scan_random_directions(
        rho, n, seed, workers=workers, visibility=vis, theta=theta
    )
    return _emit_points(points, summary, fmt, out, "scan", "scan %s" % spec)


def _cmd_star(args, cfg) -> int:
    n = _resolve_n(args, cfg)
    seed = _need_seed(_resolve_seed(args, cfg), "star")
    workers = _resolve_workers(args, cfg)
    fmt = _resolve_format(args, cfg, ("csv", "json", "svg"), "csv")
    out = _merged(args, cfg, "out")
    points, summary = explore.scan_star(n, seed, workers=workers)
    return _emit_points(
        points, summary, fmt, out, "star", "star n=%d seed=%d" % (n, seed)
    )


def _cmd_ellipse(args, cfg) -> int:
    values = {}
    for key in ("alpha", "alphap", "beta", "delta", "deltap"):
        raw = _merged(args, cfg, key)
        if raw is None:
            raise ConfigError(f"{key} required")
        values[key] = _as_float(raw, key)
    theta_raw = _merged(args, cfg, "theta")
    theta = _as_float(theta_raw, "theta") if theta_raw is not None else None
    out = _merged(args, cfg, "out")
    _resolve_format(args, cfg, ("json",), "json")

    coeffs = ellipse_coeffs(
        values["alpha"], values["alphap"], values["beta"],
        values["delta"], values["deltap"],
    )
    axes = principal_axes(coeffs.a, coeffs.b, coeffs.c, coeffs.r2)
    gap = delta_gap(
        values["alpha"], values["alphap"], values["beta"],
        values["delta"], values["deltap"],
    )
    box = admissible_box(values["alpha"], values["alphap"], values["beta"])
    vertices = {
        "v%d%d" % (x, y): vertex_delta(
            values["alpha"], values["alphap"], values["beta"], x, y
        )
        for x in (0, 1)
        for y in (0, 1)
    }
    passed = (
        axes.v2 <= 8.0 + 1e-9
        and gap.v2 <= 8.0 + 1e-9
        and gap.gap_sq >= -1e-10
    )
    record = {
        "command": "ellipse",
        "alpha": values["alpha"],
        "alphap": values["alphap"],
        "beta": values["beta"],
        "delta": values["delta"],
        "deltap": values["deltap"],
        "theta": theta,
        "u": coeffs.u, "v": coeffs.v,
        "a": coeffs.a, "b": coeffs.b, "c": coeffs.c, "r2": coeffs.r2,
        "xi": axes.xi, "a_rot": axes.a_rot, "b_rot": axes.b_rot,
        "u2": axes.u2, "v2": axes.v2,
        "gap": gap.gap, "gap_sq": gap.gap_sq, "v2_gap": gap.v2,
        "box": {"umin": box[0], "umax": box[1], "vmin": box[2], "vmax": box[3]},
        "vertices": vertices,
        "verdict": "PASS" if passed else "FAIL",
    }
    _emit(_json_value(record) + "\n", out)
    return 0 if passed else 1


def _cmd_uncertainty(args, cfg) -> int:
    seed = _resolve_seed(args, cfg)
    rho, _, _ = _parse_state(_merged(args, cfg, "state"))
    spec = _merged(args, cfg, "settings")
    s = _parse_settings(spec if spec is not None else "optimal:0", rho, seed)
    fmt = _resolve_format(args, cfg, ("text", "json"), "text")
    out = _merged(args, cfg, "out")
    rep = variances(rho, s)
    rng = PhiloxStream(_need_seed(seed, "second-moment optimization"), stream_id(DOMAIN_OPT, 1))
    ms, mval = maximize_m2sum(rho, rng)
    if fmt == "json":
        record = {
            "command": "uncertainty",
            "var0": rep.var0,
            "var1": rep.var1,
            "m2sum": rep.m2sum,
            "max_m2sum": mval,
            "max_settings": list(ms.flat()),
        }
        _emit(_json_value(record) + "\n", out)
    else:
        lines = [
            "var0 = %s" % _fmt(rep.var0),
            "var1 = %s" % _fmt(rep.var1),
            "m2sum = %s" % _fmt(rep.m2sum),
            "max m2sum = %s" % _fmt(mval),
        ]
        _emit("\n".join(lines) + "\n", out)
    return 0


# --------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags win")
    common.add_argument("--seed", help="PRNG seed (or CHSH_SEED env)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", help="output format")
    common.add_argument("--workers", help="parallel worker count")

    parser = argparse.ArgumentParser(
        prog="chsh-tradeoff",
        description="CHSH-pair tradeoff toolkit: at most one of the four"
        " equivalent CHSH forms can be violated at a time.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="quad + pair radii at fixed settings")
    p.add_argument("--state", help="schmidt:THETA | isotropic:V,THETA | mixed-file:PATH")
    p.add_argument("--settings", help="random | optimal:MU | 12 comma-separated components")

    p = sub.add_parser("verify", parents=[common], help="theorem + identity + containment sweeps")
    p.add_argument("--n", help="number of theorem samples")
    p.add_argument("--ident", help="identity-sweep samples (default min(n, 1000))")
    p.add_argument("--contain", help="containment-sweep samples (default min(n, 10000))")
    p.add_argument("--inject", help=argparse.SUPPRESS)

    p = sub.add_parser("optimize", parents=[common], help="best settings for one form")
    p.add_argument("--state", help="state spec")
    p.add_argument("--mu", help="form index 0..3 (default 0)")

    p = sub.add_parser("scan", parents=[common], help="random-direction cloud for a fixed state")
    p.add_argument("--state", help="state spec")
    p.add_argument("--n", help="number of arrangements")

    p = sub.add_parser("star", parents=[common], help="extremal-settings star scan")
    p.add_argument("--n", help="samples per quarter")

    p = sub.add_parser("ellipse", parents=[common], help="derive one bounding ellipse")
    for key in ("alpha", "alphap", "beta", "delta", "deltap", "theta"):
        p.add_argument("--%s" % key, help="%s in radians" % key)

    p = sub.add_parser("uncertainty", parents=[common], help="variances and second moments")
    p.add_argument("--state", help="state spec")
    p.add_argument("--settings", help="settings spec (default optimal:0)")

    return parser


_COMMANDS = {
    "eval": _cmd_eval,
    "verify": _cmd_verify,
    "optimize": _cmd_optimize,
    "scan": _cmd_scan,
    "star": _cmd_star,
    "ellipse": _cmd_ellipse,
    "uncertainty": _cmd_uncertainty,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return _COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        sys.stderr.write("config error: %s\n" % exc)
        return 2
    except ChshError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except OSError as exc:
        sys.stderr.write("i/o error: %s\n" % exc)
        return 3
