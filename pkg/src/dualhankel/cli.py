"""Command-line front end: ``dualhankel <command> [options]``.

Commands: ``verify``, ``kernel``, ``transform``, ``spectrum``, ``nullspace``,
``quadrature``. Exit status is 0 on success, 1 when a verification check
fails and 2 on a configuration error.

Reports are JSON (sorted keys, stable float formatting) or CSV with 17
significant digits. Every report carries the library version and the full
parameter set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .checks import CHECKS, run_checks
from .errors import DomainError
from .kernels import bergman_kernel_series, hankel_kernel_closed
from .ops import (
    LaguerreCoeffs,
    MonomialCoeffs,
    adjoint_apply_spectral,
    dual_transform_spectral,
    range_basis_report,
)
from .quad import disk_rule, gauss_jacobi_unit, gauss_laguerre
from .quat import Quaternion
from .spectral import P_GRID, spectral_report
from .specfun import Params, laguerre_zeros

COMMANDS = ("verify", "kernel", "transform", "spectrum", "nullspace", "quadrature")
CONFIG_KEYS = {"alpha", "beta", "eta", "y", "trunc", "tol", "seed", "format", "out"}
DEFAULT_TRUNC = {"verify": 40, "kernel": 80, "transform": 40, "spectrum": 5000, "nullspace": 50, "quadrature": 200}
DEFAULT_PARAMS = {"alpha": 0.0, "beta": 1.0, "eta": 1.0, "y": 1.0}
DEFAULT_SEED = 20240601


class ConfigError(Exception):
    """Bad command-line or config-file input (exit status 2)."""


@dataclass
class RunConfig:
    command: str
    params: Params
    trunc: int
    tol: float | None = None
    seed: int = DEFAULT_SEED
    fmt: str = "json"
    out: str | None = None


def _fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")  # + 0.0 folds -0.0 into 0


def _clean(value):
    """Make a report JSON-safe: numpy to Python, non-finite floats to strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def dump_json(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def read_config_file(path: str) -> dict:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float)
    common.add_argument("--beta", type=float)
    common.add_argument("--eta", type=float)
    common.add_argument("--y", type=float)
    common.add_argument("--trunc", type=int, help="truncation / rule size")
    common.add_argument("--tol", type=float, help="override every check tolerance")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--config", help="key=value file; flags take precedence")

    parser = _Parser(prog="dualhankel", description="Dual fractional Hankel transform laboratory.")
    parser.add_argument("--version", action="version", version=f"dualhankel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", parents=[common], help="run the identity suite")
    verify.add_argument("--check", action="append", choices=[c.name for c in CHECKS], help="run only these checks")

    kernel = sub.add_parser("kernel", parents=[common], help="evaluate a kernel on a grid")
    kernel.add_argument("--which", choices=("hankel", "bergman"), default="hankel")
    kernel.add_argument("--points", help="JSON list of quaternions [w,x,y,z]; default a radial grid on slice i")
    kernel.add_argument("--x", type=float, default=1.0, help="first real argument of the Hankel kernel")
    kernel.add_argument("--at", default="[0,0,0,0]", help="second Bergman argument as JSON [w,x,y,z]")

    transform = sub.add_parser("transform", parents=[common], help="apply S or its adjoint to coefficients")
    transform.add_argument("--coeffs", required=True, help="JSON list of quaternions, or @file")
    transform.add_argument("--adjoint", action="store_true", help="apply the adjoint to monomial coefficients")
    transform.add_argument("--points", help="JSON list of quaternions at which to evaluate the output")

    sub.add_parser("spectrum", parents=[common], help="singular values and Schatten diagnostics")

    nullspace = sub.add_parser("nullspace", parents=[common], help="null-space indices")
    nullspace.add_argument("--zeros-of", type=int, help="scan y over the zeros of L_n instead of the given y")

    quadrature = sub.add_parser("quadrature", parents=[common], help="dump a quadrature rule")
    quadrature.add_argument("--kind", choices=("laguerre", "jacobi", "disk"), default="laguerre")
    quadrature.add_argument("--n-theta", type=int, default=96)
    return parser


def make_config(args) -> RunConfig:
    file_values = read_config_file(args.config) if args.config else {}

    def pick(name, cast, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            try:
                return cast(file_values[name])
            except ValueError as exc:
                raise ConfigError(f"bad value for {name}: {file_values[name]!r}") from exc
        return default

    try:
        params = Params(**{k: pick(k, float, v) for k, v in DEFAULT_PARAMS.items()})
    except DomainError as exc:
        raise ConfigError(f"domain violation: {exc}") from exc
    trunc = pick("trunc", int, DEFAULT_TRUNC[args.command])
    if trunc < 1:
        raise ConfigError("trunc must be positive")
    tol = pick("tol", float, None)
    if tol is not None and not tol > 0:
        raise ConfigError("tol must be positive")
    fmt = pick("format", str, "csv" if args.command == "quadrature" else "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown format {fmt!r}")
    return RunConfig(
        command=args.command,
        params=params,
        trunc=trunc,
        tol=tol,
        seed=pick("seed", int, DEFAULT_SEED),
        fmt=fmt,
        out=pick("out", str, None),
    )


def _header(config: RunConfig) -> dict:
    p = config.params
    return {
        "version": __version__,
        "command": config.command,
        "params": {"alpha": p.alpha, "beta": p.beta, "eta": p.eta, "y": p.y},
        "trunc": config.trunc,
        "seed": config.seed,
        "tol": config.tol,
    }


def _parse_quaternions(text: str, what: str) -> Quaternion:
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {what}: {exc}") from exc
    try:
        data = np.asarray(json.loads(text), dtype=float)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{what} must be JSON numbers: {exc}") from exc
    if data.ndim == 1 and data.size == 4 and what != "coefficients":
        data = data[None, :]
    if data.ndim == 1:
        data = np.stack([data, 0 * data, 0 * data, 0 * data], axis=-1)
    if data.ndim != 2 or data.shape[1] != 4:
        raise ConfigError(f"{what} must be a list of [w, x, y, z] entries")
    return Quaternion.from_array(data)


def _default_points() -> Quaternion:
    z = np.concatenate([r * np.exp(1j * np.linspace(0, 2 * math.pi, 8, endpoint=False)) for r in (0.25, 0.5, 0.75)])
    return Quaternion.from_complex(z)


def run_verify(config: RunConfig, names=None):
    results = run_checks(config.params, config.trunc, config.seed, config.tol, names)
    passed = all(r["passed"] for r in results)
    report = _header(config) | {"checks": results, "passed": passed}
    rows = [(r["name"], r["error"], r["tolerance"], "pass" if r["passed"] else "fail") for r in results]
    csv_text = dump_csv(("name", "error", "tolerance", "status"), rows)
    for r in results:
        if not r["passed"]:
            print(f"check failed: {r['name']} (error {r['error']:.3e} > tolerance {r['tolerance']:.1e})", file=sys.stderr)
    return report, csv_text, 0 if passed else 1


def run_kernel(config: RunConfig, args):
    p = config.params
    points = _parse_quaternions(args.points, "points") if args.points else _default_points()
    if np.any(points.norm() >= 1):
        raise ConfigError("kernel points must lie in the open unit ball")
    if args.which == "hankel":
        values = hankel_kernel_closed(points, args.x, p.y, p.alpha)
        extra = {"x": args.x}
    else:
        at = _parse_quaternions(args.at, "second point")[0]
        if float(at.norm()) >= 1:
            raise ConfigError("kernel points must lie in the open unit ball")
        values = bergman_kernel_series(points, at, p.beta, p.eta, n_terms=max(config.trunc, 400))
        extra = {"at": at.array}
    rows = [tuple(q) + tuple(v) for q, v in zip(points.array, values.array)]
    report = _header(config) | {"kernel": args.which, **extra, "points": points.array, "values": values.array}
    header = ("q_w", "q_x", "q_y", "q_z", "re", "i", "j", "k")
    return report, dump_csv(header, rows), 0


def run_transform(config: RunConfig, args):
    p = config.params
    coeffs = _parse_quaternions(args.coeffs, "coefficients").array[: config.trunc]
    if args.adjoint:
        out = adjoint_apply_spectral(MonomialCoeffs(coeffs), p.y, p).coeffs
        evaluate = None
        kind = "adjoint"
    else:
        image = dual_transform_spectral(LaguerreCoeffs(p.alpha, coeffs), p.y)
        out = image.coeffs
        evaluate = image
        kind = "forward"
    report = _header(config) | {"direction": kind, "input_coeffs": coeffs, "output_coeffs": out}
    rows = [(n,) + tuple(c) for n, c in enumerate(out)]
    header = ("n", "re", "i", "j", "k")
    if evaluate is not None:
        points = _parse_quaternions(args.points, "points") if args.points else _default_points()
        if np.any(points.norm() >= 1):
            raise ConfigError("evaluation points must lie in the open unit ball")
        values = evaluate(points)
        report["grid"] = {"points": points.array, "values": values.array}
        if args.points:
            rows = [tuple(q) + tuple(v) for q, v in zip(points.array, values.array)]
            header = ("q_w", "q_x", "q_y", "q_z", "re", "i", "j", "k")
    return report, dump_csv(header, rows), 0


def run_spectrum(config: RunConfig):
    p = config.params
    if config.trunc < 2500:
        raise ConfigError("spectrum needs trunc >= 2500 for the Schatten block fits")
    rep = spectral_report(p, config.trunc, P_GRID)
    b = rep.boundedness
    report = _header(config) | {
        "singular_values": rep.singular_values,
        "c_n": rep.c_sequence,
        "schatten_partial_sums": {_fmt(k): v for k, v in rep.schatten_partial_sums.items()},
        "schatten": {_fmt(k): r.as_dict() for k, r in rep.schatten.items()},
        "null_indices": rep.null_indices,
        "sup_c": rep.sup_c,
        "decay_slope": rep.decay_slope,
        "bounded": b.bounded,
        "ell_integral": rep.ell_integral,
        "ell_error": b.ell_error,
        "y0_integral": b.y0_integral,
        "y0_integral_alt": b.y0_integral_alt,
        "y0_ratio": b.y0_ratio,
    }
    rows = [(n, s, c) for n, (s, c) in enumerate(zip(rep.singular_values, rep.c_sequence))]
    return report, dump_csv(("n", "s_n", "c_n"), rows), 0


def run_nullspace(config: RunConfig, args):
    p = config.params
    ys = laguerre_zeros(args.zeros_of, p.alpha) if args.zeros_of else [p.y]
    entries = []
    for y in ys:
        r = range_basis_report(float(y), p.alpha, config.trunc, config.tol or 1e-9)
        entries.append(
            {
                "y": float(y),
                "null_indices": r.null_indices,
                "dim_ker": len(r.null_indices),
                "strict_inclusion": r.strict_inclusion,
                "summary": "empty, dim 0" if not r.null_indices else f"{list(r.null_indices)}, dim {len(r.null_indices)}",
            }
        )
    report = _header(config) | {"results": entries}
    rows = [(e["y"], " ".join(map(str, e["null_indices"])), e["dim_ker"], e["strict_inclusion"]) for e in entries]
    return report, dump_csv(("y", "null_indices", "dim_ker", "strict_inclusion"), rows), 0


def run_quadrature(config: RunConfig, args):
    p = config.params
    n = config.trunc
    if args.kind == "laguerre":
        rule = gauss_laguerre(n, p.alpha)
    elif args.kind == "jacobi":
        rule = gauss_jacobi_unit(n, p.beta, p.eta)
    else:
        rule = disk_rule(n, args.n_theta, p.beta, p.eta)
    if args.kind == "disk":
        header = ("node_re", "node_im", "weight")
        rows = [(z.real, z.imag, w) for z, w in zip(rule.nodes, rule.weights)]
        nodes = np.stack([rule.nodes.real, rule.nodes.imag], axis=-1)
    else:
        header = ("node", "weight")
        rows = list(zip(rule.nodes, rule.weights))
        nodes = rule.nodes
    report = _header(config) | {"kind": args.kind, "nodes": nodes, "weights": rule.weights}
    return report, dump_csv(header, rows), 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = make_config(args)
        if config.command == "verify":
            report, csv_text, status = run_verify(config, set(args.check) if args.check else None)
        elif config.command == "kernel":
            report, csv_text, status = run_kernel(config, args)
        elif config.command == "transform":
            report, csv_text, status = run_transform(config, args)
        elif config.command == "spectrum":
            report, csv_text, status = run_spectrum(config)
        elif config.command == "nullspace":
            report, csv_text, status = run_nullspace(config, args)
        else:
            report, csv_text, status = run_quadrature(config, args)
    except (ConfigError, DomainError) as exc:
        print(f"dualhankel: error: {exc}", file=sys.stderr)
        return 2

    text = dump_json(report) if config.fmt == "json" else csv_text
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
