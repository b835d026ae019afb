"""Command-line interface: ``presstop run | validate | list-problems``.

Exit codes: 0 success, 2 invalid arguments, 3 solver or optimiser failure,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .driver import RunConfig, initialize, optimize
from .element import MaterialParams
from .errors import OptimizerError, SolverError
from .export import export_results
from .problems import DEFAULT_DIMS, PROBLEM_DEFAULTS, PROBLEM_NAMES, DESCRIPTIONS, make_custom_problem, make_problem
from .validation import force_balance

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("presstop")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}

# config keys that are not RunConfig fields
_CUSTOM_KEYS = {"pressure", "supports"}


class UsageError(ValueError):
    pass


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean (true/false/1/0), got {text!r}")


def read_config(path: str) -> dict[str, str]:
    """Parse a UTF-8 ``key = value`` file; ``#`` starts a comment."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    values: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in ("lst", "drainage"):
        return value if isinstance(value, bool) else parse_bool(value)
    if key in ("nelx", "nely", "maxit", "period"):
        return int(value)
    if key in ("problem", "out"):
        return str(value)
    if key == "betamax" and str(value).strip().lower() in ("", "none", "off"):
        return None
    return float(value)


def build_config(args: argparse.Namespace, file_values: dict[str, str]):
    """Merge defaults, command-line flags and config-file values (file wins)."""
    flags = {k: v for k, v in vars(args).items() if k in _FIELDS and v is not None}
    merged = dict(flags)
    for key, value in file_values.items():
        if key in _FIELDS:
            merged[key] = value
        elif key not in _CUSTOM_KEYS:
            raise UsageError(f"unknown config key {key!r}")
    try:
        merged = {k: _coerce(k, v) for k, v in merged.items()}
    except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad value in configuration: {exc}") from exc
    problem = str(merged.pop("problem", "arch")).lower().replace("-", "_")
    if problem == "custom":
        base = dict(PROBLEM_DEFAULTS["arch"])
    elif problem in PROBLEM_DEFAULTS:
        base = dict(PROBLEM_DEFAULTS[problem])
    else:
        raise UsageError(f"unknown problem {problem!r}; choose from {', '.join(PROBLEM_NAMES)} or custom")
    base.update(merged)
    cfg = RunConfig(problem=problem, **base)
    custom = {k: file_values[k] for k in _CUSTOM_KEYS if k in file_values}
    return cfg, custom


def _make_spec(cfg: RunConfig, custom: dict):
    if cfg.problem == "custom":
        if "pressure" not in custom or "supports" not in custom:
            raise UsageError("custom problems need 'pressure' and 'supports' in the config file")
        if cfg.nelx is None or cfg.nely is None:
            raise UsageError("custom problems need nelx and nely")
        return make_custom_problem(cfg.nelx, cfg.nely, custom["pressure"], custom["supports"], pin=cfg.pin)
    return make_problem(cfg.problem, cfg.nelx, cfg.nely, pin=cfg.pin)


def cmd_run(args) -> int:
    try:
        file_values = read_config(args.config) if args.config else {}
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg, custom = build_config(args, file_values)
        spec = _make_spec(cfg, custom)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        result = optimize(spec, cfg)
    except (SolverError, OptimizerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        partial = getattr(exc, "partial_result", None)
        if cfg.out and partial is not None and partial.iterations:
            try:
                export_results(partial, cfg.out)
                print(f"partial results ({partial.iterations} iterations) written to {cfg.out}", file=sys.stderr)
            except OSError as io_exc:
                print(f"error: {io_exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"problem {spec.name}: {result.iterations} iterations, "
          f"{'converged' if result.converged else 'stopped at maxit'}")
    print(f"compliance {result.final_compliance:.6g} (normalised objective {result.final_objective:.4f})")
    print(f"volume fraction {result.volfrac[-1]:.4f}, grayness {result.grayness:.4g}%")
    if cfg.out:
        try:
            export_results(result, cfg.out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"results written to {cfg.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        spec = make_problem(args.problem, args.nelx, args.nely, pin=args.pin)
        params = MaterialParams(drainage=args.drainage)
        density = None
        if spec.frozen_density is None:
            cfg = RunConfig.for_problem(spec.name)
            density = initialize(spec, cfg).x
        fb = force_balance(spec, params, density)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    print(f"problem {spec.name} ({spec.nelx}x{spec.nely}, drainage {'on' if args.drainage else 'off'})")
    print(f"MFx = {abs(fb.mfx):.6e}")
    print(f"MFy = {abs(fb.mfy):.6f}")
    print(f"boundary integral: Fx = {fb.expected_fx:.6e}, Fy = {fb.expected_fy:.6f}")
    return EXIT_OK


def cmd_list(args) -> int:
    print(f"{'name':<10}{'grid':>9}  volfrac penal rmin etaf betaf maxit  description")
    for name in PROBLEM_NAMES:
        d = PROBLEM_DEFAULTS[name]
        nx, ny = DEFAULT_DIMS[name]
        print(f"{name:<10}{f'{nx}x{ny}':>9}  {d['volfrac']:<7g} {d['penal']:<5g} {d['rmin']:<4g} "
              f"{d['etaf']:<4g} {d['betaf']:<5g} {d['maxit']:<5d}  {DESCRIPTIONS[name]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="presstop", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log every iteration")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="optimise a benchmark or custom problem")
    run.add_argument("--problem", help="problem name (see list-problems) or 'custom'")
    for name in ("nelx", "nely", "maxit"):
        run.add_argument(f"--{name}", type=int)
    for name in ("volfrac", "penal", "rmin", "etaf", "betaf", "betamax", "pin"):
        run.add_argument(f"--{name}", type=float)
    run.add_argument("--change-tol", dest="change_tol", type=float)
    run.add_argument("--move-limit", dest="move_limit", type=float)
    run.add_argument("--lst", type=parse_bool, help="include load sensitivities (true/false)")
    run.add_argument("--drainage", type=parse_bool, help="drainage term on/off (default true)")
    run.add_argument("--out", help="directory for result files")
    run.add_argument("--config", help="key=value file; its values override flags")
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="force-balance check of the pressure model")
    val.add_argument("--problem", default="sp2")
    val.add_argument("--nelx", type=int)
    val.add_argument("--nely", type=int)
    val.add_argument("--pin", type=float, default=1.0)
    val.add_argument("--drainage", type=parse_bool, default=True)
    val.set_defaults(func=cmd_validate)

    lst = sub.add_parser("list-problems", help="show built-in problems and their defaults")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
