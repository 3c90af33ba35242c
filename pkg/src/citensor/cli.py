"""Command-line interface.

Subcommands: validate, dim, basis, decompose, is-simple, properties,
simulate, diagnose.  Reports are JSON (trajectories CSV unless --json);
identical inputs and seeds produce byte-identical output.  Exit codes:
0 success, 1 validation failure with a machine-readable reason on stdout,
2 usage error (argparse prints usage on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .basis import enumerate_basis, psd_basis, symmetry_class_dim
from .brackets import Metriplectic4Bracket
from .dynamics import (
    IntegrationError,
    IntegratorConfig,
    NoninteractionError,
    diagnostics,
    integrate,
)
from .fields import FieldValidationError, GradientMismatchError
from .properties import axiom_report, jacobi_report, sqps_report
from .serialize import (
    dumps,
    read_tensor,
    tensor_from_obj,
    tensor_to_obj,
    trajectory_from_csv,
    trajectory_to_csv,
    trajectory_to_obj,
)
from .simple import decompose, is_simple
from .systems import SpecFormatError, load_system
from .tensor import DEFAULT_TOL, NotInSymmetryClassError, check_symmetries

_VALIDATION_ERRORS = (NotInSymmetryClassError, NoninteractionError,
                      FieldValidationError, GradientMismatchError,
                      SpecFormatError, IntegrationError,
                      OSError, json.JSONDecodeError, ValueError)


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(reason: str, **extra) -> int:
    obj = {"error": reason}
    obj.update(extra)
    sys.stdout.write(dumps(obj) + "\n")
    return 1


def _parse_x0(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError as exc:
        raise ValueError(f"cannot parse --x0 {text!r}: {exc}") from exc


def cmd_dim(args) -> int:
    sys.stdout.write(f"{symmetry_class_dim(args.n)}\n")
    return 0


def cmd_basis(args) -> int:
    elements = psd_basis(args.n) if args.psd else enumerate_basis(args.n)
    objs = [tensor_to_obj(el.tensor, kind=el.kind, tuple=list(el.indices))
            for el in elements]
    _emit(dumps(objs) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    t = read_tensor(args.infile)
    report = check_symmetries(t, tol=args.tol, seed=args.seed)
    obj = {
        "pass": report.passed,
        "n": t.n,
        "tol": args.tol,
        "pair12_residual": report.pair12_residual,
        "pair34_residual": report.pair34_residual,
        "cyclic_residual": report.cyclic_residual,
        "psd_min_eig": report.psd_min_eig,
        "violations": report.violations(),
    }
    sys.stdout.write(dumps(obj) + "\n")
    return 0 if report.passed else 1


def cmd_decompose(args) -> int:
    t = read_tensor(args.infile)
    dec = decompose(t, tol=args.tol)
    obj = {
        "n": dec.n,
        "residual": dec.residual,
        "components": [
            {"weight": comp.weight, "kind": kind, "tuple": list(indices),
             "j": comp.j.values.tolist()}
            for comp, (kind, indices) in zip(dec.components, dec.kinds)
        ],
    }
    _emit(dumps(obj) + "\n", args.out)
    return 0


def cmd_is_simple(args) -> int:
    t = read_tensor(args.infile)
    result = is_simple(t, tol=args.tol)
    if result.simple:
        obj = {"verdict": "simple", "weight": result.weight,
               "j": result.j.values.tolist(), "residual": result.residual}
    else:
        obj = {"verdict": "not_simple",
               "witness_index": list(result.witness_index),
               "message": result.message}
    sys.stdout.write(dumps(obj) + "\n")
    return 0


def cmd_properties(args) -> int:
    spec = load_system(args.spec)
    probes = np.random.default_rng(args.seed).uniform(-1, 1, size=(20, spec.n))
    spec.eps.validate_on(probes, tol=args.tol)
    obj = {
        "n": spec.n,
        "probes": args.probes,
        "seed": args.seed,
        "axioms": axiom_report(spec.eps, count=args.probes, seed=args.seed),
        "biquadratic": sqps_report(spec.eps, count=max(1, args.probes // 2),
                                   seed=args.seed),
        "jacobi_residual_max": jacobi_report(spec.poisson, seed=args.seed),
    }
    sys.stdout.write(dumps(obj) + "\n")
    return 0


def cmd_simulate(args) -> int:
    spec = load_system(args.spec)
    if args.x0 is not None:
        x0 = _parse_x0(args.x0)
    elif spec.default_x0 is not None:
        x0 = spec.default_x0
    else:
        return _fail("no --x0 given and the spec has no default_x0")
    cfg = IntegratorConfig(step=args.step, t_end=args.t_end,
                           record_every=args.record_every)
    traj = integrate(spec, x0, cfg, noninteraction_tol=args.tol)
    if args.json:
        _emit(dumps(trajectory_to_obj(traj)) + "\n", args.out)
    else:
        _emit(trajectory_to_csv(traj), args.out)
    if not args.quiet and args.out:
        sys.stderr.write(f"wrote {traj.times.size} samples to {args.out}\n")
    return 0


def cmd_diagnose(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        traj = trajectory_from_csv(fh.read())
    sys.stdout.write(dumps(diagnostics(traj)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citensor",
        description="Conservative-irreversible 4-tensors: validation, bases, "
                    "decompositions and irreversible Hamiltonian simulation.")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all randomized probes (default 0)")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help=f"residual tolerance (default {DEFAULT_TOL})")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true",
                     help="emit trajectories as JSON instead of CSV")
    fmt.add_argument("--csv", action="store_true",
                     help="emit trajectories as CSV (the default)")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational notes on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="dimension of the symmetry class")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_dim)

    p = sub.add_parser("basis", help="write the basis for dimension n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--psd", action="store_true",
                   help="emit the PSD-cone basis (a/eB/eC/eD) instead of a/b/c/d")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(fn=cmd_basis)

    p = sub.add_parser("validate", help="check the defining conditions of a tensor")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("decompose", help="decompose a tensor into simple components")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("is-simple",
                       help="test whether a tensor is a single weighted simple square")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_is_simple)

    p = sub.add_parser("properties", help="identity-residual report for a system spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--probes", type=int, default=200)
    p.set_defaults(fn=cmd_properties)

    p = sub.add_parser("simulate", help="integrate an irreversible Hamiltonian system")
    p.add_argument("--spec", required=True)
    p.add_argument("--x0", help="comma-separated initial state (default from spec)")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--out", help="output CSV file (default stdout)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("diagnose", help="thermodynamic-law report for a trajectory CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _VALIDATION_ERRORS as exc:
        extra = {}
        if isinstance(exc, NotInSymmetryClassError):
            extra["residual"] = exc.residual
        return _fail(f"{type(exc).__name__}: {exc}", **extra)


if __name__ == "__main__":
    sys.exit(main())
