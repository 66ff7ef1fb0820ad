"""Command-line front end: JSON in, JSON out.

Usage:
    jordan-subdiff decompose --input x.json
    jordan-subdiff subdiff --input query.json --tol 1e-8
    jordan-subdiff kl --input kl.json --seed 7 --output report.json

Exit codes: 0 success, 2 invalid input or violated precondition, 3 eigensolver
failure. Errors are reported as {"error": ..., "message": ...} on the output.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from typing import Any, Callable

from .calculus import eigen_dir_derivative, majorizes, stabilizer_hull_member
from .config import config
from .errors import EigensolverError, JordanError, SchemaError
from .frames import JordanFrame, diag_build, operator_commute, spectral_decompose
from .kl import kl_check, kl_exponent_fit
from .oracles import regular_subgradient_probe
from .serialization import (
    dump,
    element_from_json,
    element_to_json,
    function_id_from_json,
    kind_from_json,
    load,
    vector_from_json,
)
from .transfer import lambda_k_subdiff_query, spectral_subdiff_member, spectral_value

logger = logging.getLogger(__name__)

Handler = Callable[[dict, argparse.Namespace], dict]


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise SchemaError(f"Missing key '{key}' in input document")
    return doc[key]


def _int(doc: dict, key: str) -> int:
    value = _require(doc, key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"'{key}' must be an integer, got {value!r}")
    return value


def _float(doc: dict, key: str) -> float:
    value = _require(doc, key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SchemaError(f"'{key}' must be a number, got {value!r}")
    return float(value)


def run_decompose(doc: dict, args: argparse.Namespace) -> dict:
    """Decompose x, or rebuild it from a decompose document."""
    if args.reconstruct:
        frame_doc = _require(doc, "frame")
        if not isinstance(frame_doc, list):
            raise SchemaError("'frame' must be a list of elements")
        frame = JordanFrame(tuple(element_from_json(c) for c in frame_doc))
        return {"x": element_to_json(diag_build(vector_from_json(_require(doc, "lambda"), "lambda"), frame))}
    dec = spectral_decompose(element_from_json(_require(doc, "x")), args.tol)
    return {"lambda": dec.eigenvalues.tolist(), "frame": [element_to_json(c) for c in dec.frame]}


def run_commute(doc: dict, args: argparse.Namespace) -> dict:
    """Operator commutation of x and y."""
    x = element_from_json(_require(doc, "x"))
    y = element_from_json(_require(doc, "y"))
    return {"commutes": operator_commute(x, y, args.tol)}


def run_dirderiv(doc: dict, args: argparse.Namespace) -> dict:
    """Directional derivative λ'(x; z)."""
    x = element_from_json(_require(doc, "x"))
    z = element_from_json(_require(doc, "z"))
    return {"derivative": eigen_dir_derivative(x, z, args.tau_group).tolist()}


def run_majorize(doc: dict, args: argparse.Namespace) -> dict:
    """Majorization, plus the stabilizer hull test when ``lam`` is given."""
    u = vector_from_json(_require(doc, "u"), "u")
    v = vector_from_json(_require(doc, "v"), "v")
    out: dict[str, Any] = {"majorizes": majorizes(u, v, args.tol)}
    if "lam" in doc:
        lam = vector_from_json(doc["lam"], "lam")
        out["stabilizer_hull_member"] = stabilizer_hull_member(u, v, lam, args.tau_group, args.tol)
    return out


def run_subdiff(doc: dict, args: argparse.Namespace) -> dict:
    """Membership report for s in a subdifferential of F at x."""
    report = spectral_subdiff_member(
        function_id_from_json(_require(doc, "function")),
        kind_from_json(_require(doc, "kind")),
        element_from_json(_require(doc, "x")),
        element_from_json(_require(doc, "s")),
        args.tol,
        args.tau_group,
    )
    return report.to_dict()


def run_lambda_k(doc: dict, args: argparse.Namespace) -> dict:
    """Membership of s in a subdifferential of λ_k at x."""
    report = lambda_k_subdiff_query(
        _int(doc, "k"),
        kind_from_json(_require(doc, "kind")),
        element_from_json(_require(doc, "x")),
        element_from_json(_require(doc, "s")),
        args.tol,
        args.tau_group,
    )
    return report.to_dict()


def run_kl(doc: dict, args: argparse.Namespace) -> dict:
    """KL sampling check, with an exponent fit when ``radii`` is given."""
    fid = function_id_from_json(_require(doc, "function"))
    x = element_from_json(_require(doc, "x"))
    report = kl_check(
        fid,
        x,
        alpha=_float(doc, "alpha"),
        c=_float(doc, "c"),
        nu=_float(doc, "nu"),
        radius=_float(doc, "radius"),
        n_samples=_int(doc, "n_samples"),
        seed=args.seed,
    )
    if "radii" in doc:
        radii = vector_from_json(doc["radii"], "radii")
        fit = kl_exponent_fit(fid, x, radii.tolist(), _int(doc, "n_samples"), args.seed, nu=_float(doc, "nu"))
        report = dataclasses.replace(report, fitted_exponent=fit.exponent, fit_residual=fit.residual)
    return report.to_dict()


def run_probe(doc: dict, args: argparse.Namespace) -> dict:
    """Sample the regular subgradient inequality for s at x."""
    fid = function_id_from_json(_require(doc, "function"))
    x = element_from_json(_require(doc, "x"))
    s = element_from_json(_require(doc, "s"))
    radii = vector_from_json(_require(doc, "radii"), "radii")
    n_dirs = _int(doc, "n_dirs") if "n_dirs" in doc else config.PROBE_N_DIRS
    verdict = regular_subgradient_probe(
        lambda y: spectral_value(fid, y),
        x,
        s,
        epsilon=_float(doc, "epsilon"),
        radii=radii.tolist(),
        n_dirs=n_dirs,
        seed=args.seed,
    )
    return verdict.to_dict()


COMMANDS: dict[str, tuple[Handler, str]] = {
    "decompose": (run_decompose, "Spectral decomposition of x (or rebuild x with --reconstruct)"),
    "commute": (run_commute, "Operator commutation of x and y"),
    "dirderiv": (run_dirderiv, "Directional derivative of the eigenvalue map at x along z"),
    "majorize": (run_majorize, "Majorization u ≺ v (and stabilizer hull membership when lam is given)"),
    "subdiff": (run_subdiff, "Membership of s in a subdifferential of f∘λ at x"),
    "lambda-k": (run_lambda_k, "Membership of s in a subdifferential of λ_k at x"),
    "kl": (run_kl, "Sampling check of the KL inequality"),
    "probe": (run_probe, "Sampling probe of the regular subgradient inequality"),
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per entry of COMMANDS."""
    parser = argparse.ArgumentParser(
        prog="jordan-subdiff",
        description="Spectral decompositions and subdifferentials in Euclidean Jordan algebras",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--input", default="-", help="Input JSON file (default: stdin)")
        sub.add_argument("--output", default="-", help="Output JSON file (default: stdout)")
        sub.add_argument("--tol", type=float, default=None, help="Membership / check tolerance")
        sub.add_argument("--tau-group", type=float, default=None, help="Eigenvalue grouping tolerance")
        sub.add_argument("--seed", type=int, default=0, help="Seed for sampling commands")
        if name == "decompose":
            sub.add_argument(
                "--reconstruct",
                action="store_true",
                help="Read a decompose output document and emit the element it describes",
            )
    return parser


def _read_input(path: str) -> dict:
    if path == "-":
        doc = load(sys.stdin)
    else:
        try:
            with open(path, "r") as f:
                doc = load(f)
        except OSError as e:
            raise SchemaError(f"Cannot read input file '{path}': {e}") from None
    if not isinstance(doc, dict):
        raise SchemaError("Input document must be a JSON object")
    return doc


def _write_output(path: str, doc: dict) -> None:
    if path == "-":
        dump(doc, sys.stdout)
    else:
        with open(path, "w") as f:
            dump(doc, f)


def main(argv: list[str] | None = None) -> int:
    """Run one command and return its exit code."""
    logging.basicConfig(
        level=config.log_level(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    config.validate()
    if config.VERBOSE_LOGGING:
        config.log_config(logger)

    handler, _ = COMMANDS[args.command]
    try:
        result = handler(_read_input(args.input), args)
        code = 0
    except JordanError as e:
        logger.error("%s: %s", type(e).__name__, e)
        result, code = {"error": type(e).__name__, "message": str(e)}, 2
    except EigensolverError as e:
        logger.error("%s: %s", type(e).__name__, e)
        result, code = {"error": type(e).__name__, "message": str(e)}, 3
    _write_output(args.output, result)
    return code


if __name__ == "__main__":
    sys.exit(main())
