"""JSON-in, JSON-out command line front end.

Exit codes: 0 pass, 2 malformed input, 3 resource bound exceeded,
4 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__, decomp, elliptic, intmat, suites, theta

EXIT_OK, EXIT_INPUT, EXIT_BOUND, EXIT_FAIL = 0, 2, 3, 4

# which tolerance or bound a bare --tol / --bound sets for each suite
SUITE_TOL_KEY = {
    "theta-fj": "fj_residual",
    "wp-identities": "relation",
}
SUITE_BOUND_KEY = {
    "lambda2": "max_entry",
    "lambda3": "max_entry",
    "inequalities": "max_entry",
    "decompositions": "max_entry3",
    "optimal": "bound",
    "orbits": "bound",
    "theta-fj": "a2_radius",
}


class InputError(ValueError):
    pass


def _load_input(args) -> object:
    text = args.input
    if args.json is not None:
        text = sys.stdin.read() if args.json == "-" else open(args.json).read()
    if text is None:
        raise InputError("no input; pass JSON inline or with --json")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e}") from None


def _form(data) -> intmat.Form:
    if isinstance(data, dict):
        data = data.get("target", data.get("T"))
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InputError("expected a matrix as a list of rows")
    try:
        return intmat.as_form(data)
    except (TypeError, ValueError) as e:
        raise InputError(str(e)) from None


def _complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError("complex numbers are [re, im]")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, str):
        return complex(x.replace(" ", ""))
    raise InputError(f"not a number: {x!r}")


def _complex_matrix(data) -> np.ndarray:
    if not isinstance(data, list):
        return np.array([[_complex(data)]])
    return np.array([[_complex(x) for x in row] for row in data])


def _keyed(values: Optional[list[str]], default_key: Optional[str], cast) -> dict:
    out = {}
    for v in values or []:
        key, sep, val = v.partition("=")
        if not sep:
            if default_key is None:
                raise InputError(f"give {v!r} as NAME=VALUE for this command")
            key, val = default_key, v
        try:
            out[key] = cast(val)
        except ValueError:
            raise InputError(f"bad value {val!r}") from None
    return out


def _scalar(values: Optional[list[str]], cast, default):
    if not values:
        return default
    try:
        return cast(values[-1])
    except ValueError:
        raise InputError(f"bad value {values[-1]!r}") from None


def _inverse_transpose(U: intmat.Form) -> intmat.Form:
    inv = np.linalg.inv(np.array(U, dtype=float))
    V = np.rint(inv).astype(int)
    if not np.array_equal(V @ np.array(U), np.eye(len(U), dtype=int)):
        raise RuntimeError("transform is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in V.T)


# -- subcommands ---------------------------------------------------------------


def cmd_lambda(args) -> tuple[dict, int]:
    T = _form(_load_input(args))
    if not intmat.is_semipositive(T):
        raise InputError("form is not semipositive")
    oracle_bound = _scalar(args.bound, int, intmat.DEFAULT_ORACLE_BOUND)
    lam, method = intmat.lambda_with_method(T, oracle_bound)
    report = {"lambda": lam, "method": method, "reduced": None, "U": None}
    if len(T) in (2, 3) and intmat.is_positive_definite(T):
        R, U = intmat.minkowski_reduce(T)
        report.update(reduced=R, U=U)
    if method != "oracle" and max((abs(x) for r in T for x in r), default=0) <= oracle_bound:
        report["oracle_agrees"] = intmat.lambda_oracle(T, oracle_bound) == lam
    ok = report.get("oracle_agrees", True)
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_reduce(args) -> tuple[dict, int]:
    T = _form(_load_input(args))
    try:
        R, U = intmat.minkowski_reduce(T)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"reduced": R, "U": U, "strict": intmat.is_reduced(R)}, EXIT_OK


def _decompose_any(T: intmat.Form) -> tuple[decomp.Decomposition, Optional[intmat.Form]]:
    """Decompose ``T`` directly, or its reduced form and map the parts back."""
    if not intmat.is_semipositive(T):
        raise InputError("form is not semipositive")
    if len(T) not in (2, 3):
        raise InputError("explicit decompositions exist only for 2x2 and 3x3 forms")
    try:
        return decomp.decompose(T), None
    except intmat.NotReducedError:
        if not intmat.is_positive_definite(T):
            raise InputError("semidefinite input must already be in reduced position") from None
    R, U = intmat.minkowski_reduce(T)
    if len(T) == 2 and R[0][1] < 0:
        flip = ((1, 0), (0, -1))
        R, U = intmat.transform(R, flip), intmat.matmul(U, flip)
    D = decomp.decompose(R)
    # T = R[U^-1], so a part a a' of R becomes b b' with b = (U^-1)' a
    W = np.array(_inverse_transpose(U))
    parts = tuple(
        decomp.Part(p.mult, intmat.primitive_column(tuple(int(x) for x in W @ p.column)))
        for p in D.parts
    )
    return decomp.Decomposition(T, parts), R


def cmd_decompose(args) -> tuple[dict, int]:
    T = _form(_load_input(args))
    q = args.q
    D, R = _decompose_any(T)
    report = {"decomposition": D.to_dict(), "parts": D.length, "reduced": R}
    if len(T) == 3:
        report["case"] = decomp.classify_case(R or T).value
    report["verified"] = decomp.verify_decomposition(T, D)
    bound = _scalar(args.bound, int, 1)
    v = decomp.check_q_optimal_bounded(D, q, bound)
    report["optimality"] = v.to_dict()
    ok = report["verified"] and v.ok
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_check_optimal(args) -> tuple[dict, int]:
    data = _load_input(args)
    if isinstance(data, dict) and "parts" in data:
        try:
            D = decomp.Decomposition.from_dict(data)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad decomposition: {e}") from None
    else:
        D, _ = _decompose_any(_form(data))
    bound = _scalar(args.bound, int, 1)
    try:
        v = decomp.check_q_optimal_bounded(D, args.q, bound)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"decomposition": D.to_dict(), **v.to_dict()}, EXIT_OK if v.ok else EXIT_FAIL


def cmd_theta(args) -> tuple[dict, int]:
    Z = _complex_matrix(_load_input(args))
    tol = _scalar(args.tol, float, 1e-12)
    try:
        ch = theta.ThetaChar(tuple(args.a), args.q)
        value = theta.theta_constant(ch, theta.PeriodPoint(Z), tol)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {"a": list(ch.a), "q": ch.q, "tol": tol, "value": value}, EXIT_OK


def cmd_fj_check(args) -> tuple[dict, int]:
    tol = _scalar(args.tol, float, 1e-6)
    rng = np.random.default_rng(args.seed)
    a = tuple(args.a)
    if len(a) != 2:
        raise InputError("fj-check takes a characteristic (a1, a2)")
    try:
        ch = theta.ThetaChar(a, args.q)
        tau = complex(rng.uniform(-0.3, 0.3), rng.uniform(1.0, 2.0))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2))
        residual = theta.fj_consistency(ch, 1, tau, z)
        rank = theta.fj_rank(args.q, (ch.a[1],), 1j, samples=4 * args.q, seed=args.seed) if ch.a[1] % 2 else None
    except ValueError as e:
        raise InputError(str(e)) from None
    ok = residual < tol and rank in (None, args.q)
    return {"a": list(ch.a), "q": ch.q, "tau": tau, "z": z, "residual": residual, "rank": rank, "ok": ok}, (
        EXIT_OK if ok else EXIT_FAIL
    )


def cmd_wp_verify(args) -> tuple[dict, int]:
    return _run_suite("wp-identities", args)


def cmd_surjectivity(args) -> tuple[dict, int]:
    a, b, c = args.abc
    tol = _scalar(args.tol, float, elliptic.RANK_RTOL)
    if min(a, b, c) < 0 or a + b + c == 0:
        raise InputError("need nonnegative a, b, c, not all zero")
    try:
        report = elliptic.surjectivity_check(a, b, c, _complex(args.tau), args.seed, tol)
    except ValueError as e:
        raise InputError(str(e)) from None
    return report, EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_factor4(args) -> tuple[dict, int]:
    tol = _scalar(args.tol, float, elliptic.RANK_RTOL)
    report = elliptic.factor4_check(_complex(args.tau), args.seed, tol)
    return report, EXIT_OK if report["ok"] else EXIT_FAIL


def _run_suite(name: str, args) -> tuple[dict, int]:
    if name not in suites.SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {sorted(suites.SUITES)}")
    config = suites.RunConfig(
        seed=args.seed,
        tolerances=_keyed(args.tol, SUITE_TOL_KEY.get(name), float),
        bounds=_keyed(args.bound, SUITE_BOUND_KEY.get(name), int),
    )
    report = suites.run_suite(name, config)
    return report, EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_verify(args) -> tuple[dict, int]:
    return _run_suite(args.suite, args)


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", action="append", help="tolerance, or NAME=VALUE for suites")
    common.add_argument("--bound", action="append", help="search bound, or NAME=VALUE for suites")
    common.add_argument("--json", metavar="FILE", help="read JSON input from FILE or - for stdin")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="thetaring", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, takes_input=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if takes_input:
            sp.add_argument("input", nargs="?", help="inline JSON input")
        sp.set_defaults(func=fn)
        return sp

    add("lambda", cmd_lambda, "length of a semipositive form")
    add("reduce", cmd_reduce, "reduced representative and transform")
    for name, fn in (("decompose", cmd_decompose), ("check-optimal", cmd_check_optimal)):
        sp = add(name, fn, "rank-one decomposition with bounded optimality check")
        sp.add_argument("--q", type=int, default=4, choices=(2, 4))
    sp = add("theta", cmd_theta, "theta constant f_{a,q}(Z); Z entries as [re, im]")
    sp.add_argument("--a", type=int, nargs="+", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp = add("fj-check", cmd_fj_check, "Fourier-Jacobi consistency for one characteristic", False)
    sp.add_argument("--a", type=int, nargs=2, required=True)
    sp.add_argument("--q", type=int, required=True)
    add("wp-verify", cmd_wp_verify, "Weierstrass identity suite", False)
    sp = add("surjectivity", cmd_surjectivity, "product-basis rank against expected dimension", False)
    sp.add_argument("--abc", type=int, nargs=3, default=(1, 1, 1))
    sp.add_argument("--tau", default="1.3j")
    sp = add("factor4", cmd_factor4, "rank jumps for phi and F1", False)
    sp.add_argument("--tau", default="1.3j")
    sp = add("verify", cmd_verify, "run a named verification suite", False)
    sp.add_argument("suite")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        report, code = args.func(args)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (intmat.OracleBoundError, OverflowError) as e:
        print(f"resource bound: {e}", file=sys.stderr)
        return EXIT_BOUND
    if args.command != "verify" and args.command != "wp-verify":
        report = {
            "command": args.command,
            "version": __version__,
            "config": {"seed": args.seed, "tol": args.tol, "bound": args.bound},
            **report,
        }
    text = suites.to_json(report) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
