"""``wpb``: report-generating command line front end.

Exit codes: 0 pass, 1 identity failure, 2 usage error, 3 numeric capability error.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__, bateman, checks, expansion, families, pairing
from .distrib import OrderOverflow
from .pairing import CapabilityMissing, UndefinedPairing
from .scalar import ExactScalar, RadicalMismatch

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SIGMA_MIN_THRESHOLD = 0.1
VACUUM_TOL = 1e-8


class UsageError(ValueError):
    pass


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive_rational(text):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-digits", type=int, default=34,
                        help="working decimal digits for non-exact numerics (default 34)")
    common.add_argument("--format", choices=("json", "csv"), default="json",
                        help="output format; csv only for quasi-basis partial sums (default json)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--no-meta", action="store_true",
                        help="omit timestamp/version metadata (byte-reproducible output)")

    p = argparse.ArgumentParser(prog="wpb", description="Weak pseudo-boson calculus toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="run the exact identity suites")
    c.add_argument("scope", nargs="?", default="all", choices=checks.SCOPES)

    c = sub.add_parser("pair", parents=[common], help="pair two distributions or a distribution and a test function")
    c.add_argument("F", help="phi:n, psi:n, x:n, delta:n, span:psi:{k:c,...} or a test-function label")
    c.add_argument("G")

    c = sub.add_parser("expand", parents=[common], help="Taylor, dual Taylor or quasi-basis expansions")
    c.add_argument("kind", choices=("taylor", "dual", "quasi"))
    c.add_argument("--f", help="test function label, e.g. gaussian:alpha=1")
    c.add_argument("--g", help="second test function label (quasi)")
    c.add_argument("--moments", help="comma-separated finite moment list (dual)")
    c.add_argument("--moments-of", help="test function whose moments feed the dual series (rejected: infinite)")
    c.add_argument("--ordering", choices=expansion.ORDERINGS, default="phi_psi")
    c.add_argument("--accel", choices=expansion.ACCELERATIONS, default="none")
    c.add_argument("--n-max", type=_positive_int, default=None,
                   help="truncation order (default 512 for quasi, 10 for taylor)")
    c.add_argument("--tol", type=float, default=1e-10, help="convergence tolerance (default 1e-10)")

    c = sub.add_parser("bateman", parents=[common], help="truncated Fock checks of the Bateman system")
    c.add_argument("--m", type=_positive_rational, default=Fraction(1))
    c.add_argument("--gamma", type=_positive_rational, default=Fraction(1, 2))
    c.add_argument("--k", type=_positive_rational, default=Fraction(1))
    c.add_argument("--T", type=int, nargs="+", default=[8], help="truncation cutoff(s), each >= 4")
    c.add_argument("--scan", choices=("kernel", "hamiltonian", "vacuum"), required=True)
    c.add_argument("--tol", type=float, default=1e-12, help="residual tolerance (default 1e-12)")
    return p


def _meta(args) -> dict:
    return {"version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "precision_digits": args.precision_digits}


def _resolve_any(spec: str):
    try:
        return families.resolve_distribution(spec)
    except ValueError:
        pass
    try:
        return pairing.resolve_test_function(spec)
    except ValueError as exc:
        raise UsageError(f"unresolved spec {spec!r}: {exc}") from None


def _value_json(v):
    if isinstance(v, ExactScalar):
        return str(v)
    return expansion.complex_json(v)


def cmd_check(args) -> tuple[dict, int]:
    results = checks.run_checks(args.scope)
    failed = [r.tag for r in results if not r.passed]
    report = {"scope": args.scope, "lines": [r.line() for r in results],
              "passed": not failed, "failed": failed}
    return report, EXIT_FAIL if failed else EXIT_OK


def cmd_pair(args) -> tuple[dict, int]:
    F, G = _resolve_any(args.F), _resolve_any(args.G)
    f_is_fn = isinstance(F, pairing.TestFunction)
    g_is_fn = isinstance(G, pairing.TestFunction)
    if f_is_fn and g_is_fn:
        v = pairing.quad_inner(F, G, dps=args.precision_digits)
        pv = pairing.PairingValue(v, False)
    elif f_is_fn:
        pv = pairing.pair_fn_dist(F, G)
    elif g_is_fn:
        pv = pairing.pair_dist_fn(F, G)
    else:
        pv = pairing.pair(F, G)
    return {"F": args.F, "G": args.G, "value": _value_json(pv.value), "exact": pv.exact}, EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + n for n in missing)}")


def cmd_expand(args):
    if args.kind == "taylor":
        _need(args, "f")
        f = pairing.resolve_test_function(args.f)
        N = 10 if args.n_max is None else args.n_max
        rec = expansion.taylor_reconstruct(f, N, dps=args.precision_digits)
        report = {"kind": "taylor", "f": f.label, "N": N,
                  "coefficients": [_value_json(c) for c in rec.coefficients],
                  "sup_error": expansion.mpstr(rec.sup_error, 6) if rec.sup_error is not None else None,
                  "interval": [str(x) for x in rec.interval]}
        return report, EXIT_OK
    if args.kind == "dual":
        if args.moments_of:
            f = pairing.resolve_test_function(args.moments_of)
            mu = expansion.MomentSequence.from_test_function(f, args.n_max or 8)
        else:
            _need(args, "moments")
            vals = [families.parse_exact(v) for v in args.moments.split(",")]
            mu = expansion.MomentSequence.finite(vals)
        F = expansion.dual_taylor(mu)
        return {"kind": "dual", "distribution": F.to_json_obj(), "text": str(F)}, EXIT_OK
    _need(args, "f", "g")
    f = pairing.resolve_test_function(args.f)
    g = pairing.resolve_test_function(args.g)
    N = expansion.DEFAULT_N_MAX if args.n_max is None else args.n_max
    rep = expansion.quasi_basis_scan(f, g, args.ordering, N, args.accel, args.tol,
                                     dps=args.precision_digits)
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    return {"kind": "quasi", **rep.to_json_obj()}, EXIT_OK


def cmd_bateman(args) -> tuple[dict, int]:
    params = bateman.BatemanParams(float(args.m), float(args.gamma), float(args.k))
    report = {"params": {"m": str(args.m), "gamma": str(args.gamma), "k": str(args.k),
                         "omega": repr(params.omega)},
              "T": args.T, "scan": args.scan}
    if any(T < 4 for T in args.T):
        raise UsageError("every --T must be at least 4")
    ok = True
    if args.scan == "hamiltonian":
        residuals = {}
        for T in args.T:
            r = {"hamiltonian_forms": bateman.hamiltonian_residual(params, T)}
            r.update(bateman.ccr_residuals(T))
            r.update(bateman.pb_residuals(params, T))
            residuals[str(T)] = r
            ok &= all(v < args.tol for v in r.values())
        report["residuals"] = residuals
        report["tol"] = args.tol
    elif args.scan == "kernel":
        table = bateman.joint_kernel_scan(params, args.T)
        report["sigma_min_table"] = table
        report["threshold"] = SIGMA_MIN_THRESHOLD
        ok = all(row["sigma_min_A"] > SIGMA_MIN_THRESHOLD and row["sigma_min_Bdag"] > SIGMA_MIN_THRESHOLD
                 for row in table)
    else:
        residuals = {}
        for which in ("phi00", "psi00"):
            rows = bateman.vacuum_battery(params, which)
            residuals[which] = rows
            ok &= all(max(r["residual_1"], r["residual_2"]) < VACUUM_TOL for r in rows)
        perturbed = bateman.vacuum_battery(params, "phi00", offset=Fraction(1, 10))
        residuals["phi00_offset_0.1"] = perturbed
        rejected = any(max(r["residual_1"], r["residual_2"]) > VACUUM_TOL for r in perturbed)
        ok &= rejected
        report["residuals"] = residuals
        report["tol"] = VACUUM_TOL
    report["verdicts"] = {"pass": bool(ok)}
    return report, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {"check": cmd_check, "pair": cmd_pair, "expand": cmd_expand, "bateman": cmd_bateman}


def _emit(args, payload) -> None:
    if isinstance(payload, str):
        text = payload
    else:
        if not args.no_meta:
            payload = {**payload, "meta": _meta(args)}
        text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    if args.precision_digits < 15:
        parser.error("--precision-digits must be at least 15")
    if args.format == "csv" and not (args.command == "expand" and args.kind == "quasi"):
        parser.error("--format csv is only available for 'expand quasi'")
    try:
        with mpmath.workdps(args.precision_digits):
            payload, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"wpb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapabilityMissing, UndefinedPairing, RadicalMismatch, OrderOverflow,
            expansion.InfiniteMoments, bateman.ParameterError, ValueError) as exc:
        print(f"wpb: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(args, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
