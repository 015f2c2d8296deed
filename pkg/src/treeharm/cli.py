"""Command-line front end.

Usage::

    treeharm spectrum --preset homogeneous3 --p 2
    treeharm spherical --d0 3 --d1 3 --kappa 1 --z 0.3 --r-max 10
    treeharm nesting --preset semihomog45 --ps 2,3,4,6,inf
    treeharm verify --suite all

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 classification unavailable (the critical-segment lower bound is emitted).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from collections.abc import Sequence

import numpy as np

from .errors import ClassificationUnavailableError, InvalidParameterError
from .radial import apply_generator
from .spectra import critical_lower_bound, full_spectrum, lp_spectrum, nesting_report
from .spherical import c_coeff, gamma, spherical_profile
from .tree import TreeParams, default_budget, make_tree_params
from .verify import DEFAULT_TOLERANCES, PRESETS, SUITES, VerifyConfig, run_suites

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_UNCLASSIFIED = 3

PRESET_NAMES = (*PRESETS, "bruhat-tits-q")

_COMPLEX_RE = re.compile(r"^[0-9eE.+\-]*[ij]?$")


# -- parsing ---------------------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` with optional parts: ``0.5``, ``2i``, ``-i``, ``0.3-0.2i``."""
    s = text.strip().replace(" ", "")
    if not s or not _COMPLEX_RE.match(s):
        raise InvalidParameterError(f"cannot parse complex number {text!r}")
    try:
        z = complex(s.replace("i", "j"))
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse complex number {text!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidParameterError(f"complex number must be finite, got {text!r}")
    return z


def parse_p(text: str) -> float:
    s = text.strip().lower()
    if s in ("inf", "infinity", "+inf"):
        return math.inf
    try:
        p = float(s)
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse exponent {text!r}") from exc
    if math.isnan(p):
        raise InvalidParameterError("exponent must not be nan")
    return p


def parse_ps(text: str) -> list[float]:
    parts = [t for t in text.split(",")]
    if not parts or any(not t.strip() for t in parts):
        raise InvalidParameterError(f"malformed exponent list {text!r}")
    return [parse_p(t) for t in parts]


def parse_tolerances(items: Sequence[str] | None) -> dict[str, float]:
    tol = dict(DEFAULT_TOLERANCES)
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key not in DEFAULT_TOLERANCES:
            raise InvalidParameterError(
                f"bad tolerance override {item!r}; keys: {', '.join(DEFAULT_TOLERANCES)}"
            )
        try:
            v = float(value)
        except ValueError as exc:
            raise InvalidParameterError(f"bad tolerance value in {item!r}") from exc
        if not v >= 0:
            raise InvalidParameterError(f"tolerance must be >= 0 in {item!r}")
        tol[key] = v
    return tol


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % f for f in range(2, math.isqrt(q) + 1))


def resolve_params(args: argparse.Namespace, allow_none: bool = False) -> list[TreeParams]:
    """Tree parameters from ``--preset`` or ``--d0/--d1/--kappa``."""
    explicit = [args.d0, args.d1]
    if args.preset is not None:
        if any(v is not None for v in explicit):
            raise InvalidParameterError("give either --preset or --d0/--d1, not both")
        if args.preset == "bruhat-tits-q":
            if args.q is None or not _is_prime(args.q):
                raise InvalidParameterError("preset bruhat-tits-q needs a prime --q")
            if args.kappa is None:
                raise InvalidParameterError("preset bruhat-tits-q needs --kappa (1 or 2)")
            return [make_tree_params(args.q + 1, args.q + 1, args.kappa)]
        if args.kappa is not None:
            raise InvalidParameterError(f"preset {args.preset} fixes kappa")
        return [PRESETS[args.preset]]
    if args.q is not None:
        raise InvalidParameterError("--q only applies to --preset bruhat-tits-q")
    if all(v is None for v in (*explicit, args.kappa)):
        if allow_none:
            return list(PRESETS.values())
        raise InvalidParameterError("give --preset or all of --d0, --d1, --kappa")
    if any(v is None for v in (*explicit, args.kappa)):
        raise InvalidParameterError("--d0, --d1 and --kappa must be given together")
    return [make_tree_params(args.d0, args.d1, args.kappa)]


# -- emission ------------------------------------------------------------------

def canonical_number(x):
    """15 significant digits; non-finite floats become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": canonical_number(float(x.real)), "im": canonical_number(float(x.imag))}
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.15g}") + 0.0  # + 0.0 folds -0.0


def canonical(obj):
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return canonical_number(obj)


def dumps_json(obj) -> str:
    """Canonical JSON: fixed field order, 15 significant digits, trailing newline."""
    return json.dumps(canonical(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def dumps_csv(rows: list[dict]) -> str:
    """One record per row; ``kind`` first, then columns in first-seen order."""
    cols: list[str] = ["kind"]
    for row in rows:
        for k in row:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in canonical(row).items()})
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return v


def _params_dict(params: TreeParams) -> dict:
    return {"d0": params.d0, "d1": params.d1, "kappa": params.kappa, "delta": params.delta}


def _intervals(union) -> list[list[float]]:
    return [[lo, hi] for lo, hi in union]


# -- commands ------------------------------------------------------------------

def cmd_spectrum(args) -> tuple[dict, list[dict], int]:
    (params,) = resolve_params(args)
    p = None if args.p is None else parse_p(args.p)
    status = EXIT_OK
    try:
        if p is None:
            union, kind = full_spectrum(params, not args.no_tits), "full"
        else:
            union, kind = lp_spectrum(params, p, not args.no_tits), "lp"
    except ClassificationUnavailableError:
        if p is not None and not p >= 2:
            raise InvalidParameterError(f"p must lie in [2, inf], got {p}") from None
        union, kind, status = critical_lower_bound(params), "lower-bound", EXIT_UNCLASSIFIED
    record = {
        "command": "spectrum",
        "params": _params_dict(params),
        "tits_independence": not args.no_tits,
        "p": p,
        "kind": kind,
        "intervals": _intervals(union),
    }
    rows = [{"kind": "interval", **_params_dict(params), "p": p, "spectrum": kind, "lo": lo, "hi": hi}
            for lo, hi in union]
    return record, rows, status


def cmd_spherical(args) -> tuple[dict, list[dict], int]:
    (params,) = resolve_params(args)
    z = parse_complex(args.z)
    k = params.kappa
    if args.r_max < 0:
        raise InvalidParameterError(f"--r-max must be >= 0, got {args.r_max}")
    r_max = args.r_max - args.r_max % k
    vals, evaluator = spherical_profile(params, z, r_max + k)
    g = gamma(params, z)
    resid = np.abs(apply_generator(params, vals) - g * vals[:-1])
    c = c_coeff(params, z) if evaluator == "closed-form" else None
    rows = [
        {"r": int(r), "value": complex(vals[i]), "evaluator": evaluator,
         "eigen_residual": float(resid[i])}
        for i, r in enumerate(range(0, r_max + 1, k))
    ]
    record = {
        "command": "spherical",
        "params": _params_dict(params),
        "z": z,
        "gamma": g,
        "c": c,
        "rows": rows,
    }
    csv_rows = [
        {"kind": "row", "r": row["r"], "value_re": row["value"].real, "value_im": row["value"].imag,
         "evaluator": evaluator, "eigen_residual": row["eigen_residual"]}
        for row in rows
    ]
    return record, csv_rows, EXIT_OK


def cmd_nesting(args) -> tuple[dict, list[dict], int]:
    (params,) = resolve_params(args)
    ps = parse_ps(args.ps)
    tol = parse_tolerances(args.tol)["nesting"]
    try:
        rep = nesting_report(params, ps, not args.no_tits, tol=tol)
    except ClassificationUnavailableError:
        lower = critical_lower_bound(params)
        record = {"command": "nesting", "params": _params_dict(params), "ps": ps,
                  "tits_independence": False, "lower_bound": _intervals(lower)}
        rows = [{"kind": "lower-bound", "lo": lo, "hi": hi} for lo, hi in lower]
        return record, rows, EXIT_UNCLASSIFIED
    steps = [
        {"q": s.q, "p": s.p, "inner": _intervals(s.inner), "outer": _intervals(s.outer),
         "strict": s.strict, "witness_z": s.witness_z, "witness_gamma": s.witness_gamma,
         "margin_hi": s.margin_hi, "margin_lo": s.margin_lo}
        for s in rep.steps
    ]
    record = {"command": "nesting", "params": _params_dict(params), "ps": list(rep.ps),
              "tits_independence": True, "all_strict": rep.all_strict, "steps": steps}
    rows = [{"kind": "step", "q": s["q"], "p": s["p"], "strict": s["strict"],
             "witness_gamma": s["witness_gamma"], "margin_hi": s["margin_hi"],
             "margin_lo": s["margin_lo"]} for s in steps]
    return record, rows, EXIT_OK if rep.all_strict else EXIT_FAILED


def cmd_verify(args) -> tuple[dict, list[dict], int]:
    presets = resolve_params(args, allow_none=True)
    suites = SUITES if args.suite == "all" else (args.suite,)
    budget = default_budget() if args.budget is None else args.budget  # bad env value exits 2
    cfg = VerifyConfig(tits_independence=not args.no_tits, budget=budget,
                       tolerances=parse_tolerances(args.tol), corrupt_kernel=args.corrupt_kernel)
    unclassified = False
    if args.no_tits and "spectrum" in suites:
        suites = tuple(s for s in suites if s != "spectrum")
        unclassified = True
    checks = run_suites(suites, presets, cfg)
    failed = [c for c in checks if not c.passed]
    record = {
        "command": "verify",
        "suites": list(suites),
        "presets": [_params_dict(p) for p in presets],
        "tits_independence": not args.no_tits,
        "passed": not failed,
        "n_checks": len(checks),
        "n_failed": len(failed),
        "n_inconclusive": sum(c.status == "inconclusive" for c in checks),
        "checks": [c.to_dict() for c in checks],
    }
    if unclassified:
        record["lower_bounds"] = [_intervals(critical_lower_bound(p)) for p in presets]
    for c in failed:
        print(f"FAILED {c.suite}/{c.preset}: {c.check} measured={c.measured} tol={c.tolerance} {c.detail}",
              file=sys.stderr)
    rows = [{"kind": "check", **c.to_dict()} for c in checks]
    if failed:
        return record, rows, EXIT_FAILED
    return record, rows, EXIT_UNCLASSIFIED if unclassified else EXIT_OK


# -- argument parser -----------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    tree = common.add_argument_group("tree")
    tree.add_argument("--preset", choices=PRESET_NAMES)
    tree.add_argument("--q", type=int, help="prime for --preset bruhat-tits-q (degree q+1)")
    tree.add_argument("--d0", type=int)
    tree.add_argument("--d1", type=int)
    tree.add_argument("--kappa", type=int)
    common.add_argument("--no-tits", action="store_true",
                        help="do not assume Tits' independence property")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--budget", type=_positive_int,
                        help="vertex budget for ball enumeration (default: $TREEHARM_BUDGET or 10^7)")
    common.add_argument("--tol", action="append", metavar="KEY=VALUE",
                        help=f"tolerance override; keys: {', '.join(DEFAULT_TOLERANCES)}")

    parser = argparse.ArgumentParser(
        prog="treeharm",
        description="Spherical functions and radial C*-spectra on semi-homogeneous trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="spectrum of the generator")
    sp.add_argument("--p", help="exponent in [2, inf]; omit for the full spectrum")
    sp.set_defaults(func=cmd_spectrum)

    sf = sub.add_parser("spherical", parents=[common], help="tabulate a spherical function")
    sf.add_argument("--z", required=True, help="complex parameter, e.g. 0.5+1.2i")
    sf.add_argument("--r-max", type=int, default=10)
    sf.set_defaults(func=cmd_spherical)

    ne = sub.add_parser("nesting", parents=[common], help="strict nesting of L^p spectra")
    ne.add_argument("--ps", default="2,3,4,10,inf", help="ascending exponents, e.g. 2,3,inf")
    ne.set_defaults(func=cmd_nesting)

    ve = sub.add_parser("verify", parents=[common], help="run verification suites")
    ve.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    ve.add_argument("--corrupt-kernel", action="store_true", help=argparse.SUPPRESS)
    ve.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record, rows, status = args.func(args)
    except InvalidParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(dumps_json(record) if args.format == "json" else dumps_csv(rows))
    return status


if __name__ == "__main__":
    sys.exit(main())
