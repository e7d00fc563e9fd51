"""Command-line interface.

    permgf ar R                     AR(R,z): no 132, exactly R 123-patterns
    permgf aaron R                  Aaron(R,z): one 132, exactly R 123-patterns
    permgf series --s S --r R --n N coefficients of z^0..z^N
    permgf verify --rmax --smax --nmax
    permgf selftest

Exit status: 0 success, 1 failed verification, 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .exact import canonical_str, factored_str, ratfun_to_json, rationals_to_json, series_expand
from .known import name as gf_name
from .oracle import (
    DEFAULT_MAX_N,
    HARD_MAX_N,
    CheckResult,
    Report,
    check_decomposition,
    check_functional_equation,
    joint_distribution,
)
from .selftest import run_selftest
from .solver import DEFAULT_MAX_ORDER, SolverError, extract_gf, solve_system

MAX_R = DEFAULT_MAX_ORDER
MAX_N = HARD_MAX_N


def run_verification(rmax: int, smax: int, nmax: int, workers: int = 1,
                     max_order: int = MAX_R, max_n: int = MAX_N) -> Report:
    """Solver coefficients against brute-force counts, plus the oracle's
    functional-equation and decomposition checks."""
    report = Report(f"verify rmax={rmax} smax={smax} nmax={nmax}")
    table = solve_system(rmax, include_q=smax >= 1, max_order=max_order)
    joints = [joint_distribution(n, workers=workers, max_n=max_n) for n in range(nmax + 1)]
    for s in range(smax + 1):
        for r in range(rmax + 1):
            coeffs = series_expand(extract_gf(r, s, table), nmax)
            bad = [n for n in range(nmax + 1) if coeffs[n] != joints[n][r, s]]
            detail = "" if not bad else "mismatch at n=" + ",".join(map(str, bad))
            report.results.append(CheckResult(f"{gf_name(r, s)} vs enumeration", nmax, not bad, detail))
    report.results.extend(check_functional_equation(nmax, max_n=max_n).results)
    for n in range(1, nmax + 1):
        dec = check_decomposition(n, max_n=max_n)
        failed = [r.name for r in dec.results if not r.passed]
        report.results.append(CheckResult(
            f"decomposition of {len(dec.results)} avoiders", n, not failed, "; ".join(failed[:3])))
    return report


def _gf_payload(r: int, s: int, max_order: int) -> dict:
    f = extract_gf(r, s, max_order=max_order)
    return {
        "name": gf_name(r, s),
        "r": r,
        "s": s,
        "factored": factored_str(f),
        "canonical": canonical_str(f),
        "ratfun": ratfun_to_json(f),
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--unsafe-limits", action="store_true",
                        help=f"allow r > {MAX_R} or n > {MAX_N}")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="permgf",
        description="Generating functions for permutations with 0 or 1 132-patterns "
                    "and exactly r 123-patterns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for cmd, what in (("ar", "zero 132-patterns"), ("aaron", "exactly one 132-pattern")):
        p = sub.add_parser(cmd, parents=[common], help=f"closed form for {what}")
        p.add_argument("r", type=int)

    p = sub.add_parser("series", parents=[common], help="series coefficients")
    p.add_argument("--s", type=int, required=True, choices=(0, 1))
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="compare against brute force")
    p.add_argument("--rmax", type=int, default=5)
    p.add_argument("--smax", type=int, default=1, choices=(0, 1))
    p.add_argument("--nmax", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--workers", type=int, default=1)

    sub.add_parser("selftest", parents=[common], help="run invariant checks")
    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    def bounded(label: str, value: int, limit: int) -> None:
        if value < 0:
            parser.error(f"{label} must be nonnegative")
        if value > limit and not args.unsafe_limits:
            parser.error(f"{label} = {value} exceeds {limit}; pass --unsafe-limits to override")

    if args.command in ("ar", "aaron", "series"):
        bounded("r", args.r, MAX_R)
    if args.command == "series":
        bounded("n", args.n, 10_000)
    if args.command == "verify":
        bounded("rmax", args.rmax, MAX_R)
        bounded("nmax", args.nmax, MAX_N)
        if args.workers < 1:
            parser.error("workers must be at least 1")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    max_order = max(MAX_R, getattr(args, "r", 0), getattr(args, "rmax", 0))

    try:
        if args.command in ("ar", "aaron"):
            s = 0 if args.command == "ar" else 1
            payload = _gf_payload(args.r, s, max_order)
            text = (f"{payload['name']}\n"
                    f"  factored:    {payload['factored']}\n"
                    f"  canonical:   {payload['canonical']}")
            _emit(args, payload, text)
            return 0

        if args.command == "series":
            f = extract_gf(args.r, args.s, max_order=max_order)
            coeffs = rationals_to_json(series_expand(f, args.n))
            payload = {"s": args.s, "r": args.r, "n": args.n, "coefficients": coeffs}
            _emit(args, payload, ", ".join(coeffs))
            return 0

        if args.command == "verify":
            max_n = max(MAX_N, args.nmax)
            report = run_verification(args.rmax, args.smax, args.nmax, args.workers,
                                      max_order=max_order, max_n=max_n)
            total = len(report.results)
            failed = sum(not r.passed for r in report.results)
            summary = f"{total - failed}/{total} checks passed"
            _emit(args, report.to_json(), "\n".join(report.lines() + [summary]))
            return 0 if report.passed else 1

        if args.command == "selftest":
            results = run_selftest()
            ok = all(passed for _, passed in results)
            payload = {"passed": ok, "results": [{"name": n, "passed": p} for n, p in results]}
            text = "\n".join(f"[{'PASS' if p else 'FAIL'}] {n}" for n, p in results)
            _emit(args, payload, text)
            return 0 if ok else 1
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
