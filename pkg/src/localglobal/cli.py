"""Command-line entry point.

Exit codes: 0 success, 2 inconsistency detected, 3 inconclusive, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .cohomology import GModule, h1, h1_loc, is_cyclic, sylow_subgroup
from .core_arith import DomainError
from .divisibility import BadPrime, Inconclusive, global_divide, local_divide_test
from .elliptic import BadReduction, format_point, parse_curve
from .frobenius_sets import (
    PersistentSetSpec,
    enumerate_with_coordinates,
    estimate_density,
    frobenius_coordinate,
    in_persistent_set,
    parse_filter,
)
from .padic_sets import parse_rule
from .pipeline import EmptySample, format_sweep, run_check, soundness_sweep

EXIT_OK, EXIT_INCONSISTENT, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 2, 3, 4


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_build_set(args) -> int:
    spec = PersistentSetSpec(args.p, parse_rule(args.rule), args.depth)
    rows = enumerate_with_coordinates(spec, args.limit, args.workers)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["q", "verdict", "coordinate"])
        for q, verdict, x in rows:
            w.writerow([q, verdict.value, "" if x is None else x])
    finally:
        if args.out:
            out.close()
    if args.out:
        counts = {v: sum(1 for _, verdict, _ in rows if verdict.value == v) for v in ("In", "Out", "Unknown")}
        print(f"{spec.record}: {len(rows)} primes <= {args.limit}, " + ", ".join(f"{k} {c}" for k, c in counts.items()))
    return EXIT_OK


def cmd_density(args) -> int:
    spec = PersistentSetSpec(args.p, parse_rule(args.rule), args.depth)
    flt = parse_filter(args.filter) if args.filter else None
    est = estimate_density(spec, args.limit, flt, args.workers)
    print(json.dumps(est.as_dict()))
    return EXIT_OK


def cmd_frobenius(args) -> int:
    spec = PersistentSetSpec(args.p, parse_rule(args.rule), args.depth)
    x = None if args.q == spec.p else frobenius_coordinate(args.q, spec)
    payload = {
        "q": args.q,
        "coordinate": x,
        "modulus": spec.p**spec.depth,
        "verdict": in_persistent_set(args.q, spec).value,
    }
    print(json.dumps(payload))
    return EXIT_OK


def _curve_point(args):
    E = parse_curve(args.curve)
    return E, E.parse_point(args.point)


def cmd_local_test(args) -> int:
    E, P = _curve_point(args)
    v = local_divide_test(E, P, args.p, args.n, args.ell, method=args.method)
    print(json.dumps({
        "divisible": v.divisible,
        "method": v.method,
        "witness": None if v.witness is None else list(v.witness),
    }))
    return EXIT_OK


def cmd_global_test(args) -> int:
    E, P = _curve_point(args)
    try:
        g = global_divide(E, P, args.p, args.n)
    except Inconclusive as exc:
        print(json.dumps({"divisible": None, "method": "inconclusive", "detail": str(exc)}))
        return EXIT_INCONCLUSIVE
    payload = {"divisible": g.divisible, "method": g.method}
    if g.divisible:
        payload["witness"] = format_point(g.preimage)
    print(json.dumps(payload))
    return EXIT_OK


def cmd_check(args) -> int:
    E, P = _curve_point(args)
    spec = PersistentSetSpec(args.aux_p, parse_rule(args.rule), args.depth)
    report = run_check(E, P, args.p, args.n, spec, args.limit, args.sample, args.workers)
    _emit(args, report.to_dict(), report.to_text())
    if not report.consistent:
        return EXIT_INCONSISTENT
    if report.global_status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def parse_generators(text: str):
    try:
        return [json.loads(chunk) for chunk in text.split(";") if chunk.strip()]
    except json.JSONDecodeError as exc:
        raise DomainError(f"bad generator list {text!r}: {exc}") from None


def cmd_cohomology(args) -> int:
    M = GModule.from_matrix_group(parse_generators(args.generators), args.p, args.n)
    P = sylow_subgroup(M.group, args.p)
    payload = {
        "order": M.group.order,
        "h1": h1(M).divisors,
        "h1loc": h1_loc(M, p_only=args.p_only).divisors,
        "p_sylow_cyclic": is_cyclic(M.group, P),
    }
    print(json.dumps(payload))
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = soundness_sweep(args.count, args.seed, limit=args.limit, sample=args.sample)
    if args.json:
        print(json.dumps([r.__dict__ | {"passed": r.passed} for r in rows], indent=2))
    else:
        print(format_sweep(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--limit", type=int, default=None, help="prime bound X")
    common.add_argument("--workers", type=int, default=1)

    def set_args(sp, limit):
        sp.add_argument("--rule", default="const:1", help="const:<digit> or seed:<int>")
        sp.add_argument("--depth", type=int, default=8)
        sp.set_defaults(limit=limit)

    def curve_args(sp):
        sp.add_argument("--curve", required=True, help='e.g. "a=0 b=1"')
        sp.add_argument("--point", required=True, help='"inf" or "x=2 y=3"')
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--n", type=int, default=1)

    parser = argparse.ArgumentParser(prog="localglobal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("build-set", parents=[common], help="enumerate the persistent prime set")
    sp.add_argument("--p", type=int, default=5)
    set_args(sp, 2_000_000)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_build_set)

    sp = sub.add_parser("density", parents=[common], help="empirical density of the set")
    sp.add_argument("--p", type=int, default=5)
    set_args(sp, 2_000_000)
    sp.add_argument("--filter", help="Chebotarev filter such as 1mod7")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("frobenius", parents=[common], help="Frobenius coordinate of one prime")
    sp.add_argument("--p", type=int, default=5)
    set_args(sp, 0)
    sp.add_argument("--q", type=int, required=True)
    sp.set_defaults(func=cmd_frobenius)

    sp = sub.add_parser("local-test", parents=[common], help="p^n-divisibility in E(F_ell)")
    curve_args(sp)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--method", choices=["structural", "brute_force"], default="structural")
    sp.set_defaults(func=cmd_local_test)

    sp = sub.add_parser("global-test", parents=[common], help="exact p^n-divisibility in E(Q)")
    curve_args(sp)
    sp.set_defaults(func=cmd_global_test)

    sp = sub.add_parser("check", parents=[common], help="local tests along S against the global oracle")
    curve_args(sp)
    sp.add_argument("--aux-p", type=int, default=5, help="auxiliary prime defining S")
    set_args(sp, 10_000)
    sp.add_argument("--sample", type=int, default=50)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("cohomology", parents=[common], help="H^1 and H^1_loc of a matrix group")
    sp.add_argument("action", choices=["h1loc"])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--generators", required=True, help='"[[1,1],[0,1]];[[2,0],[0,1]]"')
    sp.add_argument("--p-only", action="store_true", help="test only cyclic p-subgroups")
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("sweep", parents=[common], help="soundness sweep on constructed divisible points")
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(limit=10_000)
    sp.add_argument("--sample", type=int, default=50)
    sp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, BadPrime, BadReduction, EmptySample, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
