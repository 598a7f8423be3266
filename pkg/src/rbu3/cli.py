"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage or parse error,
3 resource limit.  Text output is human-oriented; the ``--json`` reports are
the stable contract (schema-versioned, sorted keys, byte-identical across
identical invocations).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .matrices import parse_matrix
from .operators import Operator, check_lemma3, rb_residual
from .poly import ParseError, parse_poly
from .groebner import (Limits, PolySystem, ResourceLimitExceeded, buchberger)
from .transform import (AutoParams, PsiStep, ThetaStep, Witness,
                        canonicalize_idempotent, canonicalize_nilpotent,
                        find_conjugation)
from . import catalog as cat

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _dump_json(data, path):
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _limits(args) -> Limits:
    return Limits(max_pairs=getattr(args, "max_pairs", None),
                  deadline=getattr(args, "deadline", None))


def cmd_verify_catalog(args) -> int:
    try:
        report = cat.verify_all(samples=args.samples, families=args.family or None,
                                seed=args.seed, jobs=args.jobs)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    print(report.to_text())
    if args.json:
        _dump_json(report.to_json(), args.json)
    return EXIT_OK if report.all_pass() else EXIT_CHECK_FAILED


def cmd_check(args) -> int:
    op = Operator.load(args.file)
    if args.weight is not None:
        op = Operator(op.n, op.columns, Fraction(args.weight))
    residual = rb_residual(op)
    ok = residual.is_zero()
    print(f"RB weight {op.weight}: {'YES' if ok else 'NO'}")
    data = {"schema": 1, "weight": str(op.weight), "is_rb": ok}
    if not ok:
        (u, v), pos, value = residual.first_nonzero()
        from .matrices import basis_name
        print(f"  first nonzero residual: pair ({basis_name(u)},{basis_name(v)}) "
              f"position {basis_name(pos)} value {value}")
        data["first_failure"] = {"pair": [basis_name(u), basis_name(v)],
                                 "position": basis_name(pos), "value": str(value)}
    else:
        lemma = check_lemma3(op)
        data["lemma_checks"] = {
            "unit_not_in_image": lemma.unit_not_in_image,
            "kernel_contains_image": lemma.kernel_contains_image,
            "unit_power_identity": lemma.unit_power_identity,
        }
    if args.json:
        _dump_json(data, args.json)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_system(args) -> int:
    if args.preset:
        spec = cat.case_preset(args.preset)
        from .operators import generate_system
        system, _ = generate_system(spec.ansatz())
    else:
        with open(args.ansatz) as fh:
            data = json.load(fh)
        from .operators import Ansatz, generate_system
        ansatz = Ansatz(int(data.get("n", 3)), Fraction(data.get("weight", "0")),
                        list(data.get("constraints", ())))
        system, _ = generate_system(ansatz)
    print(f"{len(system.table)} variables, {len(system.gens)} generators")
    if args.json:
        _dump_json(system.to_json(), args.json)
    return EXIT_OK


def cmd_gb(args) -> int:
    system = PolySystem.load(args.file)
    if args.order:
        from .poly import MonomialOrder
        order = MonomialOrder.from_json(
            {"elim": args.elim} if args.order == "elim" else args.order)
        system = PolySystem(system.table, system.gens, order)
    try:
        gb = buchberger(system, _limits(args))
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    print(f"reduced basis with {len(gb.basis)} elements "
          f"({gb.stats.pairs_considered} pairs)")
    for g in gb.basis:
        print(f"  {g.to_str(system.order)}")
    if args.json:
        _dump_json(gb.to_json(), args.json)
    return EXIT_OK


def cmd_member(args) -> int:
    system = PolySystem.load(args.file)
    try:
        poly = parse_poly(args.poly, system.table)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        gb = buchberger(system, _limits(args))
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    member = gb.contains(poly)
    print(f"member: {'YES' if member else 'NO'}")
    if args.json:
        _dump_json({"schema": 1, "poly": args.poly, "member": member}, args.json)
    return EXIT_OK if member else EXIT_CHECK_FAILED


def cmd_canonicalize(args) -> int:
    matrix = parse_matrix(args.matrix, 3)
    if matrix.is_strictly_upper():
        result = canonicalize_nilpotent(matrix)
    elif matrix.is_idempotent():
        result = canonicalize_idempotent(matrix)
    else:
        print("error: input is neither strictly upper-triangular nor idempotent",
              file=sys.stderr)
        return EXIT_USAGE
    print(f"form: {result.label}")
    print(f"witness: {json.dumps(result.witness.to_json(), sort_keys=True)}")
    if args.json:
        _dump_json({"schema": 1, "input": args.matrix, "form": result.label,
                    "witness": result.witness.to_json()}, args.json)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    op = Operator.load(args.file)
    steps = []
    if args.theta:
        steps.append(ThetaStep())
    if any(v is not None for v in (args.alpha, args.beta, args.gamma,
                                   args.delta, args.epsilon)):
        params = AutoParams(
            alpha=Fraction(args.alpha if args.alpha is not None else "1"),
            beta=Fraction(args.beta if args.beta is not None else "0"),
            gamma=Fraction(args.gamma if args.gamma is not None else "0"),
            delta=Fraction(args.delta if args.delta is not None else "1"),
            epsilon=Fraction(args.epsilon if args.epsilon is not None else "0"))
        steps.append(PsiStep(params))
    if not steps:
        print("error: give --theta and/or automorphism parameters", file=sys.stderr)
        return EXIT_USAGE
    witness = Witness(tuple(steps))
    result = witness.transform_operator(op)
    data = result.to_json()
    print(json.dumps(data, indent=2, sort_keys=True))
    if args.json:
        _dump_json(data, args.json)
    return EXIT_OK


def cmd_find_conj(args) -> int:
    source = Operator.load(args.source)
    target = Operator.load(args.target)
    try:
        result = find_conjugation(source, target, allow_theta=args.allow_theta,
                                  allow_scaling=args.allow_scaling,
                                  limits=_limits(args))
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if result.status == "found":
        print("witness found")
        print(json.dumps(result.witness.to_json(), indent=2, sort_keys=True))
        if args.json:
            _dump_json({"schema": 1, "status": "found",
                        "witness": result.witness.to_json()}, args.json)
        return EXIT_OK
    if result.status == "disjoint":
        print("none found (the searched family has no conjugation: unit ideal)")
    else:
        print("none found (no rational witness)")
    if args.json:
        _dump_json({"schema": 1, "status": result.status}, args.json)
    return EXIT_CHECK_FAILED


def cmd_rb_index(args) -> int:
    op = Operator.load(args.file)
    k = op.power_vanish_index(cap=args.cap)
    if k is None:
        print(f"no vanishing power up to cap {args.cap}")
        return EXIT_CHECK_FAILED
    print(f"least k with R^k = 0: {k}")
    if args.json:
        _dump_json({"schema": 1, "power_vanish_index": k}, args.json)
    return EXIT_OK


def cmd_case(args) -> int:
    try:
        spec = cat.case_preset(args.preset)
    except KeyError as exc:
        print(f"error: {exc.args[0]}; presets: {', '.join(cat.case_preset_names())}",
              file=sys.stderr)
        return EXIT_USAGE
    report = cat.run_case(spec, _limits(args))
    print(report.to_text())
    if args.json:
        _dump_json(report.to_json(), args.json)
    if report.resource_limited and not report.all_pass():
        return EXIT_RESOURCE
    return EXIT_OK if report.all_pass() else EXIT_CHECK_FAILED


def cmd_export_data(args) -> int:
    written = cat.export_data(args.directory)
    for path in written:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbu3",
        description="Exact verification of weight-zero Rota-Baxter operators "
                    "on 3x3 upper-triangular matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-catalog", help="certify the family catalog")
    p.add_argument("--family", action="append", metavar="ID",
                   help="restrict to the given family ids")
    p.add_argument("--samples", type=int, default=0,
                   help="randomized closure trials per entry")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker cap")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify_catalog)

    p = sub.add_parser("check", help="check an operator file for the identity")
    p.add_argument("file")
    p.add_argument("--weight", metavar="Q")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("system", help="generate a case polynomial system")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", metavar="NAME")
    group.add_argument("--ansatz", metavar="FILE")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("gb", help="reduced Groebner basis of a system file")
    p.add_argument("file")
    p.add_argument("--order", choices=("lex", "grevlex", "elim"))
    p.add_argument("--elim", type=int, default=1, metavar="K")
    p.add_argument("--max-pairs", type=int, dest="max_pairs")
    p.add_argument("--deadline", type=float)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("member", help="ideal membership of a polynomial")
    p.add_argument("file", help="system file")
    p.add_argument("poly")
    p.add_argument("--max-pairs", type=int, dest="max_pairs")
    p.add_argument("--deadline", type=float)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("canonicalize",
                       help="orbit form of a nilpotent or idempotent matrix")
    p.add_argument("matrix", help='matrix literal, e.g. "e12 + 2*e13"')
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("conjugate", help="conjugate an operator by psi/theta")
    p.add_argument("file")
    p.add_argument("--theta", action="store_true")
    for name in ("alpha", "beta", "gamma", "delta", "epsilon"):
        p.add_argument(f"--{name}", metavar="Q")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("find-conj", help="search for a conjugation witness")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--allow-theta", action="store_true", dest="allow_theta")
    p.add_argument("--no-scaling", action="store_false", dest="allow_scaling")
    p.add_argument("--max-pairs", type=int, dest="max_pairs")
    p.add_argument("--deadline", type=float)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_find_conj)

    p = sub.add_parser("rb-index", help="least vanishing power of an operator")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=8)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_rb_index)

    p = sub.add_parser("case", help="replay a classification case")
    p.add_argument("--preset", required=True, metavar="NAME")
    p.add_argument("--max-pairs", type=int, dest="max_pairs")
    p.add_argument("--deadline", type=float)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_case)

    p = sub.add_parser("export-data", help="write the shipped data files")
    p.add_argument("directory")
    p.set_defaults(func=cmd_export_data)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
