"""Command-line interface.

Exit status: 0 on success, 1 when a verification fails, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .class_group import class_group_report
from .enumeration import (
    DivisorCatalog,
    count_maximal_contact,
    enumerate_divisor_types,
    oracle_enumerate,
    stable_vertex_bound,
)
from .stable_curves import all_wdvv_relations, appendix_basis, relation_csv, verify_wdvv_span
from .tropical import Airborne, Binary, TangencyProfile, recognise_shape

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _set(s) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def describe(entry) -> str:
    shape = recognise_shape(entry.type)
    if isinstance(shape, Airborne):
        return f"d={shape.degree}"
    if isinstance(shape, Binary):
        return f"{_set(shape.a1)}:d={shape.d1} -0- {_set(shape.a2)}:d={shape.d2}"
    if shape is None:
        return entry.type.to_json()
    ext = " ".join(f"[{_set(a)}:d={d},m={m}]" for d, m, a in shape.externals)
    return f"C0 {_set(shape.a0)}:d={shape.d0} <- {ext}"


def _profile(args) -> TangencyProfile:
    try:
        if args.alpha is not None and args.maximal is not None:
            raise UsageError("give either --alpha or --maximal, not both")
        if args.alpha is not None:
            return TangencyProfile.parse(args.alpha)
        if args.maximal is not None:
            d, n = args.maximal
            return TangencyProfile.maximal(d, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError("a tangency profile is required (--alpha or --maximal D N)")


def _emit(text: str, args) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _oracle_diff(catalog: DivisorCatalog) -> tuple[DivisorCatalog, set[str], set[str]]:
    oracle = oracle_enumerate(catalog.alpha, stable_vertex_bound(catalog.alpha))
    ours, theirs = set(catalog.keys), set(oracle.keys)
    return oracle, ours - theirs, theirs - ours


def cmd_enumerate(args) -> int:
    alpha = _profile(args)
    catalog = enumerate_divisor_types(alpha)
    status = EXIT_OK
    oracle_note = None
    if args.oracle:
        oracle, missing, extra = _oracle_diff(catalog)
        oracle_note = {"oracle_N": oracle.N, "only_taxonomy": sorted(missing), "only_oracle": sorted(extra)}
        if missing or extra:
            status = EXIT_FAIL
    if args.format == "json":
        data = catalog.to_dict()
        if oracle_note is not None:
            data["oracle"] = oracle_note
        _emit(_dumps(data), args)
    elif args.format == "csv":
        _emit(catalog.to_csv(), args)
    else:
        shapes = catalog.shape_counts()
        roles = catalog.role_counts()
        lines = [
            f"alpha = {alpha}   N = {catalog.N}",
            "shapes: " + ", ".join(f"{k} {shapes[k]}" for k in sorted(shapes)),
            "roles:  " + ", ".join(f"{k} {roles[k]}" for k in sorted(roles)),
            "",
        ]
        for e in catalog:
            lines.append(f"{e.key[:12]}  {e.shape:<8} {str(e.role):<12} {describe(e)}")
        if oracle_note is not None:
            verdict = "MATCH" if status == EXIT_OK else "MISMATCH"
            lines.append(f"\noracle: N = {oracle_note['oracle_N']} {verdict}")
        _emit("\n".join(lines), args)
    return status


def cmd_count(args) -> int:
    if args.maximal is None:
        raise UsageError("count needs --maximal D N")
    alpha = _profile(args)
    d, n = alpha.d, alpha.n
    formula = count_maximal_contact(d, n)
    catalog = enumerate_divisor_types(alpha)
    result = {"d": d, "n": n, "formula": formula, "enumeration": catalog.N, "match": formula == catalog.N}
    if args.oracle:
        oracle, missing, extra = _oracle_diff(catalog)
        result["oracle"] = oracle.N
        result["match"] = result["match"] and not missing and not extra and oracle.N == formula
    if args.format == "json":
        _emit(_dumps(result), args)
    elif args.format == "csv":
        cols = list(result)
        _emit(",".join(cols) + "\n" + ",".join(str(result[c]) for c in cols), args)
    else:
        verdict = "MATCH" if result["match"] else "MISMATCH"
        extra_txt = f" = {result['oracle']} (oracle)" if "oracle" in result else ""
        _emit(f"N({d},{n}): {formula} = {catalog.N}{extra_txt} {verdict}", args)
    return EXIT_OK if result["match"] else EXIT_FAIL


def cmd_classgroup(args) -> int:
    alpha = _profile(args)
    report = class_group_report(alpha, all_relations=args.all_wdvv)
    if args.format == "json":
        _emit(_dumps(report.to_dict()), args)
    elif args.format == "csv":
        rows = ["check,passed"] + [f"{k},{v}" for k, v in report.checks.items()]
        _emit("\n".join(rows), args)
    else:
        lines = [
            f"alpha = {alpha}   N = {report.N}",
            f"relation rank = {report.relation_rank}   dimension = {report.dimension}",
            f"convention: {report.convention.value}",
            f"basis ({len(report.basis)}): " + " ".join(k[:12] for k in report.basis),
            "checks:",
        ]
        lines += [f"  {'PASS' if v else 'FAIL'}  {k}" for k, v in report.checks.items()]
        _emit("\n".join(lines), args)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_wdvv(args) -> int:
    n = args.n
    if n is None:
        raise UsageError("wdvv needs --n N")
    if n < 3 or n > args.max_n:
        raise UsageError(f"--n must lie in 3..{args.max_n} (raise --max-n to go further)")
    report = verify_wdvv_span(n)
    if args.format == "json":
        _emit(_dumps(report.to_dict()), args)
    elif args.format == "csv":
        relations = all_wdvv_relations(n) if args.all_wdvv else [r for r, _ in appendix_basis(n)]
        _emit(relation_csv(relations, n), args)
    else:
        lines = [
            f"n = {n}",
            f"boundary divisors: {report.divisors}",
            f"basis relations:   {report.basis_size} (rank {report.basis_rank})",
            f"all WDVV:          {report.all_relations} (rank {report.all_rank})",
            f"Picard dimension:  {report.picard_dimension}",
            f"span verification: {'PASS' if report.ok else 'FAIL ' + ', '.join(report.failing())}",
        ]
        if args.all_wdvv:
            lines.append("")
            lines += [f"{r}  pivot {p}" for r, p in appendix_basis(n)]
        _emit("\n".join(lines), args)
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logdiv", description="Boundary divisors and class groups of genus-zero log mapping spaces to (P^r|H)."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=True):
        if profile:
            p.add_argument("--alpha", help="comma-separated tangencies, e.g. 1,0,0")
            p.add_argument("--maximal", nargs=2, type=int, metavar=("D", "N"), help="shortcut for alpha = (D,0,...,0)")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")

    p = sub.add_parser("enumerate", help="list the boundary divisor types")
    common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check against the generic tree search")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("count", help="closed formula vs enumeration, maximal contact")
    common(p)
    p.add_argument("--oracle", action="store_true", help="also run the generic tree search")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("classgroup", help="class group dimension and basis certification")
    common(p)
    p.add_argument("--all-wdvv", action="store_true", help="also pull back every WDVV relation")
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("wdvv", help="boundary relations on M_0,n-bar")
    common(p, profile=False)
    p.add_argument("--n", type=int)
    p.add_argument("--max-n", type=int, default=9)
    p.add_argument("--all-wdvv", action="store_true", help="csv: export every WDVV relation; table: list the basis")
    p.set_defaults(func=cmd_wdvv)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"logdiv: error: {exc}\n")
        return EXIT_USAGE
    except (ArithmeticError, AssertionError) as exc:
        sys.stderr.write(f"logdiv: verification failure: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
