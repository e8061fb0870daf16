"""Command line front-end: ``cybe-forge enumerate|verify|uq``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from .liecore import DiagramOnlyError, UnsupportedAlgebraError, build_root_system, parse_algebra_label
from .records import (RecordError, build_records, diagram_lines, document, lie_algebra, load_document,
                      mismatches, parse_vertex, record_ok)
from . import uqpoly

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
UQ_CHECKS = ("presentation", "hopf", "limit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raise on bad usage so that main owns the exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _text_report(records: Sequence[dict]) -> str:
    lines: List[str] = []
    seen = set()
    for rec in records:
        key = (rec["algebra"], rec["vertex"])
        if key not in seen:
            seen.add(key)
            alpha = int(rec["vertex"][len("alpha"):])
            lines.append(f"{rec['algebra']} vertex {rec['vertex']}")
            lines.extend("  " + ln for ln in diagram_lines(rec["algebra"], alpha))
        arrows = ", ".join(f"a{b}->a{c}" for b, c in rec["map"]) or "none"
        status = "ok" if record_ok(rec) else "FAILED"
        lines.append(f"  triple {rec['triple_type']}: {{{arrows}}}  "
                     f"dims L_alpha={rec['dim_L_alpha']} Delta={rec['dim_delta_alpha']} i'={rec['dim_i_prime']}  "
                     f"degree={tuple(rec['polynomial_degree'])}  sqrt_d={rec['sqrt_d']}  {status}")
        for partner in rec["automorphism_partners"]:
            lines.append("    automorphism partner: " + ", ".join(f"a{b}->a{c}" for b, c in partner))
    lines.append(f"{len(records)} record(s)")
    return "\n".join(lines)


def cmd_enumerate(args) -> int:
    try:
        L = lie_algebra(args.algebra)
        vertex = parse_vertex(args.vertex, L.rank) if args.vertex is not None else None
        records = build_records(args.algebra, vertex, args.include_empty)
    except (UnsupportedAlgebraError, DiagramOnlyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        _emit(json.dumps(document(records), indent=1, sort_keys=False))
    else:
        _emit(_text_report(records))
    return EXIT_OK if all(record_ok(r) for r in records) else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        with open(args.input, encoding="utf-8") if args.input != "-" else sys.stdin as fh:
            records = load_document(json.load(fh))
    except (OSError, json.JSONDecodeError, RecordError) as exc:
        print(f"error: cannot read records: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = 0
    for n, rec in enumerate(records):
        try:
            bad = mismatches(rec)
        except (RecordError, UnsupportedAlgebraError, DiagramOnlyError, AttributeError) as exc:
            print(f"error: record {n}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if bad:
            failed += 1
            print(f"record {n} ({rec.get('algebra')} {rec.get('vertex')}): mismatch in " + "; ".join(bad))
    print(f"verified {len(records)} record(s), {failed} failing")
    return EXIT_FAIL if failed else EXIT_OK


def _check_presentation(P: uqpoly.Presentation) -> List[str]:
    """Exponent rules, rewriting confluence and counit vanishing; returns problems."""
    rs = P.rs
    problems = []
    for r in P.relations:
        kind, *rest = r.tag.split(":")
        if kind == "q-serre":
            i, j = int(rest[1]), int(rest[2])
            a_ij = 2 * rs.inner(rs.simple_root(i), rs.simple_root(j)) / rs.inner(rs.simple_root(i), rs.simple_root(i))
            if r.meta["n"] != 1 - a_ij:
                problems.append(f"{r.tag}: exponent {r.meta['n']} != {1 - a_ij}")
        if kind == "affine-serre":
            i = int(rest[0])
            a_i0 = 2 * rs.node_inner(i, 0) / rs.node_inner(i, i)
            if r.meta["n"] != 1 - a_i0:
                problems.append(f"{r.tag}: exponent {r.meta['n']} != {1 - a_i0}")
    problems += [f"rewriting not confluent at {w}" for w in uqpoly.Rewriter(P).critical_pairs(3)]
    problems += [f"counit does not vanish on {t}" for t, ok in uqpoly.counit_of_relations(P).items() if not ok]
    return problems


def cmd_uq(args) -> int:
    if args.check not in UQ_CHECKS:
        print(f"error: unknown check {args.check!r}; choose from {', '.join(UQ_CHECKS)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rs = build_root_system(*parse_algebra_label(args.algebra))
    except UnsupportedAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    P = uqpoly.generate_presentation(rs, "quantum")
    if args.check == "presentation":
        problems = _check_presentation(P)
        if args.format == "json":
            _emit(json.dumps({"schema": "cybe-forge/1", "algebra": rs.label, "k0_identity": P.k0_identity(),
                              "q_exponent_denominator": P.F.m, "problems": problems,
                              "relations": P.to_json()}, indent=1))
            return EXIT_FAIL if problems else EXIT_OK
        print(f"{rs.label}: {len(P.generators)} generators, {len(P.relations)} relations, q = "
              + ("q" if P.F.m == 1 else f"s^{P.F.m}"))
        print(P.k0_identity())
        for r in P.relations:
            print(f"  {r.tag}: {len(r.poly.terms)} monomial(s)")
    elif args.check == "hopf":
        rep = uqpoly.check_hopf_on_generators(P)
        for g, res in rep.results.items():
            print(f"  {g}: " + " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in res.items()))
        problems = rep.failures()
    else:
        rep = uqpoly.classical_limit_check(rs)
        for tag, res in rep.results.items():
            target = res["classical"] or "(vanishes)"
            print(f"  {tag}: order {res['order']} -> {target} {'ok' if res['ok'] else 'FAIL'}")
        problems = [t for t, r in rep.results.items() if not r["ok"]]
    for p in problems:
        print(f"problem: {p}")
    print(f"{args.check}: {'pass' if not problems else 'FAIL'}")
    return EXIT_FAIL if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cybe-forge", description="Quasi-trigonometric CYBE solutions, exactly.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("enumerate", help="classify triples and build solutions")
    p.add_argument("--algebra", required=True, help="e.g. A2, B2, sl3, o5")
    p.add_argument("--vertex", help="simple root index, e.g. alpha2 or 2 (default: all)")
    p.add_argument("--include-empty", action="store_true", help="also emit the empty triple")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("verify", help="recompute every flag of stored records")
    p.add_argument("--input", required=True, help="JSON file from 'enumerate' ('-' for stdin)")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("uq", help="checks on the quantum loop algebra presentation")
    p.add_argument("--algebra", required=True)
    p.add_argument("--check", required=True, help="presentation, hopf or limit")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_uq)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
