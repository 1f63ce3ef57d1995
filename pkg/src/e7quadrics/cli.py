"""Command line: ``e7quadrics dump | verify | membership``.

Exit codes: 0 pass or member, 1 fail or non-member, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .rep56 import matrix_from_json
from .stabilizer import membership_forms, membership_GI
from .suites import DUMP_TARGETS, SUITES, Config, build_id, canonical_json, dump, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse already exits 2; keep the code explicit
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="e7quadrics", description="Quadrics, forms and stabilizers of the 56-dimensional E7 module.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("dump", help="print a table as JSON")
    d.add_argument("target", choices=DUMP_TARGETS)
    d.add_argument("--format", choices=("json", "text"), default="json")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--prime", type=int, action="append", dest="primes", help="repeatable; replaces the suite's default primes")
    v.add_argument("--seed", type=_u64, default=0)
    v.add_argument("--length", type=int, default=20, help="random word length")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("-v", "--verbose", action="store_true")

    m = sub.add_parser("membership", help="decide membership of a 56x56 matrix")
    m.add_argument("--matrix", required=True, help="path to a matrix JSON file")
    m.add_argument("--method", choices=("ideal", "forms"), default="ideal")
    m.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _emit(doc: dict, fmt: str, text: str) -> None:
    sys.stdout.write(canonical_json(doc) if fmt == "json" else text)


def _dump_text(doc: dict) -> str:
    lines = [f"{doc['target']}: {doc['count']} records ({doc['build']})"]
    lines += [json.dumps(r, sort_keys=True) for r in doc["records"]]
    return "\n".join(lines) + "\n"


def _report_text(doc: dict, verbose: bool) -> str:
    lines = [f"suite {doc['suite']} over {', '.join(doc['rings'])}: {doc['status']} ({doc['passed']} passed, {doc['failed']} failed)"]
    for c in doc["checks"]:
        lines.append(f"  [{c['status']}] {c['name']}")
        if verbose or c["status"] == "fail":
            detail = {k: v for k, v in c["detail"].items() if k != "kernel_basis"}
            if detail:
                lines.append(f"      {json.dumps(detail, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _cmd_dump(args: argparse.Namespace) -> int:
    doc = dump(args.target)
    _emit(doc, args.format, _dump_text(doc))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        cfg = Config(tuple(args.primes) if args.primes else None, args.seed, args.length, args.verbose)
    except ValueError as exc:
        print(f"e7quadrics: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = run_suite(args.suite, cfg)
    _emit(doc, args.format, _report_text(doc, args.verbose))
    return EXIT_OK if doc["status"] == "pass" else EXIT_FAIL


def _cmd_membership(args: argparse.Namespace) -> int:
    try:
        with open(args.matrix, encoding="utf-8") as fh:
            m = matrix_from_json(json.load(fh))
        verdict = (membership_GI if args.method == "ideal" else membership_forms)(m)
    except (OSError, ValueError) as exc:
        print(f"e7quadrics: cannot use {args.matrix}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = {"build": build_id(), "method": args.method, **m.ring.describe(), **verdict.to_json()}
    text = f"{'member' if verdict.member else 'non-member'} ({args.method})"
    if verdict.eps_h is not None:
        text += f"  eps_h={verdict.eps_h} eps_f={verdict.eps_f}"
    if verdict.witness is not None:
        text += f"\nwitness: {json.dumps(doc['witness'], sort_keys=True)}"
    _emit(doc, args.format, text + "\n")
    return EXIT_OK if verdict.member else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"dump": _cmd_dump, "verify": _cmd_verify, "membership": _cmd_membership}[args.command]
    return handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
