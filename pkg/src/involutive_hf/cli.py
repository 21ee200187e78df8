"""Command-line interface.

Exit codes: 0 success, 1 validation failure (bad complex, bad involution,
surgery coefficient too small, failed verification), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .checks import CheckResult, alternating_rows, corollary_sigma_pairs, paper_examples, property_suite, sarkar_crosscheck
from .documents import parse_complex_file
from .invariants import NoTower, StabilizationError, SurgeryTooSmall, correction_terms, surgery_report
from .involution import InvolutionReport, SarkarFormulaError, conjectural_sarkar_map, verify_involution
from .knotcomplex import ComplexError, ModelComplex
from .knots import KnotSpecError, load_knot
from .reports import (
    Report,
    check_report,
    compute_report,
    emit_report,
    properties_report,
    results_report,
    tables_report,
)

__all__ = ["main", "run_command", "build_parser", "UsageError", "CommandResult"]


class UsageError(Exception):
    """Raised for argument errors; the message names the offending flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit; we want a return code
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="involutive-hf", description="Involutive correction terms of large surgeries on knots.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="invariants of one knot")
    c.add_argument("--knot", required=True, help="unknot | figure8 | torus:p,q | mirror-torus:p,q | thin:tau,squares | file:PATH")
    c.add_argument("--surgery", type=int, metavar="P", help="also report d, d_lower, d_upper of P-surgery")
    c.add_argument("--depth", type=int, metavar="N", help="truncation depth (default: chosen from the complex)")
    c.add_argument("--format", choices=("text", "json"), default="text")

    k = sub.add_parser("check", help="validate a complex document")
    k.add_argument("--input", required=True, metavar="FILE")
    k.add_argument("--format", choices=("text", "json"), default="text")

    t = sub.add_parser("tables", help="triples of alternating knots by signature and Arf invariant")
    t.add_argument("--sigma-range", default="-16:16", metavar="A:B")
    t.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="batch verification")
    v.add_argument("suite", choices=("paper-examples", "thm-1.7", "properties"))
    v.add_argument("--seed", type=int, default=0, metavar="S")
    v.add_argument("--cases", type=int, default=200)
    v.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _sigma_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        a, b = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"--sigma-range {text!r}: expected A:B with integers A <= B") from None
    if not sep or a > b:
        raise UsageError(f"--sigma-range {text!r}: expected A:B with integers A <= B")
    return a, b


def _check_involution(c: ModelComplex, iota) -> tuple[InvolutionReport, list[str]]:
    """Verify ``iota``; for user complexes cross-check against the conjectural formula."""
    report = verify_involution(c, iota)
    warnings: list[str] = []
    if c.provenance != "user" or not report.ok:
        return report, warnings
    try:
        ref = conjectural_sarkar_map(c)
    except SarkarFormulaError as exc:
        warnings.append(f"no Sarkar reference available: {exc}")
        return report, warnings
    cross = verify_involution(c, iota, ref, "conjectural Sarkar formula (cross-check)")
    if cross.square_status in ("exact", "homotopic"):
        report.square_status = cross.square_status
        report.sarkar_source = cross.sarkar_source
        report.homotopy, report.homotopy_filtered = cross.homotopy, cross.homotopy_filtered
    else:
        warnings.append("iota^2 is not homotopic to the conjectural Sarkar formula")
    return report, warnings


class _Failure(Exception):
    pass


def _compute(args) -> Report:
    try:
        knot = load_knot(args.knot)
    except KnotSpecError as exc:
        raise UsageError(str(exc)) from exc
    except OSError as exc:
        raise UsageError(f"--knot {args.knot}: cannot read file ({exc.strerror or exc})") from exc
    c = knot.complex
    if knot.involution is None:
        raise _Failure("the document has no involution block")
    inv, warnings = _check_involution(c, knot.involution)
    if not inv.ok:
        raise _Failure("involution failed verification:\n  " + "\n  ".join(inv.lines()))
    if args.surgery is not None:
        need = max(1, c.genus)
        if args.surgery < need:
            raise SurgeryTooSmall(f"surgery coefficient {args.surgery} is below max(1, genus) = {need}")
    terms = correction_terms(c, knot.involution, args.depth)
    surgery = surgery_report(c, knot.involution, args.surgery, terms) if args.surgery is not None else None
    rep = compute_report(args.knot, c, terms, inv, surgery)
    if warnings:
        rep = Report(rep.title, {**rep.data, "warnings": warnings}, rep.tables, rep.ok, tuple(f"warning: {w}" for w in warnings))
    return rep


def _check(args) -> Report:
    path = Path(args.input)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"--input {args.input}: cannot read file ({exc.strerror or exc})") from exc
    doc = parse_complex_file(raw)
    inv, warnings = (None, [])
    if doc.involution is not None:
        inv, warnings = _check_involution(doc.complex, doc.involution)
    return check_report(doc.name, doc.complex, doc.inferred_maslov, inv, warnings)


def _verify(args) -> Report:
    if args.suite == "paper-examples":
        results = paper_examples() + sarkar_crosscheck()
        results.append(_summary("alternating pairs with sigma = 4 Arf + 4 (mod 8) obstructed", corollary_sigma_pairs()))
        return results_report("Worked examples", "paper-examples", results)
    if args.suite == "thm-1.7":
        return tables_report(alternating_rows(-16, 16))
    if args.cases < 1:
        raise UsageError("--cases must be positive")
    return properties_report(args.seed, args.cases, property_suite(args.seed, args.cases))


def _summary(name: str, results: list[CheckResult]) -> CheckResult:
    bad = [r.name for r in results if not r.ok]
    return CheckResult(name, not bad, f"{len(results) - len(bad)}/{len(results)} pairs" + (f"; first failure {bad[0]}" if bad else ""))


@dataclass(frozen=True)
class CommandResult:
    code: int
    report: Report | None = None
    error: str = ""
    format: str = "text"


def run_command(argv: Sequence[str]) -> CommandResult:
    """Run one command without touching stdout or stderr."""
    fmt = "text"
    argv = list(argv)
    # "--sigma-range -4:4" would read the value as an option; glue it to the flag
    for n in range(len(argv) - 1):
        if argv[n] == "--sigma-range":
            argv[n : n + 2] = [f"--sigma-range={argv[n + 1]}"]
            break
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        if args.command == "compute":
            rep = _compute(args)
        elif args.command == "check":
            rep = _check(args)
        elif args.command == "tables":
            lo, hi = _sigma_range(args.sigma_range)
            rep = tables_report(alternating_rows(lo, hi))
        else:
            rep = _verify(args)
    except UsageError as exc:
        return CommandResult(2, None, f"usage error: {exc}", fmt)
    except (ComplexError, NoTower, StabilizationError, _Failure, ValueError) as exc:
        return CommandResult(1, None, f"{type(exc).__name__}: {exc}", fmt)
    return CommandResult(0 if rep.ok else 1, rep, "", fmt)


def main(argv: Sequence[str] | None = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    if result.report is not None:
        sys.stdout.buffer.write(emit_report(result.report, result.format))
        sys.stdout.flush()
    if result.error:
        print(result.error, file=sys.stderr)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
