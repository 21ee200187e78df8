"""Reports: one structured value rendered as JSON or as aligned text tables."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .checks import CheckResult, TableRow
from .invariants import CorrectionTerms, SurgeryReport
from .involution import InvolutionReport
from .knotcomplex import ModelComplex

__all__ = [
    "Table",
    "Report",
    "emit_report",
    "terms_machine",
    "compute_report",
    "tables_report",
    "results_report",
    "properties_report",
    "check_report",
]


@dataclass(frozen=True)
class Table:
    title: str
    headers: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Report:
    """``data`` is the machine form; ``tables`` are views built from the same values."""

    title: str
    data: dict
    tables: tuple[Table, ...] = ()
    ok: bool = True
    notes: tuple[str, ...] = field(default=())


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _cell(value: Any) -> str:
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_cell(v) for v in value) + ")"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _render_table(t: Table) -> list[str]:
    widths = [len(h) for h in t.headers]
    for row in t.rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    line = "  ".join(h.ljust(w) for h, w in zip(t.headers, widths)).rstrip()
    out = [t.title, line, "  ".join("-" * w for w in widths)]
    out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in t.rows]
    return out


def emit_report(r: Report, fmt: str = "text") -> bytes:
    """Serialise deterministically: sorted JSON keys, or fixed-layout text tables."""
    if fmt in ("json", "machine"):
        return (json.dumps(_plain(r.data), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [r.title, "=" * len(r.title)]
    for t in r.tables:
        lines.append("")
        lines += _render_table(t)
    if r.notes:
        lines.append("")
        lines += list(r.notes)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _kv(title: str, pairs: Sequence[tuple[str, Any]]) -> Table:
    return Table(title, ("quantity", "value"), tuple((k, _cell(_plain(v))) for k, v in pairs))


def terms_machine(t: CorrectionTerms) -> dict:
    return {"V_lower": t.Vlower, "V0": t.V0, "V_upper": t.Vupper}


def _window(dims: dict, hi: int) -> dict[int, int]:
    return {r: d for r, d in sorted(dims.items()) if r <= hi}


def compute_report(
    spec: str,
    c: ModelComplex,
    terms: CorrectionTerms,
    involution: InvolutionReport,
    surgery: SurgeryReport | None = None,
) -> Report:
    hi = max(terms.ai_bottoms) + 6
    a_dims, ai_dims = _window(terms.a_dims, hi), _window(terms.ai_dims, hi)
    data: dict[str, Any] = {
        "report": "compute",
        "knot": spec,
        "name": c.name,
        "tau": c.tau,
        "genus": c.genus,
        "depth": terms.depth,
        "invariants": terms_machine(terms),
        "towers": {
            "d_A": terms.dA,
            "d_A_lower": terms.dAlower,
            "d_A_upper": terms.dAupper,
            "d_B": terms.dB,
            "AI_bottoms": list(terms.ai_bottoms),
        },
        "homology": {"A": a_dims, "AI": ai_dims, "max_grading_shown": hi},
        "reduced": {"A": terms.reduced_dims_a, "AI": terms.reduced_dims},
        "validation": {
            "involution": involution.square_status,
            "sarkar_reference": involution.sarkar_source,
            "problems": [f"{k}: {m}" for k, m in involution.violations],
        },
    }
    tables = [
        _kv("Concordance invariants", [("V_lower", terms.Vlower), ("V0", terms.V0), ("V_upper", terms.Vupper)]),
        _kv(
            "Towers",
            [
                ("d(A0+)", terms.dA),
                ("d_lower(A0+)", terms.dAlower),
                ("d_upper(A0+)", terms.dAupper),
                ("d(B+)", terms.dB),
                ("H(AI) tower bottoms", terms.ai_bottoms),
            ],
        ),
    ]
    grads = sorted(set(a_dims) | set(ai_dims))
    tables.append(
        Table(
            f"Homology dimensions (gradings <= {hi})",
            ("grading", "H(A0+)", "H(AI0+)", "reduced H(AI0+)"),
            tuple(
                (str(r), str(a_dims.get(r, 0)), str(ai_dims.get(r, 0)), str(terms.reduced_dims.get(r, 0)))
                for r in grads
            ),
        )
    )
    if surgery is not None:
        rev = surgery.reversed()
        data["surgery"] = {
            "p": surgery.p,
            "d_lower": surgery.dlower,
            "d": surgery.d,
            "d_upper": surgery.dupper,
            "reversed": {"d_lower": rev[0], "d": rev[1], "d_upper": rev[2]},
        }
        tables.append(
            Table(
                f"Correction terms of {surgery.p}-surgery (spin structure [0])",
                ("manifold", "d_lower", "d", "d_upper"),
                (
                    ("Y", str(surgery.dlower), str(surgery.d), str(surgery.dupper)),
                    ("-Y", str(rev[0]), str(rev[1]), str(rev[2])),
                ),
            )
        )
    tables.append(_kv("Validation", [("iota^2 vs Sarkar map", involution.square_status), ("reference", involution.sarkar_source)]))
    return Report(f"Involutive invariants of {c.name or spec}", data, tuple(tables), involution.ok)


def _rule(sigma: int) -> str:
    if sigma <= 0:
        k, res = divmod(-sigma, 8)
        return f"-8k{'-' + str(res) if res else ''} (k={k})"
    k, res = divmod(sigma, 8)
    return f"8k{'+' + str(res) if res else ''} (k={k})"


def tables_report(rows: Sequence[TableRow]) -> Report:
    data = {
        "report": "tables",
        "rows": [
            {
                "sigma": r.sigma,
                "arf": r.arf,
                "tau": r.tau,
                "squares": r.squares,
                "computed": list(r.computed),
                "expected": list(r.expected),
                "ok": r.ok,
            }
            for r in rows
        ],
        "all_ok": all(r.ok for r in rows),
    }
    by = {(r.sigma, r.arf): r for r in rows}
    sigmas = sorted({r.sigma for r in rows})
    tables = []
    for title, keep in (("sigma <= 0", lambda s: s <= 0), ("sigma > 0", lambda s: s > 0)):
        body = []
        chosen = [s for s in sigmas if keep(s)]
        # sigma <= 0 reads 0, -2, -4, ... like the closed form's rows
        for s in sorted(chosen, key=abs):
            cells = [str(s), _rule(s)]
            match = True
            for arf in (0, 1):
                row = by.get((s, arf))
                cells.append(_cell(row.computed) if row else "-")
                match = match and (row is None or row.ok)
            cells.append("yes" if match else "NO")
            body.append(tuple(cells))
        if body:
            tables.append(
                Table(
                    f"(V_lower, V0, V_upper) for alternating knots, {title}",
                    ("sigma", "row", "Arf=0", "Arf=1", "matches closed form"),
                    tuple(body),
                )
            )
    return Report("Alternating knots", data, tuple(tables), data["all_ok"])


def results_report(title: str, kind: str, results: Sequence[CheckResult]) -> Report:
    data = {
        "report": kind,
        "results": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results],
        "passed": sum(r.ok for r in results),
        "failed": sum(not r.ok for r in results),
    }
    table = Table("Checks", ("check", "result", "detail"), tuple((r.name, "pass" if r.ok else "FAIL", r.detail) for r in results))
    return Report(title, data, (table,), data["failed"] == 0)


def properties_report(seed: int, cases: int, failures: dict[str, list[str]]) -> Report:
    data = {
        "report": "properties",
        "seed": seed,
        "cases": cases,
        "failures": {k: v for k, v in failures.items()},
    }
    table = Table(
        f"Property suite ({cases} random models, seed {seed})",
        ("property", "failures", "first failure"),
        tuple((k, str(len(v)), v[0] if v else "") for k, v in failures.items()),
    )
    ok = not any(failures.values())
    return Report("Randomized properties", data, (table,), ok)


def check_report(name: str, c: ModelComplex, inferred: bool, involution: InvolutionReport | None, warnings: Sequence[str]) -> Report:
    data: dict[str, Any] = {
        "report": "check",
        "name": name,
        "generators": len(c.generators),
        "maslov_inferred": inferred,
        "complex": "ok",
        "involution": None,
        "warnings": list(warnings),
    }
    pairs: list[tuple[str, Any]] = [
        ("generators", len(c.generators)),
        ("maslov gradings", "inferred" if inferred else "given"),
        ("complex", "ok"),
    ]
    ok = True
    if involution is not None:
        data["involution"] = {
            "ok": involution.ok,
            "status": involution.square_status,
            "sarkar_reference": involution.sarkar_source,
            "problems": [f"{k}: {m}" for k, m in involution.violations],
        }
        pairs.append(("involution", "ok" if involution.ok else "FAILED"))
        ok = involution.ok
    tables = [_kv("Document", pairs)]
    if involution is not None and involution.violations:
        tables.append(Table("Involution problems", ("kind", "detail"), tuple(involution.violations)))
    return Report(f"Check of {name}", data, tuple(tables), ok, tuple(f"warning: {w}" for w in warnings))
