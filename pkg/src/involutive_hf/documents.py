"""JSON documents describing a knot complex and (optionally) its involution.

Layout::

    {
      "name": "figure-eight",
      "generators": [{"name": "x0", "i": 0, "j": 0, "maslov": 0}, ...],
      "differential": {"a": [["b", 0], ["c", 0]], "b": [["e", 1]], ...},
      "involution": {"x0": [["x0", 0], ["e", 0]], ...},
      "metadata": {"tau": 0, "provenance": "thin"}
    }

Differential U-powers are nonnegative. Involution U-powers may be negative,
since the thin involution sends some generators to ``U^-1`` times another.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .involution import FilteredMorphism
from .knotcomplex import (
    ComplexError,
    DiffTerm,
    Generator,
    ModelComplex,
    assign_relative_maslov,
    normalize_maslov,
    validate_complex,
)

__all__ = [
    "DocumentError",
    "ComplexDocument",
    "DOCUMENT_SCHEMA",
    "parse_complex_file",
    "dump_document",
    "document_from_model",
]

_TERM = {
    "type": "array",
    "prefixItems": [{"type": "string"}, {"type": "integer"}],
    "items": False,
    "minItems": 2,
}

DOCUMENT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["name", "generators", "differential"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "generators": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "i", "j"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "i": {"type": "integer"},
                    "j": {"type": "integer"},
                    "maslov": {"type": "integer"},
                },
            },
        },
        "differential": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {**_TERM, "prefixItems": [{"type": "string"}, {"type": "integer", "minimum": 0}]},
            },
        },
        "involution": {"type": "object", "additionalProperties": {"type": "array", "items": _TERM}},
        "metadata": {
            "type": "object",
            "properties": {"tau": {"type": "integer"}, "provenance": {"type": "string"}},
        },
    },
}


class DocumentError(ComplexError):
    """A document could not be read; ``line`` and ``column`` locate syntax errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ComplexDocument:
    name: str
    complex: ModelComplex
    involution: FilteredMorphism | None = None
    metadata: dict = field(default_factory=dict)
    inferred_maslov: bool = False

    def same_data(self, other: ComplexDocument) -> bool:
        """Equal generators, differential and involution (as sets of terms)."""

        def sets(terms):
            return {n: frozenset((t.target, t.upower) for t in ts) for n, ts in terms.items()}

        if self.complex.generators != other.complex.generators:
            return False
        if sets(self.complex.differential) != sets(other.complex.differential):
            return False
        mine = None if self.involution is None else sets(self.involution.terms)
        theirs = None if other.involution is None else sets(other.involution.terms)
        return mine == theirs


def _terms(raw: list) -> tuple[DiffTerm, ...]:
    return tuple(DiffTerm(str(t), int(k)) for t, k in raw)


def parse_complex_file(text: str | bytes) -> ComplexDocument:
    """Parse and validate a complex document.

    Missing Maslov gradings are inferred: from ``i + j - tau`` when ``tau`` is
    in the metadata, otherwise relative gradings along the differential
    normalised so the bottom of the tower in H(B+) is 0. Gradings must be given
    for all generators or for none.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentError(f"document is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from exc
    validator = jsonschema.Draft202012Validator(DOCUMENT_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise DocumentError(f"schema violation at {path}: {err.message}")
    metadata = dict(raw.get("metadata", {}))
    tau = metadata.get("tau")
    have = [g for g in raw["generators"] if "maslov" in g]
    if have and len(have) != len(raw["generators"]):
        raise DocumentError("maslov gradings must be given for every generator or for none")
    inferred = not have
    gens = tuple(
        Generator(g["name"], g["i"], g["j"], g.get("maslov", 0)) for g in raw["generators"]
    )
    diff = {n: _terms(ts) for n, ts in raw["differential"].items()}
    c = ModelComplex(gens, diff, tau=tau, provenance="user", name=raw["name"])
    if inferred:
        if tau is not None:
            c = c.with_maslov({g.name: g.i + g.j - tau for g in gens})
        else:
            c = normalize_maslov(assign_relative_maslov(c))
    report = validate_complex(c)
    if not report.ok:
        raise DocumentError("invalid complex: " + "; ".join(report.lines()))
    iota = None
    if "involution" in raw:
        iota = FilteredMorphism(
            {n: _terms(ts) for n, ts in raw["involution"].items()}, "skew-filtered", 0, "iota"
        )
    return ComplexDocument(raw["name"], c, iota, metadata, inferred)


def document_from_model(c: ModelComplex, iota: FilteredMorphism | None = None, name: str | None = None) -> ComplexDocument:
    meta = {"provenance": c.provenance}
    if c.tau is not None:
        meta["tau"] = c.tau
    return ComplexDocument(name or c.name, c, iota, meta)


def dump_document(doc: ComplexDocument) -> str:
    """Serialise deterministically (generator order kept, term lists sorted)."""
    c = doc.complex

    def terms(ts) -> list:
        return [[t.target, t.upower] for t in sorted(ts, key=lambda t: (t.target, t.upower))]

    parts = [f'  "name": {json.dumps(doc.name)}']
    gens = ",\n".join(
        "    " + json.dumps({"name": g.name, "i": g.i, "j": g.j, "maslov": g.maslov}) for g in c.generators
    )
    parts.append('  "generators": [\n' + gens + "\n  ]")

    def block(key: str, mapping) -> str:
        body = ",\n".join(f"    {json.dumps(n)}: {json.dumps(terms(mapping.get(n, ())))}" for n in c.names)
        return f'  "{key}": {{\n{body}\n  }}'

    parts.append(block("differential", c.differential))
    if doc.involution is not None:
        parts.append(block("involution", doc.involution.terms))
    if doc.metadata:
        parts.append(f'  "metadata": {json.dumps(dict(sorted(doc.metadata.items())))}')
    return "{\n" + ",\n".join(parts) + "\n}\n"
