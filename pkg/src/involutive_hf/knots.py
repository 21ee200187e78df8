"""The knot mini-language: ``unknot``, ``figure8``, ``torus:p,q``,
``mirror-torus:p,q``, ``thin:tau,squares`` and ``file:PATH``."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .documents import parse_complex_file
from .involution import FilteredMorphism, default_involution
from .knotcomplex import (
    ComplexError,
    ModelComplex,
    build_mirror_staircase,
    build_staircase,
    build_thin_canonical,
    build_unknot,
    from_alexander_lspace,
    torus_alexander,
)

__all__ = ["KnotSpecError", "LoadedKnot", "load_knot", "torus_knot", "figure_eight"]


class KnotSpecError(ValueError):
    """The knot specification string is malformed (a usage error)."""


@dataclass(frozen=True)
class LoadedKnot:
    spec: str
    complex: ModelComplex
    involution: FilteredMorphism | None


def torus_knot(p: int, q: int, mirror: bool = False) -> ModelComplex:
    data = from_alexander_lspace(torus_alexander(p, q))
    label = f"{'mirror-' if mirror else ''}T({p},{q})"
    if not data.torsion:
        c = build_unknot()
    elif mirror:
        c = build_mirror_staircase(data.torsion)
    else:
        c = build_staircase(data.torsion)
    return ModelComplex(c.generators, c.differential, c.tau, c.provenance, c.torsion, c.squares, label)


def figure_eight() -> ModelComplex:
    c = build_thin_canonical(0, 1)
    return ModelComplex(c.generators, c.differential, c.tau, c.provenance, c.torsion, c.squares, "figure-eight")


def _ints(spec: str, body: str, count: int) -> list[int]:
    parts = body.split(",")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise KnotSpecError(f"--knot {spec!r}: expected {count} comma-separated integers") from None
    if len(values) != count:
        raise KnotSpecError(f"--knot {spec!r}: expected {count} comma-separated integers")
    return values


def load_knot(spec: str) -> LoadedKnot:
    """Build the model complex and involution named by ``spec``.

    Raises KnotSpecError for malformed strings, ComplexError (or OSError for
    ``file:``) when the knot itself is invalid.
    """
    kind, _, body = spec.partition(":")
    if kind == "unknot" and not body:
        c = build_unknot()
    elif kind == "figure8" and not body:
        c = figure_eight()
    elif kind in ("torus", "mirror-torus"):
        p, q = _ints(spec, body, 2)
        try:
            c = torus_knot(p, q, mirror=kind == "mirror-torus")
        except ValueError as exc:
            if isinstance(exc, ComplexError):
                raise
            raise ComplexError(str(exc)) from exc
    elif kind == "thin":
        tau, squares = _ints(spec, body, 2)
        c = build_thin_canonical(tau, squares)
    elif kind == "file":
        if not body:
            raise KnotSpecError("--knot file: needs a path")
        doc = parse_complex_file(Path(body).read_bytes())
        return LoadedKnot(spec, doc.complex, doc.involution)
    else:
        raise KnotSpecError(
            f"--knot {spec!r}: expected unknot, figure8, torus:p,q, mirror-torus:p,q, thin:tau,squares or file:PATH"
        )
    return LoadedKnot(spec, c, default_involution(c))
