"""The conjugation map on model complexes and the Sarkar map.

Maps are U-equivariant and stored on generators: ``terms[x]`` lists the
``U^k y`` making up the image of ``x``. Unlike differentials, these U-powers
may be negative (the thin involution sends ``x_1^1`` to ``x_1^2 + U^-1 c``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .f2core import F2Matrix, solve_linear
from .knotcomplex import ComplexError, DiffTerm, Generator, ModelComplex, compose_terms

__all__ = [
    "FilteredMorphism",
    "InvolutionReport",
    "SarkarFormulaError",
    "identity_map",
    "standard_staircase_involution",
    "standard_square_pair_involution",
    "thin_involution",
    "canonical_sarkar_map",
    "conjectural_sarkar_map",
    "compose",
    "add_maps",
    "verify_involution",
    "is_filtered",
    "is_skew_filtered",
    "default_involution",
]

KINDS = ("filtered", "skew-filtered", "unfiltered")


class SarkarFormulaError(ComplexError):
    """The conjectural Sarkar formula asked for a negative U-power."""


@dataclass(frozen=True)
class FilteredMorphism:
    terms: Mapping[str, tuple[DiffTerm, ...]]
    kind: str = "filtered"
    maslov_shift: int = 0
    name: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown morphism kind {self.kind!r}")
        object.__setattr__(self, "terms", {k: tuple(v) for k, v in self.terms.items()})

    def as_sets(self) -> dict[str, frozenset[tuple[str, int]]]:
        return {k: _xor_set(v) for k, v in self.terms.items()}

    def image(self, name: str) -> frozenset[tuple[str, int]]:
        return _xor_set(self.terms.get(name, ()))


def _xor_set(terms: Iterable[DiffTerm]) -> frozenset[tuple[str, int]]:
    acc: set[tuple[str, int]] = set()
    for t in terms:
        acc ^= {(t.target, t.upower)}
    return frozenset(acc)


def identity_map(c: ModelComplex) -> FilteredMorphism:
    return FilteredMorphism({n: (DiffTerm(n, 0),) for n in c.names}, "filtered", 0, "identity")


def _as_terms(m: FilteredMorphism | Mapping) -> Mapping[str, Iterable[DiffTerm]]:
    """Accept a morphism, a map of DiffTerm tuples, or a map of ``(target, upower)`` sets."""
    if isinstance(m, FilteredMorphism):
        return m.terms
    return {n: tuple(t if isinstance(t, DiffTerm) else DiffTerm(*t) for t in ts) for n, ts in m.items()}


def compose(first: FilteredMorphism | Mapping, second: FilteredMorphism | Mapping, names: Iterable[str]) -> dict[str, frozenset]:
    """``second o first`` on each generator, as sets of ``(target, upower)``."""
    f, g = _as_terms(first), _as_terms(second)
    return {n: frozenset(compose_terms(f, g, n)) for n in names}


def add_maps(*maps: Mapping[str, frozenset], names: Iterable[str]) -> dict[str, frozenset]:
    out = {}
    for n in names:
        acc: frozenset = frozenset()
        for m in maps:
            acc = acc ^ m.get(n, frozenset())
        out[n] = acc
    return out


# ---------------------------------------------------------------------------
# Constructors


def _stair_partner(name: str) -> str:
    if name == "x0":
        return name
    s, t = name[1:].split("_")
    return f"x{s}_{2 if t == '1' else 1}"


def _is_stair(name: str) -> bool:
    return name == "x0" or (name.startswith("x") and "_" in name)


def standard_staircase_involution(c: ModelComplex) -> FilteredMorphism:
    """Swap ``x_s^1`` and ``x_s^2``, fix ``x_0``."""
    if c.provenance not in ("unknot", "staircase", "mirror-staircase") and not (
        c.provenance == "thin" and not c.squares
    ):
        raise ComplexError(f"standard staircase map needs a staircase, got provenance {c.provenance!r}")
    return FilteredMorphism(
        {n: (DiffTerm(_stair_partner(n), 0),) for n in c.names}, "skew-filtered", 0, "staircase swap"
    )


def _square_lookup(c: ModelComplex, corner_name: str) -> int:
    for k, sq in enumerate(c.squares):
        if sq.a == corner_name:
            return k
    raise ComplexError(f"{corner_name!r} is not the initial corner of a square in this complex")


def standard_square_pair_involution(c: ModelComplex, square_a: str, square_a2: str) -> dict[str, tuple[DiffTerm, ...]]:
    """The standard map exchanging two squares with mirrored initial corners."""
    s1 = c.squares[_square_lookup(c, square_a)]
    s2 = c.squares[_square_lookup(c, square_a2)]
    gens = c.by_name
    (i1, j1), (i2, j2) = (gens[s1.a].i, gens[s1.a].j), (gens[s2.a].i, gens[s2.a].j)
    if i1 == j1 or i2 == j2:
        raise ComplexError("square pair map needs off-diagonal squares")
    if (i1, j1) != (j2, i2):
        raise ComplexError(f"squares at ({i1},{j1}) and ({i2},{j2}) are not mirrored")
    t = lambda n: (DiffTerm(n, 0),)  # noqa: E731
    return {
        s1.a: t(s2.a),
        s1.b: t(s2.c),
        s1.c: t(s2.b),
        s1.e: t(s2.e),
        s2.a: (DiffTerm(s1.a, 0), DiffTerm(s1.e, 0)),
        s2.c: t(s1.b),
        s2.b: t(s1.c),
        s2.e: t(s1.e),
    }


def _require_thin(c: ModelComplex) -> None:
    if c.provenance != "thin" and not (c.provenance in ("unknot", "staircase", "mirror-staircase") and not c.squares):
        raise ComplexError(f"expected a thin canonical complex, got provenance {c.provenance!r}")


def _stair_at(c: ModelComplex, i: int, j: int) -> str:
    for g in c.generators:
        if _is_stair(g.name) and (g.i, g.j) == (i, j):
            return g.name
    raise ComplexError(f"no staircase generator at ({i},{j}); the staircase is not in canonical position")


def thin_involution(c: ModelComplex) -> FilteredMorphism:
    """The conjugation map on a thin canonical complex.

    Off-diagonal square pairs get the standard pair map, the staircase gets
    the swap, and an odd leftover diagonal square is glued to ``x_0`` as in
    the figure-eight model. Where ``x_1`` sits (below ``x_0`` for tau > 0 odd
    and tau < 0 even, above otherwise) is read from the bigradings.
    """
    _require_thin(c)
    gens = c.by_name
    shift = {n: 0 for n in c.names}
    for sq in c.squares:
        for n in (sq.a, sq.b, sq.c, sq.e):
            shift[n] = sq.shift
    base: dict[str, list[tuple[str, int]]] = {}
    for n in c.names:
        if _is_stair(n):
            base[n] = [(_stair_partner(n), 0)]
    diagonal = None
    for k, sq in enumerate(c.squares):
        if sq.partner is None:
            if diagonal is not None:
                raise ComplexError("at most one diagonal square is allowed")
            diagonal = sq
            continue
        if k < sq.partner:
            ga, gb = gens[sq.a], gens[c.squares[sq.partner].a]
            if (ga.i - sq.shift, ga.j - sq.shift) != (gb.j - sq.shift, gb.i - sq.shift):
                raise ComplexError("square pair not at mirrored positions")
            frag = standard_square_pair_involution(c, sq.a, c.squares[sq.partner].a)
            for n, terms in frag.items():
                base[n] = [(t.target, t.upower) for t in terms]
    if diagonal is not None:
        sq = diagonal
        ga = gens[sq.a]
        if ga.i != ga.j:
            raise ComplexError("the unpaired square must have its initial corner on the diagonal")
        base["x0"] = [("x0", 0), (sq.e, 0)]
        base[sq.a] = [(sq.a, 0), ("x0", 0)]
        base[sq.e] = [(sq.e, 0)]
        base[sq.b] = [(sq.c, 0)]
        base[sq.c] = [(sq.b, 0)]
        tau = c.tau or 0
        if tau != 0:
            below = (tau > 0) == (tau % 2 == 1)
            if below:
                # b -> c + x_1 at c's position, c -> b + x_1 at b's position
                base[sq.b].append((_stair_at(c, 0, -1), 0))
                base[sq.c].append((_stair_at(c, -1, 0), 0))
            else:
                up, right = _stair_at(c, 0, 1), _stair_at(c, 1, 0)
                base[up] = [(right, 0), (sq.c, -1)]
                base[right] = [(up, 0), (sq.b, -1)]
    missing = [n for n in c.names if n not in base]
    if missing:
        raise ComplexError(f"generators outside the canonical thin form: {missing}")
    terms = {}
    for n in c.names:
        terms[n] = tuple(DiffTerm(t, k + shift[t] - shift[n]) for t, k in base[n])
    return FilteredMorphism(terms, "skew-filtered", 0, "thin involution")


def canonical_sarkar_map(c: ModelComplex) -> FilteredMorphism:
    """Identity on the staircase, ``a -> a + e`` on every square."""
    if c.provenance not in ("unknot", "staircase", "mirror-staircase", "thin"):
        raise ComplexError(f"canonical Sarkar map needs a staircase or thin model, got {c.provenance!r}")
    terms = {n: [DiffTerm(n, 0)] for n in c.names}
    for sq in c.squares:
        terms[sq.a].append(DiffTerm(sq.e, 0))
    return FilteredMorphism(terms, "filtered", 0, "Sarkar map")


def conjectural_sarkar_map(c: ModelComplex) -> FilteredMorphism:
    """``1 + U^-1 (sum_{i odd} d_ij)(sum_{j odd} d_ij)``, with ``d_ij`` the part of
    the differential dropping the filtration by ``(i, j)``."""
    gens = c.by_name

    def pieces(odd_axis: int) -> dict[str, tuple[DiffTerm, ...]]:
        out = {}
        for g in c.generators:
            keep = []
            for t in c.differential[g.name]:
                tg = gens[t.target]
                drop = (g.i - tg.i + t.upower, g.j - tg.j + t.upower)
                if drop[odd_axis] % 2 == 1:
                    keep.append(t)
            out[g.name] = tuple(keep)
        return out

    i_odd, j_odd = pieces(0), pieces(1)
    terms = {}
    for n in c.names:
        acc = {(n, 0)}
        for (tgt, k) in compose_terms(j_odd, i_odd, n):
            if k - 1 < 0:
                raise SarkarFormulaError(
                    f"composite on {n!r} contains U^{k} {tgt}; dividing by U leaves a negative power"
                )
            acc ^= {(tgt, k - 1)}
        terms[n] = tuple(DiffTerm(t, k) for t, k in sorted(acc))
    return FilteredMorphism(terms, "filtered", 0, "conjectural Sarkar formula")


def default_involution(c: ModelComplex) -> FilteredMorphism:
    if c.provenance == "thin":
        return thin_involution(c)
    return standard_staircase_involution(c)


# ---------------------------------------------------------------------------
# Verification


def is_filtered(src: Generator, tgt: Generator, k: int) -> bool:
    return tgt.i - k <= src.i and tgt.j - k <= src.j


def is_skew_filtered(src: Generator, tgt: Generator, k: int) -> bool:
    return tgt.i - k <= src.j and tgt.j - k <= src.i


@dataclass
class InvolutionReport:
    violations: list[tuple[str, str]] = field(default_factory=list)
    square_status: str = "skipped"  # exact | homotopic | no-homotopy | skipped
    sarkar_source: str = "none"
    homotopy: FilteredMorphism | None = None
    homotopy_filtered: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.square_status in ("exact", "homotopic", "skipped")

    def kinds(self) -> set[str]:
        return {k for k, _ in self.violations}

    def lines(self) -> list[str]:
        out = [f"{k}: {msg}" for k, msg in self.violations]
        out.append(f"iota^2 vs {self.sarkar_source}: {self.square_status}")
        if self.homotopy is not None:
            out.append(f"homotopy filtered: {self.homotopy_filtered}")
        return out


def _fmt(terms: Iterable[tuple[str, int]]) -> str:
    items = sorted(terms)
    return " + ".join(f"U^{k} {t}" if k else t for t, k in items) or "0"


def verify_involution(
    c: ModelComplex,
    iota: FilteredMorphism,
    sarkar: FilteredMorphism | None = None,
    sarkar_source: str | None = None,
) -> InvolutionReport:
    """Check the conjugation-map axioms and compare ``iota^2`` with the Sarkar map.

    When ``sarkar`` is omitted the canonical map is used for built-in models;
    for user complexes the comparison is skipped.
    """
    report = InvolutionReport()
    gens = c.by_name
    names = c.names
    unknown = [n for n in iota.terms if n not in gens]
    for n in unknown:
        report.violations.append(("unknown-generator", f"iota defined on unknown generator {n!r}"))
    for n in names:
        if n not in iota.terms:
            report.violations.append(("missing", f"iota({n}) not given"))
        for t in iota.terms.get(n, ()):
            if t.target not in gens:
                report.violations.append(("unknown-target", f"iota({n}) mentions {t.target!r}"))
    if report.violations:
        return report
    for n in names:
        src = gens[n]
        for t in iota.terms[n]:
            tgt = gens[t.target]
            if tgt.maslov - 2 * t.upower != src.maslov + iota.maslov_shift:
                report.violations.append(("maslov", f"iota({n}) -> U^{t.upower} {t.target} changes the grading"))
            if not is_skew_filtered(src, tgt, t.upower):
                report.violations.append(("skew", f"iota({n}) -> U^{t.upower} {t.target} is not skew-filtered"))
    d_iota = compose(iota, c.differential, names)
    iota_d = compose(c.differential, iota, names)
    for n in names:
        if d_iota[n] != iota_d[n]:
            report.violations.append(
                ("chain-map", f"d(iota({n})) = {_fmt(d_iota[n])} but iota(d({n})) = {_fmt(iota_d[n])}")
            )
    sq = compose(iota, iota, names)
    for n in names:
        for t, k in sq[n]:
            if not is_filtered(gens[n], gens[t], k):
                report.violations.append(("square-filtration", f"iota^2({n}) contains U^{k} {t}, not filtered"))
    if sarkar is None and c.provenance != "user":
        sarkar = canonical_sarkar_map(c)
        sarkar_source = sarkar_source or "canonical Sarkar map"
    if sarkar is None:
        report.sarkar_source = "none (user complex)"
        return report
    report.sarkar_source = sarkar_source or sarkar.name or "Sarkar map"
    target = sarkar.as_sets()
    diff = add_maps(sq, target, names=names)
    if not any(diff.values()):
        report.square_status = "exact"
        return report
    h = solve_homotopy(c, diff)
    if h is None:
        report.square_status = "no-homotopy"
        return report
    report.square_status = "homotopic"
    report.homotopy = h
    report.homotopy_filtered = h.kind == "filtered"
    return report


def solve_homotopy(c: ModelComplex, rhs: Mapping[str, frozenset]) -> FilteredMorphism | None:
    """Find a U-equivariant H of degree +1 with ``dH + Hd = rhs``, or None."""
    gens = c.by_name
    names = c.names
    unknowns = []
    for x in names:
        for y in names:
            diff = gens[y].maslov - gens[x].maslov - 1
            if diff % 2 == 0:
                unknowns.append((x, y, diff // 2))
    rows: dict[tuple[str, str, int], int] = {}

    def row(key: tuple[str, str, int]) -> int:
        if key not in rows:
            rows[key] = len(rows)
        return rows[key]

    cols = []
    incoming: dict[str, list[tuple[str, int]]] = {n: [] for n in names}
    for w in names:
        for t in c.differential[w]:
            incoming[t.target].append((w, t.upower))
    for x, y, k in unknowns:
        col = 0
        # d(H(x)) picks up U^k d(y)
        for t in c.differential[y]:
            col ^= 1 << row((x, t.target, k + t.upower))
        # H(d(w)) for every w with U^u x in d(w): contributes to entry (w, y)
        for w, u in incoming[x]:
            col ^= 1 << row((w, y, u + k))
        cols.append(col)
    b = 0
    for x in names:
        for y, k in rhs.get(x, ()):
            b ^= 1 << row((x, y, k))
    m = F2Matrix.from_columns(cols, len(rows))
    sol = solve_linear(m, b)
    if sol is None:
        return None
    terms: dict[str, list[DiffTerm]] = {n: [] for n in names}
    filtered = True
    for idx, (x, y, k) in enumerate(unknowns):
        if (sol >> idx) & 1:
            terms[x].append(DiffTerm(y, k))
            if not is_filtered(gens[x], gens[y], k):
                filtered = False
    return FilteredMorphism(terms, "filtered" if filtered else "unfiltered", 1, "homotopy")
