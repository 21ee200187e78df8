"""Model complexes for CFK-infinity.

A model complex is a finite F2 basis of generators, each with a filtration
bigrading ``(i, j)`` and a Maslov grading, plus a differential whose terms
are ``U^k * target`` with ``k >= 0``. The element ``U^k x`` sits at
``(i - k, j - k)`` with Maslov grading ``M - 2k``; the full complex is the
model tensored with F2[U, U^-1].

Constructors cover the unknot, L-space staircases (from a torsion sequence or
an Alexander polynomial), their mirrors, and thin canonical complexes
(step-length-one staircase plus square complexes).
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Generator",
    "DiffTerm",
    "SquareInfo",
    "ModelComplex",
    "Violation",
    "ValidationReport",
    "NotLSpaceForm",
    "ComplexError",
    "LSpaceData",
    "from_alexander_lspace",
    "torus_alexander",
    "build_unknot",
    "build_staircase",
    "build_mirror_staircase",
    "build_thin_canonical",
    "validate_complex",
    "assign_relative_maslov",
    "normalize_maslov",
    "compose_terms",
]

PROVENANCES = ("unknot", "staircase", "mirror-staircase", "thin", "user")


class ComplexError(ValueError):
    """A model complex is malformed or unsuitable for the requested operation."""


class NotLSpaceForm(ComplexError):
    """An Alexander polynomial is not of the alternating +-1 L-space form."""


@dataclass(frozen=True)
class Generator:
    name: str
    i: int
    j: int
    maslov: int


@dataclass(frozen=True)
class DiffTerm:
    """The term ``U^upower * target``."""

    target: str
    upower: int = 0


@dataclass(frozen=True)
class SquareInfo:
    """Bookkeeping for one square complex inside a thin canonical model."""

    a: str
    b: str
    c: str
    e: str
    corner: tuple[int, int]
    partner: int | None = None  # index of the mirrored square, None for the diagonal one
    shift: int = 0


@dataclass(frozen=True)
class ModelComplex:
    generators: tuple[Generator, ...]
    differential: Mapping[str, tuple[DiffTerm, ...]]
    tau: int | None = None
    provenance: str = "user"
    torsion: tuple[int, ...] = ()
    squares: tuple[SquareInfo, ...] = ()
    name: str = ""

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ComplexError(f"duplicate generator names: {dup}")
        if self.provenance not in PROVENANCES:
            raise ComplexError(f"unknown provenance {self.provenance!r}")
        diff = {n: tuple(self.differential.get(n, ())) for n in names}
        extra = set(self.differential) - set(names)
        if extra:
            raise ComplexError(f"differential given for unknown generators: {sorted(extra)}")
        object.__setattr__(self, "differential", diff)

    @property
    def by_name(self) -> dict[str, Generator]:
        return {g.name: g for g in self.generators}

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def genus(self) -> int:
        """Largest Alexander grading ``j - i`` over the generators."""
        return max((g.j - g.i for g in self.generators), default=0)

    @property
    def diameter(self) -> int:
        if not self.generators:
            return 0
        iv = [g.i for g in self.generators]
        jv = [g.j for g in self.generators]
        return max(iv) - min(iv) + max(jv) - min(jv)

    def with_maslov(self, gradings: Mapping[str, int]) -> ModelComplex:
        gens = tuple(replace(g, maslov=gradings[g.name]) for g in self.generators)
        return replace(self, generators=gens)

    def shifted(self, delta: int) -> ModelComplex:
        return self.with_maslov({g.name: g.maslov + delta for g in self.generators})


# ---------------------------------------------------------------------------
# Alexander polynomials and torsion sequences


@dataclass(frozen=True)
class LSpaceData:
    torsion: tuple[int, ...]
    n: int  # n_m - n_{m-1} + ... +- n_1


def _alternating_sum(torsion: Sequence[int]) -> int:
    total = 0
    for k, value in enumerate(reversed(torsion)):
        total += value if k % 2 == 0 else -value
    return total


def _as_coefficients(coeffs: Mapping[int, int] | Sequence[int]) -> dict[int, int]:
    if isinstance(coeffs, Mapping):
        out = {int(e): int(c) for e, c in coeffs.items() if c}
    else:
        seq = list(coeffs)
        if len(seq) % 2 == 0:
            raise ValueError("a centred coefficient list must have odd length")
        half = len(seq) // 2
        out = {k - half: int(c) for k, c in enumerate(seq) if c}
    return out


def from_alexander_lspace(coeffs: Mapping[int, int] | Sequence[int]) -> LSpaceData:
    """Read the torsion sequence off an L-space-form Alexander polynomial.

    ``coeffs`` maps exponents to integer coefficients, or is a list of
    coefficients from ``t^-d`` up to ``t^d``. The unknot (``1``) gives an empty
    sequence.
    """
    poly = _as_coefficients(coeffs)
    for e, c in poly.items():
        if poly.get(-e, 0) != c:
            raise NotLSpaceForm(f"not symmetric: coefficient of t^{e} is {c}, of t^{-e} is {poly.get(-e, 0)}")
    positive = sorted(e for e in poly if e > 0)
    m = len(positive)
    for e in positive:
        if poly[e] not in (1, -1):
            raise NotLSpaceForm(f"coefficient of t^{e} is {poly[e]}, expected +-1")
    for rank, e in enumerate(positive, start=1):
        expected = (-1) ** (m - rank)
        if poly[e] != expected:
            raise NotLSpaceForm(f"coefficient of t^{e} is {poly[e]}, expected {expected} (signs must alternate)")
    if poly.get(0, 0) != (-1) ** m:
        raise NotLSpaceForm(f"constant term is {poly.get(0, 0)}, expected {(-1) ** m}")
    torsion = tuple(positive)
    return LSpaceData(torsion, _alternating_sum(torsion))


def _poly_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[ea + eb] += ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_divexact(num: dict[int, int], den: dict[int, int]) -> dict[int, int]:
    """Exact division of integer polynomials in nonnegative powers."""
    num = dict(num)
    dtop = max(den)
    dlead = den[dtop]
    quot: dict[int, int] = {}
    while num:
        top = max(num)
        if top < dtop:
            raise ValueError("polynomial division is not exact")
        coef, rem = divmod(num[top], dlead)
        if rem:
            raise ValueError("polynomial division is not exact")
        shift = top - dtop
        quot[shift] = coef
        for e, c in den.items():
            v = num.get(e + shift, 0) - coef * c
            if v:
                num[e + shift] = v
            else:
                num.pop(e + shift, None)
    return quot


def torus_alexander(p: int, q: int) -> dict[int, int]:
    """Symmetrized Alexander polynomial of the (p, q) torus knot.

    Computed as (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)) and centred.
    """
    p, q = abs(p), abs(q)
    if p < 1 or q < 1:
        raise ValueError("torus knot parameters must be nonzero")
    from math import gcd

    if gcd(p, q) != 1:
        raise ValueError(f"T({p},{q}) is a link, not a knot")
    num = _poly_mul({p * q: 1, 0: -1}, {1: 1, 0: -1})
    den = _poly_mul({p: 1, 0: -1}, {q: 1, 0: -1})
    quot = _poly_divexact(num, den)
    degree = max(quot)
    if degree % 2:
        raise ValueError("unexpected odd-degree Alexander polynomial")
    return {e - degree // 2: c for e, c in quot.items()}


# ---------------------------------------------------------------------------
# Constructors


def _check_torsion(torsion: Sequence[int]) -> tuple[int, ...]:
    seq = tuple(int(n) for n in torsion)
    if not seq:
        raise ComplexError("torsion sequence must be nonempty (use build_unknot for the unknot)")
    prev = 0
    for n in seq:
        if n <= prev:
            raise ComplexError(f"torsion sequence must satisfy 0 < n_1 < ... < n_m, got {list(seq)}")
        prev = n
    return seq


def build_unknot() -> ModelComplex:
    return ModelComplex(
        (Generator("x0", 0, 0, 0),), {"x0": ()}, tau=0, provenance="unknot", name="unknot"
    )


def _staircase_positions(torsion: tuple[int, ...]) -> dict[int, tuple[int, int]]:
    """Positions of ``x_s^1`` for the L-space staircase; ``x_s^2`` is the transpose."""
    m = len(torsion)
    pos = {0: (0, 0)}
    prev_n = 0
    for s in range(1, m + 1):
        step = torsion[s - 1] - prev_n
        prev_n = torsion[s - 1]
        i, j = pos[s - 1]
        pos[s] = (i - step, j) if (m - s) % 2 == 0 else (i, j + step)
    return pos


def _stair_name(s: int, t: int) -> str:
    return "x0" if s == 0 else f"x{s}_{t}"


def _staircase_edges(m: int, sources_parity: int) -> list[tuple[str, str]]:
    """Arrows of a staircase: each source ``x_s`` (``(m - s) % 2 == sources_parity``)
    maps to its neighbours."""
    edges = []
    for s in range(m + 1):
        if (m - s) % 2 != sources_parity:
            continue
        for nb in (s - 1, s + 1):
            if nb < 0 or nb > m:
                continue
            if s == 0:
                edges.extend([("x0", _stair_name(1, 1)), ("x0", _stair_name(1, 2))])
                break
            for t in (1, 2):
                edges.append((_stair_name(s, t), _stair_name(nb, t)))
    return edges


def _staircase(torsion: Sequence[int], mirror: bool, normalize: bool) -> ModelComplex:
    seq = _check_torsion(torsion)
    m = len(seq)
    pos = _staircase_positions(seq)
    if mirror:
        pos = {s: (-i, -j) for s, (i, j) in pos.items()}
    coords = {"x0": (0, 0)}
    for s in range(1, m + 1):
        i, j = pos[s]
        coords[_stair_name(s, 1)] = (i, j)
        coords[_stair_name(s, 2)] = (j, i)
    # the mirror is the dual staircase: same shape, arrows reversed
    edges = _staircase_edges(m, 1)
    if mirror:
        edges = [(b, a) for a, b in _staircase_edges(m, 1)]
    diff: dict[str, list[DiffTerm]] = {n: [] for n in coords}
    for src, tgt in edges:
        diff[src].append(DiffTerm(tgt, 0))
    order = ["x0"] + [_stair_name(s, t) for s in range(1, m + 1) for t in (1, 2)]
    rel = _relative_maslov_from_edges(order, edges)
    gens = tuple(Generator(n, coords[n][0], coords[n][1], rel[n]) for n in order)
    kind = "mirror-staircase" if mirror else "staircase"
    cx = ModelComplex(
        gens,
        {n: tuple(diff[n]) for n in order},
        tau=-seq[-1] if mirror else seq[-1],
        provenance=kind,
        torsion=seq,
        name=f"{kind}{list(seq)}",
    )
    return normalize_maslov(cx) if normalize else cx


def _relative_maslov_from_edges(order: Sequence[str], edges: Sequence[tuple[str, str]]) -> dict[str, int]:
    adj: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for a, b in edges:
        adj[a].append((b, -1))
        adj[b].append((a, 1))
    out = {order[0]: 0}
    queue = deque([order[0]])
    while queue:
        cur = queue.popleft()
        for nb, delta in adj[cur]:
            if nb not in out:
                out[nb] = out[cur] + delta
                queue.append(nb)
    return out


def build_staircase(torsion: Sequence[int], normalize: bool = True) -> ModelComplex:
    """Staircase model for the L-space knot with the given torsion sequence."""
    return _staircase(torsion, mirror=False, normalize=normalize)


def build_mirror_staircase(torsion: Sequence[int], normalize: bool = True) -> ModelComplex:
    """Staircase model for the mirror of an L-space knot.

    The corner ``x_m^1`` lands at ``(n, n - g)``; see the notes on the mirror
    corner in the project documentation.
    """
    return _staircase(torsion, mirror=True, normalize=normalize)


def _square(prefix: str, suffix: str, ci: int, cj: int) -> tuple[list[Generator], dict[str, tuple[DiffTerm, ...]], SquareInfo]:
    a, b, c, e = (f"{x}{prefix}{suffix}" for x in "abce")
    gens = [
        Generator(a, ci, cj, 0),
        Generator(b, ci - 1, cj, 0),
        Generator(c, ci, cj - 1, 0),
        Generator(e, ci, cj, 0),
    ]
    diff = {
        a: (DiffTerm(b, 0), DiffTerm(c, 0)),
        b: (DiffTerm(e, 1),),
        c: (DiffTerm(e, 1),),
        e: (),
    }
    return gens, diff, SquareInfo(a, b, c, e, (ci, cj))


def build_thin_canonical(
    tau: int, squares: int, diagonal_shift: Sequence[int] | None = None
) -> ModelComplex:
    """Thin canonical model: a step-length-one staircase plus square complexes.

    Square pairs ``p = 1, 2, ...`` have initial corners at ``(p, -p)`` and
    ``(-p, p)``; an odd leftover square sits on the diagonal with its initial
    corner at ``(0, 0)``. ``diagonal_shift`` optionally moves square ``s`` by
    ``(delta, delta)`` (mirrored squares must share a shift). Maslov gradings
    are ``i + j - tau``.
    """
    if squares < 0:
        raise ComplexError("number of squares must be nonnegative")
    shifts = list(diagonal_shift) if diagonal_shift is not None else [0] * squares
    if len(shifts) != squares:
        raise ComplexError(f"expected {squares} diagonal shifts, got {len(shifts)}")
    m = abs(tau)
    if m == 0:
        base = build_unknot()
    else:
        base = _staircase(range(1, m + 1), mirror=tau < 0, normalize=False)
    gens = list(base.generators)
    diff = dict(base.differential)
    infos: list[SquareInfo] = []
    pairs = squares // 2
    for p in range(1, pairs + 1):
        s1, s2 = 2 * p - 2, 2 * p - 1
        if shifts[s1] != shifts[s2]:
            raise ComplexError(f"squares {s1} and {s2} form a mirrored pair and need equal shifts")
        d = shifts[s1]
        g1, d1, i1 = _square(str(p), "", p + d, -p + d)
        g2, d2, i2 = _square(str(p), "'", -p + d, p + d)
        gens += g1 + g2
        diff.update(d1)
        diff.update(d2)
        infos.append(replace(i1, partner=s2, shift=d))
        infos.append(replace(i2, partner=s1, shift=d))
    if squares % 2:
        d = shifts[-1]
        g1, d1, i1 = _square("", "", d, d)
        gens += g1
        diff.update(d1)
        infos.append(replace(i1, shift=d))
    gens = [replace(g, maslov=g.i + g.j - tau) for g in gens]
    return ModelComplex(
        tuple(gens),
        diff,
        tau=tau,
        provenance="thin",
        torsion=tuple(range(1, m + 1)),
        squares=tuple(infos),
        name=f"thin(tau={tau},squares={squares})",
    )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Violation:
    kind: str  # unknown-target | negative-upower | filtration | maslov | d-squared
    where: str
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, where: str, detail: str) -> None:
        self.violations.append(Violation(kind, where, detail))

    def lines(self) -> list[str]:
        return [f"{v.kind}: {v.where}: {v.detail}" for v in self.violations]


def compose_terms(
    first: Mapping[str, Iterable[DiffTerm]], second: Mapping[str, Iterable[DiffTerm]], name: str
) -> dict[tuple[str, int], int]:
    """Coefficients of ``second(first(name))`` as ``{(target, upower): 1}``."""
    acc: dict[tuple[str, int], int] = {}
    for t1 in first.get(name, ()):
        for t2 in second.get(t1.target, ()):
            key = (t2.target, t1.upower + t2.upower)
            if key in acc:
                del acc[key]
            else:
                acc[key] = 1
    return acc


def validate_complex(c: ModelComplex, check_maslov: bool = True) -> ValidationReport:
    report = ValidationReport()
    gens = c.by_name
    for g in c.generators:
        for term in c.differential[g.name]:
            tgt = gens.get(term.target)
            where = f"d({g.name}) -> U^{term.upower} {term.target}"
            if tgt is None:
                report.add("unknown-target", where, "target is not a generator")
                continue
            if term.upower < 0:
                report.add("negative-upower", where, "differential terms need U-power >= 0")
            if tgt.i - term.upower > g.i or tgt.j - term.upower > g.j:
                report.add(
                    "filtration",
                    where,
                    f"lands at ({tgt.i - term.upower},{tgt.j - term.upower}) above source ({g.i},{g.j})",
                )
            if check_maslov and tgt.maslov - 2 * term.upower != g.maslov - 1:
                report.add(
                    "maslov",
                    where,
                    f"grading {tgt.maslov - 2 * term.upower}, expected {g.maslov - 1}",
                )
    if "unknown-target" in report.kinds():
        return report
    for g in c.generators:
        sq = compose_terms(c.differential, c.differential, g.name)
        if sq:
            terms = ", ".join(f"U^{k} {t}" for t, k in sorted(sq))
            report.add("d-squared", g.name, f"d^2({g.name}) = {terms}")
    return report


def assign_relative_maslov(c: ModelComplex) -> ModelComplex:
    """Fill in Maslov gradings from the differential alone (up to a shift).

    Requires the generators to be connected through differential arrows;
    otherwise the relative gradings are undetermined.
    """
    gens = c.by_name
    adj: dict[str, list[tuple[str, int]]] = defaultdict(list)
    for src, terms in c.differential.items():
        for t in terms:
            if t.target not in gens:
                raise ComplexError(f"d({src}) mentions unknown generator {t.target!r}")
            # M(target) - 2k = M(src) - 1
            adj[src].append((t.target, 2 * t.upower - 1))
            adj[t.target].append((src, 1 - 2 * t.upower))
    names = c.names
    if not names:
        return c
    out = {names[0]: 0}
    queue = deque([names[0]])
    while queue:
        cur = queue.popleft()
        for nb, delta in adj[cur]:
            want = out[cur] + delta
            if nb not in out:
                out[nb] = want
                queue.append(nb)
            elif out[nb] != want:
                raise ComplexError(f"inconsistent relative Maslov gradings around {nb!r}")
    missing = [n for n in names if n not in out]
    if missing:
        raise ComplexError(
            "generators are not connected by differentials, so relative Maslov gradings are "
            f"undetermined (unreached: {missing}); supply maslov fields or tau metadata"
        )
    return c.with_maslov(out)


def normalize_maslov(c: ModelComplex) -> ModelComplex:
    """Shift all Maslov gradings so the bottom of the tower in H(B+) is 0."""
    from .cone import build_b_plus, default_depth
    from .invariants import NoTower, graded_homology, single_tower_bottom

    b = build_b_plus(c, default_depth(c))
    h = graded_homology(b)
    try:
        bottom = single_tower_bottom(h)
    except NoTower as exc:
        raise ComplexError(f"H(B+) is not a single tower: {exc}") from exc
    return c.shifted(-bottom) if bottom else c
