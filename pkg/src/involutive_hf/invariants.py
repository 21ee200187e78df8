"""Graded homology, tower detection, and the d- and V-type invariants.

Homology of a truncation is computed grading by grading in the global element
basis. Induced U and Q maps are expressed in the chosen bases of cycle
representatives, so towers can be read off from images of ``U^m`` and
``U^m Q`` without choosing splittings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cone import (
    TruncatedComplex,
    build_a_plus,
    build_b_plus,
    default_depth,
    involutive_cone,
    required_depth,
    restrict_involution,
    tower_margin,
    v0_projection,
)
from .f2core import Eliminator, F2Matrix, iter_bits
from .involution import FilteredMorphism
from .knotcomplex import ModelComplex

__all__ = [
    "NoTower",
    "StabilizationError",
    "SurgeryTooSmall",
    "HomologySummary",
    "CorrectionTerms",
    "SurgeryReport",
    "graded_homology",
    "induced_map",
    "image_dim",
    "tower_bottom",
    "single_tower_bottom",
    "reduced_dims",
    "correction_terms",
    "surgery_report",
    "alternating_triple",
    "thin_triple",
    "thin_parameters",
    "arf_from_determinant",
    "froyshov_bound",
    "FroyshovBound",
    "KnotData",
    "CobordismVerdict",
    "cobordism_check",
    "euler_characteristic",
    "v0_tower_shift",
    "cone_rank_identity",
]

MODES = ("plain", "q-image", "non-q-image")


class NoTower(RuntimeError):
    """No grading in the trusted range carries a tower class."""


class StabilizationError(RuntimeError):
    """Invariants changed between truncation depths N and N + 2."""


class SurgeryTooSmall(ValueError):
    """The surgery coefficient is below the range where the large surgery formula applies."""


@dataclass
class HomologySummary:
    """Per-grading homology with induced U and Q maps.

    ``reps[r]`` holds cycle representatives (bitsets over the element list),
    ``u_map[r][k]`` is the coordinate bitset of ``U * reps[r][k]`` in the
    basis of grading ``r - 2``, and likewise ``q_map`` into grading ``r - 1``.
    """

    dims: dict[int, int]
    reps: dict[int, list[int]]
    u_map: dict[int, list[int]]
    q_map: dict[int, list[int]] | None
    trust_max: int
    min_grading: int
    stable_from: int
    _solvers: dict[int, Eliminator] = field(default_factory=dict, repr=False)

    def coords(self, r: int, cycle: int) -> int:
        """Coordinates of a cycle of grading ``r`` in the chosen basis."""
        if not cycle or r not in self._solvers:
            return 0
        res, tag = self._solvers[r].reduce(cycle)
        if res:
            raise ValueError(f"vector in grading {r} is not a cycle")
        return tag

    def dim(self, r: int) -> int:
        return self.dims.get(r, 0)

    def nonzero_dims(self) -> dict[int, int]:
        return {r: d for r, d in sorted(self.dims.items()) if d}


def graded_homology(t: TruncatedComplex) -> HomologySummary:
    """Homology in every grading up to the truncation's trust bound."""
    groups = t.by_grading()
    dcols = t.boundary.columns
    gradings = sorted(groups)
    top = t.trust_max
    cycles: dict[int, list[int]] = {}
    boundaries: dict[int, list[int]] = {}
    for r in gradings:
        if r > top + 1:
            break
        elim = Eliminator()
        found = []
        for e in groups[r]:
            rel = elim.absorb(dcols[e], 1 << e)
            if rel is not None:
                found.append(rel)
        cycles[r] = found
        boundaries[r - 1] = elim.vectors()
    reps: dict[int, list[int]] = {}
    solvers: dict[int, Eliminator] = {}
    dims: dict[int, int] = {}
    for r in gradings:
        if r > top:
            break
        elim = Eliminator()
        for vec in boundaries.get(r, ()):
            elim.absorb(vec, 0)
        basis = []
        for z in cycles.get(r, ()):
            if elim.absorb(z, 1 << len(basis)) is None:
                basis.append(z)
        reps[r] = basis
        solvers[r] = elim
        dims[r] = len(basis)
    h = HomologySummary(dims, reps, {}, None, top, t.min_grading, t.stable_from, solvers)
    h.u_map = {r: [h.coords(r - 2, t.u_action.apply(z)) for z in reps[r]] for r in reps}
    if t.q_action is not None:
        h.q_map = {r: [h.coords(r - 1, t.q_action.apply(z)) for z in reps[r]] for r in reps}
    return h


def induced_map(h_src: HomologySummary, h_dst: HomologySummary, m: F2Matrix, shift: int = 0) -> dict[int, list[int]]:
    """Matrix (per grading) of the map induced by the chain map ``m`` of degree ``shift``."""
    out = {}
    for r, basis in h_src.reps.items():
        if r + shift > h_dst.trust_max:
            continue
        out[r] = [h_dst.coords(r + shift, m.apply(z)) for z in basis]
    return out


def _apply(cols: Sequence[int], v: int) -> int:
    out = 0
    for k in iter_bits(v):
        out ^= cols[k]
    return out


def _rank(vectors: Sequence[int]) -> int:
    elim = Eliminator()
    return sum(1 for v in vectors if elim.absorb(v) is None)


def _image_vectors(h: HomologySummary, r: int, m: int, with_q: bool) -> list[int]:
    src = r + 2 * m + (1 if with_q else 0)
    if src not in h.reps:
        return []
    vecs = [1 << k for k in range(len(h.reps[src]))]
    g = src
    if with_q:
        if h.q_map is None:
            raise ValueError("complex has no Q action")
        vecs = [_apply(h.q_map[g], v) for v in vecs]
        g -= 1
    for _ in range(m):
        if g - 2 not in h.reps:
            return []
        vecs = [_apply(h.u_map[g], v) for v in vecs]
        g -= 2
    return vecs


def image_dim(h: HomologySummary, r: int, m: int, with_q: bool = False) -> int:
    """``dim Im(U^m)`` (or ``Im(U^m Q)``) inside homology of grading ``r``."""
    return _rank(_image_vectors(h, r, m, with_q))


def tower_bottom(h: HomologySummary, margin: int, mode: str = "plain") -> int:
    """Lowest grading carrying a class that survives ``margin`` U-steps.

    plain: ``Im(U^m)`` is nonzero; q-image: ``Im(U^m Q)`` is nonzero;
    non-q-image: ``Im(U^m)`` is strictly bigger than ``Im(U^m Q)``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown tower mode {mode!r}")
    extra = 0 if mode == "plain" else 1
    last = h.trust_max - 2 * margin - extra
    for r in range(h.min_grading, last + 1):
        if mode == "plain":
            hit = image_dim(h, r, margin) > 0
        elif mode == "q-image":
            hit = image_dim(h, r, margin, True) > 0
        else:
            hit = image_dim(h, r, margin) > image_dim(h, r, margin, True)
        if hit:
            return r
    raise NoTower(f"no {mode} tower class in gradings {h.min_grading}..{last}")


def _margin(h: HomologySummary) -> int:
    return tower_margin(h.stable_from, h.min_grading)


def single_tower_bottom(h: HomologySummary) -> int:
    """Bottom of the only tower, checking that nothing else is present."""
    bottom = tower_bottom(h, _margin(h))
    for r in range(h.min_grading, h.trust_max + 1):
        want = 1 if r >= bottom and (r - bottom) % 2 == 0 else 0
        if h.dim(r) != want:
            raise NoTower(f"homology has dimension {h.dim(r)} in grading {r}, expected {want} for a single tower")
    return bottom


def reduced_dims(h: HomologySummary, bottoms: Sequence[int]) -> dict[int, int]:
    """Homology minus one class per tower in each grading the tower occupies."""
    out = {}
    for r in range(h.min_grading, h.trust_max + 1):
        towers = sum(1 for b in bottoms if r >= b and (r - b) % 2 == 0)
        extra = h.dim(r) - towers
        if extra < 0:
            raise NoTower(f"grading {r}: homology of dimension {h.dim(r)} cannot hold {towers} tower classes")
        if extra:
            out[r] = extra
    return out


def euler_characteristic(dims: Mapping[int, int]) -> int:
    return sum(d if r % 2 == 0 else -d for r, d in dims.items())


# ---------------------------------------------------------------------------
# The pipeline


@dataclass(frozen=True)
class CorrectionTerms:
    V0: int
    Vlower: int
    Vupper: int
    dA: int
    dAlower: int
    dAupper: int
    dB: int
    ai_bottoms: tuple[int, int]
    reduced_dims: dict
    reduced_dims_a: dict
    a_dims: dict = field(compare=False)
    ai_dims: dict = field(compare=False)
    depth: int = field(default=0, compare=False)

    @property
    def triple(self) -> tuple[int, int, int]:
        """``(V_lower, V0, V_upper)``."""
        return (self.Vlower, self.V0, self.Vupper)


def _pipeline(c: ModelComplex, iota: FilteredMorphism, depth: int) -> CorrectionTerms:
    a = build_a_plus(c, depth)
    b = build_b_plus(c, depth)
    ai = involutive_cone(a, restrict_involution(iota, a))
    ha, hb, hai = graded_homology(a), graded_homology(b), graded_homology(ai)
    d_a = tower_bottom(ha, _margin(ha))
    d_b = single_tower_bottom(hb)
    first = tower_bottom(hai, _margin(hai), "non-q-image")
    second = tower_bottom(hai, _margin(hai), "q-image")
    d_lower, d_upper = first - 1, second
    for label, val in (("d_B - d_A", d_b - d_a), ("d_A - lower", d_a - d_lower), ("d_A - upper", d_a - d_upper)):
        if val % 2:
            raise ArithmeticError(f"{label} = {val} is odd; gradings are inconsistent")
    v0 = (d_b - d_a) // 2
    return CorrectionTerms(
        V0=v0,
        Vlower=v0 + (d_a - d_lower) // 2,
        Vupper=v0 + (d_a - d_upper) // 2,
        dA=d_a,
        dAlower=d_lower,
        dAupper=d_upper,
        dB=d_b,
        ai_bottoms=(first, second),
        reduced_dims=reduced_dims(hai, (first, second)),
        reduced_dims_a=reduced_dims(ha, (d_a,)),
        a_dims=ha.nonzero_dims(),
        ai_dims=hai.nonzero_dims(),
        depth=depth,
    )


def correction_terms(
    c: ModelComplex, iota: FilteredMorphism, depth: int | None = None, check_stability: bool = True
) -> CorrectionTerms:
    """V0, V_lower, V_upper and the A-level tower data of a knot complex.

    The computation is repeated at depth ``N + 2``; any disagreement raises
    StabilizationError.
    """
    need = required_depth(c)
    if depth is None:
        depth = default_depth(c)
    elif depth < need:
        raise ValueError(f"depth {depth} is too small for this complex; need at least {need}")
    terms = _pipeline(c, iota, depth)
    if check_stability:
        again = _pipeline(c, iota, depth + 2)
        if again != terms:
            raise StabilizationError(f"invariants differ between depth {depth} and {depth + 2}")
    return terms


def v0_tower_shift(c: ModelComplex, depth: int | None = None) -> int:
    """Read V0 from the projection A0+ -> B+ directly.

    Returns ``(r - d_A) / 2`` for the lowest grading ``r`` where the tower of
    H(A0+) maps nontrivially to H(B+).
    """
    depth = depth or default_depth(c)
    a, b = build_a_plus(c, depth), build_b_plus(c, depth)
    ha, hb = graded_homology(a), graded_homology(b)
    m = _margin(ha)
    d_a = tower_bottom(ha, m)
    v = v0_projection(a, b)
    for r in range(d_a, ha.trust_max - 2 * m + 1, 2):
        tower = _image_vectors(ha, r, m, False)
        for vec in tower:
            cycle = 0
            for k in iter_bits(vec):
                cycle ^= ha.reps[r][k]
            if hb.coords(r, v.apply(cycle)):
                return (r - d_a) // 2
    raise NoTower("v0 kills the tower in the trusted range")


def cone_rank_identity(c: ModelComplex, iota: FilteredMorphism, depth: int | None = None) -> dict[int, tuple[int, int]]:
    """Per grading ``r``: (dim H_r(AI), dim ker(1+iota)_* on H_{r-1} + dim coker on H_r)."""
    depth = depth or default_depth(c)
    a = build_a_plus(c, depth)
    f = restrict_involution(iota, a)
    ha = graded_homology(a)
    hai = graded_homology(involutive_cone(a, f))
    n = len(a)
    one_plus = F2Matrix.from_columns([col ^ (1 << k) for k, col in enumerate(f.columns)], n)
    fmap = induced_map(ha, ha, one_plus)
    out = {}
    for r in range(hai.min_grading, hai.trust_max + 1):
        ker_prev = ha.dim(r - 1) - _rank(fmap.get(r - 1, []))
        coker = ha.dim(r) - _rank(fmap.get(r, []))
        out[r] = (hai.dim(r), ker_prev + coker)
    return out


# ---------------------------------------------------------------------------
# Surgery reports and closed forms


@dataclass(frozen=True)
class SurgeryReport:
    p: int
    d: Fraction
    dlower: Fraction
    dupper: Fraction
    tower_bottoms: tuple[int, int]
    reduced_dims: dict
    terms: CorrectionTerms

    def reversed(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(d_lower, d, d_upper)`` of the orientation-reversed manifold."""
        return (-self.dupper, -self.d, -self.dlower)


def surgery_report(
    c: ModelComplex, iota: FilteredMorphism, p: int, terms: CorrectionTerms | None = None, depth: int | None = None
) -> SurgeryReport:
    need = max(1, c.genus)
    if p < need:
        raise SurgeryTooSmall(f"surgery coefficient {p} is below max(1, genus) = {need}")
    if terms is None:
        terms = correction_terms(c, iota, depth)
    base = Fraction(p - 1, 4)
    return SurgeryReport(
        p,
        base - 2 * terms.V0,
        base - 2 * terms.Vlower,
        base - 2 * terms.Vupper,
        terms.ai_bottoms,
        terms.reduced_dims,
        terms,
    )


def alternating_triple(sigma: int, arf: int) -> tuple[int, int, int]:
    """``(V_lower, V0, V_upper)`` for an alternating knot, from signature and Arf invariant."""
    if sigma % 2:
        raise ValueError("signature must be even")
    if arf not in (0, 1):
        raise ValueError("Arf invariant must be 0 or 1")
    if sigma <= 0:
        k, res = divmod(-sigma, 8)
        table = {
            0: ((2 * k, 2 * k, 2 * k), (2 * k + 1, 2 * k, 2 * k)),
            2: ((2 * k + 1, 2 * k + 1, 2 * k), (2 * k + 1, 2 * k + 1, 2 * k + 1)),
            4: ((2 * k + 2, 2 * k + 1, 2 * k + 1), (2 * k + 1, 2 * k + 1, 2 * k + 1)),
            6: ((2 * k + 2, 2 * k + 2, 2 * k + 2), (2 * k + 2, 2 * k + 2, 2 * k + 1)),
        }
    else:
        k, res = divmod(sigma, 8)
        table = {
            0: ((0, 0, -2 * k), (0, 0, -2 * k)),
            2: ((0, 0, -2 * k), (0, 0, -2 * k - 1)),
            4: ((0, 0, -2 * k - 1), (0, 0, -2 * k - 1)),
            6: ((0, 0, -2 * k - 2), (0, 0, -2 * k - 1)),
        }
    return table[res][arf]


def thin_triple(tau: int, odd_squares: bool) -> tuple[int, int, int]:
    """``(V_lower, V0, V_upper)`` of a thin knot from tau and the parity of the square count."""
    n = (abs(tau) + 1) // 2
    if not odd_squares:
        return (n, n, n) if tau >= 0 else (0, 0, -n)
    if tau == 0:
        return (1, 0, 0)
    if tau > 0:
        return (n, n, n - 1) if tau % 2 else (n + 1, n, n)
    return (0, 0, -n + 1) if tau % 2 else (0, 0, -n)


def arf_from_determinant(det: int) -> int:
    return 0 if det % 8 in (1, 7) else 1


def thin_parameters(sigma: int, arf: int) -> tuple[int, int]:
    """``(tau, squares)`` of the smallest thin canonical model with this signature and Arf."""
    tau = -sigma // 2
    for squares in (0, 1):
        if arf_from_determinant(2 * abs(tau) + 1 + 4 * squares) == arf:
            return tau, squares
    raise AssertionError("unreachable: one square count always matches")


@dataclass(frozen=True)
class FroyshovBound:
    bound: Fraction
    obstructed: bool

    @property
    def max_rank(self) -> int | None:
        return None if self.obstructed else int(self.bound)


def froyshov_bound(dlower: Fraction | int) -> FroyshovBound:
    """Bound ``4 d_lower`` on the rank of a negative-definite spin filling.

    ``obstructed`` means no such filling exists at all.
    """
    bound = 4 * Fraction(dlower)
    return FroyshovBound(bound, bound < 0)


@dataclass(frozen=True)
class KnotData:
    triple: tuple[int, int, int]
    arf: int | None = None
    genus: int | None = None
    label: str = ""

    @classmethod
    def from_signature(cls, sigma: int, arf: int, label: str = "") -> KnotData:
        return cls(alternating_triple(sigma, arf), arf, None, label or f"sigma={sigma},Arf={arf}")


@dataclass(frozen=True)
class CobordismVerdict:
    obstructed: bool
    reasons: tuple[str, ...]

    @property
    def status(self) -> str:
        return "obstructed" if self.obstructed else "consistent"


def rokhlin(p: int, arf: int) -> Fraction:
    """Rokhlin invariant of p-surgery, ``(1 - p)/8 + Arf`` modulo 2."""
    return (Fraction(1 - p, 8) + arf) % 2


def cobordism_check(k1: KnotData, k2: KnotData, p: int) -> CobordismVerdict:
    """Can p-surgeries on the two knots be Z2-homology cobordant?"""
    if p <= 0 or p % 2 == 0:
        raise ValueError("p must be an odd positive integer")
    for k in (k1, k2):
        if k.genus is not None and p < k.genus:
            raise SurgeryTooSmall(f"p = {p} is below the genus of {k.label or 'a knot'}")
    reasons = []
    base = Fraction(p - 1, 4)
    if k1.triple != k2.triple:
        names = ("d_lower", "d", "d_upper")
        diffs = [
            f"{n}: {base - 2 * a} vs {base - 2 * b}" for n, a, b in zip(names, k1.triple, k2.triple) if a != b
        ]
        reasons.append("correction terms differ (" + "; ".join(diffs) + ")")
    if k1.arf is not None and k2.arf is not None and k1.arf != k2.arf:
        reasons.append(f"Rokhlin invariants differ ({rokhlin(p, k1.arf)} vs {rokhlin(p, k2.arf)})")
    return CobordismVerdict(bool(reasons), tuple(reasons))
