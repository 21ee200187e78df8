"""Finite truncations of A0+ and B+, the projection v0, and mapping cones.

A truncation keeps every element ``U^k x`` of the quotient region whose Maslov
grading is at most a cut-off ``G = max M + 2N``. Since the differential, U,
Q and the involution never raise the grading, that set is a subcomplex of the
full (infinite) quotient, and it contains every chain in gradings ``<= G``.
Homology is therefore exact in gradings ``<= G - 1``.

Elements are ordered by grading, then generator order, then U-power, so every
matrix built here is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .f2core import F2Matrix, iter_bits
from .involution import FilteredMorphism
from .knotcomplex import ModelComplex

__all__ = [
    "TruncElem",
    "TruncatedComplex",
    "build_a_plus",
    "build_b_plus",
    "build_region",
    "v0_projection",
    "restrict_involution",
    "involutive_cone",
    "direct_sum",
    "swap_map",
    "default_depth",
    "required_depth",
]

BASE = "base"
QCOPY = "q"


@dataclass(frozen=True)
class TruncElem:
    gen: str
    upower: int
    grading: int
    copy: str = BASE


@dataclass(frozen=True)
class TruncatedComplex:
    """A finite graded F2 complex with U (and optionally Q) actions.

    Matrix columns are images: column ``c`` of ``boundary`` is the boundary of
    element ``c``.

    ``full_from`` is the lowest grading from which every chain group agrees
    with the untruncated localisation (no element is missing because of the
    region), and ``trust_max`` is the highest grading in which homology is
    exact.
    """

    elements: tuple[TruncElem, ...]
    boundary: F2Matrix
    u_action: F2Matrix
    q_action: F2Matrix | None
    window: int
    trust_max: int
    full_from: int
    region: str = ""
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.index:
            idx = {(e.gen, e.upower, e.copy): n for n, e in enumerate(self.elements)}
            object.__setattr__(self, "index", idx)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def gradings(self) -> list[int]:
        return sorted({e.grading for e in self.elements})

    @property
    def min_grading(self) -> int:
        return min((e.grading for e in self.elements), default=0)

    @property
    def stable_from(self) -> int:
        """Lowest grading whose homology agrees with the localised complex."""
        return self.full_from + 1

    def by_grading(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for n, e in enumerate(self.elements):
            out.setdefault(e.grading, []).append(n)
        return out

    def check_structure(self) -> list[str]:
        """Return a list of broken structural identities (empty when sound)."""
        problems = []
        d, u, q = self.boundary, self.u_action, self.q_action
        if not (d @ d).is_zero():
            problems.append("boundary^2 != 0")
        if not ((d @ u) + (u @ d)).is_zero():
            problems.append("U does not commute with the boundary")
        grads = [e.grading for e in self.elements]
        for col, img in enumerate(d.columns):
            if any(grads[r] != grads[col] - 1 for r in iter_bits(img)):
                problems.append(f"boundary of element {col} is not homogeneous of degree -1")
                break
        for col, img in enumerate(u.columns):
            if any(grads[r] != grads[col] - 2 for r in iter_bits(img)):
                problems.append(f"U of element {col} is not homogeneous of degree -2")
                break
        if q is not None:
            if not (q @ q).is_zero():
                problems.append("Q^2 != 0")
            if not ((q @ u) + (u @ q)).is_zero():
                problems.append("Q does not commute with U")
            if not ((q @ d) + (d @ q)).is_zero():
                problems.append("Q does not commute with the boundary")
        return problems


def _grading_cut(c: ModelComplex, depth: int) -> int:
    return max((g.maslov for g in c.generators), default=0) + 2 * depth


def build_region(
    c: ModelComplex, depth: int, bound: Callable[[int, int], int], region: str
) -> TruncatedComplex:
    """Truncated quotient complex ``{U^k x : k <= bound(i(x), j(x))}``.

    The region must be closed upwards (a quotient), which holds for both
    ``max(i, j) >= 0`` and ``i >= 0``.
    """
    if depth < 1:
        raise ValueError("truncation depth must be at least 1")
    cut = _grading_cut(c, depth)
    raw = []
    for order, g in enumerate(c.generators):
        kmax = bound(g.i, g.j)
        kmin = -((cut - g.maslov) // 2)  # smallest k with M - 2k <= cut
        for k in range(kmin, kmax + 1):
            raw.append((g.maslov - 2 * k, order, k, g.name))
    raw.sort()
    elements = tuple(TruncElem(name, k, grading) for grading, _, k, name in raw)
    index = {(e.gen, e.upower, e.copy): n for n, e in enumerate(elements)}
    bcols, ucols = [], []
    for e in elements:
        col = 0
        for term in c.differential[e.gen]:
            hit = index.get((term.target, e.upower + term.upower, BASE))
            if hit is not None:
                col ^= 1 << hit
        bcols.append(col)
        hit = index.get((e.gen, e.upower + 1, BASE))
        ucols.append(1 << hit if hit is not None else 0)
    n = len(elements)
    full_from = max((g.maslov - 2 * bound(g.i, g.j) for g in c.generators), default=0)
    return TruncatedComplex(
        elements,
        F2Matrix.from_columns(bcols, n),
        F2Matrix.from_columns(ucols, n),
        None,
        depth,
        cut - 1,
        full_from,
        region,
        index,
    )


def build_a_plus(c: ModelComplex, depth: int) -> TruncatedComplex:
    """Truncation of the quotient ``C{max(i, j) >= 0}``."""
    return build_region(c, depth, lambda i, j: max(i, j), "A0+")


def build_b_plus(c: ModelComplex, depth: int) -> TruncatedComplex:
    """Truncation of the quotient ``C{i >= 0}``."""
    return build_region(c, depth, lambda i, j: i, "B+")


def v0_projection(a: TruncatedComplex, b: TruncatedComplex) -> F2Matrix:
    """Matrix of the quotient map A0+ -> B+ (columns indexed by A's elements)."""
    cols = []
    for e in a.elements:
        hit = b.index.get((e.gen, e.upower, e.copy))
        cols.append(1 << hit if hit is not None else 0)
    return F2Matrix.from_columns(cols, len(b))


def restrict_involution(iota: FilteredMorphism, a: TruncatedComplex) -> F2Matrix:
    """Matrix of the map induced by ``iota`` on a truncated quotient.

    Terms leaving the region are dropped; a skew-filtered map sends the
    excised subcomplex ``{i < 0 and j < 0}`` into itself, so this is well
    defined on A0+.
    """
    cols = []
    for e in a.elements:
        col = 0
        for term in iota.terms.get(e.gen, ()):
            hit = a.index.get((term.target, e.upower + term.upower, BASE))
            if hit is not None:
                col ^= 1 << hit
        cols.append(col)
    return F2Matrix.from_columns(cols, len(a))


def involutive_cone(t: TruncatedComplex, self_map: F2Matrix) -> TruncatedComplex:
    """Mapping cone of ``Q(1 + f)`` over F2[Q, U]/(Q^2).

    Base copies come first (grading shifted up by one), then the Q copies
    (original grading). The boundary is ``d + Q(1 + f)``.
    """
    n = len(t)
    if (self_map.nrows, self_map.ncols) != (n, n):
        raise ValueError("self map has the wrong size")
    elements = tuple(TruncElem(e.gen, e.upower, e.grading + 1, BASE) for e in t.elements) + tuple(
        TruncElem(e.gen, e.upower, e.grading, QCOPY) for e in t.elements
    )
    dcols = t.boundary.columns
    fcols = self_map.columns
    ucols = t.u_action.columns
    bcols, ucone, qcols = [], [], []
    for k in range(n):
        bcols.append(dcols[k] | ((fcols[k] ^ (1 << k)) << n))
        ucone.append(ucols[k])
        qcols.append(1 << (n + k))
    for k in range(n):
        bcols.append(dcols[k] << n)
        ucone.append(ucols[k] << n)
        qcols.append(0)
    # both copies are complete in grading r once A is complete in r - 1 and r
    return TruncatedComplex(
        elements,
        F2Matrix.from_columns(bcols, 2 * n),
        F2Matrix.from_columns(ucone, 2 * n),
        F2Matrix.from_columns(qcols, 2 * n),
        t.window,
        t.trust_max,
        t.full_from + 1,
        f"cone({t.region})",
    )


def direct_sum(s: TruncatedComplex, t: TruncatedComplex) -> TruncatedComplex:
    """Block direct sum; elements of ``t`` get the copy tag suffixed with ``'#2'``."""
    n, m = len(s), len(t)
    elements = s.elements + tuple(
        TruncElem(e.gen, e.upower, e.grading, e.copy + "#2") for e in t.elements
    )

    def block(a: F2Matrix, b: F2Matrix) -> F2Matrix:
        return F2Matrix.from_columns(list(a.columns) + [c << n for c in b.columns], n + m)

    q = None
    if s.q_action is not None and t.q_action is not None:
        q = block(s.q_action, t.q_action)
    return TruncatedComplex(
        elements,
        block(s.boundary, t.boundary),
        block(s.u_action, t.u_action),
        q,
        min(s.window, t.window),
        min(s.trust_max, t.trust_max),
        max(s.full_from, t.full_from),
        f"{s.region}+{t.region}",
    )


def swap_map(n: int) -> F2Matrix:
    """The involution exchanging the two summands of ``s + s`` (``len(s) == n``)."""
    return F2Matrix.from_columns([1 << (k + n) for k in range(n)] + [1 << k for k in range(n)], 2 * n)


# ---------------------------------------------------------------------------
# Depth selection


def tower_margin(stable_from: int, lowest: int) -> int:
    """Number of U-steps after which images of U^m only see tower classes.

    Im(U^m) in grading r comes from grading r + 2m; once that source grading
    lies in the stable range every surviving class is a tower class.
    """
    return max(3, math.ceil((stable_from - lowest) / 2) + 1)


def _needed_cut(c: ModelComplex) -> int:
    """Smallest grading cut-off for which all tower read-offs are exact."""
    gens = c.generators
    if not gens:
        return 0
    lowest_a = min(g.maslov - 2 * max(g.i, g.j) for g in gens)
    lowest_b = min(g.maslov - 2 * g.i for g in gens)
    full_a = max(g.maslov - 2 * max(g.i, g.j) for g in gens)
    full_b = max(g.maslov - 2 * g.i for g in gens)
    need = 0
    # cone over A: full one grading later, lowest grading can be one lower
    for full, lowest in ((full_a, lowest_a), (full_b, lowest_b), (full_a + 1, lowest_a)):
        stable = full + 1
        m = tower_margin(stable, lowest)
        # bottoms are searched up to stable + 1 and need U^m Q from r + 2m + 1
        need = max(need, stable + 1 + 2 * m + 1 + 1)
    return need


def required_depth(c: ModelComplex) -> int:
    top = max((g.maslov for g in c.generators), default=0)
    return max(1, math.ceil((_needed_cut(c) - top) / 2))


def default_depth(c: ModelComplex) -> int:
    """``diameter + 6``, raised if needed so the tower read-off is exact."""
    return max(c.diameter + 6, required_depth(c))

