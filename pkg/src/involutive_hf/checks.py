"""Batch verification: worked examples, the alternating-knot tables, and a
seeded randomized property suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cone import build_a_plus, default_depth, direct_sum, involutive_cone, swap_map
from .invariants import (
    CorrectionTerms,
    KnotData,
    alternating_triple,
    cobordism_check,
    cone_rank_identity,
    correction_terms,
    euler_characteristic,
    froyshov_bound,
    graded_homology,
    surgery_report,
    thin_parameters,
    thin_triple,
)
from .involution import canonical_sarkar_map, conjectural_sarkar_map, default_involution, verify_involution
from .knotcomplex import (
    ModelComplex,
    build_mirror_staircase,
    build_staircase,
    build_thin_canonical,
    build_unknot,
    from_alexander_lspace,
    torus_alexander,
    validate_complex,
)
from .knots import figure_eight, torus_knot

__all__ = [
    "CheckResult",
    "TableRow",
    "paper_examples",
    "alternating_rows",
    "sarkar_crosscheck",
    "random_model",
    "property_suite",
    "swap_cone_problems",
    "corollary_sigma_pairs",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _show(value) -> str:
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_show(v) for v in value) + ")"
    return str(value)


def _expect(name: str, got, want) -> CheckResult:
    return CheckResult(name, got == want, f"got {_show(got)}, expected {_show(want)}")


# ---------------------------------------------------------------------------
# Worked examples


def paper_examples() -> list[CheckResult]:
    out: list[CheckResult] = []
    c = build_unknot()
    out.append(_expect("unknot triple", correction_terms(c, default_involution(c)).triple, (0, 0, 0)))

    fig8 = figure_eight()
    iota = default_involution(fig8)
    terms = correction_terms(fig8, iota)
    out.append(_expect("figure-eight triple", terms.triple, (1, 0, 0)))
    rep = surgery_report(fig8, iota, 7, terms)
    out.append(
        _expect(
            "figure-eight p=7 (d_lower, d, d_upper)",
            (rep.dlower, rep.d, rep.dupper),
            (Fraction(-1, 2), Fraction(3, 2), Fraction(3, 2)),
        )
    )

    left = torus_knot(2, 3, mirror=True)
    iota = default_involution(left)
    terms = correction_terms(left, iota)
    rep = surgery_report(left, iota, 1, terms)
    out.append(_expect("left trefoil triple", terms.triple, (0, 0, -1)))
    out.append(_expect("left trefoil AI tower bottoms", terms.ai_bottoms, (1, 2)))
    out.append(_expect("left trefoil AI reduced part", terms.reduced_dims, {0: 1}))
    out.append(_expect("left trefoil p=1 (d_lower, d, d_upper)", (rep.dlower, rep.d, rep.dupper), (0, 0, 2)))
    out.append(_expect("Sigma(2,3,7) by reversal", rep.reversed(), (-2, 0, 0)))

    right = torus_knot(2, 3)
    out.append(_expect("right trefoil triple", correction_terms(right, default_involution(right)).triple, (1, 1, 1)))

    for q in (3, 5, 7, 9):
        n = from_alexander_lspace(torus_alexander(2, q)).n
        k = torus_knot(2, q)
        terms = correction_terms(k, default_involution(k))
        out.append(_expect(f"T(2,{q}) triple", terms.triple, (n, n, n)))
        out.append(_expect(f"T(2,{q}) AI reduced part", terms.reduced_dims, {}))
        m = torus_knot(2, q, mirror=True)
        out.append(_expect(f"mirror T(2,{q}) triple", correction_terms(m, default_involution(m)).triple, (0, 0, -n)))

    fb = froyshov_bound(-2)
    out.append(CheckResult("Sigma(2,3,7) has no negative-definite spin filling", fb.obstructed, f"bound {fb.bound}"))
    verdict = cobordism_check(KnotData((1, 0, 0), 1, 1, "figure-eight"), KnotData((0, 0, 0), 0, 0, "unknot"), 1)
    out.append(CheckResult("figure-eight vs unknot at p=1 obstructed", verdict.obstructed, "; ".join(verdict.reasons)))
    return out


# ---------------------------------------------------------------------------
# Alternating knots


@dataclass(frozen=True)
class TableRow:
    sigma: int
    arf: int
    tau: int
    squares: int
    computed: tuple[int, int, int]
    expected: tuple[int, int, int]

    @property
    def ok(self) -> bool:
        return self.computed == self.expected


def alternating_rows(lo: int = -16, hi: int = 16) -> list[TableRow]:
    """Compute the triple of the thin model for each even signature in ``[lo, hi]``."""
    rows = []
    start = lo + (lo % 2)
    for sigma in range(start, hi + 1, 2):
        for arf in (0, 1):
            tau, squares = thin_parameters(sigma, arf)
            c = build_thin_canonical(tau, squares)
            got = correction_terms(c, default_involution(c)).triple
            rows.append(TableRow(sigma, arf, tau, squares, got, alternating_triple(sigma, arf)))
    return rows


def sarkar_crosscheck(max_tau: int = 4, max_squares: int = 3) -> list[CheckResult]:
    out = []
    for tau in range(-max_tau, max_tau + 1):
        for squares in range(max_squares + 1):
            c = build_thin_canonical(tau, squares)
            same = conjectural_sarkar_map(c).as_sets() == canonical_sarkar_map(c).as_sets()
            out.append(CheckResult(f"Sarkar formula tau={tau} squares={squares}", same))
    return out


def corollary_sigma_pairs(lo: int = -16, hi: int = 16, p: int = 1) -> list[CheckResult]:
    """Alternating pairs with sigma = 4 Arf + 4 (mod 8) and different signatures
    must be obstructed from having cobordant p-surgeries."""
    out = []
    knots = [(s, a) for s in range(lo, hi + 1, 2) for a in (0, 1)]
    for s1, a1 in knots:
        if (s1 - 4 * a1 - 4) % 8:
            continue
        k1 = KnotData.from_signature(s1, a1)
        for s2, a2 in knots:
            if s2 == s1:
                continue
            verdict = cobordism_check(k1, KnotData.from_signature(s2, a2), p)
            out.append(CheckResult(f"sigma {s1}/Arf {a1} vs sigma {s2}/Arf {a2}", verdict.obstructed))
    return out


# ---------------------------------------------------------------------------
# Randomized properties


def random_model(rng: random.Random) -> ModelComplex:
    kind = rng.choice(("thin", "thin", "staircase", "mirror", "unknot"))
    if kind == "unknot":
        return build_unknot()
    if kind == "thin":
        tau = rng.randint(-3, 3)
        squares = rng.randint(0, 3)
        shifts = []
        for _ in range(squares // 2):
            d = rng.randint(-1, 1)
            shifts += [d, d]
        if squares % 2:
            shifts.append(rng.randint(-1, 1))
        return build_thin_canonical(tau, squares, shifts)
    torsion = sorted(rng.sample(range(1, 6), rng.randint(1, 3)))
    return build_staircase(torsion) if kind == "staircase" else build_mirror_staircase(torsion)


def swap_cone_problems(c: ModelComplex, depth: int | None = None) -> list[str]:
    """Check that the cone of ``Q(1 + swap)`` on ``A + A`` has homology
    ``H(A)[-1] + H(A)`` with Q acting as zero."""
    a = build_a_plus(c, depth or default_depth(c))
    t = direct_sum(a, a)
    h_a = graded_homology(a)
    h = graded_homology(involutive_cone(t, swap_map(len(a))))
    problems = []
    for r in range(h.min_grading, h.trust_max + 1):
        want = h_a.dim(r - 1) + h_a.dim(r)
        if h.dim(r) != want:
            problems.append(f"grading {r}: dim {h.dim(r)}, expected {want}")
    for r, cols in (h.q_map or {}).items():
        if any(cols):
            problems.append(f"Q acts nontrivially on homology in grading {r}")
    return problems


def _family_law(c: ModelComplex, terms: CorrectionTerms) -> str | None:
    if c.provenance == "thin":
        want = thin_triple(c.tau, len(c.squares) % 2 == 1)
    elif c.provenance == "unknot":
        want = (0, 0, 0)
    elif c.provenance == "staircase":
        v = terms.V0
        want = (v, v, v)
    else:
        n = from_alexander_lspace(_alexander_of(c.torsion)).n
        want = (0, 0, -n)
    return None if terms.triple == want else f"triple {terms.triple}, expected {want}"


def _alexander_of(torsion: tuple[int, ...]) -> dict[int, int]:
    m = len(torsion)
    poly = {0: (-1) ** m}
    for rank, e in enumerate(torsion, start=1):
        poly[e] = poly[-e] = (-1) ** (m - rank)
    return poly


PROPERTIES = (
    "d-squared",
    "involution",
    "cone-rank",
    "parity",
    "inequalities",
    "euler",
    "swap-cone",
    "depth-stability",
    "family-law",
)


def property_suite(seed: int = 0, cases: int = 200, progress: Callable[[int], None] | None = None) -> dict[str, list[str]]:
    """Run every property on ``cases`` random models; return failures per property."""
    rng = random.Random(seed)
    failures: dict[str, list[str]] = {p: [] for p in PROPERTIES}
    for n in range(cases):
        c = random_model(rng)
        label = f"case {n} ({c.name or c.provenance})"
        report = validate_complex(c)
        if not report.ok:
            failures["d-squared"].append(f"{label}: {report.lines()}")
            continue
        iota = default_involution(c)
        inv = verify_involution(c, iota)
        if not inv.ok or inv.square_status != "exact":
            failures["involution"].append(f"{label}: {inv.lines()}")
        try:
            terms = correction_terms(c, iota, check_stability=True)
        except Exception as exc:  # noqa: BLE001 - any failure here is a stability or tower bug
            failures["depth-stability"].append(f"{label}: {type(exc).__name__}: {exc}")
            continue
        for r, (lhs, rhs) in cone_rank_identity(c, iota, terms.depth).items():
            if lhs != rhs:
                failures["cone-rank"].append(f"{label}: grading {r}: {lhs} != {rhs}")
                break
        if (terms.dA - terms.dAlower) % 2 or (terms.dA - terms.dAupper) % 2:
            failures["parity"].append(f"{label}: d_A gradings differ by odd amounts")
        if not terms.Vlower >= terms.V0 >= terms.Vupper:
            failures["inequalities"].append(f"{label}: triple {terms.triple}")
        chi = euler_characteristic(terms.reduced_dims)
        if 2 * chi != terms.dAupper - terms.dAlower:
            failures["euler"].append(f"{label}: chi {chi}, d_A bounds {terms.dAlower}, {terms.dAupper}")
        swap = swap_cone_problems(c, terms.depth)
        if swap:
            failures["swap-cone"].append(f"{label}: {swap[0]}")
        bad = _family_law(c, terms)
        if bad:
            failures["family-law"].append(f"{label}: {bad}")
        if progress:
            progress(n)
    return failures
