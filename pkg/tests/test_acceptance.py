"""Acceptance criteria, one test each. Every check is exact.

Each test prints one line ``[PASS] criterion N: ...`` or ``[FAIL] ...``; the lines
are also repeated in the pytest terminal summary.
"""

from __future__ import annotations

from fractions import Fraction

from involutive_hf.checks import (
    alternating_rows,
    corollary_sigma_pairs,
    property_suite,
    sarkar_crosscheck,
)
from involutive_hf.invariants import (
    KnotData,
    alternating_triple,
    cobordism_check,
    correction_terms,
    froyshov_bound,
    surgery_report,
)
from involutive_hf.involution import default_involution
from involutive_hf.knotcomplex import from_alexander_lspace, torus_alexander
from involutive_hf.knots import figure_eight, torus_knot
from involutive_hf.reports import emit_report, tables_report

# The two tables of (V_lower, V0, V_upper) for alternating knots, transcribed
# row by row: residue class of sigma -> (Arf = 0, Arf = 1) as functions of k.
NEGATIVE_ROWS = {
    0: (lambda k: (2 * k, 2 * k, 2 * k), lambda k: (2 * k + 1, 2 * k, 2 * k)),
    2: (lambda k: (2 * k + 1, 2 * k + 1, 2 * k), lambda k: (2 * k + 1, 2 * k + 1, 2 * k + 1)),
    4: (lambda k: (2 * k + 2, 2 * k + 1, 2 * k + 1), lambda k: (2 * k + 1, 2 * k + 1, 2 * k + 1)),
    6: (lambda k: (2 * k + 2, 2 * k + 2, 2 * k + 2), lambda k: (2 * k + 2, 2 * k + 2, 2 * k + 1)),
}
POSITIVE_ROWS = {
    0: (lambda k: (0, 0, -2 * k), lambda k: (0, 0, -2 * k)),
    2: (lambda k: (0, 0, -2 * k), lambda k: (0, 0, -2 * k - 1)),
    4: (lambda k: (0, 0, -2 * k - 1), lambda k: (0, 0, -2 * k - 1)),
    6: (lambda k: (0, 0, -2 * k - 2), lambda k: (0, 0, -2 * k - 1)),
}


def table_value(sigma: int, arf: int) -> tuple[int, int, int]:
    if sigma <= 0:
        k, res = divmod(-sigma, 8)
        return NEGATIVE_ROWS[res][arf](k)
    k, res = divmod(sigma, 8)
    return POSITIVE_ROWS[res][arf](k)


# collected here and echoed in the terminal summary by conftest.py
VERDICTS: list[str] = []


def show(value) -> str:
    if isinstance(value, tuple):
        return "(" + ", ".join(show(v) for v in value) + ")"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{show(k)}: {show(v)}" for k, v in value.items()) + "}"
    return str(value)


def verdict(n: int, what: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {what}"
    print(line + (f" ({detail})" if detail else ""))
    VERDICTS.append(line)
    assert ok, line + (f": {detail}" if detail else "")


def test_criterion_1_alternating_tables():
    rows = alternating_rows(-16, 16)
    bad = [
        (r.sigma, r.arf, r.computed)
        for r in rows
        if not (r.computed == alternating_triple(r.sigma, r.arf) == table_value(r.sigma, r.arf))
    ]
    text = emit_report(tables_report(rows), "text").decode()
    ok = not bad and len(rows) == 34 and "sigma <= 0" in text and "sigma > 0" in text
    verdict(1, "triples of 34 thin models (sigma -16..16, Arf 0/1) equal both tables", ok, f"mismatches {bad}" if bad else "")


def test_criterion_2_figure_eight():
    c = figure_eight()
    iota = default_involution(c)
    terms = correction_terms(c, iota)
    p7 = surgery_report(c, iota, 7, terms)
    p1 = surgery_report(c, iota, 1, terms)
    got = (
        terms.triple,
        (p7.dlower, p7.d, p7.dupper),
        (p1.dlower, p1.d, p1.dupper),
        (p1.reversed()[0], p1.reversed()[2]),
    )
    want = ((1, 0, 0), (Fraction(-1, 2), Fraction(3, 2), Fraction(3, 2)), (-2, 0, 0), (0, 2))
    verdict(2, "figure-eight triple (1, 0, 0); p=7 gives (-1/2, 3/2, 3/2)", got == want, f"got {show(got)}")


def test_criterion_3_left_trefoil():
    c = torus_knot(2, 3, mirror=True)
    iota = default_involution(c)
    terms = correction_terms(c, iota)
    rep = surgery_report(c, iota, 1, terms)
    got = (terms.ai_bottoms, terms.reduced_dims, (rep.dlower, rep.d, rep.dupper), rep.reversed())
    want = ((1, 2), {0: 1}, (0, 0, 2), (-2, 0, 0))
    verdict(3, "left trefoil p=1: towers at 1 and 2, Z2 in grading 0, d's (0, 0, 2), reversed (-2, 0, 0)", got == want, f"got {show(got)}")


def test_criterion_4_mirror_lspace_family():
    got, want = {}, {}
    for q in (3, 5, 7, 9):
        n = from_alexander_lspace(torus_alexander(2, q)).n
        assert n == -(-(q - 1) // 4)
        c = torus_knot(2, q, mirror=True)
        got[q] = correction_terms(c, default_involution(c)).triple
        want[q] = (0, 0, -n)
    verdict(4, "mirror T(2,q), q = 3,5,7,9: triple (0, 0, -n)", got == want, f"got {show(got)}")


def test_criterion_5_lspace_family():
    got, want = {}, {}
    for q in (3, 5, 7, 9):
        n = from_alexander_lspace(torus_alexander(2, q)).n
        c = torus_knot(2, q)
        terms = correction_terms(c, default_involution(c))
        got[q] = (terms.triple, terms.reduced_dims)
        want[q] = ((n, n, n), {})
    verdict(5, "T(2,q), q = 3,5,7,9: triple (n, n, n) and no reduced part", got == want, f"got {show(got)}")


def test_criterion_6_sarkar_crosscheck():
    results = sarkar_crosscheck(4, 3)
    bad = [r.name for r in results if not r.ok]
    verdict(6, f"conjectural = canonical Sarkar map on all {len(results)} thin models |tau|<=4, <=3 squares", not bad and len(results) == 36, f"failures {bad}" if bad else "")


def test_criterion_7_property_suite():
    failures = property_suite(seed=0, cases=200)
    bad = {k: v[:2] for k, v in failures.items() if v}
    verdict(7, f"{len(failures)} properties on 200 seeded random models", not bad, f"failures {bad}" if bad else "")


def test_criterion_8_obstructions():
    fb = froyshov_bound(-2)
    fig8 = KnotData((1, 0, 0), 1, 1, "figure-eight")
    unknot = KnotData((0, 0, 0), 0, 0, "unknot")
    cob = cobordism_check(fig8, unknot, 1)
    pairs = corollary_sigma_pairs(-16, 16, 1)
    ok = fb.obstructed and cob.obstructed and pairs and all(r.ok for r in pairs)
    verdict(
        8,
        "Sigma(2,3,7) bound obstructed; figure-eight vs unknot obstructed; sigma equality on alternating pairs",
        bool(ok),
        f"{sum(r.ok for r in pairs)}/{len(pairs)} pairs",
    )
