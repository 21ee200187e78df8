from __future__ import annotations

from fractions import Fraction

import pytest

from involutive_hf.cone import build_a_plus, default_depth, required_depth
from involutive_hf.invariants import (
    KnotData,
    NoTower,
    StabilizationError,
    SurgeryTooSmall,
    alternating_triple,
    arf_from_determinant,
    cobordism_check,
    cone_rank_identity,
    correction_terms,
    euler_characteristic,
    froyshov_bound,
    graded_homology,
    image_dim,
    rokhlin,
    single_tower_bottom,
    surgery_report,
    thin_parameters,
    thin_triple,
    tower_bottom,
    v0_tower_shift,
)
from involutive_hf.involution import default_involution
from involutive_hf.knotcomplex import build_staircase, build_thin_canonical, build_unknot
from involutive_hf.knots import figure_eight, torus_knot


def terms_of(c, **kw):
    return correction_terms(c, default_involution(c), **kw)


def test_unknot():
    t = terms_of(build_unknot())
    assert t.triple == (0, 0, 0)
    assert (t.dA, t.dB, t.ai_bottoms) == (0, 0, (1, 0))
    assert t.reduced_dims == {} and t.reduced_dims_a == {}


def test_figure_eight():
    c = figure_eight()
    t = terms_of(c)
    assert t.triple == (1, 0, 0)
    assert t.ai_bottoms == (-1, 0)
    # one reduced class in grading 0 (represented by Qa + c)
    assert t.reduced_dims == {0: 1}
    assert t.reduced_dims_a == {-1: 1}
    rep = surgery_report(c, default_involution(c), 7, t)
    assert (rep.dlower, rep.d, rep.dupper) == (Fraction(-1, 2), Fraction(3, 2), Fraction(3, 2))
    rep1 = surgery_report(c, default_involution(c), 1, t)
    assert (rep1.dlower, rep1.d, rep1.dupper) == (-2, 0, 0)
    assert rep1.reversed() == (0, 0, 2)


def test_left_trefoil_gives_minus_sigma_237():
    c = torus_knot(2, 3, mirror=True)
    t = terms_of(c)
    assert t.triple == (0, 0, -1)
    assert t.ai_bottoms == (1, 2)
    assert t.reduced_dims == {0: 1}
    rep = surgery_report(c, default_involution(c), 1, t)
    assert (rep.dlower, rep.d, rep.dupper) == (0, 0, 2)
    assert rep.reversed() == (-2, 0, 0)


@pytest.mark.parametrize("q, n", [(3, 1), (5, 1), (7, 2), (9, 2)])
def test_two_strand_torus_knots_and_mirrors(q, n):
    t = terms_of(torus_knot(2, q))
    assert t.triple == (n, n, n)
    assert t.reduced_dims == {}
    assert terms_of(torus_knot(2, q, mirror=True)).triple == (0, 0, -n)


def test_other_lspace_knot():
    t = terms_of(torus_knot(3, 4))
    assert t.Vlower == t.V0 == t.Vupper == 1
    assert v0_tower_shift(torus_knot(3, 4)) == 1


@pytest.mark.parametrize("tau", range(-4, 5))
@pytest.mark.parametrize("squares", range(4))
def test_thin_closed_form(tau, squares):
    assert terms_of(build_thin_canonical(tau, squares)).triple == thin_triple(tau, squares % 2 == 1)


def test_thin_closed_form_with_shifted_squares():
    assert terms_of(build_thin_canonical(3, 5, [0, 0, 1, 1, -2])).triple == (2, 2, 1)
    assert terms_of(build_thin_canonical(-2, 3, [2, 2, 1])).triple == (0, 0, -1)


def test_alternating_tables_spot_values():
    assert alternating_triple(0, 1) == (1, 0, 0)
    assert alternating_triple(-10, 0) == (3, 3, 2)
    assert alternating_triple(-16, 1) == (5, 4, 4)
    assert alternating_triple(14, 0) == (0, 0, -4)
    assert alternating_triple(10, 1) == (0, 0, -3)
    with pytest.raises(ValueError):
        alternating_triple(1, 0)
    with pytest.raises(ValueError):
        alternating_triple(0, 2)


def test_thin_parameters_and_arf():
    assert arf_from_determinant(5) == 1 and arf_from_determinant(7) == 0 and arf_from_determinant(9) == 0
    assert thin_parameters(0, 1) == (0, 1)
    assert thin_parameters(-2, 1) == (1, 0)  # trefoil: determinant 3
    assert thin_parameters(-2, 0) == (1, 1)
    for sigma in range(-16, 17, 2):
        for arf in (0, 1):
            tau, squares = thin_parameters(sigma, arf)
            assert arf_from_determinant(2 * abs(tau) + 1 + 4 * squares) == arf


def test_euler_identity_on_examples():
    for c in (figure_eight(), torus_knot(2, 3, mirror=True), build_thin_canonical(-3, 3)):
        t = terms_of(c)
        assert 2 * euler_characteristic(t.reduced_dims) == t.dAupper - t.dAlower


def test_cone_rank_identity():
    c = build_thin_canonical(2, 3)
    for r, (lhs, rhs) in cone_rank_identity(c, default_involution(c)).items():
        assert lhs == rhs, r


def test_depth_controls():
    c = build_staircase([1, 2, 3])
    need = required_depth(c)
    with pytest.raises(ValueError):
        terms_of(c, depth=need - 1)
    assert terms_of(c, depth=need).triple == terms_of(c, depth=need + 5).triple
    assert terms_of(c, depth=need, check_stability=False).depth == need


def test_stabilization_error_is_a_runtime_error():
    assert issubclass(StabilizationError, RuntimeError)


def test_tower_helpers():
    c = build_staircase([1])
    h = graded_homology(build_a_plus(c, default_depth(c)))
    assert tower_bottom(h, 3) == -2
    assert image_dim(h, -2, 3) == 1
    with pytest.raises(ValueError):
        tower_bottom(h, 3, "sideways")
    with pytest.raises(NoTower):
        single_tower_bottom(graded_homology(build_a_plus(figure_eight(), 6)))


def test_surgery_too_small():
    c = torus_knot(2, 5)
    with pytest.raises(SurgeryTooSmall):
        surgery_report(c, default_involution(c), 1)
    with pytest.raises(SurgeryTooSmall):
        surgery_report(build_unknot(), default_involution(build_unknot()), 0)


def test_froyshov_bound():
    fb = froyshov_bound(-2)
    assert fb.obstructed and fb.max_rank is None
    ok = froyshov_bound(Fraction(1, 2))
    assert not ok.obstructed and ok.max_rank == 2


def test_cobordism_checks():
    fig8 = KnotData((1, 0, 0), 1, 1, "figure-eight")
    unknot = KnotData((0, 0, 0), 0, 0, "unknot")
    verdict = cobordism_check(fig8, unknot, 1)
    assert verdict.obstructed and verdict.status == "obstructed"
    assert any("d_lower" in r for r in verdict.reasons)
    assert any("Rokhlin" in r for r in verdict.reasons)
    assert not cobordism_check(unknot, unknot, 1).obstructed
    with pytest.raises(ValueError):
        cobordism_check(fig8, unknot, 2)
    with pytest.raises(SurgeryTooSmall):
        cobordism_check(KnotData((0, 0, 0), 0, 5), unknot, 3)
    assert rokhlin(1, 1) == 1 and rokhlin(1, 0) == 0


def test_sigma_equality_for_alternating_pairs():
    # sigma = 4 Arf + 4 (mod 8): differing signatures are always obstructed
    knots = [(s, a) for s in range(-16, 17, 2) for a in (0, 1)]
    for s1, a1 in knots:
        if (s1 - 4 * a1 - 4) % 8:
            continue
        for s2, a2 in knots:
            if s2 != s1:
                verdict = cobordism_check(KnotData.from_signature(s1, a1), KnotData.from_signature(s2, a2), 1)
                assert verdict.obstructed, (s1, a1, s2, a2)
