from __future__ import annotations

import itertools

import pytest

from involutive_hf.involution import (
    FilteredMorphism,
    SarkarFormulaError,
    add_maps,
    canonical_sarkar_map,
    compose,
    conjectural_sarkar_map,
    default_involution,
    identity_map,
    standard_square_pair_involution,
    standard_staircase_involution,
    thin_involution,
    verify_involution,
)
from involutive_hf.knotcomplex import (
    ComplexError,
    DiffTerm,
    Generator,
    ModelComplex,
    build_mirror_staircase,
    build_staircase,
    build_thin_canonical,
    build_unknot,
)


def morphism(sets, kind="skew-filtered"):
    return FilteredMorphism(
        {n: tuple(DiffTerm(t, k) for t, k in sorted(v)) for n, v in sets.items()}, kind
    )


def test_staircase_swap():
    c = build_mirror_staircase([1])
    iota = standard_staircase_involution(c)
    assert iota.as_sets() == {
        "x0": {("x0", 0)},
        "x1_1": {("x1_2", 0)},
        "x1_2": {("x1_1", 0)},
    }
    report = verify_involution(c, iota)
    assert report.ok and report.square_status == "exact"
    with pytest.raises(ComplexError):
        standard_staircase_involution(build_thin_canonical(0, 1))


def test_figure_eight_map():
    c = build_thin_canonical(0, 1)
    assert thin_involution(c).as_sets() == {
        "x0": {("x0", 0), ("e", 0)},
        "a": {("a", 0), ("x0", 0)},
        "b": {("c", 0)},
        "c": {("b", 0)},
        "e": {("e", 0)},
    }
    assert canonical_sarkar_map(c).as_sets()["a"] == {("a", 0), ("e", 0)}


def test_diagonal_square_with_staircase_below_and_above():
    below = thin_involution(build_thin_canonical(1, 1)).as_sets()
    assert below["b"] == {("c", 0), ("x1_2", 0)}
    assert below["c"] == {("b", 0), ("x1_1", 0)}
    above = build_thin_canonical(2, 1)
    sets = thin_involution(above).as_sets()
    g = above.by_name
    up = next(n for n in ("x1_1", "x1_2") if (g[n].i, g[n].j) == (0, 1))
    right = next(n for n in ("x1_1", "x1_2") if (g[n].i, g[n].j) == (1, 0))
    assert sets[up] == {(right, 0), ("c", -1)}
    assert sets[right] == {(up, 0), ("b", -1)}


def test_square_pair_map():
    c = build_thin_canonical(0, 2)
    frag = standard_square_pair_involution(c, "a1", "a1'")
    assert {t.target for t in frag["a1"]} == {"a1'"}
    assert {t.target for t in frag["a1'"]} == {"a1", "e1"}
    with pytest.raises(ComplexError):
        standard_square_pair_involution(build_thin_canonical(0, 3), "a1", "a")


@pytest.mark.parametrize(
    "c",
    [build_unknot(), build_staircase([1, 3]), build_mirror_staircase([2, 3])]
    + [build_thin_canonical(t, s) for t, s in itertools.product(range(-3, 4), range(4))]
    + [build_thin_canonical(3, 5, [0, 0, 1, 1, -2]), build_thin_canonical(-2, 3, [2, 2, 1])],
)
def test_builtin_involutions_verify_exactly(c):
    report = verify_involution(c, default_involution(c))
    assert report.ok, report.lines()
    assert report.square_status == "exact"


def test_conjectural_formula_matches_canonical():
    for tau, squares in itertools.product(range(-4, 5), range(4)):
        c = build_thin_canonical(tau, squares)
        assert conjectural_sarkar_map(c).as_sets() == canonical_sarkar_map(c).as_sets()


def test_conjectural_formula_negative_power():
    # a U-free square: the composite of the two odd pieces lands in U^0, so
    # dividing by U is impossible
    gens = (
        Generator("a", 1, 1, 0),
        Generator("b", 0, 1, -1),
        Generator("b2", 1, 0, -1),
        Generator("c", 0, 0, -2),
    )
    diff = {"a": (DiffTerm("b"), DiffTerm("b2")), "b": (DiffTerm("c"),), "b2": (DiffTerm("c"),)}
    with pytest.raises(SarkarFormulaError):
        conjectural_sarkar_map(ModelComplex(gens, diff))


def test_broken_map_is_rejected():
    c = build_thin_canonical(0, 1)
    sets = thin_involution(c).as_sets()
    sets["b"] = {("b", 0)}
    report = verify_involution(c, morphism(sets))
    assert not report.ok
    assert {"skew", "chain-map"} <= report.kinds()
    assert report.square_status == "no-homotopy"


def test_missing_and_unknown_generators():
    c = build_thin_canonical(0, 1)
    sets = thin_involution(c).as_sets()
    del sets["e"]
    assert "missing" in verify_involution(c, morphism(sets)).kinds()
    sets["e"] = {("zz", 0)}
    assert "unknown-target" in verify_involution(c, morphism(sets)).kinds()


def test_grading_change_is_rejected():
    c = build_mirror_staircase([1])
    report = verify_involution(c, identity_map(c))
    assert report.kinds() == {"skew"}
    shifted = morphism({"x0": {("x1_1", 0)}, "x1_1": {("x1_2", 0)}, "x1_2": {("x1_1", 0)}})
    assert "maslov" in verify_involution(c, shifted).kinds()


def perturb(c, iota, x, y, k):
    """iota + dK + Kd with K sending x to U^k y."""
    names = c.names
    K = {n: () for n in names}
    K[x] = (DiffTerm(y, k),)
    new = add_maps(iota.as_sets(), compose(K, c.differential, names), compose(c.differential, K, names), names=names)
    return morphism(new)


def test_homotopic_conjugate_passes_via_homotopy():
    c = build_thin_canonical(0, 1)
    iota = thin_involution(c)
    other = perturb(c, iota, "b", "x0", 0)
    assert other.as_sets() != iota.as_sets()
    report = verify_involution(c, other)
    assert report.ok
    assert report.square_status == "homotopic"
    assert report.homotopy is not None and report.homotopy.maslov_shift == 1
    # check dH + Hd = iota'^2 + Sarkar directly
    names = c.names
    h = report.homotopy.as_sets()
    lhs = add_maps(compose(h, c.differential, names), compose(c.differential, h, names), names=names)
    rhs = add_maps(compose(other, other, names), canonical_sarkar_map(c).as_sets(), names=names)
    assert lhs == rhs


def test_conjugated_map_squares_exactly():
    # conjugating by the basis change a -> a + e fixes everything except a
    c = build_thin_canonical(0, 1)
    sets = thin_involution(c).as_sets()
    sets["a"] = {("a", 0), ("x0", 0), ("e", 0)}
    report = verify_involution(c, morphism(sets))
    assert report.ok and report.square_status == "exact"


def test_user_complex_skips_sarkar_comparison_unless_given():
    c = build_thin_canonical(0, 1)
    user = ModelComplex(c.generators, c.differential)
    iota = morphism(thin_involution(c).as_sets())
    plain = verify_involution(user, iota)
    assert plain.ok and plain.square_status == "skipped"
    cross = verify_involution(user, iota, conjectural_sarkar_map(user), "conjectural")
    assert cross.square_status == "exact" and cross.sarkar_source == "conjectural"
