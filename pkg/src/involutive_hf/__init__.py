"""Involutive Heegaard Floer homology of large surgeries on knots, computed
from combinatorial models of the knot Floer complex."""

from .f2core import F2Matrix, F2Subspace, kernel_basis, rank, solve_linear, subspace_membership
from .knotcomplex import (
    ComplexError,
    DiffTerm,
    Generator,
    ModelComplex,
    NotLSpaceForm,
    build_mirror_staircase,
    build_staircase,
    build_thin_canonical,
    build_unknot,
    from_alexander_lspace,
    normalize_maslov,
    validate_complex,
)
from .involution import (
    FilteredMorphism,
    canonical_sarkar_map,
    conjectural_sarkar_map,
    standard_square_pair_involution,
    standard_staircase_involution,
    thin_involution,
    verify_involution,
)
from .cone import build_a_plus, build_b_plus, involutive_cone, restrict_involution, v0_projection
from .invariants import (
    CorrectionTerms,
    NoTower,
    SurgeryReport,
    SurgeryTooSmall,
    alternating_triple,
    cobordism_check,
    correction_terms,
    froyshov_bound,
    graded_homology,
    surgery_report,
    tower_bottom,
)

__version__ = "0.1.0"
