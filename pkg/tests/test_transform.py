"""Assembly on projective space: collapse, form naming, adjoints, symbols."""

import pytest

from flagcalc.bundles import label_from_string, m_label, rank, x_label, z_label
from flagcalc.transform import (
    ComplexOnM,
    FormType,
    UnsupportedTwistError,
    annotate_form_types,
    assemble_transform,
    check_ellipticity,
    complex_from_form_types,
    emit_realization,
    form_dictionary,
    form_type,
    formal_adjoint,
    involutive_cohomology,
)


def test_form_type_naming_and_degree():
    plain = FormType(1, 2, "full")
    assert str(plain) == "L(1,2)"
    assert plain.degree == 3
    assert str(FormType(1, 1, "perp")) == "L(1,1)_perp"
    assert str(FormType(2, 2, "kappa")) == "L(2,2)_kappa"


def test_form_dictionary_is_pinned_to_small_n():
    for n in (2, 3):
        full, perp = form_dictionary(n)
        assert set(perp) < set(full)
    with pytest.raises(ValueError):
        form_dictionary(4)


@pytest.mark.parametrize(
    "label, expected",
    [
        ("(0||-1,0,1)", ["L(1,1)_perp", "L(2,2)_perp"]),
        ("(0||0,0,0)", ["L(0,0)", "L(1,1)_kappa", "L(2,2)_kappa", "L(3,3)"]),
        ("(1||-1,-1,1)", ["L(2,1)_perp"]),
        ("(-3||1,1,1)", ["L(0,3)"]),
        ("(2||0,0,0)", []),  # not a form type at all
    ],
)
def test_form_type_occurrences(label, expected):
    types = form_type(label_from_string(label, "M"), 3)
    assert [str(t) for t in types] == expected


def test_annotation_of_the_untwisted_complex():
    c = assemble_transform(None, 3, "paper").complex_
    ann = annotate_form_types(c.terms, 3)
    assert [[str(t) for t in term] for term in ann] == [
        ["L(0,0)"],
        ["L(0,1)", "L(1,0)"],
        ["L(0,2)", "L(1,1)", "L(2,0)"],
        ["L(1,2)", "L(2,1)"],
        ["L(2,2)_perp"],
    ]
    assert c.form_types == ann


def test_annotation_refuses_ambiguity_and_gaps():
    trivial = m_label((0, 0, 0, 0))
    # a lone trivial factor could be L(0,0) or L(3,3): no unique chain
    assert annotate_form_types(((trivial,),), 3) is None
    # degree must step by one between consecutive terms
    gapped = ((trivial,), (m_label((-2, 0, 1, 1)),))
    assert annotate_form_types(gapped, 3) is None
    # a label outside the dictionary poisons its term
    alien = ((m_label((2, 0, 0, 0)),),)
    assert annotate_form_types(alien, 3) is None


def test_untwisted_assembly_fields():
    res = assemble_transform(None, 3, "paper")
    assert res.reason == ""
    assert str(res.twist_z) == "(0|0,0|0)"
    assert str(res.twist_x) == "(0||0|0|0)"
    c = res.complex_
    assert c.ranks() == (1, 6, 15, 18, 8)
    assert c.alternating_rank_sum() == 0
    assert (c.q_row, c.start_p) == (0, 0)
    assert c.claims == (1, 0, 1, 0, 0)
    assert c.claim_tags == {0: "constants", 2: "Kaehler form"}
    assert str(c).startswith("0 -> (0||0,0,0) ->")
    assert str(c).endswith("-> 0")


def test_twist_may_be_given_in_either_frame():
    on_z = assemble_transform(z_label((1, 0, 0, 0)), 3, "paper")
    on_x = assemble_transform(x_label((0, 1, 0, 0)), 3, "paper")
    assert on_z.table.cells == on_x.table.cells
    assert on_z.complex_.terms == on_x.complex_.terms
    assert str(on_x.twist_z) == "(1|0,0|0)"


def test_hyperplane_assembly_collapses_only_in_paper_mode():
    quiet = assemble_transform(z_label((1, 0, 0, 0)), 3, "paper")
    assert quiet.complex_ is not None
    assert quiet.complex_.ranks() == (1, 4, 3)
    assert quiet.complex_.form_types is None  # no unambiguous naming
    assert quiet.complex_.claims == (0, 0, 0)
    assert quiet.complex_.claim_tags is None

    loud = assemble_transform(z_label((1, 0, 0, 0)), 3, "conservative")
    assert loud.complex_ is None
    assert "spread over degrees" in loud.reason


def test_canonical_assembly_sits_in_the_top_row():
    res = assemble_transform(z_label((3, 0, 0, -3)), 3, "paper")
    c = res.complex_
    assert c.q_row == 3
    assert c.ranks() == (8, 18, 15, 6, 1)
    assert c.claims is None  # no pinned row-cohomology rule for this twist
    assert not res.table.log


def test_n2_assembly():
    res = assemble_transform(None, 2, "paper")
    c = res.complex_
    assert c.ranks() == (1, 4, 3)
    assert c.claims == (1, 0, 0)
    assert c.claim_tags == {0: "constants"}
    assert [[str(t) for t in term] for term in c.form_types] == [
        ["L(0,0)"],
        ["L(0,1)", "L(1,0)"],
        ["L(1,1)_perp"],
    ]


def test_assembly_validates_mode():
    with pytest.raises(ValueError):
        assemble_transform(None, 3, "optimistic")


@pytest.mark.parametrize(
    "twist, n, expected",
    [
        ((0, 0, 0, 0), 3, {0: 1, 2: 1}),
        ((1, 0, 0, 0), 3, {}),
        ((0, 0, 0), 2, {0: 1}),
        ((1, 0, 0), 2, {}),
    ],
)
def test_involutive_cohomology_whitelist(twist, n, expected):
    res = involutive_cohomology(z_label(twist), n)
    assert {r: res.dim_at(r) for r in res.degrees()} == expected


def test_involutive_cohomology_refuses_other_twists():
    assert issubclass(UnsupportedTwistError, ValueError)
    with pytest.raises(UnsupportedTwistError):
        involutive_cohomology(z_label((3, 0, 0, -3)), 3)
    with pytest.raises(UnsupportedTwistError):
        involutive_cohomology(z_label((0, 0, 0, 2)), 3)


def test_formal_adjoint_reverses_and_reflects():
    c = assemble_transform(None, 3, "paper").complex_
    adj = formal_adjoint(c, 3)
    assert adj.ranks() == tuple(reversed(c.ranks()))
    assert [[str(t) for t in term] for term in adj.form_types] == [
        ["L(1,1)_perp"],
        ["L(1,2)", "L(2,1)"],
        ["L(1,3)", "L(2,2)", "L(3,1)"],
        ["L(2,3)", "L(3,2)"],
        ["L(3,3)"],
    ]
    again = formal_adjoint(adj, 3)
    assert again.terms == c.terms
    assert again.form_types == c.form_types


def test_formal_adjoint_needs_annotations():
    hyp = assemble_transform(z_label((1, 0, 0, 0)), 3, "paper").complex_
    with pytest.raises(ValueError):
        formal_adjoint(hyp, 3)


def test_symbol_check_flags_the_unreachable_target():
    hyp = assemble_transform(z_label((1, 0, 0, 0)), 3, "paper").complex_
    rep = check_ellipticity(hyp)
    assert rep.passed
    assert rep.alternating_sum == 0
    assert rep.ranks == (1, 4, 3)
    pairs = [(str(a), str(b)) for a, b in rep.inadmissible_pairs()]
    assert ("(-2||1,1,1)", "(1||0,0,0)") in pairs
    assert all(arrow.ok for arrow in rep.arrows)


def test_symbol_check_failure_modes():
    trivial = m_label((0, 0, 0, 0))
    # no Pieri route from constants to constants: the arrow is hopeless
    stuck = ComplexOnM((
        (trivial,), (trivial,)), 0, 0, None, None, None)
    rep = check_ellipticity(stuck)
    assert not rep.passed
    assert [a.ok for a in rep.arrows] == [False]

    # reachable targets but ranks that cannot be exact(1 - 6 != 0)
    skew = ComplexOnM((
        (trivial,), (m_label((-1, 0, 0, 1)), m_label((1, -1, 0, 0)))),
        0, 0, None, None, None)
    rep = check_ellipticity(skew)
    assert not rep.passed
    assert all(a.ok for a in rep.arrows)
    assert rep.alternating_sum == -5


def test_comparison_complex_from_form_types():
    types = (
        (FormType(0, 0, "full"),),
        (FormType(0, 1, "full"), FormType(1, 0, "full")),
        (FormType(0, 2, "full"), FormType(1, 1, "perp")),
        (FormType(1, 2, "perp"),),
    )
    c = complex_from_form_types(types, 3)
    assert c.ranks() == (1, 6, 11, 6)
    assert check_ellipticity(c).passed
    assert [[str(b) for b in t] for t in c.terms] == [
        ["(0||0,0,0)"],
        ["(-1||0,0,1)", "(1||-1,0,0)"],
        ["(-2||0,1,1)", "(0||-1,0,1)"],
        ["(-1||-1,1,1)"],
    ]


def test_realization_is_pinned_to_the_canonical_twist():
    rep = emit_realization(z_label((3, 0, 0, -3)), 3)
    assert rep.degree == 3
    assert str(rep.source) == "(0||-1,0,1)"
    assert [str(b) for b in rep.dbar_targets] == ["(-1||-1,1,1)", "(-1||0,0,1)"]
    assert [str(b) for b in rep.d_targets] == ["(1||-1,-1,1)", "(1||-1,0,0)"]
    # the full Pieri decompositions carry one extra summand each,
    # projected away in the complex
    assert [str(b) for b in rep.dbar_full] == [
        "(-1||-1,0,2)", "(-1||-1,1,1)", "(-1||0,0,1)"]
    assert [str(b) for b in rep.d_full] == [
        "(1||-2,0,1)", "(1||-1,-1,1)", "(1||-1,0,0)"]
    assert set(rep.dbar_targets) < set(rep.dbar_full)
    assert set(rep.d_targets) < set(rep.d_full)

    # the canonical twist is also the default
    assert emit_realization(None, 3).source == rep.source
    with pytest.raises(ValueError):
        emit_realization(z_label((1, 0, 0, 0)), 3)
    with pytest.raises(ValueError):
        emit_realization(None, 2)
