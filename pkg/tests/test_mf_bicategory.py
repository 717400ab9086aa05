import pytest

from mfdk.errors import InputError
from mfdk.matrix_fact import koszul_mf, verify_mf
from mfdk.mf_bicategory import (
    Freshener,
    MFObject,
    MFOneMorphism,
    MFTwoMorphism,
    h_compose_1,
    h_compose_2,
    identity_1,
    identity_2,
    interchange_check,
    monoidal_product_1,
    primed_copy,
    unit_law_check,
    v_compose_2,
)
from mfdk.poly_core import Polynomial, VarTable


def test_freshener_suffixes_taken_names():
    freshener = Freshener({"a"})
    assert freshener.fresh("a") == "a_g1"
    assert freshener.fresh("b") == "b"
    assert freshener.fresh("a") == "a_g2"


def test_identity_one_morphism():
    identity = identity_1(MFObject(("x",)))
    assert identity.target.names == ("x_g1",)
    assert identity.extra == ("a",)
    assert identity.potential == Polynomial.parse("a*(x_g1 - x)", identity.table)


def test_horizontal_composite_freshens_extra_variables(morphism):
    f = morphism(("x",), ("y",), ("a",), "a*x*y")
    g = morphism(("y",), ("z",), ("a",), "a*y*z")
    composite = h_compose_1(f, g)
    assert composite.source.names == ("x",)
    assert composite.target.names == ("z",)
    assert composite.extra == ("a", "y", "a_g1")
    assert composite.potential == Polynomial.parse("a*x*y + a_g1*y*z", composite.table)


def test_monoidal_product_of_points(point_morphism):
    f = point_morphism("a^2")
    product = monoidal_product_1(f, f)
    assert product.extra == ("a", "a_g1")
    assert product.potential == Polynomial.parse("a^2 + a_g1^2", product.table)


def test_extra_variables_must_avoid_the_boundary(morphism):
    with pytest.raises(InputError):
        morphism(("x",), (), ("x",), "x")


def test_primed_copy(point_morphism):
    copy, mapping = primed_copy(point_morphism("a^3"))
    assert mapping == {"a": "a'"}
    assert copy.extra == ("a'",)
    assert copy.potential == Polynomial.parse("a'^3", copy.table)


def test_two_morphism_representative_must_factor_the_difference(point_morphism):
    f = point_morphism("a^2")
    target, _ = primed_copy(f)
    wrong = koszul_mf([("a", "a")], VarTable.of(("a", "a'")))
    with pytest.raises(InputError):
        MFTwoMorphism(f, target, wrong)


def test_vertical_composite_of_units_telescopes(point_morphism):
    first = identity_2(point_morphism("a^2"))
    second = identity_2(first.target)
    composite = v_compose_2(first, second)
    table = composite.representative.table
    assert composite.target.extra == ("a''",)
    assert composite.internal == ("a'",)
    assert composite.representative.potential == Polynomial.parse("a''^2 - a^2", table)
    assert verify_mf(composite.representative)


def test_vertical_composite_needs_matching_middle(point_morphism):
    first = identity_2(point_morphism("a^2"))
    with pytest.raises(InputError):
        v_compose_2(first, first)


def test_unit_law(point_morphism):
    verdict = unit_law_check(identity_2(point_morphism("a^2")), bound=3)
    assert verdict, verdict.mismatches


def _onto(mf):
    """The factorization as a 2-morphism from (∅, 0) to (all variables, its potential)."""
    nothing = MFObject(())
    empty = MFOneMorphism(nothing, nothing, (), Polynomial(VarTable.of(())))
    return MFTwoMorphism(empty, MFOneMorphism(nothing, nothing, mf.table.names, mf.potential), mf)


@pytest.mark.slow
def test_unit_law_over_the_koszul_corpus(koszul_corpus):
    for mf in koszul_corpus:
        verdict = unit_law_check(_onto(mf), bound=6)
        assert verdict, verdict.mismatches


def _interchange_squares(f, g):
    M, M2 = identity_2(f), identity_2(g)
    return M, identity_2(M.target), M2, identity_2(M2.target)


def test_interchange_through_a_middle_object(morphism):
    f = morphism(("x",), ("y",), (), "x*y")
    g = morphism(("y",), ("z",), (), "y*z")
    M, N, M2, N2 = _interchange_squares(f, g)
    assert h_compose_2(M, M2).representative.table.names == ("x", "y", "z")
    verdict = interchange_check(M, N, M2, N2, bound=3)
    assert verdict, verdict.mismatches
    assert verdict.left.even == (1, 3, 6, 10)


@pytest.mark.slow
def test_interchange_of_point_units(point_morphism):
    M, N, M2, N2 = _interchange_squares(point_morphism("a^2"), point_morphism("b^2"))
    verdict = interchange_check(M, N, M2, N2, bound=2)
    assert verdict, verdict.mismatches
