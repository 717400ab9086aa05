import random

import pytest

from mfdk.errors import InputError, UnknownVariableError
from mfdk.functor_e import (
    build_A,
    check_functoriality_1,
    check_functoriality_2,
    check_r_identification,
    e_object,
    e_one,
    e_two,
    lagrangian_morphism,
    r_algebra,
    verify_zigzag,
    zigzag_operators,
)
from mfdk.graded_core import EVEN, ODD, GradedVar, cohomology_hilbert
from mfdk.matrix_fact import identity_matrix, matrix_delta
from mfdk.mf_bicategory import MFObject, MFOneMorphism, identity_2
from mfdk.poly_core import Polynomial, VarTable, monomials_of_weight

zigzag_corpus = [
    ((), (), ("a",), "a^2"),
    ((), (), ("a",), "a^3"),
    (("x",), (), ("a",), "x*a"),
    ((), (), ("a", "b"), "a^2 + b^2"),
    (("x",), ("xt",), ("a",), "a*(xt - x)"),
]


def test_cotangent_object():
    cotangent = e_object(MFObject(("x",)))
    assert cotangent.momenta == ("p_x",)
    assert cotangent.momentum("x") == "p_x"
    assert cotangent.algebra.generator("p_x") == GradedVar("p_x", EVEN, 1)
    assert cotangent.stack.form.coefficient("x", "p_x") == 1


def test_momentum_weight_complements_the_potential_degree():
    cotangent = e_object(MFObject(("x",)), degree=3)
    assert cotangent.algebra.generator("p_x").weight == 2


def test_r_algebra_of_a_square(point_morphism):
    R = r_algebra(point_morphism("a^2"))
    assert R.names() == ["a", "alpha_a"]
    assert R.generator("alpha_a") == GradedVar("alpha_a", ODD, 1)
    assert R.differential_of("alpha_a") == R.parse("2*a")
    hilbert = cohomology_hilbert(R, 4)
    assert hilbert.even == (1, 0, 0, 0, 0)
    assert not any(hilbert.odd)


def test_span_legs_are_the_graph_of_the_potential(morphism):
    span = e_one(morphism(("x",), ("y",), (), "x*y"))
    assert span.left_leg.images["p_x"] == -span.apex.gen("y")
    assert span.right_leg.images["p_y"] == span.apex.gen("x")


def test_lagrangian_morphism_is_the_graph_of_the_differential(morphism):
    lagrangian = lagrangian_morphism(morphism(("x",), ("y",), ("a",), "a*x*y"))
    R = lagrangian.algebra
    assert R.names() == ["x", "y", "a", "alpha_a"]
    assert lagrangian.stack.algebra.names() == ["x", "p_x", "y", "p_y"]
    graph = lagrangian.graph.images
    assert graph["x"] == R.gen("x")
    assert graph["p_x"] == R.parse("a*y")
    assert graph["p_y"] == R.parse("a*x")
    lagrangian.graph.check_chain()


def _random_potential(rng, table):
    monomials = [m for d in range(1, 4) for m in monomials_of_weight(table.weights, d)]
    chosen = rng.sample(monomials, 4)
    return Polynomial(table, {m: rng.choice((-2, -1, 1, 3)) for m in chosen})


@pytest.mark.parametrize("seed", range(100))
def test_span_legs_are_chain_maps_for_random_potentials(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "a", "b"))
    V = _random_potential(rng, table)
    span = e_one(MFOneMorphism(MFObject(("x",)), MFObject(("y",)), ("a", "b"), V))
    span.left_leg.check_chain()
    span.right_leg.check_chain()
    assert span.right_leg.images["p_y"] == span.apex.from_polynomial(V.partial("y"))


def test_derived_critical_algebra():
    table = VarTable.of(("x", "a", "b"))
    V = Polynomial.parse("a*x", table)
    W = Polynomial.parse("b^2", table)
    A = build_A(V, W, [("x",), (), ("a",), ("b",)])
    algebra = A.algebra
    assert algebra.names() == ["x", "a", "b", "chi_x", "alpha_a", "beta_b"]
    assert A.partners == {"x": "chi_x", "a": "alpha_a", "b": "beta_b"}
    assert A.difference == Polynomial.parse("b^2 - a*x", table)
    assert algebra.differential_of("chi_x") == -algebra.gen("a")
    assert algebra.differential_of("alpha_a") == -algebra.gen("x")
    assert algebra.differential_of("beta_b") == algebra.parse("2*b")
    assert algebra.generator("beta_b") == GradedVar("beta_b", ODD, 1)
    hilbert = cohomology_hilbert(algebra, 3)
    assert hilbert.even == (1, 0, 0, 0)
    assert not any(hilbert.odd)


def test_derived_critical_algebra_rejects_bad_groups():
    table = VarTable.of(("x", "a"))
    V = Polynomial.parse("a*x", table)
    with pytest.raises(InputError):
        build_A(V, V, [("x",), ("x",), ("a",), ()])
    with pytest.raises(UnknownVariableError):
        build_A(V, V, [("x",), (), ("c",), ()])
    with pytest.raises(InputError):
        build_A(V, V, [(), (), (), (), ("x",)])


@pytest.mark.parametrize("source, target, extra, potential", zigzag_corpus)
def test_zigzag_operators_differentiate_to_the_midpoint_slope(morphism, source, target, extra, potential):
    f = morphism(source, target, extra, potential)
    unit = identity_2(f)
    rep = unit.representative
    midpoint, operators = zigzag_operators(f, unit)
    for a, operator in zip(f.extra, operators):
        slope = f.potential.partial(a).to_table(rep.table).substitute(midpoint, rep.table)
        assert matrix_delta(rep, rep, operator, 1) == identity_matrix(rep.table, rep.size, slope)


@pytest.mark.parametrize("source, target, extra, potential", zigzag_corpus)
def test_zigzag_is_a_pair_of_quasi_isomorphisms(morphism, source, target, extra, potential):
    verdict = verify_zigzag(morphism(source, target, extra, potential), bound=4)
    assert verdict, verdict.failures
    assert verdict.chain_maps == {"iota": True, "t": True}
    assert verdict.quasi_isos == {"iota": True, "t": True}
    assert verdict.hilbert["end"].agrees_with(verdict.hilbert["end_beta"])


@pytest.mark.slow
@pytest.mark.parametrize("source, target, extra, potential", zigzag_corpus)
def test_zigzag_up_to_weight_eight(morphism, source, target, extra, potential):
    verdict = verify_zigzag(morphism(source, target, extra, potential), bound=8)
    assert verdict, verdict.failures
    assert verdict.h0_matches
    assert verdict.odd_vanishes
    assert verdict.hilbert["end"].agrees_with(verdict.hilbert["r"])


def test_end_module_carries_a_checked_action(point_morphism):
    end = e_two(identity_2(point_morphism("a^3")))
    assert end.algebra.partners == {"a": "alpha_a", "a'": "beta_a'"}
    assert set(end.witness.operators) == {"alpha_a", "beta_a'"}
    # two first-order and three second-order identities
    assert end.witness.checked == 5


def test_functoriality_on_one_morphisms(morphism):
    f = morphism(("x",), ("y",), (), "x*y")
    g = morphism(("y",), ("z",), (), "y*z")
    verdict = check_functoriality_1(f, g, bound=3)
    assert {clause.name for clause in verdict.clauses} == {"composite", "composite-h0", "product", "unit", "empty"}
    assert verdict, [c for c in verdict.clauses if not c]


def test_unit_clauses(point_morphism):
    verdict = check_functoriality_2(point_morphism("a^2"), bound=3)
    assert [clause.name for clause in verdict.clauses] == ["unit", "unit-empty", "unit-identity"]
    assert verdict, [c for c in verdict.clauses if not c]


def test_vertical_composition_clause(point_morphism):
    first = identity_2(point_morphism("a^2"))
    second = identity_2(first.target)
    verdict = check_functoriality_2(first, second, bound=3, kind="vertical")
    assert [clause.name for clause in verdict.clauses] == ["vertical", "vertical-spans"]
    assert verdict, [c for c in verdict.clauses if not c]


def test_horizontal_composition_clause(morphism):
    first = identity_2(morphism(("x",), ("y",), (), "x*y"))
    second = identity_2(morphism(("y",), ("z",), (), "y*z"))
    verdict = check_functoriality_2(first, second, bound=3, kind="horizontal")
    assert [clause.name for clause in verdict.clauses] == ["horizontal", "horizontal-spans"]
    assert verdict, [c for c in verdict.clauses if not c]
    assert verdict.clause("horizontal").left.even == (1, 3, 6, 10)


def test_product_composition_clause(point_morphism):
    first = identity_2(point_morphism("a^2"))
    second = identity_2(point_morphism("b^2"))
    verdict = check_functoriality_2(first, second, bound=3, kind="product")
    assert [clause.name for clause in verdict.clauses] == ["product"]
    assert verdict, [c for c in verdict.clauses if not c]


def test_unknown_composition_kind(point_morphism):
    first = identity_2(point_morphism("a^2"))
    with pytest.raises(InputError):
        check_functoriality_2(first, identity_2(first.target), kind="diagonal")


def test_r_identification(point_morphism):
    clause = check_r_identification(point_morphism("a^2"), bound=3)
    assert clause, clause.mismatches
