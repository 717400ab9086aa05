import random
from fractions import Fraction

import pytest
import sympy

from mfdk.errors import InputError, UnknownVariableError
from mfdk.linear_algebra import EchelonBasis
from mfdk.poly_core import (
    Polynomial,
    VarTable,
    difference_quotient,
    groebner_basis,
    monomials_of_weight,
    normal_form,
    quotient_hilbert,
)

coefficients = (-3, -2, -1, 1, 2, 3)


def _random_form(rng, table, degree, terms=3):
    monomials = monomials_of_weight(table.weights, degree)
    chosen = rng.sample(monomials, min(terms, len(monomials)))
    return Polynomial(table, {m: rng.choice(coefficients) for m in chosen})


def _random_polynomial(rng, table, degree, terms=3):
    monomials = [m for d in range(degree + 1) for m in monomials_of_weight(table.weights, d)]
    chosen = rng.sample(monomials, min(terms, len(monomials)))
    return Polynomial(table, {m: rng.choice(coefficients) for m in chosen})


def test_var_table_rejects_bad_weights():
    with pytest.raises(InputError):
        VarTable.of(("x",), (0,))
    with pytest.raises(InputError):
        VarTable.of(("x", "x"))


def test_var_table_union_keeps_order():
    table = VarTable.of(("x", "y")).union(VarTable.of(("y", "z")))
    assert table.names == ("x", "y", "z")
    with pytest.raises(InputError):
        VarTable.of(("x",), (1,)).union(VarTable.of(("x",), (2,)))


def test_to_string_in_grevlex():
    xy = VarTable.of(("x", "y"))
    p = Polynomial.parse("3 - 1/2*y + x^2", xy)
    assert p.to_string() == "x^2 - 1/2*y + 3"
    assert str(Polynomial(xy)) == "0"
    assert str(-Polynomial.parse("x*y", xy)) == "-x*y"


def test_parse_builds_table_from_identifiers():
    p = Polynomial.parse("b*a + a")
    assert p.table.names == ("b", "a")


def test_polynomials_over_different_tables_do_not_mix():
    xy = VarTable.of(("x", "y"))
    assert Polynomial.parse("x") != Polynomial.parse("x", xy)
    with pytest.raises(InputError):
        Polynomial.parse("x") + Polynomial.parse("x", xy)


def test_arithmetic_and_partials():
    xy = VarTable.of(("x", "y"))
    p = Polynomial.parse("x^3*y + 2*y", xy)
    assert p.partial("x") == Polynomial.parse("3*x^2*y", xy)
    assert p.partial("y") == Polynomial.parse("x^3 + 2", xy)
    assert (Polynomial.parse("x + y", xy) ** 2) == Polynomial.parse("x^2 + 2*x*y + y^2", xy)
    assert Polynomial.parse("x", xy).scale(Fraction(1, 3)).terms == {(1, 0): Fraction(1, 3)}
    with pytest.raises(UnknownVariableError):
        p.partial("z")


def test_substitute():
    xy = VarTable.of(("x", "y"))
    p = Polynomial.parse("x*y", xy)
    assert p.substitute({"y": Polynomial.parse("x + 1", xy)}) == Polynomial.parse("x^2 + x", xy)


def test_weighted_homogeneity():
    table = VarTable.of(("x", "y"), (1, 2))
    assert Polynomial.parse("x^2 + y", table).homogeneous_weight() == 2
    assert Polynomial.parse("x + y", table).homogeneous_weight() is None


def test_difference_quotient_of_square():
    table = VarTable.of(("a", "a'"))
    quotient = difference_quotient(Polynomial.parse("a^2", table), ("a",), ("a'",), 1)
    assert quotient == Polynomial.parse("a + a'", table)


def test_difference_quotient_rejects_primed_potential():
    table = VarTable.of(("a", "a'"))
    with pytest.raises(InputError):
        difference_quotient(Polynomial.parse("a*a'", table), ("a",), ("a'",), 1)


def test_difference_quotients_telescope(rng):
    for _ in range(100):
        k = rng.randint(1, 3)
        a = tuple(f"a{i}" for i in range(1, k + 1))
        primes = tuple(f"b{i}" for i in range(1, k + 1))
        base = VarTable.of(("x",) + a)
        V = _random_polynomial(rng, base, rng.randint(1, 4), terms=4)
        table = base.extend(list(primes))
        V = V.to_table(table)
        total = Polynomial(table)
        for i in range(1, k + 1):
            gap = Polynomial.variable(table, primes[i - 1]) - Polynomial.variable(table, a[i - 1])
            total = total + difference_quotient(V, a, primes, i) * gap
        shifted = V.substitute({u: Polynomial.variable(table, v) for u, v in zip(a, primes)}, table)
        assert total == shifted - V


def test_groebner_basis_of_unit_ideal():
    x = VarTable.of(("x",))
    gb = groebner_basis([Polynomial.parse("x", x), Polynomial.parse("x - 1", x)])
    assert gb.is_unit_ideal()
    assert [str(g) for g in gb.generators] == ["1"]


def test_normal_form_and_membership():
    xy = VarTable.of(("x", "y"))
    gb = groebner_basis([Polynomial.parse("x^2 - y", xy), Polynomial.parse("x*y - 1", xy)])
    assert gb.contains(Polynomial.parse("x^3 - x*y", xy))
    assert not gb.contains(Polynomial.parse("x", xy))
    remainder = normal_form(Polynomial.parse("x^2", xy), gb)
    assert gb.contains(Polynomial.parse("x^2", xy) - remainder)


def _sympy_basis(texts, names):
    gens = sympy.symbols(names)
    exprs = [sympy.sympify(text.replace("^", "**")) for text in texts]
    basis = sympy.groebner(exprs, *gens, order="grevlex", domain="QQ")
    return {sympy.Poly(e, *gens, domain="QQ").monic().as_expr() for e in basis.exprs}


def test_reduced_basis_matches_sympy(rng):
    names = ("x", "y", "z")
    table = VarTable.of(names)
    for _ in range(10):
        gens = [_random_polynomial(rng, table, rng.randint(1, 3), terms=3) for _ in range(2)]
        ours = groebner_basis(gens, "grevlex", table)
        expected = _sympy_basis([str(g) for g in gens], names)
        found = _sympy_basis([str(g) for g in ours.generators], names)
        assert found == expected


def _in_span(p, gens, table):
    """Membership of a homogeneous p in a homogeneous ideal by linear algebra in one weight."""
    weight = p.homogeneous_weight()
    span = EchelonBasis()
    for g in gens:
        for exps in monomials_of_weight(table.weights, weight - g.homogeneous_weight()):
            span.add((Polynomial(table, {exps: 1}) * g).terms)
    return span.contains(p.terms)


@pytest.mark.parametrize("seed", range(25))
def test_membership_agrees_with_linear_algebra(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "z")[: rng.randint(1, 3)])
    gens = [_random_form(rng, table, rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
    gb = groebner_basis(gens, "grevlex", table)
    weight = rng.randint(3, 5)
    member = Polynomial(table)
    for g in gens:
        shift = weight - g.homogeneous_weight()
        member = member + _random_form(rng, table, shift, terms=2) * g
    candidates = [_random_form(rng, table, weight, terms=4)]
    if member:
        candidates.append(member)
    for p in candidates:
        assert gb.contains(p) == _in_span(p, gens, table)
    if member:
        assert gb.contains(member)


def test_quotient_hilbert():
    xy = VarTable.of(("x", "y"))
    hilbert = quotient_hilbert(groebner_basis([Polynomial.parse("x*y", xy)]), 4)
    assert hilbert.even == (1, 2, 2, 2, 2)
    assert not any(hilbert.odd)

    heavy = VarTable.of(("x",), (2,))
    hilbert = quotient_hilbert(groebner_basis([Polynomial.parse("x^2", heavy)]), 4)
    assert hilbert.even == (1, 0, 1, 0, 0)


@pytest.mark.parametrize("seed", range(100))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "z"), (1, 1, 2))
    p, q, r = (_random_polynomial(rng, table, rng.randint(0, 3)) for _ in range(3))
    zero, one = Polynomial(table), Polynomial.constant(table, 1)
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + zero == p
    assert p * one == p
    assert (p - p).is_zero()


@pytest.mark.parametrize("seed", range(100))
def test_normal_form_is_multiplicative_modulo_the_ideal(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "z"))
    gb = groebner_basis([_random_polynomial(rng, table, 2, terms=3) for _ in range(2)], table=table)
    p, q = (_random_polynomial(rng, table, 3) for _ in range(2))
    product = normal_form(p * q, gb)
    assert product == normal_form(normal_form(p, gb) * normal_form(q, gb), gb)
    assert normal_form(product, gb) == product
    assert gb.contains(p * q - product)
