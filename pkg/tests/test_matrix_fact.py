import random

import pytest

from mfdk.errors import InputError
from mfdk.matrix_fact import (
    MatrixFactorization,
    MFGrading,
    conjugation_witness,
    double_dual_matches,
    dual_mf,
    end_as_tensor,
    end_complex,
    hom_complex,
    identity_matrix,
    koszul_mf,
    lambda_operator,
    matrix_delta,
    matrix_product,
    matrix_sum,
    mf_grading,
    same_up_to_basis_order,
    tensor_mf,
    unit_mf,
    verify_mf,
)
from mfdk.mf_bicategory import end_hilbert
from mfdk.poly_core import Polynomial, VarTable, monomials_of_weight

unit_corpus = [
    ((), (), ("a",), "a^2"),
    ((), (), ("a",), "a^3"),
    (("x",), (), ("a",), "x*a"),
    ((), (), ("a", "b"), "a^2 + b^2"),
    (("x",), ("xt",), ("a",), "a*(xt - x)"),
]


def _unit(x, y, a, potential):
    V = Polynomial.parse(potential, VarTable.of(tuple(x) + tuple(y) + tuple(a)))
    return unit_mf(x, y, a, V)


def test_koszul_factorizations_square_to_the_potential(koszul_corpus):
    for mf in koszul_corpus:
        assert verify_mf(mf), verify_mf(mf).message


@pytest.mark.parametrize("x, y, a, potential", unit_corpus)
def test_unit_factorizations_square_to_the_potential(x, y, a, potential):
    unit = _unit(x, y, a, potential)
    assert verify_mf(unit), verify_mf(unit).message
    assert unit.ranks == (2 ** (len(a) - 1), 2 ** (len(a) - 1))


def test_unit_of_a_square():
    unit = _unit((), (), ("a",), "a^2")
    table = unit.table
    assert table.names == ("a", "a'")
    assert unit.potential == Polynomial.parse("a'^2 - a^2", table)
    assert unit.d0 == [[Polynomial.parse("a + a'", table)]]
    assert unit.d1 == [[Polynomial.parse("a' - a", table)]]


def test_unit_without_extra_variables_is_degenerate():
    unit = unit_mf((), (), (), Polynomial(VarTable.of(())))
    assert unit.degenerate
    assert unit.ranks == (1, 0)
    assert verify_mf(unit)


def test_unit_rejects_clashing_primes():
    V = Polynomial.parse("a^2 + a'")
    with pytest.raises(InputError):
        unit_mf((), (), ("a",), V)


def test_failure_names_block_and_entry():
    table = VarTable.of(("x",))
    verdict = verify_mf(MatrixFactorization(table, "x^2 + 1", [["x"]], [["x"]]))
    assert not verdict
    assert verdict.block == "d1*d0"
    assert verdict.entry == (1, 1)


def _lambda_identity_holds(mf):
    for t in mf.table.names:
        lam = lambda_operator(mf, t)
        anticommutator = matrix_sum(matrix_product(mf.d, lam, mf.table), matrix_product(lam, mf.d, mf.table))
        if anticommutator != identity_matrix(mf.table, mf.size, mf.potential.partial(t)):
            return False
    return True


def test_lambda_operators_bound_the_derivative(koszul_corpus):
    for mf in koszul_corpus:
        assert _lambda_identity_holds(mf)
    for x, y, a, potential in unit_corpus:
        assert _lambda_identity_holds(_unit(x, y, a, potential))


def _unitriangular(table, size, blocks, rng, sign=1):
    P = identity_matrix(table, size)
    monomials = [m for d in range(3) for m in monomials_of_weight(table.weights, d)]
    for first, second in blocks:
        P[first][second] = Polynomial(table, {rng.choice(monomials): sign * rng.choice((1, 2, -1))})
    return P


def test_conjugation_witness_for_unitriangular_changes_of_basis(rng):
    table = VarTable.of(("x", "y", "a"))
    mf = koszul_mf([("x", "y"), ("a", "a^2")], table)
    for _ in range(10):
        state = rng.getstate()
        P = _unitriangular(table, mf.size, [(0, 1), (2, 3)], rng)
        rng.setstate(state)
        inverse = _unitriangular(table, mf.size, [(0, 1), (2, 3)], rng, sign=-1)
        conjugated = matrix_product(matrix_product(P, mf.d, table), inverse, table)
        for t in table.names:
            verdict = conjugation_witness(P, mf.d, conjugated, t)
            assert verdict, verdict.entry


def test_grading_of_homogeneous_factorizations():
    xy = VarTable.of(("x", "y"))
    assert mf_grading(koszul_mf([("x", "y")], xy)) == MFGrading(1, 1, (0, 0))
    cubic = koszul_mf([("a", "a^2")], VarTable.of(("a",)))
    assert mf_grading(cubic) == MFGrading(2, 3, (0, 1))
    assert mf_grading(koszul_mf([("x", "y + 1")], xy)) is None


def test_dual_factors_the_negated_potential(koszul_corpus):
    for mf in koszul_corpus:
        dual = dual_mf(mf)
        assert dual.potential == -mf.potential
        assert verify_mf(dual)
        assert double_dual_matches(mf)


def test_end_is_the_tensor_with_the_dual(koszul_corpus):
    for mf in koszul_corpus:
        evaluation = end_as_tensor(mf)
        assert evaluation.pairing_is_chain_map
        assert evaluation.iso_is_chain_map


def test_tensor_is_associative_up_to_basis_order():
    table = VarTable.of(("x", "y", "z"))
    A, B, C = (koszul_mf([pair], table) for pair in (("x", "y"), ("y", "z"), ("z", "x")))
    left = tensor_mf(tensor_mf(A, B), C)
    right = tensor_mf(A, tensor_mf(B, C))
    assert verify_mf(left)
    assert same_up_to_basis_order(left, right)


def test_end_of_a_rank_one_koszul_factorization():
    mf = koszul_mf([("a", "a")], VarTable.of(("a",)))
    hom = end_complex(mf)
    assert hom.dimension() == 4
    assert hom.module.generator_index("E0_1") == 1
    hilbert = end_hilbert(mf, 4)
    assert hilbert.even == (1, 0, 0, 0, 0)
    assert hilbert.odd == (1, 0, 0, 0, 0)


def test_hom_needs_equal_potentials():
    table = VarTable.of(("a",))
    with pytest.raises(InputError):
        hom_complex(koszul_mf([("a", "a")], table), koszul_mf([("a", "a^2")], table))


def test_element_round_trip_through_matrices():
    mf = koszul_mf([("a", "a")], VarTable.of(("a",)))
    hom = end_complex(mf)
    phi = identity_matrix(mf.table, mf.size)
    assert hom.to_matrix(hom.element_from_matrix(phi)) == phi


def _random_entry(rng, table):
    monomials = [m for d in range(3) for m in monomials_of_weight(table.weights, d)]
    chosen = rng.sample(monomials, rng.randint(1, 3))
    return Polynomial(table, {m: rng.choice((-2, -1, 1, 3)) for m in chosen})


def _random_koszul(rng, table):
    pairs = [(_random_entry(rng, table), _random_entry(rng, table)) for _ in range(rng.randint(1, 2))]
    return koszul_mf(pairs, table)


def _random_matrix(rng, mf, parity):
    table = mf.table
    phi = [[Polynomial(table) for _ in range(mf.size)] for _ in range(mf.size)]
    for i in range(mf.size):
        for j in range(mf.size):
            if (mf.parity(i) + mf.parity(j)) & 1 == parity and rng.random() < 0.5:
                phi[i][j] = _random_entry(rng, table)
    return phi


@pytest.mark.parametrize("seed", range(100))
def test_random_koszul_factorizations(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "z"))
    mf = _random_koszul(rng, table)
    assert verify_mf(mf), verify_mf(mf).message
    for t in table.names:
        lam = lambda_operator(mf, t)
        assert matrix_delta(mf, mf, lam, 1) == identity_matrix(table, mf.size, mf.potential.partial(t))


@pytest.mark.parametrize("seed", range(100))
def test_hom_differential_is_a_derivation_of_composition(seed):
    rng = random.Random(seed)
    table = VarTable.of(("x", "y", "z"))
    mf = _random_koszul(rng, table)
    p, q = rng.randint(0, 1), rng.randint(0, 1)
    phi, psi = _random_matrix(rng, mf, p), _random_matrix(rng, mf, q)
    lhs = matrix_delta(mf, mf, matrix_product(phi, psi, table), p ^ q)
    first = matrix_product(matrix_delta(mf, mf, phi, p), psi, table)
    second = matrix_product(phi, matrix_delta(mf, mf, psi, q), table)
    assert lhs == matrix_sum(first, second, -1 if p else 1)
