from fractions import Fraction

from mfdk.linear_algebra import EchelonBasis, LinearMap, clean, combine, independent_modulo, rank_of


def test_echelon_rank_and_membership():
    basis = EchelonBasis([{0: 1, 1: 1}, {1: 1, 2: 1}])
    assert basis.rank == 2
    assert basis.contains({0: 1, 2: -1})
    assert not basis.contains({2: 1})
    assert not basis.add({0: 2, 1: 4, 2: 2})
    assert basis.add({2: 1})
    assert basis.rank == 3


def test_reduce_gives_canonical_representatives():
    basis = EchelonBasis([{0: 1, 1: -1}])
    assert basis.reduce({0: 3}) == basis.reduce({1: 3})
    assert basis.reduce({0: 1, 1: -1}) == {}


def test_rank_of_dependent_vectors():
    assert rank_of([{"a": 1}, {"a": 2}, {"b": 1}]) == 2
    assert rank_of([]) == 0


def test_kernel_and_preimage():
    # x -> e1 + e2, y -> e2, z -> e1
    linear_map = LinearMap([("x", {1: 1, 2: 1}), ("y", {2: 1}), ("z", {1: 1})])
    assert linear_map.rank == 2
    assert len(linear_map.kernel) == 1
    (kernel,) = linear_map.kernel
    images = {"x": {1: 1, 2: 1}, "y": {2: 1}, "z": {1: 1}}
    assert combine(kernel, images) == {}

    target = {1: Fraction(2), 2: Fraction(5)}
    source = linear_map.preimage(target)
    assert combine(source, images) == target
    assert linear_map.preimage({3: 1}) is None


def test_independent_modulo_picks_a_complement():
    subspace = EchelonBasis([{0: 1}])
    chosen = independent_modulo(subspace, [{0: 5}, {1: 1}, {0: 1, 1: 1}, {2: 1}])
    assert chosen == [{1: 1}, {2: 1}]
    assert subspace.rank == 1


def test_clean_drops_zeros():
    assert clean({0: 0, 1: 2}) == {1: Fraction(2)}
