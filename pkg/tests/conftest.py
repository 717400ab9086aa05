import random

import pytest

from mfdk.matrix_fact import koszul_mf
from mfdk.mf_bicategory import MFObject, MFOneMorphism
from mfdk.poly_core import Polynomial, VarTable


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: checks at the full weight bound; deselect with -m 'not slow'")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def point_morphism():
    """(a; V): pt -> pt with every variable of V extra."""

    def build(potential):
        p = Polynomial.parse(potential)
        nothing = MFObject(())
        return MFOneMorphism(nothing, nothing, p.table.names, p)

    return build


@pytest.fixture
def morphism():
    def build(source, target, extra, potential):
        source, target, extra = tuple(source), tuple(target), tuple(extra)
        table = VarTable.of(source + target + extra)
        return MFOneMorphism(MFObject(source), MFObject(target), extra, Polynomial.parse(potential, table))

    return build


@pytest.fixture
def koszul_corpus():
    """Koszul factorizations of a^2, x*y + a^3 (weights 3, 3, 2) and a^2 + b^2."""
    return [
        koszul_mf([("a", "a")], VarTable.of(("a",))),
        koszul_mf([("x", "y"), ("a", "a^2")], VarTable.of(("x", "y", "a"), (3, 3, 2))),
        koszul_mf([("a", "a"), ("b", "b")], VarTable.of(("a", "b"))),
    ]
