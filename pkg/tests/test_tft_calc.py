import pytest
import sympy

from mfdk.errors import InputError
from mfdk.graded_core import EVEN, ODD, GradedVar, SemifreeCDGA, cohomology_hilbert, polynomial_algebra
from mfdk.poly_core import VarTable
from mfdk.tft_calc import (
    assembly_mismatches,
    hochschild,
    hochschild_agreement,
    three_dual_check,
    z_circle,
    z_genus,
    z_sphere,
)


def _ring(t):
    if not t:
        return SemifreeCDGA(())
    return polynomial_algebra(VarTable.of(tuple(f"x{i}" for i in range(1, t + 1))))


def test_hkr_model_of_a_line():
    model = hochschild(polynomial_algebra(VarTable.of(("x",))))
    assert model.provenance == "hkr"
    assert model.algebra.names() == ["x", "s_x"]
    assert model.algebra.generator("s_x") == GradedVar("s_x", ODD, 1)


def test_hkr_requires_zero_differential():
    A = SemifreeCDGA([GradedVar("x", 0, 1), GradedVar("e", ODD, 1)], {"e": "x"})
    with pytest.raises(InputError):
        hochschild(A, method="hkr")


@pytest.mark.parametrize("names", [(), ("x",), ("x", "p")])
def test_circle_value_is_the_hochschild_algebra(names):
    A = SemifreeCDGA(()) if not names else polynomial_algebra(VarTable.of(names))
    value = z_circle(A, 3)
    assert value.kind == "span"
    assert value.hilbert.agrees_with(hochschild(A, 3).hilbert(3))


@pytest.mark.parametrize("t", [1, 2])
def test_sphere_census(t):
    assert z_sphere(_ring(t), 3).census == (2 * t, 0, True)


@pytest.mark.parametrize("t", [1, 2])
def test_sphere_euler_characteristic(t):
    # sdim(A ⊗_H A) = sdim(A)^2 / sdim(H) with H = A ⊗ Λ(s_x1 .. s_xt)
    bound = 5
    q = sympy.symbols("q")
    series = sympy.series(1 / (1 - q) ** (2 * t), q, 0, bound + 1).removeO()
    hilbert = z_sphere(_ring(t), bound).hilbert
    assert hilbert.trusted_upto >= 3
    for w in hilbert.weights():
        assert hilbert.dim(w, 0) - hilbert.dim(w, 1) == series.coeff(q, w)


def test_genus_zero_is_the_sphere():
    A = _ring(1)
    assert z_genus(A, 0, 5).hilbert.agrees_with(z_sphere(A, 5).hilbert)


@pytest.mark.parametrize(
    "generators",
    [
        [GradedVar("x", EVEN, 1)],
        [GradedVar("x", EVEN, 1), GradedVar("e", ODD, 1)],
    ],
)
def test_hkr_agrees_with_the_derived_path(generators):
    assert hochschild_agreement(SemifreeCDGA(generators), 4) == ()


@pytest.mark.parametrize("g", [0, 1, 2])
def test_surfaces_of_the_point(g):
    A = SemifreeCDGA(())
    assert z_genus(A, g, 3).hilbert.agrees_with(cohomology_hilbert(A, 3))


def test_negative_genus_is_rejected():
    with pytest.raises(InputError):
        z_genus(SemifreeCDGA(()), -1)


def test_assembly_order_does_not_matter():
    assert assembly_mismatches(_ring(1), 1, 4) == ()


@pytest.mark.parametrize("t", [0, 1, 2, 3])
def test_three_dualizable_only_for_the_point(t):
    verdict = three_dual_check(_ring(t), 3)
    assert bool(verdict) == (t == 0)
    assert verdict.census == (2 * t, 0, True)


def test_census_in_json():
    report = z_sphere(_ring(1), 2).to_json()
    assert report["census"] == {"even": 2, "odd": 0, "zero_differential": True}
