"""
Values of the two-dimensional oriented TFT attached to an affine object A:
the circle goes to the Hochschild algebra HC(A) = A ⊗^L_{A⊗A} A, the
sphere to A ⊗^L_{HC(A)} A, and a genus g surface to the tensor product
assembled from caps, pants and copants.
"""

import logging
from dataclasses import dataclass

from mfdk.crw_affine import AffineSymplecticStack, coevaluation_span, compose_span, evaluation_span
from mfdk.errors import InputError, VerificationError
from mfdk.graded_core import (
    CDGAMap,
    EVEN,
    GradedVar,
    SemifreeCDGA,
    cancel_linear_pairs,
    cohomology_hilbert,
    default_bound,
    derived_tensor,
    fold_map,
    fresh_name,
    generator_census,
    inclusion,
    pair_map,
    tensor_with_inclusions,
)

logger = logging.getLogger(__name__)

partner_prefix = "s_"


@dataclass
class HochschildModel:
    algebra: SemifreeCDGA
    provenance: str
    inclusion: CDGAMap
    fold: CDGAMap

    def hilbert(self, bound=default_bound):
        return cohomology_hilbert(self.algebra, bound)


@dataclass
class TFTValue:
    kind: str
    payload: object
    hilbert: object
    census: tuple = None

    def to_json(self):
        report = {"kind": self.kind, "hilbert": self.hilbert.to_json()}
        if self.census is not None:
            even, odd, closed = self.census
            report["census"] = {"even": even, "odd": odd, "zero_differential": closed}
        return report


def _hkr(A):
    """A with one partner of opposite parity and equal weight per generator, zero differential."""
    taken = set(A.names())
    generators = list(A.generators)
    partners = []
    for g in A.generators:
        name = fresh_name(partner_prefix + g.name, taken)
        taken.add(name)
        partners.append(name)
        generators.append(GradedVar(name, 1 - g.parity, g.weight))
    H = SemifreeCDGA(generators, name=f"HC({A.name})" if A.name else "HC")
    fold = CDGAMap(H, A, {name: A.zero() for name in partners})
    return HochschildModel(H, "hkr", inclusion(A, H), fold)


def _hkr_applies(A):
    return A.is_zero_differential() and all(g.weight > 0 for g in A.odd)


def hochschild(A, bound=default_bound, method="auto"):
    """
    HC(A) = A ⊗^L_{A⊗A} A. With a zero differential (and odd generators of
    positive weight) the HKR model is used; otherwise the multiplication is
    resolved through the derived tensor.
    """
    if method not in ("auto", "hkr", "derived"):
        raise InputError(f"Unknown Hochschild method `{method}`")
    if method != "derived" and _hkr_applies(A):
        return _hkr(A)
    if method == "hkr":
        raise InputError("The HKR model needs a zero differential and odd generators of positive weight")
    product = tensor_with_inclusions(A, A)
    identity = CDGAMap.identity(A)
    multiplication = pair_map(product, identity, identity)
    tensor = derived_tensor(multiplication, multiplication, bound, resolve="left")
    logger.debug("Hochschild algebra by %s with %d generators", tensor.method, len(tensor.algebra.generators))
    return HochschildModel(tensor.algebra, tensor.method, tensor.left, fold_map(tensor))


def hochschild_agreement(A, bound=default_bound):
    """Slots where the HKR model and the derived path disagree."""
    hkr = hochschild(A, bound, "hkr").hilbert(bound)
    derived = hochschild(A, bound, "derived").hilbert(bound)
    return tuple(hkr.mismatches(derived))


def _census(algebra):
    return generator_census(cancel_linear_pairs(algebra)[0])


def z_circle(A, bound=default_bound):
    """ev ∘ coev as a span from the point to itself, checked against HC(A)."""
    X = AffineSymplecticStack(A, name=A.name)
    circle = compose_span(coevaluation_span(X), evaluation_span(X), bound)
    trusted = circle.metadata["trusted_upto"]
    hilbert = circle.hilbert(bound).truncated(trusted)
    expected = hochschild(A, bound).hilbert(bound)
    mismatches = hilbert.mismatches(expected)
    if mismatches:
        raise VerificationError(f"Circle value disagrees with the Hochschild algebra at {mismatches}")
    return TFTValue("span", circle, hilbert, _census(circle.apex))


def z_sphere(A, bound=default_bound):
    """A ⊗^L_{HC(A)} A along the fold, with the generator census of its reduced model."""
    H = hochschild(A, bound)
    tensor = derived_tensor(H.fold, H.fold, bound, resolve="left")
    return TFTValue("module", tensor.algebra, tensor.hilbert(bound), _census(tensor.algebra))


def _tensor_chain(H, handles, bound, left_to_right=True):
    """Tensors the handles onto A one at a time over H, from either end."""
    action = H.fold
    for handle in handles:
        if left_to_right:
            tensor = derived_tensor(action, handle, bound)
            action = handle.then(tensor.right)
        else:
            tensor = derived_tensor(handle, action, bound)
            action = handle.then(tensor.left)
    if left_to_right:
        return derived_tensor(action, H.fold, bound)
    return derived_tensor(H.fold, action, bound)


def z_genus(A, g, bound=default_bound, left_to_right=True):
    """A ⊗_H K ⊗_H ... ⊗_H K ⊗_H A with g copies of K = HC(H), H = HC(A)."""
    if g < 0:
        raise InputError(f"Genus must be non-negative, got {g}")
    if not A.is_zero_differential():
        raise InputError("Surface values need an algebra with zero differential")
    H = hochschild(A, bound)
    # K = HC(H), with H acting on both sides through its inclusion
    handle = hochschild(H.algebra, bound).inclusion
    tensor = _tensor_chain(H, [handle] * g, bound, left_to_right)
    trusted = tensor.trusted_upto
    logger.debug("Genus %d value assembled %s", g, "left to right" if left_to_right else "right to left")
    return TFTValue("module", tensor.algebra, tensor.hilbert(bound).truncated(trusted), _census(tensor.algebra))


def assembly_mismatches(A, g, bound=default_bound):
    """Slots where the two orders of assembling the genus g value disagree."""
    forward = z_genus(A, g, bound, left_to_right=True)
    backward = z_genus(A, g, bound, left_to_right=False)
    return tuple(forward.hilbert.mismatches(backward.hilbert))


@dataclass(frozen=True)
class ThreeDualVerdict:
    extendable: bool
    census: tuple
    sphere: TFTValue

    def __bool__(self):
        return self.extendable


def three_dual_check(A, bound=default_bound):
    """
    The sphere value is finite dimensional exactly when no even generator
    survives in its reduced model; only then can the theory extend a dimension up.
    """
    sphere = z_sphere(A, bound)
    survivors = [g for g in cancel_linear_pairs(sphere.payload)[0].generators if g.parity == EVEN and g.weight > 0]
    extendable = not survivors
    logger.debug("Sphere census %s, extendable %s", sphere.census, extendable)
    return ThreeDualVerdict(extendable, sphere.census, sphere)
