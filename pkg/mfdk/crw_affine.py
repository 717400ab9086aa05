"""
Affine Lagrangian correspondences. An object is a semifree cdga carrying a
formal symplectic form as metadata; a span X <- L -> Y is a cospan of cdgas
A -> R <- B; composition is the derived tensor product over the middle
algebra and 2-morphisms are modules over the intersection R ⊗^L_{A⊗B} S.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from mfdk.errors import InputError
from mfdk.graded_core import (
    CDGAMap,
    GradedVar,
    SemifreeCDGA,
    SemifreeModule,
    cohomology_hilbert,
    default_bound,
    derived_tensor,
    fold_map,
    generator_name,
    pair_map,
    tensor_modules,
    tensor_with_inclusions,
)

logger = logging.getLogger(__name__)


class FormalTwoForm(object):
    """Σ c_uv du∧dv with rational coefficients, stored antisymmetrically on ordered name pairs."""

    def __init__(self, terms=None):
        self.terms = {}
        for (u, v), value in (terms or {}).items():
            self._add(u, v, Fraction(value))

    def _add(self, u, v, value):
        if u == v:
            raise InputError(f"d{u}∧d{u} vanishes; not a valid form term")
        if u > v:
            u, v, value = v, u, -value
        updated = self.terms.get((u, v), 0) + value
        if updated:
            self.terms[(u, v)] = updated
        else:
            self.terms.pop((u, v), None)

    @classmethod
    def cotangent(cls, pairs):
        return cls({(x, p): 1 for x, p in pairs})

    def coefficient(self, u, v):
        if u <= v:
            return self.terms.get((u, v), Fraction(0))
        return -self.terms.get((v, u), Fraction(0))

    def negated(self):
        return FormalTwoForm({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        result = FormalTwoForm(self.terms)
        for (u, v), value in other.terms.items():
            result._add(u, v, value)
        return result

    def renamed(self, mapping):
        result = FormalTwoForm()
        for (u, v), value in self.terms.items():
            result._add(mapping.get(u, u), mapping.get(v, v), value)
        return result

    def __eq__(self, other):
        return isinstance(other, FormalTwoForm) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for (u, v), value in sorted(self.terms.items()):
            body = f"d{u}∧d{v}"
            if abs(value) != 1:
                body = f"{abs(value)}*{body}"
            pieces.append(("- " if value < 0 else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass
class AffineSymplecticStack:
    algebra: SemifreeCDGA
    form: FormalTwoForm = field(default_factory=FormalTwoForm)
    sign: int = 1
    name: str = None

    def oriented_form(self):
        return self.form if self.sign > 0 else self.form.negated()


def point():
    return AffineSymplecticStack(SemifreeCDGA(()), FormalTwoForm(), 1, "pt")


def dual_stack(X):
    """X^⋄: the same algebra with the form's sign flipped."""
    return AffineSymplecticStack(X.algebra, X.form, -X.sign, f"{X.name}^" if X.name else None)


def product_stack(X, Y):
    product = tensor_with_inclusions(X.algebra, Y.algebra)
    form = X.oriented_form() + Y.oriented_form().renamed(product.renamed)
    return AffineSymplecticStack(product.algebra, form, 1), product


@dataclass
class LagSpan:
    left: AffineSymplecticStack
    right: AffineSymplecticStack
    apex: SemifreeCDGA
    left_leg: CDGAMap
    right_leg: CDGAMap
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.left_leg.source.generators != self.left.algebra.generators:
            raise InputError("Left leg must start at the left object's algebra")
        if self.right_leg.source.generators != self.right.algebra.generators:
            raise InputError("Right leg must start at the right object's algebra")
        if self.left_leg.target is not self.apex or self.right_leg.target is not self.apex:
            raise InputError("Both legs must end at the apex")

    def hilbert(self, bound=default_bound):
        return cohomology_hilbert(self.apex, bound)


def _unit_map(A):
    return CDGAMap(SemifreeCDGA(()), A, {})


def identity_span(X):
    identity = CDGAMap.identity(X.algebra)
    return LagSpan(X, X, X.algebra, identity, CDGAMap.identity(X.algebra), {"kind": "identity"})


def _multiplication(A):
    """X ⊗ X^⋄ as a stack together with the multiplication A ⊗ A -> A."""
    dual = dual_stack(A)
    stack, product = product_stack(A, dual)
    multiplication = pair_map(product, CDGAMap.identity(A.algebra), CDGAMap.identity(A.algebra))
    return stack, multiplication


def coevaluation_span(X):
    """∗ <- X -> X × X^⋄, the diagonal read from the point."""
    stack, multiplication = _multiplication(X)
    return LagSpan(point(), stack, X.algebra, _unit_map(X.algebra), multiplication, {"kind": "coevaluation"})


def evaluation_span(X):
    """X × X^⋄ <- X -> ∗, the diagonal read backwards."""
    return transpose_span(coevaluation_span(X), kind="evaluation")


def diagonal_span(X, reading="coevaluation"):
    if reading == "coevaluation":
        return coevaluation_span(X)
    if reading == "evaluation":
        return evaluation_span(X)
    if reading == "identity":
        return identity_span(X)
    raise InputError(f"Unknown diagonal reading `{reading}`")


def transpose_span(S, kind=None):
    metadata = dict(S.metadata)
    metadata["kind"] = kind or f"transpose of {S.metadata.get('kind', 'span')}"
    return LagSpan(S.right, S.left, S.apex, S.right_leg, S.left_leg, metadata)


def _check_middle(S1, S2):
    if not S1.right.algebra.same_as(S2.left.algebra):
        raise InputError("Spans do not share the middle object")


def compose_span(S1, S2, bound=default_bound, resolve="auto"):
    """S2 ∘ S1 with apex R1 ⊗^L_B R2."""
    _check_middle(S1, S2)
    tensor = derived_tensor(S1.right_leg, S2.left_leg, bound, resolve)
    left_leg = S1.left_leg.then(tensor.left, check=False)
    right_leg = S2.right_leg.then(tensor.right, check=False)
    trusted = min(
        tensor.trusted_upto,
        S1.metadata.get("trusted_upto", bound),
        S2.metadata.get("trusted_upto", bound),
    )
    metadata = {
        "kind": "composite",
        "method": tensor.method,
        "resolved": tensor.resolved,
        "trusted_upto": trusted,
    }
    logger.debug("Composed spans by %s", tensor.method)
    return LagSpan(S1.left, S2.right, tensor.algebra, left_leg, right_leg, metadata)


def product_span(S1, S2):
    """External product S1 × S2 : X1 × X2 -> Y1 × Y2."""
    apex = tensor_with_inclusions(S1.apex, S2.apex)
    left, left_product = product_stack(S1.left, S2.left)
    right, right_product = product_stack(S1.right, S2.right)
    left_leg = pair_map(
        left_product, S1.left_leg.then(apex.left), S2.left_leg.then(apex.right)
    )
    right_leg = pair_map(
        right_product, S1.right_leg.then(apex.left), S2.right_leg.then(apex.right)
    )
    return LagSpan(left, right, apex.algebra, left_leg, right_leg, {"kind": "product"})


def _boundary_maps(S):
    """The map A ⊗ B -> R of a span, with A ⊗ B formed in a fixed way."""
    product = tensor_with_inclusions(S.left.algebra, S.right.algebra)
    return product, pair_map(product, S.left_leg, S.right_leg)


def intersect_spans(S, S2, bound=default_bound):
    """R ⊗^L_{A⊗B} S2, the base of the 2-morphisms S => S2."""
    if not S.left.algebra.same_as(S2.left.algebra) or not S.right.algebra.same_as(S2.right.algebra):
        raise InputError("Spans must share both boundary objects")
    _, first = _boundary_maps(S)
    _, second = _boundary_maps(S2)
    return derived_tensor(first, second, bound, resolve="left")


@dataclass
class SpanTwoMorphism:
    """
    A 2-morphism S => S2. `module` is semifree over `carrier`, which receives
    the intersection algebra through `action`.
    """

    source: LagSpan
    target: LagSpan
    intersection: object
    module: SemifreeModule
    action: CDGAMap = None

    @property
    def carrier(self):
        return self.module.base

    def hilbert(self, bound=default_bound):
        return cohomology_hilbert(self.module, bound)


def free_two_morphism(S, S2, generators=None, differential=None, bound=default_bound):
    """A semifree module over the intersection itself (rank one when no generators are given)."""
    intersection = intersect_spans(S, S2, bound)
    generators = generators or [GradedVar("m", 0, 0)]
    module = SemifreeModule(intersection.algebra, generators, differential)
    return SpanTwoMorphism(S, S2, intersection, module, CDGAMap.identity(intersection.algebra))


def unit_two_morphism(S, bound=default_bound):
    """S as a module over S ⊗^L_{A⊗B} S through multiplication."""
    intersection = intersect_spans(S, S, bound)
    fold = fold_map(intersection)
    module = SemifreeModule(S.apex, [GradedVar("1", 0, 0)])
    return SpanTwoMorphism(S, S, intersection, module, fold)


def _require_action(X):
    if X.action is None:
        raise InputError("2-morphism carries no action of its intersection algebra")
    return X.action


def _cylinder_action(X, Y, outer, carrier):
    """R ⊗^L T -> carrier sending each cylinder generator to the sum of the two it composes."""
    to_x = X.intersection.left.then(X.action).then(carrier.left)
    to_y = Y.intersection.right.then(Y.action).then(carrier.right)
    images = {}
    for name in X.source.apex.names():
        images[generator_name(outer.left.images[name])] = to_x.images[name]
    for name in Y.target.apex.names():
        images[generator_name(outer.right.images[name])] = to_y.images[name]
    x_eta = [carrier.left.apply(X.action.images[n]) for n in X.intersection.adjoined]
    y_eta = [carrier.right.apply(Y.action.images[n]) for n in Y.intersection.adjoined]
    for name, first, second in zip(outer.adjoined, x_eta, y_eta):
        images[name] = first + second
    return CDGAMap(outer.algebra, carrier.algebra, images)


def v_compose_2mor(X, Y, bound=default_bound):
    """
    Y ∘ X = X ⊗_S Y for X: R => S and Y: S => T. The composite keeps an
    action of R ⊗^L T when every intersection is a cylinder and the carrier
    is a pushout; otherwise its action is None.
    """
    if X.target is not Y.source and not X.target.apex.same_as(Y.source.apex):
        raise InputError("Vertical composite needs a shared middle span")
    middle_x = X.intersection.right.then(_require_action(X))
    middle_y = Y.intersection.left.then(_require_action(Y))
    carrier = derived_tensor(middle_x, middle_y, bound)
    module = tensor_modules(X.module, Y.module, carrier.algebra, carrier.left, carrier.right)
    outer = intersect_spans(X.source, Y.target, bound)
    methods = {X.intersection.method, Y.intersection.method, outer.method}
    if methods == {"cylinder"} and carrier.method == "pushout":
        action = _cylinder_action(X, Y, outer, carrier)
    else:
        action = None
        logger.info("Vertical composite over %s carries no action map", sorted(methods))
    return SpanTwoMorphism(X.source, Y.target, outer, module, action)


def h_compose_2mor(X, X2, bound=default_bound):
    """X ⊗_B X2 for 2-morphisms between spans A -> B and B -> C."""
    if not X.source.right.algebra.same_as(X2.source.left.algebra):
        raise InputError("Horizontal composite needs a shared middle object")
    through_x = X.source.right_leg.then(X.intersection.left).then(_require_action(X))
    through_x2 = X2.source.left_leg.then(X2.intersection.left).then(_require_action(X2))
    carrier = derived_tensor(through_x, through_x2, bound)
    module = tensor_modules(X.module, X2.module, carrier.algebra, carrier.left, carrier.right)
    source = compose_span(X.source, X2.source, bound)
    target = compose_span(X.target, X2.target, bound)
    return SpanTwoMorphism(source, target, None, module, None)


def serre_composite(X, bound=default_bound):
    """
    Apex of (id × ev) ∘ (braid × id) ∘ (id × coev) : X -> X, built on one
    triple product A ⊗ A ⊗ A. Returns the composite span.
    """
    A = X.algebra
    pair = tensor_with_inclusions(A, A)
    triple = tensor_with_inclusions(pair.algebra, A)
    copies = [pair.left.then(triple.left), pair.right.then(triple.left), triple.right]
    dual = dual_stack(X)
    triple_form = X.oriented_form() + X.oriented_form().renamed(pair.renamed)
    triple_form = triple_form + dual.oriented_form().renamed(triple.renamed)
    X3 = AffineSymplecticStack(triple.algebra, triple_form, 1)

    def from_copies(target, maps):
        images = {}
        for copy, image_map in zip(copies, maps):
            for name in A.names():
                images[generator_name(copy.images[name])] = image_map.images[name]
        return CDGAMap(triple.algebra, target, images)

    first, second = pair.left, pair.right
    s1 = LagSpan(X, X3, pair.algebra, first, from_copies(pair.algebra, [first, second, second]))
    swap = from_copies(triple.algebra, [copies[1], copies[0], copies[2]])
    s2 = LagSpan(X3, X3, triple.algebra, CDGAMap.identity(triple.algebra), swap)
    s3 = LagSpan(X3, X, pair.algebra, from_copies(pair.algebra, [first, second, second]), first)
    return compose_span(compose_span(s1, s2, bound), s3, bound)


def serre_hilbert(X, bound=default_bound):
    return serre_composite(X, bound).hilbert(bound)
