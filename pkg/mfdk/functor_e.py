"""
The functor from matrix factorizations to affine Lagrangian correspondences.

Objects x go to cotangent algebras 𝕂[x, p_x]; a 1-morphism (a, V): x -> y
goes to the span with apex R_{(a,V)} = 𝕂[x y a; α], dα_i = ∂_{a_i}V, and legs
p_x -> -∂_xV, p_y -> ∂_yV; a 2-morphism M goes to End(M) with the homotopy
action of the derived critical algebra A_{W-V}.

Weights: momenta p_x and greek partners of t get weight D - w(t) where D is
the potential's weight (spans live at step 0). In the factorization world
everything is scaled by the grading scale k and shifted by the step s.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from mfdk.crw_affine import (
    AffineSymplecticStack,
    FormalTwoForm,
    LagSpan,
    compose_span,
    h_compose_2mor,
    identity_span,
    point,
    product_span,
    product_stack,
    unit_two_morphism,
    v_compose_2mor,
)
from mfdk.errors import ChainMapError, InputError, UnknownVariableError, WitnessError
from mfdk.graded_core import (
    CDGAMap,
    ComplexMap,
    GradedVar,
    MappingCylinder,
    SemifreeCDGA,
    cancel_linear_pairs,
    cohomology_hilbert,
    default_bound,
    derived_tensor,
    even_table,
    fresh_name,
    h0_ideal,
    pair_map,
    polynomial_algebra,
    quasi_iso_check,
    tensor_modules,
)
from mfdk.matrix_fact import (
    end_complex,
    first_difference,
    identity_matrix,
    lambda_operator,
    matrix_delta,
    matrix_partial,
    matrix_product,
    matrix_scale,
    matrix_sum,
    zero_matrix,
)
from mfdk.mf_bicategory import (
    Freshener,
    MFObject,
    MFOneMorphism,
    aligned,
    h_compose_1,
    h_compose_2,
    identity_1,
    identity_2,
    monoidal_product_1,
    monoidal_product_2,
    v_compose_2,
)
from mfdk.poly_core import Polynomial, VarTable, difference_quotient, groebner_basis, normal_form, quotient_hilbert

logger = logging.getLogger(__name__)

momentum_prefix = "p_"
greek_prefixes = ("chi_", "ups_", "alpha_", "beta_")


def _degree(potential):
    """Weight of a homogeneous potential; 0 (no weight information) otherwise."""
    degree = potential.homogeneous_weight()
    return degree if degree is not None else 0


def _partner_weight(weight, degree, scale=1, step=0):
    if degree > weight:
        return scale * (degree - weight) - step
    return scale * weight - step


# objects


@dataclass
class CotangentObject:
    source: MFObject
    momenta: tuple
    stack: AffineSymplecticStack

    @property
    def algebra(self):
        return self.stack.algebra

    @property
    def arity(self):
        return len(self.source)

    def momentum(self, name):
        return self.momenta[self.source.names.index(name)]


def e_object(obj, degree=0):
    """T*𝕂^n = 𝕂[x, p_x] with the form Σ dx_i∧dp_{x_i}."""
    taken = set(obj.names)
    momenta = []
    for name in obj.names:
        momentum = fresh_name(momentum_prefix + name, taken)
        taken.add(momentum)
        momenta.append(momentum)
    weights = list(obj.weights) + [_partner_weight(w, degree) for w in obj.weights]
    table = VarTable.of(tuple(obj.names) + tuple(momenta), weights)
    form = FormalTwoForm.cotangent(zip(obj.names, momenta))
    stack = AffineSymplecticStack(polynomial_algebra(table), form, 1, f"T*{','.join(obj.names) or 'pt'}")
    return CotangentObject(obj, tuple(momenta), stack)


def sign_flip(cotangent):
    """p_{x_i} -> -p_{x_i}, identifying T*X^⋄ with T*X."""
    algebra = cotangent.algebra
    return CDGAMap(algebra, algebra, {p: -algebra.gen(p) for p in cotangent.momenta})


# 1-morphisms


def r_algebra(morphism, step=0, scale=1, degree=None):
    """R_{(a,V)} = 𝕂[x y a; α] with dα_i = ∂_{a_i}V."""
    V = morphism.potential
    degree = _degree(V) if degree is None else degree
    table = morphism.table.scaled(scale)
    generators = [GradedVar(n, 0, w) for n, w in zip(table.names, table.weights)]
    taken = set(table.names)
    differential = {}
    for a in morphism.extra:
        name = fresh_name("alpha_" + a, taken)
        taken.add(name)
        generators.append(GradedVar(name, 1, _partner_weight(morphism.table.weight(a), degree, scale, step)))
        differential[name] = V.partial(a)
    return SemifreeCDGA(generators, differential, name="R")


@dataclass
class LagrangianMorphism:
    """The graph of dV: a map from T*x × T*y into R_{(a,V)}."""

    source: CotangentObject
    target: CotangentObject
    stack: AffineSymplecticStack
    product: object
    algebra: SemifreeCDGA
    graph: CDGAMap


def lagrangian_morphism(morphism, degree=None):
    V = morphism.potential
    degree = _degree(V) if degree is None else degree
    source = e_object(morphism.source, degree)
    target = e_object(morphism.target, degree)
    stack, product = product_stack(source.stack, target.stack)
    R = r_algebra(morphism, degree=degree)

    def graph_of(cotangent):
        images = {p: R.from_polynomial(V.partial(x)) for x, p in zip(cotangent.source.names, cotangent.momenta)}
        return CDGAMap(cotangent.algebra, R, images)

    graph = pair_map(product, graph_of(source), graph_of(target))
    return LagrangianMorphism(source, target, stack, product, R, graph)


def span_from_morphism(lagrangian):
    """The span T*x <- R -> T*y, reading the source factor through the sign flip."""
    left = sign_flip(lagrangian.source).then(lagrangian.product.left).then(lagrangian.graph)
    right = lagrangian.product.right.then(lagrangian.graph)
    metadata = {"kind": "e_one", "source": lagrangian.source, "target": lagrangian.target}
    return LagSpan(
        lagrangian.source.stack, lagrangian.target.stack, lagrangian.algebra, left, right, metadata
    )


def e_one(morphism, degree=None):
    """Span of a 1-morphism; legs p_x -> -∂_xV and p_y -> ∂_yV, checked to be chain maps."""
    span = span_from_morphism(lagrangian_morphism(morphism, degree))
    span.left_leg.check_chain()
    span.right_leg.check_chain()
    return span


# derived critical algebras


@dataclass
class DerivedCritAlgebra:
    algebra: SemifreeCDGA
    partners: dict
    difference: Polynomial


def build_A(V, W, tuples, scale=1, step=0):
    """
    A_{W-V} over 𝕂[x y a b] with one odd partner τ per variable t and
    dτ = ∂_t(W - V). `tuples` lists the variable names in four groups.
    """
    tuples = [tuple(group) for group in tuples]
    if len(tuples) > len(greek_prefixes):
        raise InputError(f"Expected at most {len(greek_prefixes)} variable groups")
    names = [name for group in tuples for name in group]
    if len(set(names)) != len(names):
        shared = sorted({n for n in names if names.count(n) > 1})
        raise InputError(f"Variable groups must be disjoint; shared {shared}")
    table = V.table.union(W.table)
    for name in names:
        if name not in table:
            raise UnknownVariableError(name, "potential ring")
    difference = W.to_table(table) - V.to_table(table)
    degree = _degree(difference)
    weights = [table.weight(n) for n in names]
    generators = [GradedVar(n, 0, scale * w) for n, w in zip(names, weights)]
    taken = set(table.names)
    differential = {}
    partners = {}
    for group, prefix in zip(tuples, greek_prefixes):
        for t in group:
            name = fresh_name(prefix + t, taken)
            taken.add(name)
            partners[t] = name
            generators.append(GradedVar(name, 1, _partner_weight(table.weight(t), degree, scale, step)))
            differential[name] = difference.partial(t)
    return DerivedCritAlgebra(SemifreeCDGA(generators, differential, name="A"), partners, difference)


@dataclass
class HomotopyActionWitness:
    """
    Roman generators act by multiplication; the partner of t acts by left
    composition with λ_t = ∂_t d, with μ = ∂_t∂_t' d recorded as the homotopy
    for the anticommutator of two partners.
    """

    multiplications: tuple
    operators: dict
    homotopies: dict = field(default_factory=dict)
    checked: int = 0


@dataclass
class EndModule:
    hom: object
    algebra: DerivedCritAlgebra
    witness: HomotopyActionWitness

    @property
    def module(self):
        return self.hom.module

    def hilbert(self, bound=default_bound):
        return cohomology_hilbert(self.module, bound)


def _unit_matrix(table, size, i, j):
    phi = zero_matrix(table, size, size)
    phi[i][j] = Polynomial.constant(table, 1)
    return phi


def _check_first_order(rep, t, lam):
    """δ(λφ) + λ δφ = ∂_t V · φ on every matrix unit φ."""
    table = rep.table
    slope = rep.potential.partial(t)
    for i in range(rep.size):
        for j in range(rep.size):
            phi = _unit_matrix(table, rep.size, i, j)
            parity = rep.parity(i) ^ rep.parity(j)
            composed = matrix_product(lam, phi, table)
            lhs = matrix_sum(
                matrix_delta(rep, rep, composed, 1 - parity),
                matrix_product(lam, matrix_delta(rep, rep, phi, parity), table),
            )
            where = first_difference(lhs, matrix_scale(phi, slope))
            if where is not None:
                return (i + 1, j + 1) + where
    return None


def _check_second_order(rep, lam, lam2, mu, curvature):
    """λλ' + λ'λ + dμ + μd = ∂_t∂_t' V · id."""
    table = rep.table
    lhs = matrix_sum(matrix_product(lam, lam2, table), matrix_product(lam2, lam, table))
    lhs = matrix_sum(lhs, matrix_product(rep.d, mu, table))
    lhs = matrix_sum(lhs, matrix_product(mu, rep.d, table))
    return first_difference(lhs, identity_matrix(table, rep.size, curvature))


def _tuples(M):
    """Variable groups of A_{W-V}; a horizontal middle variable sits in both extras and is listed once."""
    shared = set(M.source.extra)
    target_extra = tuple(t for t in M.target.extra if t not in shared)
    return (M.source.source.names, M.source.target.names, M.source.extra, target_extra)


def e_two(M):
    """End(M) with the homotopy action of A_{W-V}; a failing witness identity raises WitnessError."""
    rep = M.representative
    hom = end_complex(rep)
    scale, step = (hom.grading.scale, hom.grading.step) if hom.grading else (1, 0)
    table = rep.table
    A = build_A(
        M.source.potential.to_table(table), M.target.potential.to_table(table), _tuples(M), scale, step
    )
    roman = [t for group in _tuples(M) for t in group]
    operators = {}
    checked = 0
    for t in roman:
        lam = lambda_operator(rep, t)
        where = _check_first_order(rep, t, lam)
        if where is not None:
            raise WitnessError(f"Action of {A.partners[t]} fails the first-order identity at {where}")
        operators[A.partners[t]] = lam
        checked += 1
    homotopies = {}
    for k, t in enumerate(roman):
        for t2 in roman[k:]:
            mu = matrix_partial(matrix_partial(rep.d, t), t2)
            curvature = rep.potential.partial(t).partial(t2)
            where = _check_second_order(rep, operators[A.partners[t]], operators[A.partners[t2]], mu, curvature)
            if where is not None:
                raise WitnessError(
                    f"Partners {A.partners[t]}, {A.partners[t2]} fail the second-order identity at {where}"
                )
            homotopies[(A.partners[t], A.partners[t2])] = mu
            checked += 1
    logger.debug("Checked %d homotopy action identities on End of rank %s", checked, rep.ranks)
    witness = HomotopyActionWitness(tuple(roman), operators, homotopies, checked)
    return EndModule(hom, A, witness)


# the zigzag End(I) -> End(I)[β] <- R


@dataclass(frozen=True)
class ZigzagVerdict:
    holds: bool
    scale: int
    step: int
    chain_maps: dict
    quasi_isos: dict
    hilbert: dict
    h0_matches: bool
    odd_vanishes: bool
    failures: tuple = ()

    def __bool__(self):
        return self.holds


def _jacobian_matches(end, morphism, scale):
    """Even cohomology of End(I) against the standard monomials of <∂_aV> over the scaled ring."""
    scaled = morphism.table.scaled(scale)
    gb = groebner_basis([morphism.potential.partial(a).to_table(scaled) for a in morphism.extra], table=scaled)
    quotient = quotient_hilbert(gb, max(end.trusted_upto, 0))
    return all(end.dim(w, 0) == (quotient.dim(w, 0) if w >= 0 else 0) for w in end.weights())


def _wedge_matrix(rep, j):
    """θ_j ∧ - on the exterior basis labels of a unit factorization."""
    position = {label: n for n, label in enumerate(rep.labels)}
    matrix = zero_matrix(rep.table, rep.size, rep.size)
    for label, column in position.items():
        if j in label:
            continue
        before = sum(1 for m in label if m < j)
        matrix[position[tuple(sorted(label + (j,)))]][column] = Polynomial.constant(rep.table, -1 if before & 1 else 1)
    return matrix


def zigzag_operators(morphism, unit):
    """
    Odd endomorphisms Λ_i of I_{(a,V)} with δΛ_i = ∂_{a_i}V at the midpoint
    a -> (a + a')/2, together with the midpoint substitution. Λ_i is -λ_{a_i}
    corrected by Σ_j q_j/2 θ_j∧, q_j the difference quotients of ∂_{a_i}V
    between a and the midpoint.
    """
    rep = unit.representative
    table = rep.table
    primes = unit.target.extra
    midpoint = {
        a: (Polynomial.variable(table, a) + Polynomial.variable(table, primed)).scale(Fraction(1, 2))
        for a, primed in zip(morphism.extra, primes)
    }
    taken = set(table.names)
    middles = []
    for a in morphism.extra:
        name = fresh_name("m_" + a, taken)
        taken.add(name)
        middles.append(name)
    wide = table.extend(middles, [morphism.table.weight(a) for a in morphism.extra])
    at_midpoint = {m: midpoint[a] for m, a in zip(middles, morphism.extra)}
    wedges = [_wedge_matrix(rep, j) for j in range(len(morphism.extra))]

    operators = []
    for a in morphism.extra:
        slope = morphism.potential.partial(a).to_table(wide)
        operator = matrix_scale(lambda_operator(rep, a), -1)
        for j, wedge in enumerate(wedges):
            q = difference_quotient(slope, morphism.extra, middles, j + 1)
            q = q.substitute(at_midpoint, table).scale(Fraction(1, 2))
            if q:
                operator = matrix_sum(operator, matrix_scale(wedge, q))
        operators.append(operator)
    return midpoint, operators


def zigzag_comparison(morphism, unit, hom, R):
    """The strict chain map R_{(a,V)} -> End(I): p ↦ p(midpoint)·1 and α_S ↦ Π_{i∈S} Λ_i."""
    rep = unit.representative
    table = rep.table
    midpoint, operators = zigzag_operators(morphism, unit)
    products = {}

    def operator_product(subset):
        if subset not in products:
            matrix = identity_matrix(table, rep.size)
            for i in subset:
                matrix = matrix_product(matrix, operators[i], table)
            products[subset] = matrix
        return products[subset]

    def on_basis(key):
        exps, subset = key
        scalar = Polynomial(morphism.table, {exps: 1}).to_table(table).substitute(midpoint, table)
        element = hom.element_from_matrix(matrix_scale(operator_product(subset), scalar))
        return {
            (monomial, hom.module.generator_index(name)): value
            for name, coefficient in element.items()
            for monomial, value in coefficient.terms.items()
        }

    return ComplexMap(R, hom.module, on_basis)


def verify_zigzag(morphism, bound=default_bound):
    """
    Checks End(I) -> End(I)[β] <- R: both legs are strict chain maps and
    quasi-isomorphisms up to `bound`, the cohomology Hilbert functions
    agree, H^0 is 𝕂[xya]/<∂_aV> and odd cohomology vanishes. The middle is
    the mapping cylinder of the comparison R -> End(I) sending a to the
    midpoint (a + a')/2 and α_i to Λ_i; its suspended copy of R carries
    the β's.
    """
    unit = identity_2(morphism)
    hom = end_complex(unit.representative)
    scale, step = (hom.grading.scale, hom.grading.step) if hom.grading else (1, 0)
    R = r_algebra(morphism, step=step, scale=scale, degree=_degree(morphism.potential))
    comparison = zigzag_comparison(morphism, unit, hom, R)
    cylinder = MappingCylinder(comparison, step)
    maps = {"iota": cylinder.target_inclusion(), "t": cylinder.source_inclusion()}

    failures = []
    low = min(R.complex_low(), hom.module.complex_low())
    try:
        comparison.check_chain(range(low, bound + 1))
        chain_maps = {name: True for name in maps}
    except ChainMapError as error:
        chain_maps = {name: False for name in maps}
        failures.append(("comparison", error.generator))
    quasi_isos = {}
    for name, complex_map in maps.items():
        if not chain_maps[name]:
            quasi_isos[name] = False
            continue
        verdict = quasi_iso_check(complex_map, bound)
        quasi_isos[name] = verdict.holds
        if not verdict:
            failures.append((name, verdict.failures))

    hilbert = {
        "end": cohomology_hilbert(hom.module, bound),
        "end_beta": cohomology_hilbert(cylinder, bound),
        "r": cohomology_hilbert(R, bound),
    }
    for name in ("end_beta", "r"):
        mismatches = hilbert["end"].mismatches(hilbert[name])
        if mismatches:
            failures.append((f"hilbert:{name}", tuple(mismatches)))
    h0_matches = _jacobian_matches(hilbert["end"], morphism, scale)
    odd_vanishes = not any(hilbert["end"].odd)
    if not h0_matches:
        failures.append(("h0", "even cohomology differs from the Jacobian quotient"))
    if not odd_vanishes:
        failures.append(("odd", "odd cohomology does not vanish"))
    logger.debug("Zigzag for %s: %d failures", morphism, len(failures))
    return ZigzagVerdict(
        not failures, scale, step, chain_maps, quasi_isos, hilbert, h0_matches, odd_vanishes, tuple(failures)
    )


# functoriality


@dataclass(frozen=True)
class ClauseResult:
    name: str
    holds: bool
    left: object = None
    right: object = None
    mismatches: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class FunctorialityVerdict:
    holds: bool
    clauses: tuple

    def __bool__(self):
        return self.holds

    def clause(self, name):
        for clause in self.clauses:
            if clause.name == name:
                return clause
        raise KeyError(name)


def _verdict(clauses):
    clauses = tuple(clauses)
    for clause in clauses:
        if not clause:
            logger.info("Clause %s failed: %s", clause.name, clause.detail or clause.mismatches)
    return FunctorialityVerdict(all(clauses), clauses)


def _hilbert_clause(name, left, right, detail=""):
    mismatches = tuple(left.mismatches(right))
    return ClauseResult(name, not mismatches, left, right, mismatches, detail)


def _h0_presentation(algebra, bound):
    """Standard-monomial count of H^0 of the reduced model, or None when it is not of Koszul type."""
    gb = h0_ideal(cancel_linear_pairs(algebra)[0])
    return None if gb is None else quotient_hilbert(gb, bound)


def _common_degree(*morphisms):
    degrees = {_degree(m.potential) for m in morphisms}
    return degrees.pop() if len(degrees) == 1 else 0


def _empty_morphism():
    nothing = MFObject(())
    return MFOneMorphism(nothing, nothing, (), Polynomial(VarTable.of(())))


def _legs_agree(span):
    """The two legs of e_one(id_x) agree on H^0 after matching x̃ with x."""
    gb = h0_ideal(span.apex)
    if gb is None:
        return False
    table = even_table(span.apex)
    source, target = span.metadata["source"], span.metadata["target"]
    pairs = list(zip(source.source.names, target.source.names)) + list(zip(source.momenta, target.momenta))
    for left, right in pairs:
        difference = span.left_leg.images[left] - span.right_leg.images[right]
        if not normal_form(difference.to_polynomial(table), gb).is_zero():
            return False
    return True


def check_functoriality_1(f, g, bound=default_bound):
    """
    e(g ∘ f) against e(g) ∘ e(f) (Hilbert function and H^0 presentation),
    e(f ⊠ g) against e(f) × e(g), e(id_x) against the identity span of T*x
    and e(∅, 0) against the identity span of the point.
    """
    clauses = []
    degree = _common_degree(f, g)
    g_aligned = aligned(f, g, Freshener())
    composite = h_compose_1(f, g, Freshener())
    span = compose_span(e_one(f, degree), e_one(g_aligned, degree), bound)
    direct = e_one(composite, degree)
    trusted = span.metadata["trusted_upto"]
    clauses.append(
        _hilbert_clause("composite", span.hilbert(bound).truncated(trusted), direct.hilbert(bound))
    )
    left_h0, right_h0 = _h0_presentation(span.apex, bound), _h0_presentation(direct.apex, bound)
    if left_h0 is None or right_h0 is None:
        clauses.append(ClauseResult("composite-h0", False, detail="apex is not of Koszul type"))
    else:
        clauses.append(_hilbert_clause("composite-h0", left_h0, right_h0))

    product = product_span(e_one(f, degree), e_one(g, degree))
    clauses.append(
        _hilbert_clause("product", product.hilbert(bound), e_one(monoidal_product_1(f, g), degree).hilbert(bound))
    )

    identity = identity_1(f.source)
    unit_degree = _degree(identity.potential)
    unit = e_one(identity, unit_degree)
    diagonal = identity_span(e_object(f.source, unit_degree).stack)
    clause = _hilbert_clause("unit", unit.hilbert(bound), diagonal.hilbert(bound))
    if clause and not _legs_agree(unit):
        clause = ClauseResult("unit", False, clause.left, clause.right, detail="legs differ on H^0")
    clauses.append(clause)

    empty = e_one(_empty_morphism())
    clauses.append(_hilbert_clause("empty", empty.hilbert(bound), identity_span(point()).hilbert(bound)))
    return _verdict(clauses)


_two_cell_composites = {
    "vertical": v_compose_2,
    "horizontal": h_compose_2,
    "product": monoidal_product_2,
}


def _composition_clause(kind, M, N, bound):
    try:
        compose = _two_cell_composites[kind]
    except KeyError:
        raise InputError(f"Unknown composition `{kind}`; expected one of {sorted(_two_cell_composites)}") from None
    composite = e_two(compose(M, N))
    first, second = e_two(M), e_two(N)
    scale = composite.hom.grading.scale if composite.hom.grading else 1
    table = first.hom.source.table.union(second.hom.source.table)
    base = polynomial_algebra(table.scaled(scale))
    # End modules are free over their rings; the plain tensor is the derived one
    left = tensor_modules(
        first.module,
        second.module,
        base,
        CDGAMap(first.module.base, base, check=False),
        CDGAMap(second.module.base, base, check=False),
    )
    return _hilbert_clause(kind, cohomology_hilbert(left, bound), composite.hilbert(bound))


def _span_clause(kind, M, N, bound):
    """The composite of the unit 2-morphisms on the image spans, against the image of the composite."""
    if kind == "vertical":
        unit = unit_two_morphism(e_one(M.target), bound)
        composite = v_compose_2mor(unit, unit, bound)
        return _hilbert_clause("vertical-spans", composite.hilbert(bound), unit.hilbert(bound))
    degree = _common_degree(M.source, N.source)
    first, second = e_one(M.source, degree), e_one(N.source, degree)
    composite = h_compose_2mor(unit_two_morphism(first, bound), unit_two_morphism(second, bound), bound)
    direct = compose_span(first, second, bound)
    return _hilbert_clause("horizontal-spans", composite.hilbert(bound), direct.hilbert(bound))


def _unit_clauses(morphism, bound):
    zigzag = verify_zigzag(morphism, bound)
    yield _hilbert_clause("unit", zigzag.hilbert["end"], zigzag.hilbert["r"])

    empty = e_two(identity_2(_empty_morphism()))
    yield _hilbert_clause("unit-empty", empty.hilbert(bound), cohomology_hilbert(SemifreeCDGA(()), bound))

    identity = identity_1(morphism.source)
    end = e_two(identity_2(identity))
    scale = end.hom.grading.scale if end.hom.grading else 1
    cotangent = e_object(morphism.source, _degree(identity.potential))
    target = polynomial_algebra(even_table(cotangent.algebra).scaled(scale))
    yield _hilbert_clause("unit-identity", end.hilbert(bound), cohomology_hilbert(target, bound))


def check_functoriality_2(first, second=None, bound=default_bound, kind="vertical"):
    """
    For two 2-morphisms: End of the composite against the tensor product of
    the End modules over the joint polynomial ring (`kind` is vertical,
    horizontal or product). Vertical and horizontal composites are also
    taken among the unit 2-morphisms of the image spans. For a single
    1-morphism: the unit clauses e(I) ≍ R, e(I_{(∅,0)}) ≍ 𝕂 and
    e(I_{id_x}) ≍ 𝕂[x, p_x].
    """
    if second is None:
        if not isinstance(first, MFOneMorphism):
            raise InputError("Unit clauses need a 1-morphism")
        return _verdict(_unit_clauses(first, bound))
    clauses = [_composition_clause(kind, first, second, bound)]
    if kind in ("vertical", "horizontal"):
        clauses.append(_span_clause(kind, first, second, bound))
    return _verdict(clauses)


def check_r_identification(morphism, bound=default_bound):
    """R_{(a,V)} against 𝕂[a] ⊗^L_{𝕂[a, p_a]} 𝕂[xya], zero section against the graph of ∂_aV."""
    degree = _degree(morphism.potential)
    weights = [morphism.table.weight(a) for a in morphism.extra]
    cotangent = e_object(MFObject(morphism.extra, weights), degree)
    section = polynomial_algebra(VarTable.of(morphism.extra, weights))
    ring = polynomial_algebra(morphism.table)
    zero_section = CDGAMap(cotangent.algebra, section, {p: 0 for p in cotangent.momenta})
    graph = CDGAMap(
        cotangent.algebra,
        ring,
        {p: ring.from_polynomial(morphism.potential.partial(a)) for a, p in zip(morphism.extra, cotangent.momenta)},
    )
    tensor = derived_tensor(zero_section, graph, bound, resolve="left")
    R = r_algebra(morphism, degree=degree)
    return _hilbert_clause(
        "r-identification", tensor.hilbert(bound), cohomology_hilbert(R, bound), detail=tensor.method
    )
