"""
The 2-category of matrix factorizations: objects are tuples of even
variables, 1-morphisms x -> y are pairs (a, V) with V in 𝕂[x y a], and
2-morphisms (a, V) => (a', V') are factorizations of V' - V over 𝕂[x y a a'].

Variable names are freshened with a `_g<n>` suffix by a per-diagram
`Freshener`, so composites stay deterministic.
"""

import logging
from dataclasses import dataclass, field

from mfdk.errors import InputError
from mfdk.graded_core import cohomology_hilbert, default_bound
from mfdk.matrix_fact import end_complex, hom_complex, tensor_mf, unit_mf, verify_mf
from mfdk.poly_core import Polynomial, VarTable

logger = logging.getLogger(__name__)


class Freshener(object):
    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counter = 0

    def reserve(self, names):
        self.taken.update(names)

    def fresh(self, base):
        if base not in self.taken:
            self.taken.add(base)
            return base
        while True:
            self.counter += 1
            candidate = f"{base}_g{self.counter}"
            if candidate not in self.taken:
                self.taken.add(candidate)
                return candidate


@dataclass(frozen=True)
class MFObject:
    names: tuple
    weights: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        weights = tuple(self.weights) if self.weights is not None else (1,) * len(self.names)
        if len(weights) != len(self.names):
            raise InputError("Object needs one weight per variable")
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.names)

    def table(self):
        return VarTable.of(self.names, self.weights)

    def renamed(self, names):
        return MFObject(tuple(names), self.weights)


@dataclass(frozen=True)
class MFOneMorphism:
    source: MFObject
    target: MFObject
    extra: tuple
    potential: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "extra", tuple(self.extra))
        boundary = set(self.source.names) | set(self.target.names)
        if boundary & set(self.extra):
            raise InputError("Extra variables must be disjoint from the boundary variables")
        if set(self.source.names) & set(self.target.names):
            raise InputError("Source and target variables must be distinct names")
        allowed = boundary | set(self.extra)
        stray = self.potential.variables() - allowed
        if stray:
            raise InputError(f"Potential uses variables outside x, y, a: {sorted(stray)}")
        for name in allowed:
            if name not in self.potential.table:
                raise InputError(f"Variable `{name}` is missing from the potential's ring")

    @property
    def table(self):
        return self.potential.table

    def names(self):
        return self.source.names + self.target.names + self.extra

    def renamed(self, mapping):
        """The same 1-morphism with variables renamed."""
        names = [mapping.get(n, n) for n in self.table.names]
        table = VarTable.of(names, self.table.weights)
        return MFOneMorphism(
            self.source.renamed(mapping.get(n, n) for n in self.source.names),
            self.target.renamed(mapping.get(n, n) for n in self.target.names),
            tuple(mapping.get(n, n) for n in self.extra),
            self.potential.to_table(table, mapping),
        )

    def __str__(self):
        return f"({', '.join(self.extra) or '∅'}; {self.potential}): {self.source.names} -> {self.target.names}"


@dataclass
class MFTwoMorphism:
    source: MFOneMorphism
    target: MFOneMorphism
    representative: object
    internal: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.source.source.names != self.target.source.names or (
            self.source.target.names != self.target.target.names
        ):
            raise InputError("2-morphism needs 1-morphisms with the same boundary")
        table = self.representative.table
        expected = self.target.potential.to_table(table) - self.source.potential.to_table(table)
        if self.representative.potential != expected:
            raise InputError(
                f"Representative factors {self.representative.potential}, expected {expected}"
            )
        verdict = verify_mf(self.representative)
        if not verdict:
            raise InputError(f"Representative is not a matrix factorization: {verdict.message}")


def _union_table(*tables):
    result = tables[0]
    for table in tables[1:]:
        result = result.union(table)
    return result


def _freshen(morphism, keep, freshener):
    """Renames every variable of `morphism` not in `keep` that is already taken."""
    mapping = {}
    for name in morphism.table.names:
        if name in keep:
            continue
        new = freshener.fresh(name)
        if new != name:
            mapping[name] = new
    return morphism.renamed(mapping) if mapping else morphism, mapping


def aligned(f, g, freshener=None):
    """`g` renamed so its source variables are f's target variables and nothing else clashes with f."""
    if len(f.target) != len(g.source) or f.target.weights != g.source.weights:
        raise InputError("1-morphisms are not composable")
    freshener = freshener or Freshener()
    freshener.reserve(f.table.names)
    g, renamed = _freshen(g, set(g.source.names), freshener)
    if renamed:
        logger.debug("Freshened %s in horizontal composite", renamed)
    return g.renamed(dict(zip(g.source.names, f.target.names)))


def h_compose_1(f, g, freshener=None):
    """(b, W) ∘ (a, V) = (a y b, V + W), matching g's source variables to f's target."""
    g = aligned(f, g, freshener)
    table = _union_table(f.table, g.table)
    potential = f.potential.to_table(table) + g.potential.to_table(table)
    return MFOneMorphism(f.source, g.target, f.extra + f.target.names + g.extra, potential)


def identity_1(x, freshener=None):
    """id_x = (a, Σ a_i (x̃_i - x_i)) : x -> x̃."""
    freshener = freshener or Freshener()
    freshener.reserve(x.names)
    tilde = tuple(freshener.fresh(name) for name in x.names)
    extra = tuple(freshener.fresh("a") for _ in x.names)
    table = VarTable.of(x.names + tilde + extra, x.weights * 2 + x.weights)
    potential = Polynomial(table)
    for name, new, a in zip(x.names, tilde, extra):
        potential = potential + Polynomial.variable(table, a) * (
            Polynomial.variable(table, new) - Polynomial.variable(table, name)
        )
    return MFOneMorphism(x, MFObject(tilde, x.weights), extra, potential)


def monoidal_product_1(f, g, freshener=None):
    """(a, V) ⊠ (b, W) = (a b, V + W): x x' -> y y'."""
    freshener = freshener or Freshener()
    freshener.reserve(f.table.names)
    g, _ = _freshen(g, set(), freshener)
    table = _union_table(f.table, g.table)
    return MFOneMorphism(
        MFObject(f.source.names + g.source.names, f.source.weights + g.source.weights),
        MFObject(f.target.names + g.target.names, f.target.weights + g.target.weights),
        f.extra + g.extra,
        f.potential.to_table(table) + g.potential.to_table(table),
    )


def primed_copy(morphism, freshener=None):
    """The 1-morphism with its extra variables renamed to fresh primed names."""
    freshener = freshener or Freshener(morphism.table.names)
    freshener.reserve(morphism.table.names)
    mapping = {a: freshener.fresh(f"{a}'") for a in morphism.extra}
    return morphism.renamed(mapping), mapping


def identity_2(morphism, freshener=None):
    """I_{(a, V)} : (a, V) => (a', V')."""
    target, mapping = primed_copy(morphism, freshener)
    unit = unit_mf(
        morphism.source.names,
        morphism.target.names,
        morphism.extra,
        morphism.potential,
        primes=[mapping[a] for a in morphism.extra],
    )
    return MFTwoMorphism(morphism, target, unit)


def _same_one_morphism(f, g):
    if f.extra != g.extra or f.source.names != g.source.names or f.target.names != g.target.names:
        return False
    table = _union_table(f.table, g.table)
    return f.potential.to_table(table) == g.potential.to_table(table)


def v_compose_2(M, N):
    """N ∘ M = M ⊗ N over the shared ring 𝕂[x y a b c]; the potentials telescope to W - U."""
    if not _same_one_morphism(M.target, N.source):
        raise InputError("Vertical composite needs matching middle 1-morphisms")
    table = _union_table(M.representative.table, N.representative.table)
    product = tensor_mf(M.representative.to_table(table), N.representative.to_table(table))
    internal = M.internal + N.internal + M.target.extra
    return MFTwoMorphism(M.source, N.target, product, internal)


def h_compose_2(M, N):
    """Tensor product over the middle ring 𝕂[y] of two 2-morphisms x -> y and y -> z."""
    if M.source.target.names != N.source.source.names:
        raise InputError("Horizontal composite needs the middle object variables to agree")
    middle = set(M.source.target.names)
    clashes = (set(N.representative.table.names) - middle) & set(M.representative.table.names)
    if clashes:
        raise InputError(f"Horizontal composite needs disjoint extra variables; shared {sorted(clashes)}")
    source = h_compose_1(M.source, N.source, Freshener())
    target = h_compose_1(M.target, N.target, Freshener())
    table = _union_table(M.representative.table, N.representative.table)
    product = tensor_mf(M.representative.to_table(table), N.representative.to_table(table))
    return MFTwoMorphism(source, target, product, M.internal + N.internal)


def monoidal_product_2(M, N):
    """External tensor product over 𝕂 of 2-morphisms with disjoint variables."""
    shared = set(M.representative.table.names) & set(N.representative.table.names)
    if shared:
        raise InputError(f"Monoidal product needs disjoint variables; shared {sorted(shared)}")
    source = monoidal_product_1(M.source, N.source)
    target = monoidal_product_1(M.target, N.target)
    table = _union_table(M.representative.table, N.representative.table)
    product = tensor_mf(M.representative.to_table(table), N.representative.to_table(table))
    return MFTwoMorphism(source, target, product, M.internal + N.internal)


def end_hilbert(M, bound=default_bound):
    """Cohomology Hilbert function of End of a 2-morphism's representative."""
    representative = M.representative if isinstance(M, MFTwoMorphism) else M
    return cohomology_hilbert(end_complex(representative).module, bound)


@dataclass(frozen=True)
class LawVerdict:
    holds: bool
    left: object
    right: object
    mismatches: tuple = ()

    def __bool__(self):
        return self.holds


def unit_law_check(M, bound=default_bound):
    """
    Compares End(M) with Hom(M', M ∘ I), where I is the unit on the target
    of M and M' is M with the target's extra variables renamed to the primed
    ones. Both live over the composite's own ring.
    """
    unit = identity_2(M.target)
    composite = v_compose_2(M, unit)
    table = composite.representative.table
    mapping = {a: unit.target.extra[k] for k, a in enumerate(M.target.extra)}
    names = [mapping.get(n, n) for n in M.representative.table.names]
    renamed = M.representative.to_table(VarTable.of(names, M.representative.table.weights), mapping)
    left = end_hilbert(M.representative, bound)
    right = cohomology_hilbert(hom_complex(renamed.to_table(table), composite.representative).module, bound)
    mismatches = tuple(left.mismatches(right))
    logger.debug("Unit law at bound %d: %d mismatches", bound, len(mismatches))
    return LawVerdict(not mismatches, left, right, mismatches)


def interchange_check(M, N, M2, N2, bound=default_bound):
    """
    (N ∘ M) · (N2 ∘ M2) against (N · N2) ∘ (M · M2) through their End
    cohomology, with ∘ vertical and · horizontal composition.
    """
    first = h_compose_2(v_compose_2(M, N), v_compose_2(M2, N2))
    second = v_compose_2(h_compose_2(M, M2), h_compose_2(N, N2))
    left = end_hilbert(first, bound)
    right = end_hilbert(second, bound)
    mismatches = tuple(left.mismatches(right))
    return LawVerdict(not mismatches, left, right, mismatches)
