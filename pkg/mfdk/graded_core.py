"""
Z/2-graded semifree commutative dg-algebras and dg-modules.

A monomial is a pair `(exps, odd)`: an exponent vector over the even
generators and a strictly increasing tuple of odd-generator indices. Moving
odd generators past each other costs the Koszul sign, so every product is
normalized to ascending odd indices with the sign of the sorting
permutation. Every differential is odd and extended by the graded Leibniz
rule d(uv) = d(u)v + (-1)^{|u|} u d(v).

Cohomology is computed per internal weight by exact rank computations. When
all generator differentials shift weight by one fixed step the computation
is exact in every weight up to the bound; otherwise the associated graded of
the weight filtration is reported on a shrunken trusted window.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from mfdk.errors import ChainMapError, ConsistencyError, InputError, UnknownVariableError, VerificationError
from mfdk.expression import parse_expression
from mfdk.hilbert import hilbert_from_dims
from mfdk.linear_algebra import EchelonBasis, LinearMap, combine, independent_modulo, rank_of
from mfdk.poly_core import Polynomial, VarTable, groebner_basis, monomials_of_weight

logger = logging.getLogger(__name__)

default_bound = 8
default_tate_rounds = 6

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class GradedVar:
    name: str
    parity: int
    weight: int

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise InputError(f"Generator `{self.name}` has parity {self.parity}; expected 0 or 1")
        if not isinstance(self.weight, int):
            raise InputError(f"Generator `{self.name}` needs an integer weight")


def fresh_name(base, taken):
    if base not in taken:
        return base
    for n in itertools.count(2):
        candidate = f"{base}_{n}"
        if candidate not in taken:
            return candidate


def _merge_odd(left, right):
    if not left or not right:
        return 1, left + right
    if set(left) & set(right):
        return None
    inversions = 0
    for i in left:
        for j in right:
            if i > j:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(left + right))


def monomial_product(m1, m2):
    """(sign, monomial) for m1*m2, or None when an odd generator repeats."""
    merged = _merge_odd(m1[1], m2[1])
    if merged is None:
        return None
    sign, odd = merged
    return sign, (tuple(a + b for a, b in zip(m1[0], m2[0])), odd)


def _sort_sign(indices):
    """Sign of the permutation sorting `indices` (distinct), and the sorted tuple."""
    inversions = sum(1 for i, j in itertools.combinations(indices, 2) if i > j)
    return (-1 if inversions & 1 else 1), tuple(sorted(indices))


def _add_into(terms, key, value):
    updated = terms.get(key, 0) + value
    if updated:
        terms[key] = updated
    else:
        terms.pop(key, None)


class GradedElement(object):
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {}
        for key, value in (terms or {}).items():
            if value:
                self.terms[key] = value if isinstance(value, Fraction) else Fraction(value)

    def _coerce(self, other):
        if isinstance(other, GradedElement):
            if other.algebra is self.algebra or other.algebra.generators == self.algebra.generators:
                return other
            raise InputError("Graded elements belong to different algebras")
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for key, value in other.terms.items():
            _add_into(terms, key, value)
        return GradedElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                product = monomial_product(m1, m2)
                if product is not None:
                    _add_into(terms, product[1], product[0] * c1 * c2)
        return GradedElement(self.algebra, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError("Graded elements only take nonnegative integer powers")
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, value):
        value = Fraction(value)
        return GradedElement(self.algebra, {k: v * value for k, v in self.terms.items()})

    def parity(self):
        """Parity of a homogeneous element (0 for zero), None when mixed."""
        parities = {len(odd) & 1 for _, odd in self.terms}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else EVEN

    def parity_parts(self):
        even = {k: v for k, v in self.terms.items() if not len(k[1]) & 1}
        odd = {k: v for k, v in self.terms.items() if len(k[1]) & 1}
        return GradedElement(self.algebra, even), GradedElement(self.algebra, odd)

    def term_weights(self):
        return {self.algebra.monomial_weight(m) for m in self.terms}

    def homogeneous_weight(self):
        weights = self.term_weights()
        return weights.pop() if len(weights) == 1 else None

    def involves(self, name):
        algebra = self.algebra
        if name in algebra._even_index:
            i = algebra._even_index[name]
            return any(exps[i] for exps, _ in self.terms)
        i = algebra._odd_index[name]
        return any(i in odd for _, odd in self.terms)

    def d(self):
        return self.algebra.d(self)

    def to_polynomial(self, table, rename=None):
        """Converts an element without odd generators into a Polynomial over `table`."""
        rename = rename or {}
        positions = [table.index(rename.get(g.name, g.name)) for g in self.algebra.even]
        terms = {}
        for (exps, odd), value in self.terms.items():
            if odd:
                raise InputError("Element involves odd generators; not a polynomial")
            new = [0] * len(table)
            for position, e in zip(positions, exps):
                new[position] += e
            terms[tuple(new)] = value
        return Polynomial(table, terms)

    def to_string(self):
        if not self.terms:
            return "0"
        algebra = self.algebra
        pieces = []
        for (exps, odd), value in sorted(
            self.terms.items(), key=lambda item: (-algebra.monomial_weight(item[0]), item[0])
        ):
            factors = []
            for g, e in zip(algebra.even, exps):
                if e == 1:
                    factors.append(g.name)
                elif e > 1:
                    factors.append(f"{g.name}^{e}")
            factors.extend(algebra.odd[i].name for i in odd)
            magnitude = abs(value)
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            body = "*".join(factors)
            if not pieces:
                pieces.append(f"-{body}" if value < 0 else body)
            else:
                pieces.append(f"- {body}" if value < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"GradedElement({self.to_string()!r})"


def transport(element, target, rename=None):
    """Moves an element into `target` by generator names, re-signing reordered odd factors."""
    rename = rename or {}
    source = element.algebra
    if source is target:
        return element
    even_map = []
    for g in source.even:
        name = rename.get(g.name, g.name)
        if name not in target._even_index:
            if element.involves(g.name):
                raise UnknownVariableError(name, "transport target")
            even_map.append(None)
        else:
            even_map.append(target._even_index[name])
    odd_map = []
    for g in source.odd:
        name = rename.get(g.name, g.name)
        odd_map.append(target._odd_index.get(name))
    size = len(target.even)
    terms = {}
    for (exps, odd), value in element.terms.items():
        new = [0] * size
        for position, e in zip(even_map, exps):
            if e:
                new[position] += e
        mapped = [odd_map[i] for i in odd]
        if None in mapped:
            raise UnknownVariableError(source.odd[odd[mapped.index(None)]].name, "transport target")
        sign, ordered = _sort_sign(mapped)
        _add_into(terms, (tuple(new), ordered), sign * value)
    return GradedElement(target, terms)


class SemifreeCDGA(object):
    """
    Free graded-commutative algebra on even (polynomial) and odd (exterior)
    generators with a differential given on generators. Even generators need
    positive weight; odd generators may have any integer weight.
    """

    def __init__(self, generators, differential=None, name=None, check=True):
        self.generators = tuple(generators)
        self.name = name
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError(f"Duplicate generator names in {names}")
        self.even = tuple(g for g in self.generators if g.parity == EVEN)
        self.odd = tuple(g for g in self.generators if g.parity == ODD)
        for g in self.even:
            if g.weight <= 0:
                raise InputError(f"Even generator `{g.name}` needs positive weight, got {g.weight}")
        self._even_index = {g.name: i for i, g in enumerate(self.even)}
        self._odd_index = {g.name: i for i, g in enumerate(self.odd)}
        self._even_weights = tuple(g.weight for g in self.even)
        self._by_name = {g.name: g for g in self.generators}
        self._d_cache = {}
        self._basis_cache = {}
        self._odd_subsets = None

        differential = dict(differential or {})
        unknown = set(differential) - set(names)
        if unknown:
            raise UnknownVariableError(sorted(unknown)[0], "differential")
        self._d = {}
        for g in self.generators:
            image = self._coerce_image(differential.get(g.name))
            parity = image.parity()
            if image and parity != 1 - g.parity:
                raise InputError(f"Differential of `{g.name}` must have parity {1 - g.parity}")
            self._d[g.name] = image
        if check:
            self.check_square_zero()

    def _coerce_image(self, value):
        if value is None:
            return self.zero()
        if isinstance(value, GradedElement):
            if value.algebra is self or value.algebra.generators == self.generators:
                return GradedElement(self, value.terms)
            return transport(value, self)
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Polynomial):
            return self.from_polynomial(value)
        if isinstance(value, (int, Fraction)):
            return self.scalar(value)
        raise InputError(f"Cannot read {value!r} as an element")

    # elements

    def zero(self):
        return GradedElement(self, {})

    def scalar(self, value):
        return GradedElement(self, {((0,) * len(self.even), ()): Fraction(value)} if value else {})

    def one(self):
        return self.scalar(1)

    def gen(self, name):
        if name in self._even_index:
            exps = [0] * len(self.even)
            exps[self._even_index[name]] = 1
            return GradedElement(self, {(tuple(exps), ()): Fraction(1)})
        if name in self._odd_index:
            return GradedElement(self, {((0,) * len(self.even), (self._odd_index[name],)): Fraction(1)})
        raise UnknownVariableError(name)

    def element(self, terms):
        return GradedElement(self, terms)

    def monomial(self, key):
        return GradedElement(self, {key: Fraction(1)})

    def parse(self, text):
        return parse_expression(text, self.scalar, self.gen)

    def from_polynomial(self, p, rename=None):
        rename = rename or {}
        positions = []
        for name in p.table.names:
            target = rename.get(name, name)
            positions.append(self._even_index.get(target))
        size = len(self.even)
        terms = {}
        for exps, value in p.terms.items():
            new = [0] * size
            for name, position, e in zip(p.table.names, positions, exps):
                if not e:
                    continue
                if position is None:
                    raise UnknownVariableError(rename.get(name, name), "algebra")
                new[position] += e
            _add_into(terms, (tuple(new), ()), value)
        return GradedElement(self, terms)

    def generator(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def names(self):
        return [g.name for g in self.generators]

    def same_as(self, other):
        return self.generators == other.generators and all(
            self._d[g.name].terms == other._d[g.name].terms for g in self.generators
        )

    def is_zero_differential(self):
        return not any(self._d.values())

    def differential_of(self, name):
        return self._d[name]

    def monomial_weight(self, monomial):
        exps, odd = monomial
        return sum(e * w for e, w in zip(exps, self._even_weights)) + sum(
            self.odd[i].weight for i in odd
        )

    # differential

    def d_monomial(self, monomial):
        cached = self._d_cache.get(monomial)
        if cached is not None:
            return cached
        exps, odd = monomial
        result = {}
        tail = ((0,) * len(exps), odd)
        for i, e in enumerate(exps):
            if not e:
                continue
            image = self._d[self.even[i].name]
            if not image:
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1:]
            for (ge, go), value in image.terms.items():
                product = monomial_product((tuple(a + b for a, b in zip(lowered, ge)), go), tail)
                if product is not None:
                    _add_into(result, product[1], product[0] * e * value)
        zeros = (0,) * len(exps)
        for k, index in enumerate(odd):
            image = self._d[self.odd[index].name]
            if not image:
                continue
            sign = -1 if k & 1 else 1
            left = (exps, odd[:k])
            right = (zeros, odd[k + 1:])
            for term, value in image.terms.items():
                first = monomial_product(left, term)
                if first is None:
                    continue
                second = monomial_product(first[1], right)
                if second is None:
                    continue
                _add_into(result, second[1], sign * first[0] * second[0] * value)
        self._d_cache[monomial] = result
        return result

    def d(self, element):
        result = {}
        for monomial, value in element.terms.items():
            for key, coefficient in self.d_monomial(monomial).items():
                _add_into(result, key, value * coefficient)
        return GradedElement(self, result)

    def check_square_zero(self):
        for g in self.generators:
            if self.d(self._d[g.name]):
                raise VerificationError(f"Differential does not square to zero on generator `{g.name}`")

    def shifts(self):
        """Weight shifts of the differential, over all generator images."""
        found = set()
        for g in self.generators:
            for monomial in self._d[g.name].terms:
                found.add(self.monomial_weight(monomial) - g.weight)
        return found

    # weight-graded pieces

    def _subsets(self):
        if self._odd_subsets is None:
            subsets = []
            indices = range(len(self.odd))
            for size in range(len(self.odd) + 1):
                for subset in itertools.combinations(indices, size):
                    weight = sum(self.odd[i].weight for i in subset)
                    subsets.append((subset, weight, size & 1))
            self._odd_subsets = subsets
        return self._odd_subsets

    def basis(self, weight, parity):
        key = (weight, parity)
        cached = self._basis_cache.get(key)
        if cached is None:
            cached = []
            for subset, subset_weight, subset_parity in self._subsets():
                if subset_parity != parity:
                    continue
                for exps in monomials_of_weight(self._even_weights, weight - subset_weight):
                    cached.append((exps, subset))
            self._basis_cache[key] = cached
        return cached

    def complex_basis(self, weight, parity):
        return self.basis(weight, parity)

    def complex_d(self, key):
        return self.d_monomial(key)

    def complex_low(self):
        return sum(min(0, g.weight) for g in self.odd)

    # construction helpers

    def adjoin(self, generators, differential=None, check=True, name=None):
        """This algebra with more generators; differential values are read by generator name."""
        generators = self.generators + tuple(generators)
        skeleton = SemifreeCDGA(generators, check=False)
        images = {g.name: transport(self._d[g.name], skeleton) for g in self.generators}
        for key, value in (differential or {}).items():
            if isinstance(value, GradedElement):
                value = transport(value, skeleton) if value.algebra.generators != generators else value
            images[key] = value
        return SemifreeCDGA(generators, images, check=check, name=name or self.name)

    def __repr__(self):
        parts = []
        for g in self.generators:
            kind = "even" if g.parity == EVEN else "odd"
            image = self._d[g.name]
            text = f"{g.name}:{kind}:{g.weight}"
            if image:
                text += f" d={image}"
            parts.append(text)
        return f"SemifreeCDGA({', '.join(parts)})"


def polynomial_algebra(table, name=None):
    """The polynomial ring of a variable table as a cdga with zero differential."""
    return SemifreeCDGA(
        [GradedVar(n, EVEN, w) for n, w in zip(table.names, table.weights)], name=name
    )


def even_table(algebra):
    """Variable table of the even generators of `algebra`."""
    return VarTable.of([g.name for g in algebra.even], [g.weight for g in algebra.even])


def extend_leibniz(A, e):
    if e.algebra is not A and e.algebra.generators != A.generators:
        raise InputError("Element does not belong to the algebra")
    return A.d(e)


class CDGAMap(object):
    """
    Algebra map given on generators. Generators missing from `images` go to
    the target generator of the same name.
    """

    def __init__(self, source, target, images=None, check=True, name=None):
        self.source = source
        self.target = target
        self.name = name
        images = dict(images or {})
        unknown = set(images) - set(source.names())
        if unknown:
            raise UnknownVariableError(sorted(unknown)[0], "map source")
        self.images = {}
        for g in source.generators:
            value = images.get(g.name)
            if value is None:
                value = target.gen(g.name)
            value = target._coerce_image(value)
            parity = value.parity()
            if value and parity != g.parity:
                raise InputError(f"Image of `{g.name}` has the wrong parity")
            self.images[g.name] = value
        self._even_images = [self.images[g.name] for g in source.even]
        self._odd_images = [self.images[g.name] for g in source.odd]
        self._powers = {}
        self._cache = {}
        if check:
            self.check_chain()

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, algebra, check=False)

    def check_chain(self):
        for g in self.source.generators:
            lhs = self.target.d(self.images[g.name])
            rhs = self.apply(self.source.differential_of(g.name))
            if lhs != rhs:
                raise ChainMapError(g.name)

    def _power(self, index, exponent):
        key = (index, exponent)
        if key not in self._powers:
            self._powers[key] = self._even_images[index] ** exponent
        return self._powers[key]

    def apply_monomial(self, monomial):
        cached = self._cache.get(monomial)
        if cached is not None:
            return cached
        exps, odd = monomial
        result = self.target.one()
        for i, e in enumerate(exps):
            if e:
                result = result * self._power(i, e)
        for i in odd:
            result = result * self._odd_images[i]
        self._cache[monomial] = result
        return result

    def apply(self, element):
        if element.algebra is not self.source and element.algebra.generators != self.source.generators:
            raise InputError("Element is not in the source of the map")
        result = {}
        for monomial, value in element.terms.items():
            for key, coefficient in self.apply_monomial(monomial).terms.items():
                _add_into(result, key, value * coefficient)
        return GradedElement(self.target, result)

    def then(self, other, check=False):
        """The composite `other ∘ self`."""
        return CDGAMap(
            self.source,
            other.target,
            {name: other.apply(image) for name, image in self.images.items()},
            check=check,
        )

    def generator_image_names(self):
        """Name of the target generator hit by each source generator, or None if some image is not a generator."""
        found = {}
        for g in self.source.generators:
            image = self.images[g.name]
            if len(image.terms) != 1:
                return None
            (exps, odd), value = next(iter(image.terms.items()))
            if value != 1:
                return None
            if odd:
                if any(exps) or len(odd) != 1:
                    return None
                target = self.target.odd[odd[0]]
            else:
                if sum(exps) != 1:
                    return None
                target = self.target.even[exps.index(1)]
            if target.weight != g.weight:
                return None
            found[g.name] = target.name
        if len(set(found.values())) != len(found):
            return None
        return found

    def is_generator_inclusion(self):
        return self.generator_image_names() is not None

    def as_complex_map(self):
        return ComplexMap(self.source, self.target, lambda key: self.apply_monomial(key).terms)

    def __repr__(self):
        return "CDGAMap(" + ", ".join(f"{k}↦{v}" for k, v in self.images.items()) + ")"


def inclusion(source, target, rename=None, check=True):
    rename = rename or {}
    return CDGAMap(
        source, target, {g.name: target.gen(rename.get(g.name, g.name)) for g in source.generators}, check=check
    )


@dataclass
class TensorProduct:
    algebra: SemifreeCDGA
    left: CDGAMap
    right: CDGAMap
    renamed: dict = field(default_factory=dict)


def tensor_with_inclusions(A, B, name=None):
    taken = set(A.names())
    avoid = taken | set(B.names())
    renamed = {}
    generators = list(A.generators)
    for g in B.generators:
        new_name = g.name
        if new_name in taken:
            new_name = fresh_name(g.name, avoid)
            renamed[g.name] = new_name
            avoid.add(new_name)
        taken.add(new_name)
        generators.append(GradedVar(new_name, g.parity, g.weight))
    if renamed:
        logger.info("Renamed generators in tensor product: %s", renamed)
    skeleton = SemifreeCDGA(generators, check=False)
    differential = {g.name: transport(A.differential_of(g.name), skeleton) for g in A.generators}
    for g in B.generators:
        differential[renamed.get(g.name, g.name)] = transport(B.differential_of(g.name), skeleton, renamed)
    algebra = SemifreeCDGA(generators, differential, check=False, name=name)
    return TensorProduct(
        algebra,
        inclusion(A, algebra, check=False),
        inclusion(B, algebra, renamed, check=False),
        renamed,
    )


def tensor_cdga(A, B):
    return tensor_with_inclusions(A, B).algebra


def pair_map(product, f, g, check=True):
    """The map A⊗B -> T restricting to `f` on A and `g` on B."""
    left_names = product.left.generator_image_names()
    right_names = product.right.generator_image_names()
    images = {left_names[name]: image for name, image in f.images.items()}
    images.update({right_names[name]: image for name, image in g.images.items()})
    return CDGAMap(product.algebra, f.target, images, check=check)


def generator_census(A):
    return len(A.even), len(A.odd), A.is_zero_differential()


def generator_name(element):
    """Name of the generator `element` is, or None."""
    if len(element.terms) != 1:
        return None
    (exps, odd), value = next(iter(element.terms.items()))
    algebra = element.algebra
    if value != 1:
        return None
    if odd:
        return algebra.odd[odd[0]].name if len(odd) == 1 and not any(exps) else None
    if sum(exps) == 1:
        return algebra.even[exps.index(1)].name
    return None


# modules


class SemifreeModule(object):
    """
    Free module over a semifree cdga on homogeneous generators, with
    D(g) = sum of coefficient * g' (coefficients on the left) and
    D(c g) = d(c) g + (-1)^{|c|} c D(g). D squares to multiplication by
    `curvature` (zero for dg-modules).
    """

    def __init__(self, base, generators, differential=None, curvature=None, check=True, name=None):
        self.base = base
        self.generators = tuple(generators)
        self.name = name
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError(f"Duplicate module generator names in {names}")
        self._index = {name: i for i, name in enumerate(names)}
        self.curvature = base._coerce_image(curvature) if curvature is not None else base.zero()
        self._D = []
        differential = differential or {}
        unknown = set(differential) - set(names)
        if unknown:
            raise UnknownVariableError(sorted(unknown)[0], "module differential")
        for g in self.generators:
            row = []
            for target_name, value in (differential.get(g.name) or {}).items():
                if target_name not in self._index:
                    raise UnknownVariableError(target_name, "module differential")
                coefficient = base._coerce_image(value)
                if not coefficient:
                    continue
                target = self.generators[self._index[target_name]]
                expected = (g.parity + 1 + target.parity) & 1
                if coefficient.parity() != expected:
                    raise InputError(
                        f"Coefficient of `{target_name}` in D({g.name}) must have parity {expected}"
                    )
                row.append((self._index[target_name], coefficient))
            self._D.append(row)
        self._d_cache = {}
        self._basis_cache = {}
        if check:
            self.check_square()

    def generator_index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name, "module") from None

    def differential_of(self, name):
        return {self.generators[j].name: c for j, c in self._D[self.generator_index(name)]}

    def apply_d(self, element):
        """D on a module element given as {generator name: base coefficient}."""
        result = {}

        def add(name, value):
            current = result.get(name)
            result[name] = value if current is None else current + value

        for name, coefficient in element.items():
            coefficient = self.base._coerce_image(coefficient)
            if not coefficient:
                continue
            add(name, self.base.d(coefficient))
            even, odd = coefficient.parity_parts()
            for j, c in self._D[self.generator_index(name)]:
                add(self.generators[j].name, even * c - odd * c)
        return {k: v for k, v in result.items() if v}

    def check_square(self):
        for g in self.generators:
            square = self.apply_d(self.apply_d({g.name: self.base.one()}))
            expected = {g.name: self.curvature} if self.curvature else {}
            if square != expected:
                raise VerificationError(f"Module differential squares wrongly on generator `{g.name}`")

    def complex_basis(self, weight, parity):
        key = (weight, parity)
        cached = self._basis_cache.get(key)
        if cached is None:
            cached = []
            for i, g in enumerate(self.generators):
                for monomial in self.base.basis(weight - g.weight, (parity - g.parity) & 1):
                    cached.append((monomial, i))
            self._basis_cache[key] = cached
        return cached

    def complex_d(self, key):
        cached = self._d_cache.get(key)
        if cached is not None:
            return cached
        monomial, i = key
        result = {}
        for image, value in self.base.d_monomial(monomial).items():
            _add_into(result, (image, i), value)
        sign = -1 if len(monomial[1]) & 1 else 1
        for j, coefficient in self._D[i]:
            for term, value in coefficient.terms.items():
                product = monomial_product(monomial, term)
                if product is not None:
                    _add_into(result, (product[1], j), sign * product[0] * value)
        self._d_cache[key] = result
        return result

    def complex_low(self):
        if not self.generators:
            return 0
        return min(g.weight for g in self.generators) + self.base.complex_low()

    def shifts(self):
        found = set(self.base.shifts())
        for i, g in enumerate(self.generators):
            for j, coefficient in self._D[i]:
                for monomial in coefficient.terms:
                    found.add(self.base.monomial_weight(monomial) + self.generators[j].weight - g.weight)
        return found

    def base_change(self, f, check=False):
        if not f.source.same_as(self.base) and f.source.generators != self.base.generators:
            raise InputError("Base change map does not start at the module's base")
        differential = {
            g.name: {self.generators[j].name: f.apply(c) for j, c in self._D[i]}
            for i, g in enumerate(self.generators)
        }
        return SemifreeModule(
            f.target,
            self.generators,
            differential,
            curvature=f.apply(self.curvature) if self.curvature else None,
            check=check,
            name=self.name,
        )

    def rank(self):
        evens = sum(1 for g in self.generators if g.parity == EVEN)
        return evens, len(self.generators) - evens


def tensor_modules(M, N, base, left_map, right_map, check=True):
    """M ⊗ N over `base`, with M and N pushed forward along `left_map` and `right_map`."""
    generators = []
    pairs = []
    for g in M.generators:
        for h in N.generators:
            generators.append(GradedVar(f"{g.name}|{h.name}", (g.parity + h.parity) & 1, g.weight + h.weight))
            pairs.append((g, h))
    differential = {}
    for g, h in pairs:
        row = {}

        def add(name, value):
            current = row.get(name)
            row[name] = value if current is None else current + value

        for j, c in M._D[M.generator_index(g.name)]:
            add(f"{M.generators[j].name}|{h.name}", left_map.apply(c))
        for j, c in N._D[N.generator_index(h.name)]:
            even, odd = right_map.apply(c).parity_parts()
            sign = -1 if g.parity else 1
            odd_sign = -sign if g.parity else sign
            add(f"{g.name}|{N.generators[j].name}", even * sign + odd * odd_sign)
        differential[f"{g.name}|{h.name}"] = row
    curvature = None
    if M.curvature or N.curvature:
        curvature = left_map.apply(M.curvature) + right_map.apply(N.curvature)
    return SemifreeModule(base, generators, differential, curvature=curvature, check=check)


# maps of complexes and cohomology


class ComplexMap(object):
    """Linear map between weight-graded complexes, given on basis keys."""

    def __init__(self, source, target, on_basis):
        self.source = source
        self.target = target
        self.on_basis = on_basis

    def apply_vector(self, vector):
        total = {}
        for key, value in vector.items():
            for image, coefficient in self.on_basis(key).items():
                _add_into(total, image, value * coefficient)
        return total

    def then(self, other):
        return ComplexMap(self.source, other.target, lambda key: other.apply_vector(self.on_basis(key)))

    def check_chain(self, weights):
        for weight in weights:
            for parity in (EVEN, ODD):
                for key in self.source.complex_basis(weight, parity):
                    lhs = self.apply_vector(self.source.complex_d(key))
                    rhs = {}
                    for image, value in self.on_basis(key).items():
                        for k, c in self.target.complex_d(image).items():
                            _add_into(rhs, k, value * c)
                    if lhs != rhs:
                        raise ChainMapError(str(key))


class MappingCylinder(object):
    """
    Cyl(f) = A ⊕ A[1] ⊕ B for a chain map f: A -> B of odd weight shift
    `step`, with D(s a) = -a - s(da) + f(a). The inclusion of B is always a
    quasi-isomorphism; the inclusion of A is one exactly when f is.
    Keys are ("source", k), ("suspension", k) and ("target", k).
    """

    def __init__(self, f, step):
        self.map = f
        self.step = step
        self._d_cache = {}

    def source_inclusion(self):
        return ComplexMap(self.map.source, self, lambda key: {("source", key): 1})

    def target_inclusion(self):
        return ComplexMap(self.map.target, self, lambda key: {("target", key): 1})

    def complex_basis(self, weight, parity):
        source, target = self.map.source, self.map.target
        return (
            [("source", k) for k in source.complex_basis(weight, parity)]
            + [("suspension", k) for k in source.complex_basis(weight + self.step, 1 - parity)]
            + [("target", k) for k in target.complex_basis(weight, parity)]
        )

    def complex_d(self, key):
        cached = self._d_cache.get(key)
        if cached is not None:
            return cached
        part, inner = key
        if part == "source":
            result = {("source", k): v for k, v in self.map.source.complex_d(inner).items()}
        elif part == "target":
            result = {("target", k): v for k, v in self.map.target.complex_d(inner).items()}
        else:
            result = {("source", inner): -1}
            for k, v in self.map.source.complex_d(inner).items():
                _add_into(result, ("suspension", k), -v)
            for k, v in self.map.on_basis(inner).items():
                _add_into(result, ("target", k), v)
        self._d_cache[key] = result
        return result

    def complex_low(self):
        low = self.map.source.complex_low()
        return min(low, self.map.target.complex_low(), low - self.step)

    def shifts(self):
        return set(self.map.source.shifts()) | set(self.map.target.shifts()) | {self.step}


def differential_mode(complex_):
    """('zero', 0) | ('graded', step) | ('filtered', largest absolute shift)."""
    shifts = complex_.shifts()
    if not shifts:
        return "zero", 0
    if len(shifts) == 1:
        return "graded", next(iter(shifts))
    return "filtered", max(abs(s) for s in shifts)


def cohomology_hilbert(M, bound=default_bound, reduce=True):
    """
    Cohomology dimensions per (weight, parity). Contractible generator pairs
    are cancelled first when `reduce` is set.
    """
    if reduce:
        M = reduced(M)
    mode, step = differential_mode(M)
    low = M.complex_low()
    if mode == "zero":
        dims = {
            (w, p): len(M.complex_basis(w, p)) for w in range(low, bound + 1) for p in (EVEN, ODD)
        }
        return hilbert_from_dims(dims, low, bound, bound)
    if mode == "graded":
        return _graded_hilbert(M, step, low, bound)
    return _filtered_hilbert(M, step, low, bound)


def _graded_hilbert(M, step, low, bound):
    ranks = {}

    def rank_out(weight, parity):
        key = (weight, parity)
        if key not in ranks:
            ranks[key] = rank_of(M.complex_d(k) for k in M.complex_basis(weight, parity))
        return ranks[key]

    dims = {}
    for w in range(low, bound + 1):
        for p in (EVEN, ODD):
            size = len(M.complex_basis(w, p))
            incoming = rank_out(w - step, 1 - p) if w - step >= low else 0
            dims[(w, p)] = size - rank_out(w, p) - incoming
    logger.debug("Graded cohomology with step %d up to weight %d", step, bound)
    return hilbert_from_dims(dims, low, bound, bound)


def _filtered_hilbert(M, shift, low, bound):
    trusted = bound - shift
    if trusted < low:
        logger.warning("Bound %d leaves an empty trusted window (largest shift %d)", bound, shift)
    dims = {}
    for p in (EVEN, ODD):
        boundaries = EchelonBasis(
            M.complex_d(k) for w in range(low, bound + 1) for k in M.complex_basis(w, 1 - p)
        )
        base_rank = boundaries.rank
        cycles = LinearMap(())
        used = 0
        previous = 0
        for w in range(low, bound + 1):
            for key in M.complex_basis(w, p):
                cycles.add_column(key, M.complex_d(key))
            for vector in cycles.kernel[used:]:
                boundaries.add(vector)
            used = len(cycles.kernel)
            filtered_dim = boundaries.rank - base_rank
            dims[(w, p)] = filtered_dim - previous
            previous = filtered_dim
    logger.debug("Filtered cohomology up to weight %d, trusted to %d", bound, trusted)
    return hilbert_from_dims(dims, low, max(trusted, low - 1), bound, filtered=True)


# contractible pairs


def _find_linear_pair(A):
    zeros = (0,) * len(A.even)
    for eta in A.generators:
        image = A.differential_of(eta.name)
        if not image:
            continue
        for b in reversed(A.generators):
            if b.name == eta.name or b.parity == eta.parity or A.differential_of(b.name):
                continue
            key = A.gen(b.name)
            (monomial, _), = key.terms.items()
            coefficient = image.terms.get(monomial)
            if not coefficient:
                continue
            rest = image - key.scale(coefficient)
            if rest.involves(b.name) or rest.involves(eta.name):
                continue
            if rest and rest.term_weights() != {b.weight}:
                continue
            return eta.name, b.name, coefficient, rest
    return None


def cancel_linear_pairs(A):
    """
    Repeatedly removes generator pairs (eta, b) with d(eta) = c*b + r, c a
    nonzero constant and b closed, substituting b -> -r/c. Returns the
    reduced algebra and the quasi-isomorphic projection onto it.
    """
    current = A
    images = {g.name: A.gen(g.name) for g in A.generators}
    while True:
        found = _find_linear_pair(current)
        if found is None:
            break
        eta, b, coefficient, rest = found
        keep = [g for g in current.generators if g.name not in (eta, b)]
        skeleton = SemifreeCDGA(keep, check=False)
        replacement = {g.name: skeleton.gen(g.name) for g in keep}
        replacement[b] = transport(rest, skeleton).scale(-1 / coefficient)
        replacement[eta] = skeleton.zero()
        step = CDGAMap(current, skeleton, replacement, check=False)
        differential = {g.name: step.apply(current.differential_of(g.name)) for g in keep}
        reduced_algebra = SemifreeCDGA(keep, differential, check=False, name=current.name)
        step = CDGAMap(current, reduced_algebra, step.images, check=False)
        images = {name: step.apply(image) for name, image in images.items()}
        logger.debug("Cancelled contractible pair (%s, %s)", eta, b)
        current = reduced_algebra
    return current, CDGAMap(A, current, images, check=False)


def reduced(M):
    """Cancels contractible pairs of a cdga, or of a module's base by base change."""
    if isinstance(M, SemifreeCDGA):
        return cancel_linear_pairs(M)[0]
    if isinstance(M, SemifreeModule):
        base, projection = cancel_linear_pairs(M.base)
        if base is M.base or len(base.generators) == len(M.base.generators):
            return M
        return M.base_change(projection)
    return M


# quasi-isomorphisms


@dataclass(frozen=True)
class QuasiIsoVerdict:
    holds: bool
    failures: tuple
    trusted_upto: int
    exact: bool = True

    def __bool__(self):
        return self.holds


def quasi_iso_check(f, bound=default_bound):
    """
    Decides whether `f` (a CDGAMap or ComplexMap) induces isomorphisms on
    cohomology in every weight up to `bound`.
    """
    checked = isinstance(f, CDGAMap)
    if checked:
        f.check_chain()
        f = f.as_complex_map()
    source, target = f.source, f.target
    source_mode, source_step = differential_mode(source)
    target_mode, target_step = differential_mode(target)
    low = min(source.complex_low(), target.complex_low())
    if "filtered" in (source_mode, target_mode):
        a = cohomology_hilbert(source, bound, reduce=False)
        b = cohomology_hilbert(target, bound, reduce=False)
        failures = tuple(a.mismatches(b))
        return QuasiIsoVerdict(not failures, failures, min(a.trusted_upto, b.trusted_upto), exact=False)
    if source_mode == "graded" and target_mode == "graded" and source_step != target_step:
        raise InputError(f"Complexes have different steps {source_step} and {target_step}")
    step = source_step if source_mode == "graded" else target_step
    if not checked:
        f.check_chain(range(low, bound + 1))

    failures = []
    for w in range(low, bound + 1):
        for p in (EVEN, ODD):
            source_keys = source.complex_basis(w, p)
            cycles = LinearMap((k, source.complex_d(k)) for k in source_keys).kernel
            source_boundaries = rank_of(source.complex_d(k) for k in source.complex_basis(w - step, 1 - p))
            target_keys = target.complex_basis(w, p)
            target_cycles = len(target_keys) - rank_of(target.complex_d(k) for k in target_keys)
            boundaries = EchelonBasis(target.complex_d(k) for k in target.complex_basis(w - step, 1 - p))
            source_h = len(cycles) - source_boundaries
            target_h = target_cycles - boundaries.rank
            induced = len(independent_modulo(boundaries, [f.apply_vector(z) for z in cycles]))
            if not source_h == target_h == induced:
                failures.append((w, p, source_h, target_h, induced))
    return QuasiIsoVerdict(not failures, tuple(failures), bound)


# Koszul–Tate resolutions and derived tensor products


@dataclass
class KoszulTateResolution:
    algebra: SemifreeCDGA
    inclusion: CDGAMap
    quasi_iso: CDGAMap
    adjoined: tuple
    trusted_upto: int


def _cone_additions(X, C, phi, weight):
    additions = []
    for p in (EVEN, ODD):
        q = 1 - p
        source_keys = X.basis(weight, p)
        cycles = LinearMap((k, X.d_monomial(k)) for k in source_keys).kernel
        source_boundaries = EchelonBasis(X.d_monomial(k) for k in X.basis(weight, q))
        target_d = LinearMap((k, C.d_monomial(k)) for k in C.basis(weight, q))
        target_boundaries = target_d.image_basis()
        target_cycles = LinearMap((k, C.d_monomial(k)) for k in C.basis(weight, p)).kernel
        images = {k: phi.apply_monomial(k).terms for k in source_keys}
        image_cycles = [combine(z, images) for z in cycles]

        residues = LinearMap((i, target_boundaries.reduce(v)) for i, v in enumerate(image_cycles))
        indexed = dict(enumerate(cycles))
        killed = [combine(k, indexed) for k in residues.kernel]
        for z in independent_modulo(source_boundaries, killed):
            c = target_d.preimage(combine(z, images))
            if c is None:
                raise ConsistencyError("Cycle image is not a boundary after all")
            additions.append((q, X.element(z), C.element(c)))

        span = target_boundaries.copy()
        for v in image_cycles:
            span.add(v)
        for z in independent_modulo(span, target_cycles):
            additions.append((p, X.zero(), C.element(z)))
    return additions


def koszul_tate_resolve(f, bound=default_bound, start=None, rounds=default_tate_rounds):
    """
    Semifree resolution of the target of `f: B -> C` relative to B, adjoining
    generators weight by weight until the relative cone is acyclic. `start`
    optionally replaces B by a map X0 -> C to extend.
    """
    start = start or f
    X, C = start.source, start.target
    for algebra in (X, C):
        mode, step = differential_mode(algebra)
        if mode != "zero" and not (mode == "graded" and step == 0):
            raise InputError("Koszul-Tate resolution needs weight-preserving differentials")
    images = dict(start.images)
    adjoined = []
    counter = 0
    trusted = bound
    low = min(X.complex_low(), C.complex_low())
    for w in range(low, bound + 1):
        for _ in range(rounds):
            phi = CDGAMap(X, C, images, check=False)
            additions = _cone_additions(X, C, phi, w)
            if not additions:
                break
            generators, differential = [], {}
            taken = set(X.names())
            for parity, boundary, image in additions:
                name = f"t{w}_{counter}"
                while name in taken:
                    counter += 1
                    name = f"t{w}_{counter}"
                counter += 1
                taken.add(name)
                generators.append(GradedVar(name, parity, w))
                differential[name] = boundary
                images[name] = image
            X = X.adjoin(generators, differential)
            adjoined.extend(g.name for g in generators)
            logger.debug("Adjoined %s at weight %d", [g.name for g in generators], w)
        else:
            trusted = w - 1
            logger.warning("Koszul-Tate process did not stabilize at weight %d", w)
            break
    quasi_iso = CDGAMap(X, C, images)
    return KoszulTateResolution(
        X, inclusion(f.source, X, check=False), quasi_iso, tuple(adjoined), trusted
    )


@dataclass
class DerivedTensor:
    algebra: SemifreeCDGA
    left: CDGAMap
    right: CDGAMap
    base: CDGAMap
    resolved: str
    method: str
    adjoined: tuple
    trusted_upto: int
    bound: int
    # adjoined generator -> its image in the target of the resolved side
    augmentation: dict = field(default_factory=dict)
    _hilbert: dict = field(default_factory=dict, repr=False)

    def hilbert(self, bound=None):
        bound = min(self.bound if bound is None else bound, self.trusted_upto)
        if bound not in self._hilbert:
            self._hilbert[bound] = cohomology_hilbert(self.algebra, bound)
        return self._hilbert[bound]


def _base_change(X, replaced, Y):
    """
    Y ⊗_B X for X semifree over B, where `replaced` sends the names of B's
    generators inside X to their images in Y. Returns the algebra, the
    inclusion of Y and the induced map from X.
    """
    taken = set(Y.names())
    avoid = taken | set(X.names())
    rename = {}
    generators = list(Y.generators)
    for h in X.generators:
        if h.name in replaced:
            continue
        name = h.name
        if name in taken:
            name = fresh_name(h.name, avoid)
            avoid.add(name)
        taken.add(name)
        rename[h.name] = name
        generators.append(GradedVar(name, h.parity, h.weight))
    skeleton = SemifreeCDGA(generators, check=False)
    images = {name: transport(value, skeleton) for name, value in replaced.items()}
    images.update({old: skeleton.gen(new) for old, new in rename.items()})
    draft = CDGAMap(X, skeleton, images, check=False)
    differential = {y.name: transport(Y.differential_of(y.name), skeleton) for y in Y.generators}
    for old, new in rename.items():
        differential[new] = draft.apply(X.differential_of(old))
    T = SemifreeCDGA(generators, differential)
    psi = CDGAMap(X, T, draft.images)
    return T, inclusion(Y, T, check=False), psi


def _common_step(*algebras):
    steps = set()
    for algebra in algebras:
        mode, step = differential_mode(algebra)
        if mode == "graded":
            steps.add(step)
    return steps.pop() if len(steps) == 1 else 0


def _resolve_left(f, g, bound):
    """Resolves f: B -> M over B, then base changes along g: B -> N."""
    B, M, N = f.source, f.target, g.target
    product = tensor_with_inclusions(B, M)
    start_images = {product.left.generator_image_names()[b]: f.images[b] for b in B.names()}
    start_images.update({product.right.generator_image_names()[m]: M.gen(m) for m in M.names()})
    if B.is_zero_differential():
        method = "cylinder"
        step = _common_step(M, N)
        generators, differential = [], {}
        taken = set(product.algebra.names())
        for k, b in enumerate(B.generators):
            name = fresh_name(f"t{b.weight - step}_{k}", taken)
            taken.add(name)
            generators.append(GradedVar(name, 1 - b.parity, b.weight - step))
            differential[name] = product.left.images[b.name] - product.right.apply(f.images[b.name])
        X = product.algebra.adjoin(generators, differential)
        adjoined = tuple(v.name for v in generators)
        collapse = {name: M.zero() for name in adjoined}
        trusted = bound
    else:
        method = "tate"
        start = CDGAMap(product.algebra, M, start_images)
        resolution = koszul_tate_resolve(f, bound, start=start)
        X = resolution.algebra
        adjoined = resolution.adjoined
        collapse = {name: resolution.quasi_iso.images[name] for name in adjoined}
        trusted = resolution.trusted_upto
    replaced = {product.left.generator_image_names()[b]: g.images[b] for b in B.names()}
    T, n_inclusion, psi = _base_change(X, replaced, N)
    m_map = CDGAMap(
        M, T, {m: psi.apply(X.gen(product.right.generator_image_names()[m])) for m in M.names()}
    )
    augmentation = {generator_name(psi.images[name]): collapse[name] for name in adjoined}
    adjoined = tuple(generator_name(psi.images[name]) for name in adjoined)
    return T, m_map, n_inclusion, method, adjoined, trusted, augmentation


def derived_tensor(f, g, bound=default_bound, resolve="auto"):
    """
    M ⊗^L_B N for f: B -> M and g: B -> N. A side that is a generator
    inclusion is used as it stands; otherwise the chosen side is resolved
    (the one with fewer generators under "auto").
    """
    if not f.source.same_as(g.source):
        raise InputError("Derived tensor needs both maps to start at the same algebra")
    M, N = f.target, g.target
    if resolve == "auto" and (g.is_generator_inclusion() or f.is_generator_inclusion()):
        if g.is_generator_inclusion():
            replaced = {name: f.images[b] for b, name in g.generator_image_names().items()}
            T, left, right = _base_change(N, replaced, M)
        else:
            replaced = {name: g.images[b] for b, name in f.generator_image_names().items()}
            T, right, left = _base_change(M, replaced, N)
        result = DerivedTensor(T, left, right, f.then(left), "none", "pushout", (), bound, bound)
    else:
        if resolve == "auto":
            resolve = "left" if len(M.generators) <= len(N.generators) else "right"
        if resolve == "left":
            T, left, right, method, adjoined, trusted, augmentation = _resolve_left(f, g, bound)
        elif resolve == "right":
            T, right, left, method, adjoined, trusted, augmentation = _resolve_left(g, f, bound)
        else:
            raise InputError(f"Unknown resolution side `{resolve}`")
        result = DerivedTensor(
            T, left, right, f.then(left), resolve, method, adjoined, trusted, bound, augmentation
        )
    logger.debug(
        "Derived tensor by %s (resolved %s), %d generators",
        result.method,
        result.resolved,
        len(result.algebra.generators),
    )
    return result


def fold_map(tensor):
    """
    M ⊗^L_B M -> M for a derived tensor of one map with itself: both copies
    of M go to M and adjoined generators go to their augmentation.
    """
    M = tensor.left.source
    if not M.same_as(tensor.right.source):
        raise InputError("Fold needs a derived tensor of a map with itself")
    images = {}
    for name in M.names():
        for side in (tensor.left, tensor.right):
            # pushouts replace one copy's generators by expressions
            target = generator_name(side.images[name])
            if target is not None:
                images.setdefault(target, M.gen(name))
    images.update(tensor.augmentation)
    return CDGAMap(tensor.algebra, M, images)


def h0_ideal(A, order="grevlex"):
    """
    For a Koszul-type algebra (closed even generators, odd generators with
    purely even differentials) the Groebner basis presenting H^0 as a quotient
    of the polynomial ring on the even generators; None otherwise.
    """
    table = even_table(A)
    relations = []
    for g in A.generators:
        image = A.differential_of(g.name)
        if g.parity == EVEN:
            if image:
                return None
            continue
        if any(odd for _, odd in image.terms):
            return None
        if image:
            relations.append(image.to_polynomial(table))
    return groebner_basis(relations, order, table=table)
