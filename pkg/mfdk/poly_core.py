"""
Exact multivariate polynomials over the rationals, difference quotients and a
Buchberger Groebner-basis kernel.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mfdk.errors import ConsistencyError, InputError, UnknownVariableError
from mfdk.expression import identifiers, is_identifier, parse_expression
from mfdk.hilbert import HilbertFunction

logger = logging.getLogger(__name__)

default_order = "grevlex"
monomial_orders = ("grevlex", "lex")

_interned_tables = {}


@dataclass(frozen=True)
class VarTable:
    names: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise InputError("Variable table needs one weight per variable")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"Duplicate variable names in {list(self.names)}")
        for name, weight in zip(self.names, self.weights):
            if not is_identifier(name):
                raise InputError(f"`{name}` is not a valid variable name")
            if not isinstance(weight, int) or weight <= 0:
                raise InputError(f"Variable `{name}` needs a positive integer weight, got {weight}")

    @classmethod
    def of(cls, names, weights=None):
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        key = (names, weights)
        table = _interned_tables.get(key)
        if table is None:
            table = cls(names, weights)
            _interned_tables[key] = table
        return table

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    def weight(self, name):
        return self.weights[self.index(name)]

    def union(self, other):
        names = list(self.names)
        weights = list(self.weights)
        for name, weight in zip(other.names, other.weights):
            if name in self.names:
                if self.weight(name) != weight:
                    raise InputError(
                        f"Variable `{name}` has weight {self.weight(name)} and {weight} in the tables being merged"
                    )
                continue
            names.append(name)
            weights.append(weight)
        return VarTable.of(names, weights)

    def extend(self, names, weights=None):
        weights = weights if weights is not None else [1] * len(names)
        return self.union(VarTable.of(names, weights))

    def scaled(self, factor):
        return VarTable.of(self.names, [w * factor for w in self.weights])


def monomial_key(order, weights):
    """Sort key on exponent tuples; larger key means larger monomial."""
    if order == "grevlex":
        return lambda exps: (
            sum(e * w for e, w in zip(exps, weights)),
            tuple(-e for e in reversed(exps)),
        )
    if order == "lex":
        return lambda exps: exps
    raise InputError(f"Unknown monomial order `{order}`; expected one of {monomial_orders}")


@lru_cache(maxsize=None)
def monomials_of_weight(weights, weight):
    """All exponent vectors of the given weighted degree, in a fixed order."""
    if weight < 0:
        return ()
    if not weights:
        return ((),) if weight == 0 else ()
    first, rest = weights[0], weights[1:]
    found = []
    for e in range(weight // first + 1):
        for tail in monomials_of_weight(rest, weight - e * first):
            found.append((e,) + tail)
    return tuple(found)


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InputError(f"Expected an exact rational, got {value!r}")


class Polynomial(object):
    __slots__ = ("table", "terms")

    def __init__(self, table, terms=None):
        self.table = table
        clean = {}
        for exps, coefficient in (terms or {}).items():
            if len(exps) != len(table):
                raise ConsistencyError(f"Exponent vector {exps} does not fit table {table.names}")
            coefficient = _to_fraction(coefficient)
            if coefficient:
                clean[tuple(exps)] = coefficient
        self.terms = clean

    @classmethod
    def constant(cls, table, value):
        value = _to_fraction(value)
        return cls(table, {(0,) * len(table): value} if value else {})

    @classmethod
    def variable(cls, table, name):
        exps = [0] * len(table)
        exps[table.index(name)] = 1
        return cls(table, {tuple(exps): Fraction(1)})

    @classmethod
    def parse(cls, text, table=None):
        """Parses `text`; without a table, one is built from the identifiers in order."""
        if table is None:
            table = VarTable.of(identifiers(text))
        return parse_expression(
            text,
            lambda value: cls.constant(table, value),
            lambda name: cls.variable(table, name),
        )

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.table != self.table:
                raise InputError(
                    f"Polynomials over different tables {self.table.names} and {other.table.names}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.table, other)
        return None

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.table == other.table and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(self.table, other).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.table, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coefficient in other.terms.items():
            terms[exps] = terms.get(exps, 0) + coefficient
        return Polynomial(self.table, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.table, {e: -c for e, c in self.terms.items()})

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
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, 0) + c1 * c2
        return Polynomial(self.table, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError("Polynomials only take nonnegative integer powers")
        result = Polynomial.constant(self.table, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, value):
        value = _to_fraction(value)
        return Polynomial(self.table, {e: c * value for e, c in self.terms.items()})

    def weight_of(self, exps):
        return sum(e * w for e, w in zip(exps, self.table.weights))

    def term_weights(self):
        return {self.weight_of(exps) for exps in self.terms}

    def homogeneous_weight(self):
        """Weight of a nonzero weighted-homogeneous polynomial, else None."""
        weights = self.term_weights()
        return weights.pop() if len(weights) == 1 else None

    def is_homogeneous(self):
        return len(self.term_weights()) <= 1

    def max_weight(self):
        return max(self.term_weights(), default=0)

    def is_constant(self):
        return all(not any(exps) for exps in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.table), Fraction(0))

    def variables(self):
        used = set()
        for exps in self.terms:
            used.update(self.table.names[i] for i, e in enumerate(exps) if e)
        return used

    def partial(self, name):
        i = self.table.index(name)
        terms = {}
        for exps, coefficient in self.terms.items():
            if exps[i]:
                lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                terms[lowered] = coefficient * exps[i]
        return Polynomial(self.table, terms)

    def substitute(self, mapping, table=None):
        """
        Replaces variables by polynomials. `mapping` sends names to Polynomials
        (or numbers); unmapped variables must exist in the target table.
        """
        target = table
        if target is None:
            target = next(
                (v.table for v in mapping.values() if isinstance(v, Polynomial)), self.table
            )
        images = []
        for name in self.table.names:
            image = mapping.get(name)
            if image is None:
                image = Polynomial.variable(target, name) if name in target else None
            elif not isinstance(image, Polynomial):
                image = Polynomial.constant(target, image)
            images.append(image)
        powers = {}
        result = Polynomial(target)
        for exps, coefficient in self.terms.items():
            term = Polynomial.constant(target, coefficient)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if images[i] is None:
                    raise UnknownVariableError(self.table.names[i], "substitution target")
                key = (i, e)
                if key not in powers:
                    powers[key] = images[i] ** e
                term = term * powers[key]
            result = result + term
        return result

    def to_table(self, table, rename=None):
        """Re-indexes into `table`, optionally renaming variables first."""
        rename = rename or {}
        positions = [table.index(rename.get(name, name)) for name in self.table.names]
        terms = {}
        for exps, coefficient in self.terms.items():
            new = [0] * len(table)
            for position, e in zip(positions, exps):
                new[position] += e
            terms[tuple(new)] = coefficient
        return Polynomial(table, terms)

    def sorted_terms(self, order=default_order):
        key = monomial_key(order, self.table.weights)
        return sorted(self.terms.items(), key=lambda item: key(item[0]), reverse=True)

    def leading(self, order=default_order):
        key = monomial_key(order, self.table.weights)
        exps = max(self.terms, key=key)
        return exps, self.terms[exps]

    def monic(self, order=default_order):
        if not self.terms:
            return self
        return self.scale(1 / self.leading(order)[1])

    def to_string(self, order=default_order):
        if not self.terms:
            return "0"
        pieces = []
        for exps, coefficient in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.table.names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            magnitude = abs(coefficient)
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            body = "*".join(factors)
            if not pieces:
                pieces.append(f"-{body}" if coefficient < 0 else body)
            else:
                pieces.append(f"- {body}" if coefficient < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r} over {list(self.table.names)})"


def parse_polynomial(text, table=None):
    return Polynomial.parse(text, table)


def partial_derivative(p, v):
    return p.partial(v)


def difference_quotient(V, a, a_primed, i):
    """
    p_{i,V} = (V(a_1..a_{i-1}, a_i', .., a_k') - V(a_1..a_i, a_{i+1}', .., a_k')) / (a_i' - a_i)
    for the 1-based index `i`.
    """
    a, a_primed = tuple(a), tuple(a_primed)
    if len(a) != len(a_primed):
        raise InputError("Primed and unprimed variable tuples differ in length")
    if not 1 <= i <= len(a):
        raise InputError(f"Difference quotient index {i} outside 1..{len(a)}")
    table = V.table
    for name in a_primed:
        if name not in table:
            raise UnknownVariableError(name, "difference quotient table")
    if V.variables() & set(a_primed):
        raise InputError("Potential already depends on the primed variables")
    primed = {u: Polynomial.variable(table, v) for u, v in zip(a, a_primed)}
    upper = V.substitute({u: primed[u] for u in a[i - 1:]}, table)
    lower = V.substitute({u: primed[u] for u in a[i:]}, table)
    numerator = upper - lower

    t = table.index(a_primed[i - 1])
    root = Polynomial.variable(table, a[i - 1])
    groups = {}
    for exps, coefficient in numerator.terms.items():
        rest = exps[:t] + (0,) + exps[t + 1:]
        groups.setdefault(exps[t], {})[rest] = coefficient
    if not groups:
        return Polynomial(table)
    top = max(groups)
    coefficients = [Polynomial(table, groups.get(k, {})) for k in range(top + 1)]
    # synthetic division by (t - root)
    quotient_coefficients = [None] * top
    if top:
        quotient_coefficients[top - 1] = coefficients[top]
        for k in range(top - 1, 0, -1):
            quotient_coefficients[k - 1] = coefficients[k] + root * quotient_coefficients[k]
        remainder = coefficients[0] + root * quotient_coefficients[0]
    else:
        remainder = coefficients[0]
    if remainder:
        raise ConsistencyError(f"Nonzero remainder {remainder} in difference quotient {i} of {V}")
    quotient = Polynomial(table)
    for k, coefficient in enumerate(quotient_coefficients):
        shift = [0] * len(table)
        shift[t] = k
        quotient = quotient + coefficient * Polynomial(table, {tuple(shift): 1})
    return quotient


def _divides(small, big):
    return all(s <= b for s, b in zip(small, big))


def _lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def _reduce(p, basis, order):
    """Full reduction of `p` by `basis` (sequence of (leading exps, leading coeff, poly))."""
    key = monomial_key(order, p.table.weights)
    remaining = dict(p.terms)
    remainder = {}
    while remaining:
        exps = max(remaining, key=key)
        coefficient = remaining[exps]
        for lead, lead_coefficient, g in basis:
            if _divides(lead, exps):
                factor = coefficient / lead_coefficient
                shift = tuple(a - b for a, b in zip(exps, lead))
                for g_exps, g_coefficient in g.terms.items():
                    target = tuple(a + b for a, b in zip(g_exps, shift))
                    value = remaining.get(target, 0) - factor * g_coefficient
                    if value:
                        remaining[target] = value
                    else:
                        remaining.pop(target, None)
                break
        else:
            remainder[exps] = coefficient
            del remaining[exps]
    return Polynomial(p.table, remainder)


@dataclass(frozen=True)
class GroebnerBasis:
    table: object
    order: str
    generators: tuple

    def _indexed(self):
        return [(g.leading(self.order)[0], g.leading(self.order)[1], g) for g in self.generators]

    def leading_monomials(self):
        return [g.leading(self.order)[0] for g in self.generators]

    def is_unit_ideal(self):
        return any(g.is_constant() for g in self.generators)

    def normal_form(self, p):
        return normal_form(p, self)

    def contains(self, p):
        return normal_form(p, self).is_zero()


def _s_polynomial(f, g, order):
    (ef, cf), (eg, cg) = f.leading(order), g.leading(order)
    lcm = _lcm(ef, eg)
    table = f.table
    left = Polynomial(table, {tuple(l - e for l, e in zip(lcm, ef)): 1 / cf})
    right = Polynomial(table, {tuple(l - e for l, e in zip(lcm, eg)): 1 / cg})
    return left * f - right * g


def groebner_basis(gens, order=default_order, table=None):
    """Reduced Groebner basis by Buchberger's algorithm with the normal selection strategy."""
    gens = [g for g in gens if not g.is_zero()]
    if table is None:
        table = gens[0].table if gens else VarTable.of(())
    for g in gens:
        if g.table != table:
            raise InputError("Groebner basis generators must share one variable table")
    monomial_key(order, table.weights)
    if not gens:
        return GroebnerBasis(table, order, ())

    basis = [g.monic(order) for g in gens]
    leads = [g.leading(order)[0] for g in basis]
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    weights = table.weights
    while pairs:
        i, j = min(
            pairs,
            key=lambda pair: (
                sum(e * w for e, w in zip(_lcm(leads[pair[0]], leads[pair[1]]), weights)),
                pair,
            ),
        )
        pairs.discard((i, j))
        if all(a == 0 or b == 0 for a, b in zip(leads[i], leads[j])):
            continue
        indexed = [(lead, Fraction(1), g) for lead, g in zip(leads, basis)]
        remainder = _reduce(_s_polynomial(basis[i], basis[j], order), indexed, order)
        if remainder.is_zero():
            continue
        remainder = remainder.monic(order)
        basis.append(remainder)
        leads.append(remainder.leading(order)[0])
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
        logger.debug("Groebner basis grew to %d elements", len(basis))
    return GroebnerBasis(table, order, tuple(_interreduce(basis, order)))


def _interreduce(basis, order):
    key = monomial_key(order, basis[0].table.weights)
    basis = sorted(basis, key=lambda g: key(g.leading(order)[0]))
    minimal = []
    for g in basis:
        lead = g.leading(order)[0]
        if not any(_divides(h.leading(order)[0], lead) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = [(h.leading(order)[0], h.leading(order)[1], h) for m, h in enumerate(minimal) if m != k]
        reduced.append(_reduce(g, others, order).monic(order))
    return reduced


def normal_form(p, gb):
    if p.table != gb.table and gb.generators:
        raise InputError("Normal form needs the polynomial and the basis over one table")
    if not gb.generators:
        return p
    return _reduce(p, gb._indexed(), gb.order)


def quotient_hilbert(gb, bound):
    """Standard monomials of the leading ideal counted per weight, 0..bound."""
    table = gb.table
    leads = gb.leading_monomials()
    even = []
    for w in range(bound + 1):
        count = 0
        for exps in monomials_of_weight(table.weights, w):
            if not any(_divides(lead, exps) for lead in leads):
                count += 1
        even.append(count)
    return HilbertFunction(even=tuple(even), odd=(0,) * len(even), low=0, trusted_upto=bound, bound=bound)
