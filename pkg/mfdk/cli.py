"""
`mfdk <command> <verb> [--param value ...]`, one verb per construction.

Every verb builds a Report. `main` prints its tables, optionally writes its
JSON form (sorted keys, rationals as `num/den` strings) and exits with 0 when
every checked claim holds, 1 when a check failed and 2 on bad input.
"""

import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing.pool import ThreadPool

import regex as re

from mfdk import __version__
from mfdk.cli_menu import CommandMenu, Selection
from mfdk.crw_affine import (
    AffineSymplecticStack,
    coevaluation_span,
    compose_span,
    identity_span,
    serre_composite,
)
from mfdk.document import WorkDocument, onto_table, parse_document
from mfdk.errors import InputError, VerificationError
from mfdk.expression import identifiers
from mfdk.functor_e import (
    check_functoriality_1,
    check_functoriality_2,
    check_r_identification,
    e_object,
    e_one,
    e_two,
    verify_zigzag,
)
from mfdk.graded_core import cohomology_hilbert, default_bound, polynomial_algebra
from mfdk.hilbert import HilbertFunction
from mfdk.matrix_fact import (
    double_dual_matches,
    dual_mf,
    end_as_tensor,
    koszul_mf,
    primed_names,
    unit_mf,
    verify_mf,
)
from mfdk.mf_bicategory import (
    Freshener,
    MFObject,
    MFOneMorphism,
    end_hilbert,
    h_compose_1,
    identity_1,
    identity_2,
    unit_law_check,
)
from mfdk.poly_core import (
    Polynomial,
    VarTable,
    default_order,
    difference_quotient,
    groebner_basis,
    monomial_orders,
    normal_form,
    quotient_hilbert,
)
from mfdk.tft_calc import three_dual_check, z_circle, z_genus, z_sphere

logger = logging.getLogger(__name__)

_separator = re.compile(r"[\s,]+")
_morphism_pattern = re.compile(
    r"^\s*(?P<source>[^;>]*?)\s*->\s*(?P<target>[^;]*?)\s*;\s*(?P<extra>[^;]*?)\s*;\s*(?P<potential>.+?)\s*$"
)


@dataclass
class Report:
    command: str
    verb: str
    passed: bool = True
    result: dict = field(default_factory=dict)
    tables: list = field(default_factory=list)

    def to_json(self):
        return {"command": self.command, "verb": self.verb, "passed": self.passed, "result": self.result}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2, default=_encode) + "\n"

    def text(self):
        lines = [f"{self.command} {self.verb}: {'ok' if self.passed else 'FAILED'}"]
        lines.extend(self.tables)
        return "\n".join(lines) + "\n"


def _encode(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, HilbertFunction):
        return value.to_json()
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


@dataclass
class Context:
    bound: int = default_bound
    order: str = default_order
    threads: int = 1
    document: WorkDocument = None

    def gather(self, *tasks):
        """Runs independent computations, on a thread pool when `threads` > 1."""
        if self.threads > 1 and len(tasks) > 1:
            with ThreadPool(min(self.threads, len(tasks))) as pool:
                return pool.map(lambda task: task(), tasks)
        return [task() for task in tasks]

    def polynomial(self, name):
        if self.document is not None:
            return self.document.polynomials.get(name)
        return None


# parameter readers


def _names(text):
    return tuple(name for name in _separator.split(text or "") if name)


def _integer(text, name):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise InputError(f"`--{name}` needs an integer, got {text!r}") from None


def _weights(text, names):
    if not text:
        return None
    weights = [_integer(w, "weights") for w in _names(text)]
    if len(weights) != len(names):
        raise InputError(f"`--weights` needs {len(names)} values, got {len(weights)}")
    return weights


def _polynomials(context, texts, vars=None, weights=None):
    """Parses `texts` over one table: `--vars`/`--weights` when given, else the identifiers in order."""
    named = {text: context.polynomial(text) for text in texts if context.polynomial(text) is not None}
    if vars:
        names = _names(vars)
        table = VarTable.of(names, _weights(weights, names))
    else:
        table = VarTable.of(())
        for text in texts:
            table = table.union(named[text].table if text in named else VarTable.of(identifiers(text)))
        if weights:
            table = VarTable.of(table.names, _weights(weights, table.names))
    return table, [onto_table(named[t], table) if t in named else Polynomial.parse(t, table) for t in texts]


def _statements(text):
    return [part.strip() for part in (text or "").split(";") if part.strip()]


def _morphism(context, text):
    """A document 1-morphism by name, or `source -> target ; extra ; potential` inline."""
    if context.document is not None and text in context.document.morphisms:
        return context.document.morphisms[text]
    match = _morphism_pattern.match(text or "")
    if match is None:
        raise InputError(f"Cannot read 1-morphism {text!r}; expected `x -> y ; a ; V` or a document name")
    source, target, extra = (_names(match.group(k)) for k in ("source", "target", "extra"))
    table = VarTable.of(source + target + extra)
    potential = context.polynomial(match.group("potential"))
    if potential is not None:
        potential = onto_table(potential, table)
    else:
        potential = Polynomial.parse(match.group("potential"), table)
    return MFOneMorphism(MFObject(source), MFObject(target), extra, potential)


def _single_morphism(context, morphism=None, V=None):
    if V is not None:
        table = VarTable.of(identifiers(V))
        return MFOneMorphism(MFObject(()), MFObject(()), table.names, Polynomial.parse(V, table))
    if morphism is None:
        raise InputError("Pass `--morphism` or `--V`")
    return _morphism(context, morphism)


def _factorization(context, name=None, koszul=None, vars=None, weights=None):
    if name is not None:
        if context.document is None:
            raise InputError("`--name` needs `--doc`")
        return context.document.get("mfs", name)
    if koszul is None:
        raise InputError("Pass `--name` with `--doc`, or `--koszul`")
    pairs = [[part.strip() for part in pair.split(",")] for pair in _statements(koszul)]
    if any(len(pair) != 2 for pair in pairs):
        raise InputError("`--koszul` takes pairs `p, q` separated by `;`")
    table, flat = _polynomials(context, [text for pair in pairs for text in pair], vars, weights)
    return koszul_mf(zip(flat[::2], flat[1::2]), table)


def _algebra(context, algebra=None, vars=None, weights=None, t=None):
    if algebra is not None:
        if context.document is None:
            raise InputError("`--algebra` needs `--doc`")
        return context.document.get("cdgas", algebra)
    if t is not None:
        count = _integer(t, "t")
        if count < 0:
            raise InputError("`--t` must be non-negative")
        names = tuple(f"x{k}" for k in range(1, count + 1))
    else:
        names = _names(vars)
    return polynomial_algebra(VarTable.of(names, _weights(weights, names)), name="A")


def _hilbert_table(title, hilbert):
    return hilbert.table(title)


def _clauses(verdict):
    result = {}
    for clause in verdict.clauses:
        result[clause.name] = {"holds": clause.holds, "mismatches": [list(m) for m in clause.mismatches]}
        if clause.detail:
            result[clause.name]["detail"] = clause.detail
    return result


def _clause_tables(verdict):
    tables = []
    for clause in verdict.clauses:
        tables.append(f"  clause {clause.name}: {'holds' if clause.holds else 'fails'}")
        if clause.left is not None and clause.right is not None:
            tables.append(clause.left.table(f"  {clause.name}, left"))
            tables.append(clause.right.table(f"  {clause.name}, right"))
    return tables


def _generators(algebra):
    return [
        {"name": g.name, "parity": g.parity, "weight": g.weight, "d": str(algebra.differential_of(g.name))}
        for g in algebra.generators
    ]


# poly


def poly_groebner(context, polys, vars=None, weights=None):
    table, gens = _polynomials(context, _statements(polys), vars, weights)
    gb = groebner_basis(gens, context.order, table)
    basis = [g.to_string(context.order) for g in gb.generators]
    result = {"vars": list(table.names), "order": context.order, "basis": basis, "unit_ideal": gb.is_unit_ideal()}
    return Report("poly", "groebner", True, result, ["  " + g for g in basis])


def poly_normal_form(context, poly, ideal, vars=None, weights=None):
    texts = [poly] + _statements(ideal)
    table, polys = _polynomials(context, texts, vars, weights)
    gb = groebner_basis(polys[1:], context.order, table)
    remainder = normal_form(polys[0], gb)
    result = {"normal_form": remainder.to_string(context.order), "member": remainder.is_zero()}
    return Report("poly", "normal-form", True, result, [f"  {remainder.to_string(context.order)}"])


def poly_diff(context, poly, var, vars=None, weights=None):
    table, (p,) = _polynomials(context, [poly], vars, weights)
    if var not in table:
        table = table.extend([var])
        p = p.to_table(table)
    derivative = p.partial(var)
    return Report("poly", "diff", True, {"derivative": str(derivative)}, [f"  {derivative}"])


def poly_dq(context, poly, extra, primes=None, vars=None, weights=None):
    """Difference quotients p_i of V and the telescoping identity Σ p_i (a_i' - a_i) = V(a') - V(a)."""
    table, (V,) = _polynomials(context, [poly], vars, weights)
    a = _names(extra)
    primed = _names(primes) if primes else primed_names(a)
    if len(primed) != len(a):
        raise InputError("`--primes` needs one name per extra variable")
    missing = [name for name in a if name not in table]
    if missing:
        table = table.extend(missing)
    table = table.extend(list(primed), [table.weight(name) for name in a])
    V = V.to_table(table)
    quotients = [difference_quotient(V, a, primed, i) for i in range(1, len(a) + 1)]
    total = Polynomial(table)
    for q, u, v in zip(quotients, a, primed):
        total = total + q * (Polynomial.variable(table, v) - Polynomial.variable(table, u))
    shifted = V.substitute({u: Polynomial.variable(table, v) for u, v in zip(a, primed)}, table)
    holds = total == shifted - V
    result = {"quotients": [str(q) for q in quotients], "telescopes": holds}
    tables = [f"  p_{i} = {q}" for i, q in enumerate(quotients, 1)]
    return Report("poly", "dq", holds, result, tables)


def poly_hilbert(context, ideal, vars=None, weights=None):
    table, gens = _polynomials(context, _statements(ideal), vars, weights)
    hilbert = quotient_hilbert(groebner_basis(gens, context.order, table), context.bound)
    result = {"vars": list(table.names), "hilbert": hilbert}
    return Report("poly", "hilbert", True, result, [_hilbert_table("  quotient", hilbert)])


# mf


def mf_verify(context, name=None, koszul=None, vars=None, weights=None):
    mf = _factorization(context, name, koszul, vars, weights)
    verdict = verify_mf(mf)
    result = {"ranks": list(mf.ranks), "potential": str(mf.potential), "failure": verdict.message or None}
    tables = [f"  rank {mf.r0}|{mf.r1} factorization of {mf.potential}"]
    if not verdict:
        tables.append(f"  {verdict.message}")
    return Report("mf", "verify", verdict.holds, result, tables)


def mf_koszul(context, pairs, vars=None, weights=None):
    mf = _factorization(context, koszul=pairs, vars=vars, weights=weights)
    verdict = verify_mf(mf)
    result = dict(mf.to_json(), verified=verdict.holds)
    return Report("mf", "koszul", verdict.holds, result, [f"  rank {mf.r0}|{mf.r1} factorization of {mf.potential}"])


def mf_unit(context, potential, extra, source=None, target=None, vars=None, weights=None):
    table, (V,) = _polynomials(context, [potential], vars, weights)
    x, y, a = _names(source), _names(target), _names(extra)
    missing = [name for name in x + y + a if name not in table]
    if missing:
        table = table.extend(missing)
        V = V.to_table(table)
    unit = unit_mf(x, y, a, V)
    verdict = verify_mf(unit)
    result = dict(unit.to_json(), verified=verdict.holds, degenerate=unit.degenerate)
    return Report("mf", "unit", verdict.holds, result, [f"  rank {unit.r0}|{unit.r1} unit of {V}"])


def mf_end(context, name=None, koszul=None, vars=None, weights=None):
    mf = _factorization(context, name, koszul, vars, weights)
    hilbert = end_hilbert(mf, context.bound)
    evaluation = end_as_tensor(mf)
    result = {
        "hilbert": hilbert,
        "pairing_is_chain_map": evaluation.pairing_is_chain_map,
        "iso_is_chain_map": evaluation.iso_is_chain_map,
    }
    return Report("mf", "end", bool(evaluation), result, [_hilbert_table("  End cohomology", hilbert)])


def mf_dual(context, name=None, koszul=None, vars=None, weights=None):
    mf = _factorization(context, name, koszul, vars, weights)
    dual = dual_mf(mf)
    verdict = verify_mf(dual)
    double = double_dual_matches(mf)
    result = dict(dual.to_json(), verified=verdict.holds, double_dual_matches=double)
    return Report("mf", "dual", verdict.holds and double, result, [f"  dual of {mf.potential} factors {dual.potential}"])


# bicat


def bicat_compose1(context, first, second):
    f, g = _morphism(context, first), _morphism(context, second)
    composite = h_compose_1(f, g, Freshener())
    result = {
        "source": list(composite.source.names),
        "target": list(composite.target.names),
        "extra": list(composite.extra),
        "potential": str(composite.potential),
    }
    return Report("bicat", "compose1", True, result, [f"  {composite}"])


def bicat_identity1(context, vars, weights=None):
    names = _names(vars)
    identity = identity_1(MFObject(names, _weights(weights, names)))
    result = {
        "source": list(identity.source.names),
        "target": list(identity.target.names),
        "extra": list(identity.extra),
        "potential": str(identity.potential),
    }
    return Report("bicat", "identity1", True, result, [f"  {identity}"])


def bicat_unit_law(context, morphism=None, V=None):
    f = _single_morphism(context, morphism, V)
    verdict = unit_law_check(identity_2(f), context.bound)
    result = {"holds": verdict.holds, "left": verdict.left, "right": verdict.right, "mismatches": [list(m) for m in verdict.mismatches]}
    tables = [_hilbert_table("  End(M)", verdict.left), _hilbert_table("  Hom(M', M∘I)", verdict.right)]
    return Report("bicat", "unit-law", verdict.holds, result, tables)


# crw


def crw_serre(context, algebra=None, vars=None, weights=None):
    A = _algebra(context, algebra, vars, weights)
    span = serre_composite(AffineSymplecticStack(A, name=A.name), context.bound)
    composite = span.hilbert(context.bound).truncated(span.metadata["trusted_upto"])
    expected = cohomology_hilbert(A, context.bound)
    mismatches = composite.mismatches(expected)
    result = {"composite": composite, "algebra": expected, "mismatches": [list(m) for m in mismatches]}
    tables = [_hilbert_table("  Serre composite apex", composite), _hilbert_table("  algebra", expected)]
    return Report("crw", "serre", not mismatches, result, tables)


def crw_compose_diagonal(context, span=None, algebra=None, vars=None, weights=None):
    """Composes a span with the identity spans on both sides and compares apex cohomology."""
    if span is not None:
        S = context.document.get("spans", span) if context.document is not None else None
        if S is None:
            raise InputError("`--span` needs `--doc`")
    else:
        A = _algebra(context, algebra, vars, weights)
        S = coevaluation_span(AffineSymplecticStack(A, name=A.name))
    bound = context.bound
    left, right = context.gather(
        lambda: compose_span(identity_span(S.left), S, bound),
        lambda: compose_span(S, identity_span(S.right), bound),
    )
    expected = S.hilbert(bound)
    result, tables, passed = {"span": expected}, [_hilbert_table("  span apex", expected)], True
    for side, composite in (("left", left), ("right", right)):
        hilbert = composite.hilbert(bound).truncated(composite.metadata["trusted_upto"])
        mismatches = hilbert.mismatches(expected)
        passed = passed and not mismatches
        result[side] = {"hilbert": hilbert, "method": composite.metadata["method"], "mismatches": [list(m) for m in mismatches]}
        tables.append(_hilbert_table(f"  identity on the {side}", hilbert))
    return Report("crw", "compose-diagonal", passed, result, tables)


# e


def e_object_verb(context, vars, weights=None):
    names = _names(vars)
    cotangent = e_object(MFObject(names, _weights(weights, names)))
    result = {"generators": _generators(cotangent.algebra), "form": str(cotangent.stack.form)}
    return Report("e", "object", True, result, [f"  {cotangent.stack.name}: ω = {cotangent.stack.form}"])


def e_one_verb(context, morphism=None, V=None):
    f = _single_morphism(context, morphism, V)
    span = e_one(f)
    hilbert = span.hilbert(context.bound)
    identification = check_r_identification(f, context.bound)
    result = {
        "apex": _generators(span.apex),
        "hilbert": hilbert,
        "r_identification": {"holds": identification.holds, "method": identification.detail},
    }
    tables = [_hilbert_table("  apex R", hilbert), _hilbert_table("  derived zero locus", identification.left)]
    return Report("e", "one", identification.holds, result, tables)


def e_two_verb(context, morphism=None, V=None):
    f = _single_morphism(context, morphism, V)
    end = e_two(identity_2(f))
    hilbert = end.hilbert(context.bound)
    result = {
        "hilbert": hilbert,
        "partners": dict(end.algebra.partners),
        "identities_checked": end.witness.checked,
    }
    return Report("e", "two", True, result, [_hilbert_table("  End(I)", hilbert)])


def e_zigzag(context, morphism=None, V=None):
    f = _single_morphism(context, morphism, V)
    verdict = verify_zigzag(f, context.bound)
    result = {
        "scale": verdict.scale,
        "step": verdict.step,
        "chain_maps": dict(verdict.chain_maps),
        "quasi_isos": dict(verdict.quasi_isos),
        "hilbert": dict(verdict.hilbert),
        "h0_matches": verdict.h0_matches,
        "odd_vanishes": verdict.odd_vanishes,
        "failures": [str(failure) for failure in verdict.failures],
    }
    tables = [_hilbert_table(f"  {name}", hilbert) for name, hilbert in verdict.hilbert.items()]
    return Report("e", "zigzag", verdict.holds, result, tables)


def e_funct1(context, first, second):
    verdict = check_functoriality_1(_morphism(context, first), _morphism(context, second), context.bound)
    return Report("e", "funct1", verdict.holds, {"clauses": _clauses(verdict)}, _clause_tables(verdict))


def e_funct2(context, morphism=None, V=None, first=None, second=None, kind="vertical"):
    if first is None:
        verdict = check_functoriality_2(_single_morphism(context, morphism, V), bound=context.bound)
    else:
        M = identity_2(_morphism(context, first))
        if second is None and kind == "vertical":
            N = identity_2(M.target)
        elif second is None:
            raise InputError(f"`--kind {kind}` needs `--second`")
        else:
            N = identity_2(_morphism(context, second))
        verdict = check_functoriality_2(M, N, context.bound, kind)
    return Report("e", "funct2", verdict.holds, {"clauses": _clauses(verdict)}, _clause_tables(verdict))


# tft


def tft_circle(context, algebra=None, vars=None, weights=None, t=None):
    A = _algebra(context, algebra, vars, weights, t)
    value = z_circle(A, context.bound)
    return Report("tft", "circle", True, value.to_json(), [_hilbert_table("  Z(S^1)", value.hilbert)])


def tft_sphere(context, algebra=None, vars=None, weights=None, t=None):
    A = _algebra(context, algebra, vars, weights, t)
    value = z_sphere(A, context.bound)
    even, odd, closed = value.census
    tables = [_hilbert_table("  Z(S^2)", value.hilbert), f"  census: {even} even, {odd} odd, zero differential {closed}"]
    return Report("tft", "sphere", True, value.to_json(), tables)


def tft_genus(context, g, algebra=None, vars=None, weights=None, t=None, check_order=False):
    A = _algebra(context, algebra, vars, weights, t)
    genus = _integer(g, "g")
    tasks = [lambda: z_genus(A, genus, context.bound, left_to_right=True)]
    if check_order:
        tasks.append(lambda: z_genus(A, genus, context.bound, left_to_right=False))
    values = context.gather(*tasks)
    result = values[0].to_json()
    tables = [_hilbert_table(f"  Z(genus {genus})", values[0].hilbert)]
    passed = True
    if check_order:
        mismatches = values[0].hilbert.mismatches(values[1].hilbert)
        passed = not mismatches
        result["assembly_mismatches"] = [list(m) for m in mismatches]
        tables.append(_hilbert_table("  assembled right to left", values[1].hilbert))
    return Report("tft", "genus", passed, result, tables)


def tft_three_dual(context, algebra=None, vars=None, weights=None, t=None):
    A = _algebra(context, algebra, vars, weights, t)
    verdict = three_dual_check(A, context.bound)
    even, odd, closed = verdict.census
    result = {
        "extendable": verdict.extendable,
        "census": {"even": even, "odd": odd, "zero_differential": closed},
    }
    tables = [f"  {'extendable' if verdict.extendable else 'not extendable'}: sphere census {even} even, {odd} odd"]
    return Report("tft", "three-dual", True, result, tables)


# menu

_morphism_help = "1-morphism as `x -> y ; a ; V` or a document name"
_ring_params = {
    "vars": "Space or comma separated variable names (default: identifiers in order of appearance)",
    "weights": "Variable weights, one per variable (default 1)",
}
_mf_params = dict(
    {"name": "Matrix factorization defined in `--doc`", "koszul": "Koszul pairs `p, q; p2, q2`"}, **_ring_params
)
_algebra_params = dict({"algebra": "cdga defined in `--doc` (default: polynomial ring on `--vars`)"}, **_ring_params)
_single_params = {"morphism": _morphism_help, "V": "Potential of (a; V): pt -> pt, all its variables extra"}

_verbs = (
    ("poly", "groebner", "Reduced Groebner basis", poly_groebner, {"polys": "Generators separated by `;`"}, _ring_params),
    (
        "poly",
        "normal-form",
        "Normal form modulo an ideal and ideal membership",
        poly_normal_form,
        {"poly": "Polynomial to reduce", "ideal": "Generators separated by `;`"},
        _ring_params,
    ),
    ("poly", "diff", "Partial derivative", poly_diff, {"poly": "Polynomial", "var": "Variable"}, _ring_params),
    (
        "poly",
        "dq",
        "Difference quotients and their telescoping identity",
        poly_dq,
        {"poly": "Potential V", "extra": "Variables a"},
        dict({"primes": "Names for the primed variables (default a')"}, **_ring_params),
    ),
    ("poly", "hilbert", "Hilbert function of a quotient ring", poly_hilbert, {"ideal": "Generators separated by `;`"}, _ring_params),
    ("mf", "verify", "Check d^2 = V id", mf_verify, None, _mf_params),
    ("mf", "koszul", "Koszul factorization of Σ p_i q_i", mf_koszul, {"pairs": "Pairs `p, q; p2, q2`"}, _ring_params),
    (
        "mf",
        "unit",
        "Unit factorization I_(a,V)",
        mf_unit,
        {"potential": "Potential V", "extra": "Variables a"},
        dict({"source": "Variables x", "target": "Variables y"}, **_ring_params),
    ),
    ("mf", "end", "End cohomology and evaluation data", mf_end, None, _mf_params),
    ("mf", "dual", "Dual factorization and double dual", mf_dual, None, _mf_params),
    (
        "bicat",
        "compose1",
        "Horizontal composite of 1-morphisms",
        bicat_compose1,
        {"first": _morphism_help, "second": _morphism_help},
        None,
    ),
    ("bicat", "identity1", "Identity 1-morphism of an object", bicat_identity1, {"vars": "Object variables"}, {"weights": _ring_params["weights"]}),
    ("bicat", "unit-law", "Unit law for the identity 2-morphism", bicat_unit_law, None, _single_params),
    ("crw", "serre", "Serre composite against the identity", crw_serre, None, _algebra_params),
    (
        "crw",
        "compose-diagonal",
        "Identity spans as units for composition",
        crw_compose_diagonal,
        None,
        dict({"span": "Span defined in `--doc` (default: coevaluation of the algebra)"}, **_algebra_params),
    ),
    ("e", "object", "Cotangent algebra of an object", e_object_verb, {"vars": "Object variables"}, {"weights": _ring_params["weights"]}),
    ("e", "one", "Span of a 1-morphism", e_one_verb, None, _single_params),
    ("e", "two", "End of the identity 2-morphism with its homotopy action", e_two_verb, None, _single_params),
    ("e", "zigzag", "End(I) against R through End(I)[β]", e_zigzag, None, _single_params),
    (
        "e",
        "funct1",
        "Functoriality on 1-morphisms",
        e_funct1,
        {"first": _morphism_help, "second": _morphism_help},
        None,
    ),
    (
        "e",
        "funct2",
        "Functoriality on 2-morphisms",
        e_funct2,
        None,
        dict(
            {
                "first": _morphism_help,
                "second": _morphism_help,
                "kind": "vertical, horizontal or product",
            },
            **_single_params,
        ),
    ),
    ("tft", "circle", "Value on the circle", tft_circle, None, dict({"t": "Polynomial ring on t variables"}, **_algebra_params)),
    ("tft", "sphere", "Value on the 2-sphere", tft_sphere, None, dict({"t": "Polynomial ring on t variables"}, **_algebra_params)),
    (
        "tft",
        "genus",
        "Value on a closed surface",
        tft_genus,
        {"g": "Genus"},
        dict({"t": "Polynomial ring on t variables", "check_order(bool)": "Also assemble right to left"}, **_algebra_params),
    ),
    ("tft", "three-dual", "Can the theory extend a dimension up", tft_three_dual, None, dict({"t": "Polynomial ring on t variables"}, **_algebra_params)),
)

_command_help = {
    "poly": "Polynomials and Groebner bases",
    "mf": "Matrix factorizations",
    "bicat": "The 2-category of matrix factorizations",
    "crw": "Affine Lagrangian correspondences",
    "e": "The functor to correspondences",
    "tft": "Values of the two-dimensional theory",
}


def build_menu():
    menu = CommandMenu("mfdk")
    menu.add_global_params(
        {
            "bound": f"Highest weight computed (default {default_bound})",
            "order": f"Monomial order, one of {', '.join(monomial_orders)} (default {default_order})",
            "json": "Write the JSON report to this file (`-` for standard output)",
            "threads": "Worker threads for independent computations (default 1)",
            "doc": "YAML or JSON work document",
            "verbose_output(bool)": "Log engine progress",
        }
    )
    for command, help in _command_help.items():
        menu.add_command(command, help)
    for command, verb, help, callback, required, optional in _verbs:
        menu.add_verb(command, verb, help, callback, required, optional)
    return menu


def _context(bound=None, order=None, threads=None, doc=None):
    bound = default_bound if bound is None else _integer(bound, "bound")
    order = order or default_order
    if order not in monomial_orders:
        raise InputError(f"Unknown monomial order `{order}`; expected one of {monomial_orders}")
    threads = 1 if threads is None else _integer(threads, "threads")
    if threads < 1:
        raise InputError("`--threads` must be at least 1")
    document = parse_document(doc) if doc else None
    return Context(bound, order, threads, document)


def execute(selection, context):
    logger.debug("Running %s %s with %s", selection.verb.command, selection.verb.verb, sorted(selection.params))
    return selection.verb.callback(context, **selection.params)


def run(command, verb, params=None, bound=None, order=None, threads=None, doc=None):
    """Runs one verb with string parameters as the command line would pass them."""
    menu = build_menu()
    argv = [command, verb]
    for name, value in (params or {}).items():
        if value is True:
            argv.append(f"--{name}")
        elif value is not None and value is not False:
            argv.append(f"--{name}={value}")
    selection = menu.parse(argv)
    if not isinstance(selection, Selection):
        raise InputError(f"Unknown verb `{command} {verb}`")
    return execute(selection, _context(bound, order, threads, doc))


def _configure_logging(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    menu = build_menu()
    try:
        selection = menu.parse(argv)
    except ValueError as error:
        print(f"mfdk {__version__}: {error}", file=stderr)
        return 2
    if not isinstance(selection, Selection):
        print(selection, file=stdout)
        return 0
    options = selection.globals
    _configure_logging(options.get("verbose_output"))
    try:
        context = _context(options.get("bound"), options.get("order"), options.get("threads"), options.get("doc"))
        report = execute(selection, context)
    except VerificationError as error:
        print(f"verification failed: {error}", file=stderr)
        return 1
    except InputError as error:
        print(f"input error: {error}", file=stderr)
        return 2
    if options.get("json") == "-":
        stdout.write(report.dumps())
    else:
        stdout.write(report.text())
        if options.get("json"):
            with open(options["json"], "w", encoding="utf-8") as handle:
                handle.write(report.dumps())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
