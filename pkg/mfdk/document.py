"""
Work documents: named rings, polynomials, cdgas, matrix factorizations,
1-morphisms, modules and spans read from YAML. JSON documents load the same
way. Every problem found is reported with the line and column of the entry
it comes from, and loading fails with all of them at once.

    rings:
      R: {vars: [x, y, a], weights: [1, 1, 1]}
    polynomials:
      V: {ring: R, expr: "a^2"}
    cdgas:
      A: {even: [{name: x, weight: 1}], odd: [{name: e, weight: 2}], d: {e: "x^2"}}
    mfs:
      K: {ring: R, potential: V, d0: [["a"]], d1: [["a"]]}
    morphisms:
      f: {ring: R, source: [x], target: [y], extra: [a], potential: "a*(y - x)"}
    modules:
      M: {base: A, generators: [{name: g, parity: 0, weight: 0}], d: {}}
    spans:
      S: {left: A, right: A, apex: A, left_leg: {}, right_leg: {}}

A potential or expression that names an entry of `polynomials` refers to it.
"""

import logging
from dataclasses import dataclass, field

import yaml

from mfdk.crw_affine import AffineSymplecticStack, FormalTwoForm, LagSpan
from mfdk.errors import DocumentError, InputError
from mfdk.graded_core import CDGAMap, EVEN, ODD, GradedVar, SemifreeCDGA, SemifreeModule
from mfdk.matrix_fact import MatrixFactorization, koszul_mf, verify_mf
from mfdk.mf_bicategory import MFObject, MFOneMorphism
from mfdk.poly_core import Polynomial, VarTable

logger = logging.getLogger(__name__)

sections = ("rings", "polynomials", "cdgas", "mfs", "morphisms", "modules", "spans")


@dataclass
class WorkDocument:
    path: str = None
    rings: dict = field(default_factory=dict)
    polynomials: dict = field(default_factory=dict)
    cdgas: dict = field(default_factory=dict)
    mfs: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    spans: dict = field(default_factory=dict)

    def get(self, section, name):
        entries = getattr(self, section)
        if name not in entries:
            known = ", ".join(sorted(entries)) or "none"
            raise InputError(f"No {section[:-1]} named `{name}` in {self.path or 'the document'} (defined: {known})")
        return entries[name]


class _Skip(Exception):
    """An entry failed; its errors are already recorded."""


def _collect_marks(node, path, marks):
    marks[path] = node.start_mark
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            if isinstance(key, yaml.ScalarNode):
                _collect_marks(value, path + (key.value,), marks)
    elif isinstance(node, yaml.SequenceNode):
        for index, value in enumerate(node.value):
            _collect_marks(value, path + (index,), marks)


def _compose(text, path):
    loader = yaml.SafeLoader(text)
    try:
        node = loader.get_single_node()
        data = loader.construct_document(node) if node is not None else {}
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        problem = getattr(error, "problem", None) or str(error)
        line, column = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        raise DocumentError([(path, line, column, problem)]) from None
    finally:
        loader.dispose()
    marks = {}
    if node is not None:
        _collect_marks(node, (), marks)
    return data, marks


class _Reader(object):
    def __init__(self, path, marks):
        self.path = path
        self.marks = marks
        self.errors = []
        self.document = WorkDocument(path)

    def fail(self, where, message):
        where = tuple(where)
        mark = None
        for k in range(len(where), -1, -1):
            mark = self.marks.get(where[:k])
            if mark is not None:
                break
        line, column = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        dotted = ".".join(str(part) for part in where)
        self.errors.append((self.path, line, column, f"{dotted}: {message}" if dotted else message))
        raise _Skip()

    def mapping(self, value, where):
        if not isinstance(value, dict):
            self.fail(where, f"expected a mapping, got {type(value).__name__}")
        return value

    def names(self, value, where):
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            self.fail(where, "expected a list of names")
        return tuple(value)

    def lookup(self, section, name, where):
        entries = getattr(self.document, section)
        if not isinstance(name, str) or name not in entries:
            self.fail(where, f"undefined {section[:-1]} `{name}`")
        return entries[name]

    def table(self, entry, where, names=None):
        """The entry's `ring`, or a table built from inline `vars`/`weights`, or from `names`."""
        if "ring" in entry:
            return self.lookup("rings", entry["ring"], where + ("ring",))
        if "vars" in entry:
            return _ring_table(self, entry, where)
        if names is not None:
            return VarTable.of(names)
        self.fail(where, "needs a `ring` or `vars`")

    def polynomial(self, value, table, where):
        if isinstance(value, str) and value in self.document.polynomials:
            return onto_table(self.document.polynomials[value], table)
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            self.fail(where, f"expected an expression, got {value!r}")
        if isinstance(value, int):
            return Polynomial.constant(table, value)
        return Polynomial.parse(value, table)


def onto_table(p, table):
    """`p` re-indexed into `table`, dropping variables it does not use."""
    stray = p.variables() - set(table.names)
    if stray:
        raise InputError(f"Polynomial {p} uses {sorted(stray)} outside the ring {list(table.names)}")
    keep = [k for k, name in enumerate(p.table.names) if name in table]
    sub = VarTable.of([p.table.names[k] for k in keep], [p.table.weights[k] for k in keep])
    terms = {tuple(exps[k] for k in keep): value for exps, value in p.terms.items()}
    return Polynomial(sub, terms).to_table(table)


def _ring_table(reader, entry, where):
    if isinstance(entry, list):
        return VarTable.of(reader.names(entry, where))
    names = reader.names(entry.get("vars"), where + ("vars",))
    weights = entry.get("weights")
    if weights is not None and (not isinstance(weights, list) or len(weights) != len(names)):
        reader.fail(where + ("weights",), "needs one weight per variable")
    return VarTable.of(names, weights)


def _read_ring(reader, name, entry, where):
    if not isinstance(entry, list):
        reader.mapping(entry, where)
    return _ring_table(reader, entry, where)


def _read_polynomial(reader, name, entry, where):
    if isinstance(entry, str):
        return Polynomial.parse(entry)
    entry = reader.mapping(entry, where)
    table = reader.table(entry, where)
    if "expr" not in entry:
        reader.fail(where, "needs an `expr`")
    return reader.polynomial(entry["expr"], table, where + ("expr",))


def _graded_vars(reader, values, parity, where):
    found = []
    for k, value in enumerate(values or []):
        if isinstance(value, str):
            found.append(GradedVar(value, parity, 1))
            continue
        value = reader.mapping(value, where + (k,))
        if "name" not in value:
            reader.fail(where + (k,), "generator needs a `name`")
        found.append(GradedVar(value["name"], value.get("parity", parity), value.get("weight", 1)))
    return found


def _read_cdga(reader, name, entry, where):
    entry = reader.mapping(entry, where)
    generators = _graded_vars(reader, entry.get("even"), EVEN, where + ("even",))
    generators += _graded_vars(reader, entry.get("odd"), ODD, where + ("odd",))
    differential = reader.mapping(entry.get("d") or {}, where + ("d",))
    skeleton = SemifreeCDGA(generators, check=False)
    images = {}
    for generator, text in differential.items():
        try:
            images[generator] = skeleton.parse(str(text))
        except InputError as error:
            reader.fail(where + ("d", generator), str(error))
    return SemifreeCDGA(generators, images, name=name)


def _read_matrix(reader, block, table, where):
    if not isinstance(block, list) or not all(isinstance(row, list) for row in block):
        reader.fail(where, "expected a list of rows")
    rows = []
    for i, row in enumerate(block):
        entries = []
        for j, value in enumerate(row):
            try:
                entries.append(reader.polynomial(value, table, where + (i, j)))
            except InputError as error:
                reader.fail(where + (i, j), str(error))
        rows.append(entries)
    return rows


def _read_mf(reader, name, entry, where):
    entry = reader.mapping(entry, where)
    table = reader.table(entry, where)
    if "koszul" in entry:
        pairs = []
        for k, pair in enumerate(entry["koszul"] or []):
            if not isinstance(pair, list) or len(pair) != 2:
                reader.fail(where + ("koszul", k), "expected a pair [p, q]")
            pairs.append(tuple(reader.polynomial(v, table, where + ("koszul", k)) for v in pair))
        mf = koszul_mf(pairs, table)
        mf.name = name
        return mf
    for key in ("potential", "d0", "d1"):
        if key not in entry:
            reader.fail(where, f"needs `{key}`")
    potential = reader.polynomial(entry["potential"], table, where + ("potential",))
    d0 = _read_matrix(reader, entry["d0"], table, where + ("d0",))
    d1 = _read_matrix(reader, entry["d1"], table, where + ("d1",))
    mf = MatrixFactorization(table, potential, d0, d1, name=name)
    verdict = verify_mf(mf)
    if not verdict:
        block = "d1" if verdict.block == "d1*d0" else "d0"
        reader.fail(where + (block,), f"not a matrix factorization: {verdict.message}")
    return mf


def _read_morphism(reader, name, entry, where):
    entry = reader.mapping(entry, where)
    source = reader.names(entry.get("source", []), where + ("source",))
    target = reader.names(entry.get("target", []), where + ("target",))
    extra = reader.names(entry.get("extra", []), where + ("extra",))
    ring = reader.table(entry, where, source + target + extra)
    missing = [n for n in source + target + extra if n not in ring]
    if missing:
        reader.fail(where, f"variables {missing} are not in the ring")
    table = VarTable.of(source + target + extra, [ring.weight(n) for n in source + target + extra])
    if "potential" not in entry:
        reader.fail(where, "needs a `potential`")
    potential = onto_table(reader.polynomial(entry["potential"], ring, where + ("potential",)), table)
    return MFOneMorphism(
        MFObject(source, [ring.weight(n) for n in source]),
        MFObject(target, [ring.weight(n) for n in target]),
        extra,
        potential,
    )


def _read_module(reader, name, entry, where):
    entry = reader.mapping(entry, where)
    base = reader.lookup("cdgas", entry.get("base"), where + ("base",))
    generators = []
    for k, value in enumerate(entry.get("generators") or []):
        value = reader.mapping(value, where + ("generators", k))
        generators.append(GradedVar(value.get("name"), value.get("parity", EVEN), value.get("weight", 0)))
    differential = {}
    for generator, row in reader.mapping(entry.get("d") or {}, where + ("d",)).items():
        row = reader.mapping(row, where + ("d", generator))
        differential[generator] = {target: str(value) for target, value in row.items()}
    curvature = entry.get("curvature")
    return SemifreeModule(
        base, generators, differential, str(curvature) if curvature is not None else None, name=name
    )


def _stack(reader, entry, key, where):
    name = entry.get(key)
    algebra = reader.lookup("cdgas", name, where + (key,))
    forms = reader.mapping(entry.get("forms") or {}, where + ("forms",))
    pairs = forms.get(key) or []
    return AffineSymplecticStack(algebra, FormalTwoForm.cotangent(tuple(p) for p in pairs), 1, name)


def _read_span(reader, name, entry, where):
    entry = reader.mapping(entry, where)
    left, right = _stack(reader, entry, "left", where), _stack(reader, entry, "right", where)
    apex = reader.lookup("cdgas", entry.get("apex"), where + ("apex",))
    legs = []
    for key, stack in (("left_leg", left), ("right_leg", right)):
        images = reader.mapping(entry.get(key) or {}, where + (key,))
        try:
            legs.append(CDGAMap(stack.algebra, apex, {g: str(v) for g, v in images.items()}))
        except InputError as error:
            reader.fail(where + (key,), str(error))
    return LagSpan(left, right, apex, legs[0], legs[1], {"kind": "document", "name": name})


_readers = {
    "rings": _read_ring,
    "polynomials": _read_polynomial,
    "cdgas": _read_cdga,
    "mfs": _read_mf,
    "morphisms": _read_morphism,
    "modules": _read_module,
    "spans": _read_span,
}


def load_document(text, path=None):
    data, marks = _compose(text, path)
    data = data or {}
    reader = _Reader(path, marks)
    if not isinstance(data, dict):
        raise DocumentError([(path, 1, 1, "a document is a mapping of sections")])
    unknown = sorted(set(map(str, data)) - set(sections))
    for key in unknown:
        try:
            reader.fail((key,), f"unknown section; expected one of {', '.join(sections)}")
        except _Skip:
            pass
    for section in sections:
        entries = data.get(section) or {}
        try:
            entries = reader.mapping(entries, (section,))
        except _Skip:
            continue
        for name, entry in entries.items():
            where = (section, name)
            try:
                value = _readers[section](reader, name, entry, where)
            except _Skip:
                continue
            except InputError as error:
                try:
                    reader.fail(where, str(error))
                except _Skip:
                    continue
            getattr(reader.document, section)[name] = value
    if reader.errors:
        raise DocumentError(reader.errors)
    logger.debug(
        "Loaded %s: %s",
        path or "document",
        ", ".join(f"{len(getattr(reader.document, s))} {s}" for s in sections),
    )
    return reader.document


def parse_document(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as error:
        raise DocumentError([(path, None, None, error.strerror or str(error))]) from None
    return load_document(text, path)
