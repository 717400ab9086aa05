import textwrap

import pytest

from mfdk.document import load_document, parse_document
from mfdk.errors import DocumentError, InputError
from mfdk.poly_core import Polynomial


def _load(text, path="work.yaml"):
    return load_document(textwrap.dedent(text), path)


full_document = """\
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
"""


def test_every_section_loads():
    document = _load(full_document)
    assert document.rings["R"].names == ("x", "y", "a")
    assert str(document.polynomials["V"]) == "a^2"
    assert document.cdgas["A"].names() == ["x", "e"]
    assert document.mfs["K"].ranks == (1, 1)
    f = document.morphisms["f"]
    assert f.extra == ("a",)
    assert f.potential == Polynomial.parse("a*(y - x)", f.table)
    assert document.modules["M"].rank() == (1, 0)
    assert document.spans["S"].apex is document.cdgas["A"]


def test_get_names_the_known_entries():
    document = _load(full_document)
    with pytest.raises(InputError, match="defined: K"):
        document.get("mfs", "Z")


def test_morphism_potential_may_name_a_polynomial():
    document = _load(
        """
        rings:
          R: [x, y, a]
        polynomials:
          W: {ring: R, expr: "a*(y - x)"}
        morphisms:
          f: {ring: R, source: [x], target: [y], extra: [a], potential: W}
        """
    )
    f = document.morphisms["f"]
    assert f.potential == Polynomial.parse("a*y - a*x", f.table)


def test_undefined_ring_is_located():
    with pytest.raises(DocumentError) as info:
        _load(
            """\
            mfs:
              K: {ring: R2, potential: "a^2", d0: [["a"]], d1: [["a"]]}
            """
        )
    ((path, line, column, message),) = info.value.errors
    assert path == "work.yaml"
    assert line == 2
    assert message == "mfs.K.ring: undefined ring `R2`"


def test_bad_factorization_points_at_the_failing_block():
    with pytest.raises(DocumentError) as info:
        _load(
            """\
            rings:
              R: [x]
            mfs:
              K:
                ring: R
                potential: "x^2 + 1"
                d0: [["x"]]
                d1: [["x"]]
            """
        )
    ((_, line, _, message),) = info.value.errors
    assert line == 8
    assert message.startswith("mfs.K.d1: not a matrix factorization")
    assert "work.yaml:8:" in str(info.value)


def test_all_errors_are_reported_together():
    with pytest.raises(DocumentError) as info:
        _load(
            """\
            sheaves: {}
            mfs:
              K: {ring: R2, potential: "a^2", d0: [["a"]], d1: [["a"]]}
            """
        )
    messages = [error[3] for error in info.value.errors]
    assert len(messages) == 2
    assert messages[0].startswith("sheaves: unknown section")


def test_yaml_syntax_errors_carry_a_line():
    with pytest.raises(DocumentError) as info:
        _load("rings:\n  R: [x, y\nmfs: {}\n")
    ((_, line, _, _),) = info.value.errors
    assert line is not None


def test_document_must_be_a_mapping():
    with pytest.raises(DocumentError):
        _load("- rings\n")


def test_json_documents_load():
    document = load_document('{"rings": {"R": ["x", "y"]}}')
    assert document.rings["R"].names == ("x", "y")


def test_parse_document_reads_files(tmp_path):
    path = tmp_path / "work.yaml"
    path.write_text(full_document, encoding="utf-8")
    assert "K" in parse_document(str(path)).mfs


def test_missing_file_is_a_document_error(tmp_path):
    with pytest.raises(DocumentError) as info:
        parse_document(str(tmp_path / "missing.yaml"))
    ((_, line, column, _),) = info.value.errors
    assert line is None and column is None
