import io
import json
import runpy
import sys

import pytest

from mfdk.cli import build_menu, main, run
from mfdk.cli_menu import CommandMenu, Selection
from mfdk.errors import InputError


def _main(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    status = main(list(argv), stdout, stderr)
    return status, stdout.getvalue(), stderr.getvalue()


def test_verify_a_koszul_factorization():
    status, out, _ = _main("mf", "verify", "--koszul=a, a")
    assert status == 0
    assert out.startswith("mf verify: ok")


def test_json_report_has_sorted_keys():
    status, out, _ = _main("mf", "verify", "--koszul=a, a", "--json=-")
    assert status == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["result"]["ranks"] == [1, 1]
    assert report["result"]["potential"] == "a^2"
    assert out == json.dumps(report, sort_keys=True, indent=2) + "\n"


def test_json_report_to_a_file(tmp_path):
    path = tmp_path / "report.json"
    status, out, _ = _main("poly", "dq", "--poly=a^2", "--extra=a", f"--json={path}")
    assert status == 0
    assert "p_1 = a + a'" in out
    assert json.loads(path.read_text(encoding="utf-8"))["result"]["telescopes"] is True


def test_zigzag_verb():
    status, _, err = _main("e", "zigzag", "--V=a^3", "--bound=3")
    assert status == 0, err


def test_bad_input_exits_with_two():
    status, _, err = _main("mf", "verify", "--koszul=a")
    assert status == 2
    assert err.startswith("input error:")


@pytest.mark.parametrize(
    "argv",
    [
        ("sheaf", "verify"),
        ("mf",),
        ("mf", "verify", "--polys=x"),
        ("poly", "groebner"),
        (),
    ],
)
def test_menu_misuse_exits_with_two(argv):
    status, _, err = _main(*argv)
    assert status == 2
    assert err.startswith("mfdk ")


def test_help():
    status, out, _ = _main("--help")
    assert status == 0
    assert "Usage: mfdk" in out
    status, out, _ = _main("tft", "--help")
    assert status == 0
    assert "tft three-dual" in out


def test_named_factorization_from_a_document(tmp_path):
    path = tmp_path / "work.yaml"
    path.write_text("rings:\n  R: [a]\nmfs:\n  K: {ring: R, koszul: [[a, a]]}\n", encoding="utf-8")
    status, out, _ = _main("mf", "verify", "--name=K", f"--doc={path}")
    assert status == 0
    assert "rank 1|1 factorization of a^2" in out


def test_document_errors_exit_with_two(tmp_path):
    path = tmp_path / "work.yaml"
    path.write_text("mfs:\n  K: {ring: R2, koszul: [[a, a]]}\n", encoding="utf-8")
    status, _, err = _main("mf", "verify", "--name=K", f"--doc={path}")
    assert status == 2
    assert f"{path}:2:" in err


def test_run_groebner():
    report = run("poly", "groebner", {"polys": "x^2 - y; x*y - 1"})
    assert report.passed
    assert set(report.result["basis"]) == {"x^2 - y", "x*y - 1", "y^2 - x"}
    assert report.result["unit_ideal"] is False


def test_run_sphere_census():
    report = run("tft", "sphere", {"t": "1"}, bound="2")
    assert report.result["census"] == {"even": 2, "odd": 0, "zero_differential": True}


def test_run_genus_on_threads():
    report = run("tft", "genus", {"g": "1", "t": "1", "check_order": True}, bound="3", threads="2")
    assert report.passed
    assert report.result["assembly_mismatches"] == []


def test_run_rejects_unknown_order():
    with pytest.raises(InputError):
        run("poly", "groebner", {"polys": "x"}, order="elimination-by-hand")


def test_every_verb_is_registered():
    menu = build_menu()
    assert isinstance(menu.parse(["e", "object", "--vars=x"]), Selection)
    assert isinstance(menu.parse(["tft", "three-dual", "--t=2"]), Selection)


def _menu():
    menu = CommandMenu("test")
    menu.add_global_params({"bound": "Highest weight"})
    menu.add_verb(
        "fruit",
        "peel",
        "Peel a fruit",
        lambda **kwargs: kwargs,
        required_params={"kind": "Which fruit"},
        optional_params={"quick(bool)": "Peel quickly"},
    )
    return menu


def test_menu_selection():
    selection = _menu().parse(["fruit", "peel", "--kind=apple", "--quick", "--bound=4"])
    assert selection.verb.verb == "peel"
    assert selection.params == {"kind": "apple", "quick": True}
    assert selection.globals == {"bound": "4"}


def test_menu_requires_parameters():
    with pytest.raises(ValueError, match="--kind"):
        _menu().parse(["fruit", "peel"])


def test_menu_help_text():
    text = _menu().parse(["fruit", "peel", "--help"])
    assert "Help for `fruit peel`" in text
    assert "--kind: Which fruit" in text


def test_menu_registration_errors():
    menu = _menu()
    with pytest.raises(ValueError):
        menu.add_verb("fruit", "peel", "again", lambda **kwargs: kwargs)
    with pytest.raises(ValueError):
        menu.add_verb("fruit", "slice", "no callback")
    with pytest.raises(ValueError):
        menu.add_verb("fruit", "core", "overlap", lambda **kwargs: kwargs, {"kind": ""}, {"kind": ""})
    with pytest.raises(ValueError):
        menu.add_verb("fruit", "squash", "flag clash", lambda **kwargs: kwargs, {"kind(bool)": ""})


def test_module_runs_as_a_script(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["mfdk", "mf", "verify", "--koszul=a, a"])
    with pytest.warns(RuntimeWarning), pytest.raises(SystemExit) as raised:
        runpy.run_module("mfdk.cli", run_name="__main__")
    assert raised.value.code == 0
    assert capsys.readouterr().out.startswith("mf verify: ok")
