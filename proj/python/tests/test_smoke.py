import os
import pathlib

import pytest

import gradualhm as g

PROGRAMS = pathlib.Path(os.environ.get("GHM_PROGRAMS", pathlib.Path(__file__).parents[2] / "programs"))


def test_intro_success():
    r = g.run("(fun (x:?) -> x 2) (fun y -> y)")
    assert r["outcome"] == "value"
    assert r["value"] == "2 : int =>[3+] ?"
    assert r["subst"] == {"a0": "int"}
    assert [t[0] for t in r["trace"]][-3:] == ["R_AppCast", "R_InstBase", "R_Beta"]


def test_intro_blame_file():
    r = g.run((PROGRAMS / "intro_blame.itgl").read_text())
    assert r["outcome"] == "blame"
    assert r["label"] == "3-"


def test_timeout():
    r = g.run((PROGRAMS / "omega.itgl").read_text(), max_steps=500)
    assert r["outcome"] == "timeout"
    assert r["steps"] == 500


def test_inference_and_translation():
    info = g.infer("(fun (x:?) -> x 2) (fun y -> y)")
    assert info["type"] == "?"
    assert info["residual"] == ["a0"]
    term, ty = g.translate("(fun (x:int) -> x) 1")
    assert term == "(fun (x : int) -> x) 1"
    assert ty == "int"
    assert g.typecheck("2 : int =>[1+] ?") == "?"


def test_errors():
    with pytest.raises(g.TypeError):
        g.infer("1 true")
    with pytest.raises(g.SyntaxError):
        g.parse("(1")
    with pytest.raises(g.IllTyped):
        g.typecheck("2 : bool =>[1+] ?")


def test_precision():
    assert g.type_precision("int -> bool", "'X -> 'Y") == {"X": "int", "Y": "bool"}
    assert g.type_precision("int -> bool", "'X -> 'X") is None
    assert g.term_precision("fun (x:int) -> x", "fun (x:?) -> x") == {}
    assert g.term_precision("fun (x:?) -> x", "fun (x:int) -> x") is None


def test_vocabulary_size():
    sizes = [len(g.vocabulary(d)) for d in range(3)]
    expected = [2]
    for _ in range(2):
        expected.append(2 + expected[-1] ** 2)
    assert sizes == expected


def test_baseline_mode():
    r = g.eval_term("(fun (x : int) -> x + 1) 2", mode="baseline")
    assert r["value"] == "3"
    with pytest.raises(ValueError):
        g.eval_term("1", mode="other")


def test_properties_and_generation():
    assert set(g.properties()) >= {"soundness", "completeness", "conservative", "safety", "gg"}
    r = g.check_property("safety", cases=20, seed=3)
    assert r["failures"] == 0 and r["cases"] == 20
    assert g.generate(5) == g.generate(5)


def test_session():
    s = g.Session()
    assert s.handle("let id = fun x -> x") == "val id : forall 'a0. 'a0 -> 'a0\n"
    assert s.handle("id true") == "- : bool = true\n"
    s.handle(":quit")
    assert s.done
