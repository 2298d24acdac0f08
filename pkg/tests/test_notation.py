import json

import pytest
from hypothesis import given

from conftest import PY2, X2, Y2, relations
from multirel.errors import TypeMismatch
from multirel.finsets import Base, Pow, Universe
from multirel.notation import infer_type, parse_binding, parse_pairs, parse_relation
from multirel.relcore import Relation

U = Universe({"X": 2, "Y": 2})


def test_parse_pairs_shapes():
    assert parse_pairs("{}") == []
    assert parse_pairs("∅") == []
    assert parse_pairs("{(a,{a}),(a,{b})}") == [("a", ["a"]), ("a", ["b"])]
    assert parse_pairs(" { ( a , ∅ ) , ( b , { } ) } ") == [("a", []), ("b", [])]
    assert parse_pairs("{(a,{{a},∅})}") == [("a", [["a"], []])]


@pytest.mark.parametrize("bad", ["", "(a,a)", "{(a,a)", "{(a a)}", "{(a,a)} x", "{(a,{a)}",
                                 "{a}", "{(a,a);(b,b)}", "∅ ∅"])
def test_parse_pairs_rejects(bad):
    with pytest.raises(ValueError):
        parse_pairs(bad)


def test_parse_relation_examples():
    r = parse_relation("{(a,{a}),(a,{b})}", Base("X", 1), PY2)
    assert r.text() == "{(a,{a}),(a,{b})}"
    assert parse_relation("{(a,{b,a})}", Base("X", 1), PY2).text() == "{(a,{a,b})}"
    with pytest.raises(TypeMismatch):
        parse_relation("{(c,a)}", X2, Y2)
    with pytest.raises(TypeMismatch):
        parse_relation("{(a,{a})}", X2, Y2)


def test_parse_binding_inferred():
    name, r = parse_binding(U, "R={(a,{a}),(b,∅)}")
    assert name == "R" and r.src == Base("X", 2) and r.tgt == Pow(Base("X", 2))
    name, r = parse_binding(U, " S = {(a,b)} ")
    assert name == "S" and (r.src, r.tgt) == (Base("X", 2), Base("X", 2))


def test_parse_binding_typed():
    name, r = parse_binding(U, "R:X<->P(Y)={}")
    assert name == "R" and r.tgt == Pow(Base("Y", 2)) and not r
    _, r = parse_binding(U, "T : Y <-> P(Y) = {(b,{a,b})}")
    assert r.text() == "{(b,{a,b})}"


@pytest.mark.parametrize("bad,err", [
    ("R", ValueError), ("R:X=={}", ValueError), ("1R={(a,a)}", ValueError),
    ("R={}", TypeMismatch), ("R={(a,∅)}", TypeMismatch), ("R={(z,a)}", TypeMismatch),
    ("R={(a,a),(a,{a})}", TypeMismatch), ("R:X<->Z={}", TypeMismatch),
])
def test_parse_binding_errors(bad, err):
    with pytest.raises(err):
        parse_binding(U, bad)


def test_infer_type_prefers_declaration_order():
    u = Universe({"Y": 3, "X": 2})
    assert infer_type(u, ["a", "b"], "source") == Base("Y", 3)
    assert infer_type(u, [["a"], []], "target") == Pow(Base("Y", 3))


@given(relations(X2, PY2))
def test_text_round_trip(r):
    assert parse_relation(r.text(), r.src, r.tgt) == r
    _, s = parse_binding(U, f"R:{r.src}<->{r.tgt}={r.text()}")
    assert s == r


@given(relations(Base("X", 2), Pow(Pow(Base("Y", 1)))))
def test_json_round_trip(r):
    u = Universe({"X": 2, "Y": 1})
    doc = json.loads(json.dumps(r.to_json()))
    assert Relation.from_json(u, doc) == r
    assert parse_relation(r.text(), r.src, r.tgt) == r
