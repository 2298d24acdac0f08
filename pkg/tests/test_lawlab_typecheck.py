import pytest

from multirel.errors import LawTypeError
from multirel.finsets import Base, Pow, Universe
from multirel.lawlab import check_formula, check_term, load, parse_formula, parse_term

U = Universe({"X": 1, "Y": 2})
X, Y = U.base("X"), U.base("Y")
VARS = {"R": (X, Pow(Y)), "S": (Y, Pow(Y)), "Q": (X, Y)}


def typ(text):
    return check_term(U, VARS, parse_term(text))


@pytest.mark.parametrize("text,src,tgt", [
    ("down(R)", X, Pow(Y)),
    ("R * S", X, Pow(Y)),
    ("R @ S", X, Pow(Y)),
    ("Q ; S", X, Pow(Y)),
    ("R icup R icap R", X, Pow(Y)),
    ("R^i^d", X, Pow(Y)),
    ("plift(R)", Pow(X), Pow(Y)),
    ("R_*", Pow(X), Pow(Y)),
    ("klift(R)", Pow(X), Pow(Y)),
    ("syq(R, R)", Pow(Y), Pow(Y)),
    ("Q^ ; Q", Y, Y),
    ("conv(R)", X, Pow(Y)),
    ("R cup one[X] * R", X, Pow(Y)),
    ("0[X,P(Y)] * S", X, Pow(Y)),
    ("R cup lu", X, Pow(Y)),
    ("Q - U", X, Y),
    ("eps[Y] * S", Y, Pow(Y)),
])
def test_inferred_types(text, src, tgt):
    assert typ(text) == (src, tgt)


@pytest.mark.parametrize("text,fragment", [
    ("R ; S", "composition needs left target = right source"),
    ("Q * S", "needs a powerset target"),
    ("R icup Q", "operands of icup must have equal types"),
    ("R cup S", "operands of cup must have equal types"),
    ("Q^i", "needs a powerset target"),
    ("up(Q)", "needs a powerset target"),
    ("0[X,P(Y)] * R", "left inner type = right source"),
    ("Id", "cannot infer the type"),
    ("one", "cannot infer the type"),
    ("T", "T"),
    ("one[Z]", "Z"),
])
def test_rejections(text, fragment):
    with pytest.raises(LawTypeError) as info:
        typ(text)
    assert fragment in str(info.value)


def test_error_points_at_operator():
    with pytest.raises(LawTypeError) as info:
        typ("R ; S")
    assert "line 1, column 3" in str(info.value)


@pytest.mark.parametrize("text", [
    "R <= U", "univalent(Q)", "R <=H R and R =EM down(R)",
    "exists T : X <-> Y . T ; T^ <= Id", "forall T : Y <-> P(Y) . R * T <=S R * T",
])
def test_well_typed_formulas(text):
    check_formula(U, VARS, parse_formula(text))


@pytest.mark.parametrize("text", [
    "R <=H S", "R = Q", "up_closed(Q)", "forall T . T = T", "inner_total(Q)", "R", "conv(Q) = Q",
])
def test_ill_typed_formulas(text):
    with pytest.raises(LawTypeError):
        check_formula(U, VARS, parse_formula(text))


def test_law_file_declarations():
    f = load("set X = 1\nset Y = 2\nvar R : X <-> P(Y)\nlaw R icup R = R")
    assert f.var_types["R"] == (Base("X", 1), Pow(Base("Y", 2)))
    for bad in ("set X = 1\nset X = 2\nlaw 0[X,X] = 0[X,X]",
                "set X = 1\nvar R : X <-> Z\nlaw R = R",
                "set X = 1\nvar R : X <-> X\nvar R : X <-> P(X)\nlaw R = R",
                "set X = 1\nvar R : X <-> X\nlaw R * R = R"):
        with pytest.raises(LawTypeError):
            load(bad)
