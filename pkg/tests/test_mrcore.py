import itertools

import numpy as np
import pytest
from hypothesis import given

import oracles
from conftest import multirelations
from multirel.closures import closed_check, down, up
from multirel.errors import CardinalityLimit, EmptyFamily, NotUpClosed, TypeMismatch
from multirel.finsets import Base, Pow
from multirel.mrcore import (
    atoms, big_inner_intersection, big_inner_union, closure_property, co_atoms, co_compose,
    comp_rel, dual, inner_complement, inner_intersection, inner_property, inner_union,
    inner_unit_i, inner_unit_u, kleisli_lift, kleisli_lift_by_syq, membership, omega,
    parikh_compose, peleg_compose, peleg_lift, special_constant, unit,
)
from multirel.notation import parse_relation
from multirel.relcore import (
    Relation, all_relations, complement, compose, converse, d_subfunctions, domain, empty,
    identity, intersection, is_total, is_univalent, right_residual, syq, union, union_all,
    universal,
)

X1, X2 = Base("X", 1), Base("X", 2)
Y1, Y2 = Base("Y", 1), Base("Y", 2)


def mr(text, src=X1, inner=Y2):
    return parse_relation(text, src, Pow(inner))


R33 = mr("{(a,{a}),(a,{b})}")  # the non-idempotent example


def every(src=X1, inner=Y2):
    return list(all_relations(src, Pow(inner)))


# -- constants --------------------------------------------------------------------------

def test_constant_examples():
    assert omega(Y1).text() == "{(∅,∅),(∅,{a}),({a},{a})}"
    assert comp_rel(Y1).text() == "{(∅,{a}),({a},∅)}"
    assert atoms(X1, Y2) == R33
    assert co_atoms(X1, Y2) == mr("{(a,{b}),(a,{a})}")
    assert unit(X2).text() == "{(a,{a}),(b,{b})}"
    assert inner_unit_u(X2, Y2).text() == "{(a,∅),(b,∅)}"
    assert inner_unit_i(X1, Y2).text() == "{(a,{a,b})}"
    assert membership(Y2).text() == "{(a,{a}),(a,{a,b}),(b,{b}),(b,{a,b})}"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_constants_by_their_relational_definitions(n):
    y = Base("Y", n)
    eps = membership(y)
    assert omega(y) == right_residual(eps, eps)
    assert comp_rel(y) == syq(eps, complement(eps))
    assert atoms(X2, y) == compose(universal(X2, y), unit(y))
    assert inner_unit_u(y, y) == inner_intersection(unit(y), inner_complement(unit(y)))
    assert co_atoms(X2, y) == inner_complement(atoms(X2, y))


def test_special_constant_dispatch():
    assert special_constant("membership", Y=Y2) == membership(Y2)
    assert special_constant("unit", X=X2) == unit(X2)
    assert special_constant("atoms", X=X1, Y=Y2) == atoms(X1, Y2)
    with pytest.raises(ValueError):
        special_constant("bogus", X1, Y2)
    with pytest.raises(CardinalityLimit):
        omega(Base("Y", 9))


# -- inner operations ---------------------------------------------------------------------

def test_inner_union_examples():
    assert inner_union(R33, R33) == union(R33, mr("{(a,{a,b})}"))
    assert inner_union(R33, empty(X1, Pow(Y2))) == empty(X1, Pow(Y2))
    assert inner_union(R33, inner_unit_u(X1, Y2)) == R33
    with pytest.raises(TypeMismatch):
        inner_union(R33, empty(X2, Pow(Y2)))
    with pytest.raises(TypeMismatch):
        inner_union(identity(X1), identity(X1))


def test_inner_intersection_examples():
    assert inner_intersection(R33, R33) == union(R33, mr("{(a,∅)}"))
    assert inner_intersection(R33, inner_unit_i(X1, Y2)) == R33
    for q in every(X2):
        if is_univalent(q):
            assert inner_union(q, q) == q == inner_intersection(q, q)


def test_inner_complement_examples():
    for r in every():
        assert inner_complement(inner_complement(r)) == r
        assert inner_complement(r) == compose(r, comp_rel(Y2))
    assert inner_complement(mr("{(a,{a})}")) == mr("{(a,{b})}")
    assert inner_complement(inner_unit_u(X1, Y2)) == inner_unit_i(X1, Y2)


def test_dual_examples():
    for r in every():
        assert dual(dual(r)) == r
    assert dual(mr("{(a,{a})}", X1, Y1)) == mr("{(a,{a})}", X1, Y1)
    assert dual(empty(X1, Pow(Y2))) == universal(X1, Pow(Y2))


def test_big_inner_examples():
    s = mr("{(a,∅),(a,{b})}")
    assert big_inner_union([R33]) == R33
    assert big_inner_union([R33, s]) == inner_union(R33, s)
    assert big_inner_union([R33, R33, R33]) == mr("{(a,{a}),(a,{b}),(a,{a,b})}")
    assert big_inner_intersection([R33]) == R33
    assert big_inner_intersection([R33, s]) == inner_intersection(R33, s)
    with pytest.raises(EmptyFamily):
        big_inner_union([])
    with pytest.raises(EmptyFamily):
        big_inner_intersection([])


def test_big_inner_union_against_oracle():
    rng = np.random.default_rng(1)
    rels = every(X2)
    for _ in range(300):
        fam = [rels[k] for k in rng.integers(0, len(rels), size=int(rng.integers(1, 5)))]
        got = big_inner_union(fam)
        assert oracles.pairs(got) == oracles.big_inner_union([oracles.pairs(r) for r in fam])


def test_inner_ops_against_oracle():
    for r, s in itertools.product(every(), repeat=2):
        o, p = oracles.pairs(r), oracles.pairs(s)
        assert oracles.pairs(inner_union(r, s)) == oracles.inner_union(o, p)
        assert oracles.pairs(inner_intersection(r, s)) == oracles.inner_intersection(o, p)
    for r in every(X2):
        assert oracles.pairs(inner_complement(r)) == oracles.inner_complement(oracles.pairs(r), Y2)


def test_big_intersection_duality_exhaustive():
    for r, s in itertools.product(every(), repeat=2):
        lhs = inner_complement(big_inner_union([inner_complement(r), inner_complement(s)]))
        assert lhs == inner_intersection(r, s)


# -- union- and intersection-closure --------------------------------------------------------

def test_closure_property_examples():
    assert closure_property("union_closed", universal(X1, Pow(Y2)), cross_check=True)
    assert not closure_property("union_closed", R33, cross_check=True)
    for r in every():
        if closed_check("down", r):
            assert closure_property("intersection_closed", r, cross_check=True)
    with pytest.raises(ValueError):
        closure_property("closed", R33)


def test_closure_property_characterizations_agree():
    # the syq form enumerates every S <= R; both answers must coincide
    for r in every():
        closure_property("union_closed", r, cross_check=True)
        closure_property("intersection_closed", r, cross_check=True)


# -- liftings ----------------------------------------------------------------------------

def test_kleisli_examples():
    px = Pow(X1)
    assert kleisli_lift(R33) == parse_relation("{(∅,∅),({a},{a,b})}", px, Pow(Y2))
    assert kleisli_lift(empty(X1, Pow(Y2))) == parse_relation("{(∅,∅),({a},∅)}", px, Pow(Y2))
    assert kleisli_lift(unit(X2)) == identity(Pow(X2))


def test_peleg_lift_examples():
    px = Pow(X1)
    assert peleg_lift(R33) == parse_relation("{(∅,∅),({a},{a}),({a},{b})}", px, Pow(Y2))
    assert peleg_lift(empty(X1, Pow(Y2))) == parse_relation("{(∅,∅)}", px, Pow(Y2))
    for n in (1, 2, 3):
        y = Base("Y", n)
        assert peleg_lift(down(unit(y))) == converse(omega(y))


@pytest.mark.parametrize("src,inner", [(X1, Y2), (X2, Y1), (X2, Y2)])
def test_liftings_against_naive_oracle(src, inner):
    for r in every(src, inner):
        o = oracles.pairs(r)
        assert oracles.pairs(peleg_lift(r)) == oracles.peleg_lift(o, src)
        assert oracles.pairs(kleisli_lift(r)) == oracles.kleisli_lift(o, src)
        assert kleisli_lift(r) == kleisli_lift_by_syq(r)


def test_peleg_lift_factorizations():
    # R_* = dom(R)_* ; union of the Kleisli lifts of R's d-subfunctions, and R_* = Id * R
    for r in every(X2):
        parts = union_all([kleisli_lift(s) for s in d_subfunctions(r)], Pow(X2), Pow(Y2))
        dom_lift = peleg_lift(compose(domain(r), unit(X2)))
        assert peleg_lift(r) == compose(dom_lift, parts)
        assert peleg_lift(r) == peleg_compose(identity(Pow(X2)), r)


# -- Peleg composition ------------------------------------------------------------------------

def test_peleg_compose_examples():
    for r in every():
        assert peleg_compose(unit(X1), r) == r
        assert peleg_compose(r, unit(Y2)) == r
        assert peleg_compose(empty(Y2, Pow(Y2)), mr("{(a,{a})}", Y2, Y2)) == empty(Y2, Pow(Y2))
    r = mr("{(a,{a,b})}")
    s = parse_relation("{(a,{a}),(b,∅)}", Y2, Pow(Y1))
    assert peleg_compose(r, s) == parse_relation("{(a,{a})}", X1, Pow(Y1))
    with pytest.raises(TypeMismatch):
        peleg_compose(R33, unit(X2))


def test_peleg_compose_against_oracle():
    for r, s in itertools.product(every(X1, Y2), every(Y2, Y1)):
        got = peleg_compose(r, s)
        assert oracles.pairs(got) == oracles.peleg_compose(oracles.pairs(r), oracles.pairs(s), Y2)


def test_peleg_compose_large_inner_fallback():
    # inner type of size 9 means Pow(Z) cannot be materialized; only used sets are lifted
    z = Base("Z", 9)
    pz = Pow(z)
    r = Relation.from_pairs(X1, pz, [(0, 0b11), (0, 0)])
    s = Relation.from_pairs(z, Pow(Y1), [(0, 1), (1, 0), (1, 1)])
    got = peleg_compose(r, s)
    assert got == parse_relation("{(a,∅),(a,{a})}", X1, Pow(Y1))


def test_co_compose_examples():
    for s in every(X1, Y2):
        assert co_compose(unit(X1), s) == s
        assert co_compose(inner_unit_u(X1, X1), s) == inner_unit_i(X1, Y2)
        assert co_compose(empty(X1, Pow(X1)), s) == empty(X1, Pow(Y2))


def test_co_compose_against_oracle():
    for r, s in itertools.product(every(X1, Y2), every(Y2, Y1)):
        got = co_compose(r, s)
        assert oracles.pairs(got) == oracles.co_compose(oracles.pairs(r), oracles.pairs(s), Y2, Y1)


def test_right_zero_of_co_composition():
    # R @ 0 keeps exactly the points where R has an empty inner set, mapped to the full set
    zero = empty(Y2, Pow(Y1))
    for r in every():
        want = compose(domain(intersection(r, inner_unit_u(X1, Y2))), inner_unit_i(X1, Y1))
        assert co_compose(r, zero) == want


# -- inner properties ----------------------------------------------------------------------

def test_inner_property_examples():
    assert inner_property("inner_deterministic", unit(X2))
    assert not inner_property("inner_total", inner_unit_u(X1, Y2))
    assert not inner_property("inner_univalent", mr("{(a,{a,b})}"))
    with pytest.raises(ValueError):
        inner_property("inner_injective", R33)


def test_inner_property_fixpoint_forms():
    y = Y2
    for r in every(X2):
        au, lu = atoms(X2, y), inner_unit_u(X2, y)
        univ = intersection(r, union(au, lu)) == r
        total = intersection(r, complement(lu)) == r
        det = intersection(r, au) == r
        assert inner_property("inner_univalent", r) == univ
        assert inner_property("inner_total", r) == total
        assert inner_property("inner_deterministic", r) == det
        # R 1^ 1 = R on inner deterministic R
        one = unit(y)
        if det:
            assert compose(compose(r, converse(one)), one) == r


# -- Parikh composition -------------------------------------------------------------------

def test_parikh_examples():
    up_one = up(unit(X2))
    assert parikh_compose(up_one, up_one) == up_one
    lu, li = inner_unit_u(X1, Y1), inner_unit_i(Y1, Y1)
    assert parikh_compose(up(lu), up(li)) == universal(X1, Pow(Y1))
    with pytest.raises(NotUpClosed):
        parikh_compose(unit(Y2), unit(Y2))


# -- exhaustive laws at |X|=1, |Y|=2 --------------------------------------------------------

def test_quantale_laws_exhaustive():
    rels = every()
    lu, li = inner_unit_u(X1, Y2), inner_unit_i(X1, Y2)
    for r in rels:
        assert inner_union(r, lu) == r and inner_intersection(r, li) == r
        assert r.issubset(inner_union(r, r)) and r.issubset(inner_intersection(r, r))
    for r, s in itertools.product(rels, repeat=2):
        assert inner_union(r, s) == inner_union(s, r)
        assert inner_intersection(r, s) == inner_intersection(s, r)
        assert inner_complement(inner_union(r, s)) == inner_intersection(inner_complement(r),
                                                                         inner_complement(s))
        assert inner_complement(complement(r)) == complement(inner_complement(r))
        assert dual(intersection(r, s)) == union(dual(r), dual(s))
        assert dual(union(r, s)) == intersection(dual(r), dual(s))
        assert dual(inner_complement(r)) == inner_complement(dual(r))
        assert inner_intersection(r, s) == inner_complement(
            inner_union(inner_complement(r), inner_complement(s)))
    for r, s, t in itertools.product(rels, repeat=3):
        assert inner_union(inner_union(r, s), t) == inner_union(r, inner_union(s, t))
        assert inner_intersection(inner_intersection(r, s), t) == \
            inner_intersection(r, inner_intersection(s, t))
        assert inner_union(inner_intersection(r, s), t).issubset(
            inner_intersection(inner_union(r, t), inner_union(s, t)))
        assert inner_intersection(inner_union(r, s), t).issubset(
            inner_union(inner_intersection(r, t), inner_intersection(s, t)))


def test_peleg_laws_exhaustive():
    for r, s, t in itertools.product(every(X1, Y1), every(Y1, Y1), every(Y1, Y1)):
        lhs = peleg_compose(peleg_compose(r, s), t)
        rhs = peleg_compose(r, peleg_compose(s, t))
        assert lhs.issubset(rhs)
        if is_univalent(t) or closure_property("union_closed", t):
            assert lhs == rhs
    for r, r2, s in itertools.product(every(), every(), every(Y2, Y1)):
        assert peleg_compose(union(r, r2), s) == union(peleg_compose(r, s), peleg_compose(r2, s))
        assert peleg_compose(inner_union(r, r2), s).issubset(
            inner_union(peleg_compose(r, s), peleg_compose(r2, s)))
        if inner_union(s, s).issubset(s):
            assert peleg_compose(inner_union(r, r2), s) == inner_union(peleg_compose(r, s),
                                                                       peleg_compose(r2, s))


def test_peleg_associativity_on_union_closed_and_univalent_at_size_two():
    rng = np.random.default_rng(3)
    rels = every(X2, X2)
    for _ in range(3000):
        r, s, t = (rels[k] for k in rng.integers(0, 256, size=3))
        lhs = peleg_compose(peleg_compose(r, s), t)
        rhs = peleg_compose(r, peleg_compose(s, t))
        assert lhs.issubset(rhs)
        if is_univalent(t) or closure_property("union_closed", t):
            assert lhs == rhs
        if inner_property("inner_deterministic", r):
            assert peleg_compose(r, s) == compose(compose(r, converse(unit(X2))), s)
            assert rhs == lhs


def test_inner_operations_preserve_structure():
    for r, s in itertools.product(every(X2, Y1), repeat=2):
        iu, ii = inner_union(r, s), inner_intersection(r, s)
        if is_univalent(r) and is_univalent(s):
            assert is_univalent(iu) and is_univalent(ii)
        if is_total(r) and is_total(s):
            assert is_total(iu) and is_total(ii)
        if inner_property("inner_total", r) and inner_property("inner_total", s):
            assert inner_property("inner_total", iu)
        if inner_property("inner_univalent", r) and inner_property("inner_univalent", s):
            assert inner_property("inner_univalent", ii)


@given(multirelations(), multirelations(), multirelations())
def test_sampled_laws_at_size_two(r, s, t):
    assert inner_union(inner_union(r, s), t) == inner_union(r, inner_union(s, t))
    assert inner_union(r, union(s, t)) == union(inner_union(r, s), inner_union(r, t))
    assert inner_complement(inner_intersection(r, s)) == inner_union(inner_complement(r),
                                                                     inner_complement(s))


@given(multirelations(X2, Y2), multirelations(Y2, Y2), multirelations(Y2, Y2))
def test_sampled_co_composition_identities(r, s, t):
    one = unit(Y2)
    assert peleg_compose(r, s) == inner_complement(co_compose(r, inner_complement(s)))
    assert inner_complement(r) == co_compose(r, inner_complement(one))
    assert compose(r, identity(Pow(Y2))) == r
    if s.issubset(t):
        assert co_compose(r, s).issubset(co_compose(r, t))
    assert co_compose(r, inner_intersection(s, t)).issubset(
        inner_intersection(co_compose(r, s), co_compose(r, t)))
