"""Multirelations: relations whose target is a powerset type.

Row ``i`` of a multirelation ``X <-> P(Y)`` is a mask over the elements of
``P(Y)``; since those elements are themselves ``Y``-masks, a row is a set of
``Y``-masks.  Inner operations act on those inner masks.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CardinalityLimit, EmptyFamily, NotUpClosed, TypeMismatch
from .finsets import DEFAULT_MAX_OBJECT, Pow, full_mask, iter_bits, superset_table
from .relcore import Relation, complement, compose, converse, domain, syq, union


def powtype(t, max_object=DEFAULT_MAX_OBJECT) -> Pow:
    if t.size > 64 or (1 << t.size) > max_object:
        raise CardinalityLimit(f"P({t}) would have 2^{t.size} > {max_object} elements")
    return Pow(t)


def inner_type(r: Relation):
    if not isinstance(r.tgt, Pow):
        raise TypeMismatch(f"{r.src} <-> {r.tgt} is not a multirelation")
    return r.tgt.inner


def is_multirelation(r: Relation) -> bool:
    return isinstance(r.tgt, Pow)


def _check_same(r: Relation, s: Relation):
    inner_type(r)
    if r.src != s.src or r.tgt != s.tgt:
        raise TypeMismatch(f"{r.src} <-> {r.tgt} versus {s.src} <-> {s.tgt}")


# -- row-level kernels -------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def iu_row(f: int, g: int) -> int:
    """Inner union of two families of inner masks."""
    out = 0
    for a in iter_bits(f):
        for b in iter_bits(g):
            out |= 1 << (a | b)
    return out


@lru_cache(maxsize=1 << 18)
def ii_row(f: int, g: int) -> int:
    out = 0
    for a in iter_bits(f):
        for b in iter_bits(g):
            out |= 1 << (a & b)
    return out


@lru_cache(maxsize=1 << 16)
def icpl_row(f: int, n: int) -> int:
    full = full_mask(n)
    out = 0
    for a in iter_bits(f):
        out |= 1 << (full ^ a)
    return out


def union_of_row(f: int) -> int:
    """The union of all inner masks in a row."""
    out = 0
    for a in iter_bits(f):
        out |= a
    return out


# -- special constants ---------------------------------------------------------------

def membership(y) -> Relation:
    py = powtype(y)
    return Relation._make(y, py, tuple(
        sum(1 << a for a in range(py.size) if a >> b & 1) for b in range(y.size)))


def omega(y) -> Relation:
    py = powtype(y)
    return Relation._make(py, py, superset_table(y.size))


def comp_rel(y) -> Relation:
    py = powtype(y)
    full = full_mask(y.size)
    return Relation._make(py, py, tuple(1 << (full ^ a) for a in range(py.size)))


def unit(x) -> Relation:
    return Relation._make(x, powtype(x), tuple(1 << (1 << a) for a in range(x.size)))


def inner_unit_u(x, y) -> Relation:
    return Relation._make(x, powtype(y), (1,) * x.size)


def inner_unit_i(x, y) -> Relation:
    return Relation._make(x, powtype(y), (1 << full_mask(y.size),) * x.size)


def atoms(x, y) -> Relation:
    row = sum(1 << (1 << b) for b in range(y.size))
    return Relation._make(x, powtype(y), (row,) * x.size)


def co_atoms(x, y) -> Relation:
    full = full_mask(y.size)
    row = sum(1 << (full ^ (1 << b)) for b in range(y.size))
    return Relation._make(x, powtype(y), (row,) * x.size)


def special_constant(kind: str, X=None, Y=None) -> Relation:
    """Named multirelational constants; ``X`` is the source, ``Y`` the inner type."""
    if kind == "membership":
        return membership(Y)
    if kind == "omega":
        return omega(Y)
    if kind == "comp_rel":
        return comp_rel(Y)
    if kind == "unit":
        return unit(X)
    table = {"inner_unit_u": inner_unit_u, "inner_unit_i": inner_unit_i,
             "atoms": atoms, "co_atoms": co_atoms}
    try:
        return table[kind](X, Y)
    except KeyError:
        raise ValueError(f"unknown special constant {kind!r}") from None


# -- inner operations -------------------------------------------------------------------

def inner_union(r: Relation, s: Relation) -> Relation:
    _check_same(r, s)
    return Relation._make(r.src, r.tgt, tuple(iu_row(a, b) for a, b in zip(r.rows, s.rows)))


def inner_intersection(r: Relation, s: Relation) -> Relation:
    _check_same(r, s)
    return Relation._make(r.src, r.tgt, tuple(ii_row(a, b) for a, b in zip(r.rows, s.rows)))


def inner_complement(r: Relation) -> Relation:
    n = inner_type(r).size
    return Relation._make(r.src, r.tgt, tuple(icpl_row(a, n) for a in r.rows))


def dual(r: Relation) -> Relation:
    return complement(inner_complement(r))


def big_inner_union(family) -> Relation:
    family = list(family)
    if not family:
        raise EmptyFamily("big inner union of an empty family")
    out = family[0]
    inner_type(out)
    for r in family[1:]:
        out = inner_union(out, r)
    return out


def big_inner_intersection(family) -> Relation:
    family = list(family)
    if not family:
        raise EmptyFamily("big inner intersection of an empty family")
    return inner_complement(big_inner_union([inner_complement(r) for r in family]))


def is_union_closed(r: Relation) -> bool:
    return inner_union(r, r).issubset(r)


def is_intersection_closed(r: Relation) -> bool:
    return inner_intersection(r, r).issubset(r)


def union_closed_by_syq(r: Relation) -> bool:
    """dom(S);syq(eps;S^, eps) <= R for every S <= R (enumerates all sub-relations)."""
    eps = membership(inner_type(r))
    pairs = list(r.pairs())
    for choice in range(1 << len(pairs)):
        s = Relation.from_pairs(r.src, r.tgt, [p for k, p in enumerate(pairs) if choice >> k & 1])
        if not compose(domain(s), syq(compose(eps, converse(s)), eps)).issubset(r):
            return False
    return True


def closure_property(kind: str, r: Relation, cross_check: bool = False) -> bool:
    if kind == "union_closed":
        result = is_union_closed(r)
        if cross_check and result != union_closed_by_syq(r):
            raise AssertionError(f"union-closure characterizations disagree on {r}")
        return result
    if kind == "intersection_closed":
        result = is_intersection_closed(r)
        if cross_check and result != union_closed_by_syq(inner_complement(r)):
            raise AssertionError(f"intersection-closure characterizations disagree on {r}")
        return result
    raise ValueError(f"unknown closure property {kind!r}")


# -- liftings and compositions ----------------------------------------------------------

@lru_cache(maxsize=4096)
def kleisli_lift(r: Relation) -> Relation:
    """A |-> the union of all sets R relates elements of A to."""
    inner_type(r)
    px = powtype(r.src)
    unions = [union_of_row(row) for row in r.rows]
    rows = [1]
    for a_mask in range(1, px.size):
        low = a_mask & -a_mask
        prev = rows[a_mask ^ low].bit_length() - 1
        rows.append(1 << (prev | unions[low.bit_length() - 1]))
    return Relation._make(px, r.tgt, tuple(rows))


def kleisli_lift_by_syq(r: Relation) -> Relation:
    """syq(eps;R^;eps, eps), the relation-algebraic form of the Kleisli lifting."""
    eps_y = membership(inner_type(r))
    eps_x = membership(r.src)
    return syq(compose(compose(eps_y, converse(r)), eps_x), eps_y)


@lru_cache(maxsize=4096)
def peleg_lift(r: Relation) -> Relation:
    """(A, B) such that B unites one chosen image set per element of A."""
    inner_type(r)
    px = powtype(r.src)
    rows = [1]
    for a_mask in range(1, px.size):
        low = a_mask & -a_mask
        rows.append(iu_row(rows[a_mask ^ low], r.rows[low.bit_length() - 1]))
    return Relation._make(px, r.tgt, tuple(rows))


def peleg_compose(r: Relation, s: Relation) -> Relation:
    if inner_type(r) != s.src:
        raise TypeMismatch(f"Peleg composition needs inner type {inner_type(r)} = source {s.src}")
    inner_type(s)
    if s.src.size <= 8:
        return compose(r, peleg_lift(s))
    # the lifted relation would be too large to materialize; lift only the sets R uses
    lifted = {0: 1}
    srows = s.rows

    def lift_row(a_mask):
        if a_mask not in lifted:
            low = a_mask & -a_mask
            lifted[a_mask] = iu_row(lift_row(a_mask ^ low), srows[low.bit_length() - 1])
        return lifted[a_mask]

    out = []
    for row in r.rows:
        acc = 0
        for a_mask in iter_bits(row):
            acc |= lift_row(a_mask)
        out.append(acc)
    return Relation._make(r.src, s.tgt, tuple(out))


def co_compose(r: Relation, s: Relation) -> Relation:
    return inner_complement(peleg_compose(r, inner_complement(s)))


def inner_property(kind: str, r: Relation) -> bool:
    y = inner_type(r)
    if kind == "inner_univalent":
        return r.issubset(union(atoms(r.src, y), inner_unit_u(r.src, y)))
    if kind == "inner_total":
        return r.issubset(complement(inner_unit_u(r.src, y)))
    if kind == "inner_deterministic":
        return inner_property("inner_univalent", r) and inner_property("inner_total", r)
    raise ValueError(f"unknown inner property {kind!r}")


def parikh_compose(r: Relation, s: Relation) -> Relation:
    from .closures import closed_check, up

    for arg in (r, s):
        if not closed_check("up", arg):
            raise NotUpClosed(f"{arg} is not up-closed")
    return up(peleg_compose(r, s))

