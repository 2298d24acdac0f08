"""Inner closures, the Hoare/Smyth/Egli-Milner preorders, quotients and decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .errors import NotUnivalent, ResultTooLarge, SpaceTooLarge, TypeMismatch
from .finsets import iter_bits, subset_table, superset_table
from .mrcore import (
    big_inner_union, inner_complement, inner_intersection, inner_property, inner_type,
    inner_union, inner_unit_i, inner_unit_u, omega, powtype, union_of_row,
)
from .relcore import (
    DEFAULT_SUBFUNCTION_CAP, Relation, all_relations, compose, converse, d_subfunctions,
    domain, intersection, is_total, is_univalent, union_all, universal,
)

DEFAULT_SWEEP_CAP = 1 << 16


class PreorderKind(str, Enum):
    HOARE = "hoare"
    SMYTH = "smyth"
    EGLI_MILNER = "egli_milner"


_CLOSURE_OF_KIND = {PreorderKind.HOARE: "down", PreorderKind.SMYTH: "up",
                    PreorderKind.EGLI_MILNER: "convex"}


# -- closures ------------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def up_row(f: int, n: int) -> int:
    table = superset_table(n)
    out = 0
    for a in iter_bits(f):
        out |= table[a]
    return out


@lru_cache(maxsize=1 << 16)
def down_row(f: int, n: int) -> int:
    table = subset_table(n)
    out = 0
    for a in iter_bits(f):
        out |= table[a]
    return out


def up(r: Relation) -> Relation:
    n = inner_type(r).size
    return Relation._make(r.src, r.tgt, tuple(up_row(f, n) for f in r.rows))


def down(r: Relation) -> Relation:
    n = inner_type(r).size
    return Relation._make(r.src, r.tgt, tuple(down_row(f, n) for f in r.rows))


def convex(r: Relation) -> Relation:
    n = inner_type(r).size
    return Relation._make(r.src, r.tgt, tuple(up_row(f, n) & down_row(f, n) for f in r.rows))


_CLOSURES = {"up": up, "down": down, "convex": convex}


def _closure_forms(kind, r):
    y = inner_type(r)
    big_u = universal(r.src, r.tgt)
    om = omega(y)
    if kind == "up":
        return inner_union(r, big_u), compose(r, om)
    if kind == "down":
        return inner_intersection(r, big_u), compose(r, converse(om))
    u_inner, u_omega = _closure_forms("up", r)
    d_inner, d_omega = _closure_forms("down", r)
    return intersection(u_inner, d_inner), intersection(u_omega, d_omega)


def closure(kind: str, r: Relation, cross_check: bool = False) -> Relation:
    """Up-, down- or convex-closure.

    With ``cross_check`` the inner-operation form (R icup U, R icap U) and the
    subset-relation form (R;Om, R;Om^) are computed as well and compared.
    """
    try:
        result = _CLOSURES[kind](r)
    except KeyError:
        raise ValueError(f"unknown closure {kind!r}") from None
    if cross_check:
        by_inner, by_omega = _closure_forms(kind, r)
        if not result == by_inner == by_omega:
            raise AssertionError(f"{kind}-closure forms disagree on {r}")
    return result


def closed_check(kind: str, r: Relation) -> bool:
    return closure(kind, r) == r


# -- preorders -------------------------------------------------------------------------

def _kind(kind) -> PreorderKind:
    return kind if isinstance(kind, PreorderKind) else PreorderKind(kind)


def _same_typing(r, s):
    inner_type(r)
    if r.src != s.src or r.tgt != s.tgt:
        raise TypeMismatch(f"{r.src} <-> {r.tgt} versus {s.src} <-> {s.tgt}")


def preorder_leq(kind, r: Relation, s: Relation) -> bool:
    kind = _kind(kind)
    _same_typing(r, s)
    if kind is PreorderKind.HOARE:
        return r.issubset(down(s))
    if kind is PreorderKind.SMYTH:
        return s.issubset(up(r))
    return r.issubset(down(s)) and s.issubset(up(r))


def equiv(kind, r: Relation, s: Relation) -> bool:
    kind = _kind(kind)
    _same_typing(r, s)
    close = _CLOSURES[_CLOSURE_OF_KIND[kind]]
    return close(r) == close(s)


def multirelations(src, inner, cap: int = DEFAULT_SWEEP_CAP):
    ptype = powtype(inner)
    nbits = src.size * ptype.size
    if nbits > 62 or (1 << nbits) > cap:
        raise SpaceTooLarge(f"M({src},{inner}) has 2^{nbits} elements, cap is {cap}",
                            space=1 << nbits)
    return list(all_relations(src, ptype))


# -- quotients ---------------------------------------------------------------------------

@dataclass
class QuotientStructure:
    kind: PreorderKind
    classes: list  # (representative, members), sorted by representative code
    index: dict = field(repr=False, default_factory=dict)

    def class_of(self, r: Relation) -> int:
        return self.index[r]

    def rep(self, i: int) -> Relation:
        return self.classes[i][0]

    def close(self, r: Relation) -> Relation:
        return closure(_CLOSURE_OF_KIND[self.kind], r)

    def leq(self, i: int, j: int) -> bool:
        a, b = self.rep(i), self.rep(j)
        if self.kind is PreorderKind.SMYTH:
            return b.issubset(a)
        if self.kind is PreorderKind.EGLI_MILNER:
            # not inclusion of convex closures; both component orders must hold
            return preorder_leq(self.kind, a, b)
        return a.issubset(b)

    def iu(self, i: int, j: int) -> int:
        a, b = self.rep(i), self.rep(j)
        if self.kind is PreorderKind.SMYTH:
            return self.index[intersection(a, b)]
        return self.index[inner_union(a, b)]

    def ii(self, i: int, j: int) -> int:
        a, b = self.rep(i), self.rep(j)
        if self.kind is PreorderKind.HOARE:
            return self.index[intersection(a, b)]
        return self.index[inner_intersection(a, b)]

    def unit_iu(self) -> int:
        r = self.rep(0)
        if self.kind is PreorderKind.SMYTH:
            return self.index[universal(r.src, r.tgt)]
        return self.index[inner_unit_u(r.src, inner_type(r))]

    def unit_ii(self) -> int:
        r = self.rep(0)
        if self.kind is PreorderKind.HOARE:
            return self.index[universal(r.src, r.tgt)]
        return self.index[inner_unit_i(r.src, inner_type(r))]

    def verify(self) -> list:
        """Checks that make the isomorphism with the closed multirelations concrete."""
        members = [m for _, ms in self.classes for m in ms]
        closed = [m for m in members if self.close(m) == m]
        reps = [rep for rep, _ in self.classes]
        checks = [
            ("partition", len(members) == len(set(members)) == len(self.index)),
            ("members share the representative's closure",
             all(self.close(m) == rep for rep, ms in self.classes for m in ms)),
            ("class count equals closed count", len(self.classes) == len(closed)),
            ("[R] -> closure(R) is a bijection onto closed multirelations",
             sorted(reps, key=lambda r: r.code) == sorted(closed, key=lambda r: r.code)),
        ]
        well_iu = well_ii = hom_iu = hom_ii = order = True
        for (ra, ma), (rb, mb) in itertools.product(self.classes, repeat=2):
            ci, cj = self.index[ra], self.index[rb]
            target_iu, target_ii = self.iu(ci, cj), self.ii(ci, cj)
            for a, b in itertools.product(ma, mb):
                if self.kind is not PreorderKind.SMYTH:
                    well_iu &= self.index[inner_union(a, b)] == target_iu
                if self.kind is not PreorderKind.HOARE:
                    well_ii &= self.index[inner_intersection(a, b)] == target_ii
            if self.kind is PreorderKind.HOARE:
                hom_iu &= self.close(inner_union(ra, rb)) == inner_union(ra, rb)
                hom_ii &= self.close(inner_intersection(ra, rb)) == intersection(ra, rb)
            elif self.kind is PreorderKind.SMYTH:
                hom_ii &= self.close(inner_intersection(ra, rb)) == inner_intersection(ra, rb)
                hom_iu &= self.close(inner_union(ra, rb)) == intersection(ra, rb)
            leq = preorder_leq(self.kind, ma[0], mb[0])
            order &= leq == self.leq(ci, cj)
        checks += [
            ("class inner union is representative-independent", well_iu),
            ("class inner intersection is representative-independent", well_ii),
            ("order [R] <= [S] agrees with the preorder", order),
        ]
        if self.kind is not PreorderKind.EGLI_MILNER:
            checks += [("closure preserves inner union", hom_iu),
                       ("closure preserves inner intersection", hom_ii)]
        u = self.unit_iu()
        checks.append(("inner-union unit acts as unit",
                       all(self.iu(u, i) == i for i in range(len(self.classes)))))
        v = self.unit_ii()
        checks.append(("inner-intersection unit acts as unit",
                       all(self.ii(v, i) == i for i in range(len(self.classes)))))
        return [{"name": name, "pass": bool(ok)} for name, ok in checks]

    def to_json(self, checks=None) -> dict:
        doc = {"kind": self.kind.value,
               "classes": [{"rep": rep.to_json(), "size": len(ms)} for rep, ms in self.classes]}
        if checks is not None:
            doc["checks"] = checks
        return doc


def quotient(kind, src, inner, cap: int = DEFAULT_SWEEP_CAP) -> QuotientStructure:
    kind = _kind(kind)
    close = _CLOSURES[_CLOSURE_OF_KIND[kind]]
    groups = {}
    for r in multirelations(src, inner, cap):
        groups.setdefault(close(r), []).append(r)
    classes = sorted(groups.items(), key=lambda kv: kv[0].code)
    index = {}
    for i, (_, ms) in enumerate(classes):
        for m in ms:
            index[m] = i
    return QuotientStructure(kind, [(rep, ms) for rep, ms in classes], index)


def quotient_duality(src, inner, cap: int = DEFAULT_SWEEP_CAP) -> bool:
    """icpl maps every Hoare class onto a Smyth class and every EM class onto an EM class."""
    h = quotient(PreorderKind.HOARE, src, inner, cap)
    s = quotient(PreorderKind.SMYTH, src, inner, cap)
    em = quotient(PreorderKind.EGLI_MILNER, src, inner, cap)
    for q_from, q_to in ((h, s), (s, h), (em, em)):
        for _, ms in q_from.classes:
            image = {inner_complement(m) for m in ms}
            target = q_to.class_of(next(iter(image)))
            if image != set(q_to.classes[target][1]):
                return False
    return True


# -- special classes ----------------------------------------------------------------------

def is_outer_deterministic(r):
    return is_total(r) and is_univalent(r)


_SUBCLASSES = {
    "inner_det": lambda r: inner_property("inner_deterministic", r),
    "inner_univ": lambda r: inner_property("inner_univalent", r),
    "outer_univ": is_univalent,
    "outer_det": is_outer_deterministic,
}


def _first_pair(members, pred):
    for a, b in itertools.product(members, repeat=2):
        if pred(a, b):
            return [a.text(), b.text()]
    return None


def antisymmetry_witness(kind, members):
    """Smallest pair R != S with R <= S <= R in the given preorder, or None."""
    kind = _kind(kind)
    return _first_pair(members, lambda a, b: a != b and preorder_leq(kind, a, b)
                       and preorder_leq(kind, b, a))


def _check(name, witness, expected=True):
    holds = witness is None
    return {"name": name, "pass": holds == expected, "expected": expected, "witness": witness}


def class_special_order(kind: str, src, inner, cap: int = DEFAULT_SWEEP_CAP) -> dict:
    try:
        member_of = _SUBCLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown subclass {kind!r}") from None
    members = [r for r in multirelations(src, inner, cap) if member_of(r)]
    H, S, EM = PreorderKind.HOARE, PreorderKind.SMYTH, PreorderKind.EGLI_MILNER
    checks = []
    if kind == "inner_det":
        checks.append(_check("hoare coincides with inclusion", _first_pair(
            members, lambda a, b: preorder_leq(H, a, b) != a.issubset(b))))
        checks.append(_check("smyth coincides with reverse inclusion", _first_pair(
            members, lambda a, b: preorder_leq(S, a, b) != b.issubset(a))))
        checks.append(_check("egli-milner is discrete", _first_pair(
            members, lambda a, b: preorder_leq(EM, a, b) != (a == b))))
    elif kind == "inner_univ":
        checks.append(_check("egli-milner antisymmetric", antisymmetry_witness(EM, members)))
        checks.append(_check("hoare antisymmetric (expected to fail)",
                             antisymmetry_witness(H, members), expected=False))
        checks.append(_check("smyth antisymmetric (expected to fail)",
                             antisymmetry_witness(S, members), expected=False))
    elif kind == "outer_univ":
        for k in (H, S, EM):
            checks.append(_check(f"{k.value} antisymmetric", antisymmetry_witness(k, members)))
    else:
        checks.append(_check("hoare, smyth and egli-milner coincide", _first_pair(
            members, lambda a, b: not (preorder_leq(H, a, b) == preorder_leq(S, a, b)
                                       == preorder_leq(EM, a, b)))))
        for k in (H, S, EM):
            checks.append(_check(f"{k.value} antisymmetric", antisymmetry_witness(k, members)))
    return {"kind": kind, "typing": f"{src} <-> P({inner})", "members": len(members),
            "pass": all(c["pass"] for c in checks), "checks": checks}


def det_lattice_check(src, inner, cap: int = DEFAULT_SWEEP_CAP) -> dict:
    everything = multirelations(src, inner, cap)
    det = [r for r in everything if is_outer_deterministic(r)]
    univ = [r for r in everything if is_univalent(r)]
    H, S = PreorderKind.HOARE, PreorderKind.SMYTH
    checks = [
        _check("closed under inner union and intersection", _first_pair(
            det, lambda a, b: not (is_outer_deterministic(inner_union(a, b))
                                   and is_outer_deterministic(inner_intersection(a, b))))),
        _check("absorption R icup (R icap S) = R", _first_pair(
            det, lambda a, b: inner_union(a, inner_intersection(a, b)) != a)),
        _check("absorption R icap (R icup S) = R", _first_pair(
            det, lambda a, b: inner_intersection(a, inner_union(a, b)) != a)),
        _check("inner union is the least upper bound", _lub_witness(det, inner_union, H)),
        _check("inner intersection is the greatest lower bound",
               _lub_witness(det, inner_intersection, H, lower=True)),
        _check("smyth is natural for inner union on univalent pairs", _first_pair(
            univ, lambda a, b: preorder_leq(S, a, b) != (inner_union(a, b) == b))),
        _check("hoare is natural for inner intersection on univalent pairs", _first_pair(
            univ, lambda a, b: preorder_leq(H, a, b) != (inner_intersection(a, b) == a))),
    ]
    return {"kind": "det_lattice", "typing": f"{src} <-> P({inner})", "members": len(det),
            "pass": all(c["pass"] for c in checks), "checks": checks}


def _lub_witness(members, op, kind, lower=False):
    for a, b in itertools.product(members, repeat=2):
        j = op(a, b)
        if lower:
            bound = preorder_leq(kind, j, a) and preorder_leq(kind, j, b)
            best = all(preorder_leq(kind, t, j) for t in members
                       if preorder_leq(kind, t, a) and preorder_leq(kind, t, b))
        else:
            bound = preorder_leq(kind, a, j) and preorder_leq(kind, b, j)
            best = all(preorder_leq(kind, j, t) for t in members
                       if preorder_leq(kind, a, t) and preorder_leq(kind, b, t))
        if not (bound and best):
            return [a.text(), b.text()]
    return None


# -- decompositions ---------------------------------------------------------------------------

def down_d_subfunctions(r: Relation, variant: bool = False,
                        cap: int = DEFAULT_SUBFUNCTION_CAP) -> list:
    """All S with S univalent, inner deterministic, dom(S) = dom(R - 1u) and S <=H R.

    With ``variant`` the alternative family is produced: S univalent and inner
    univalent with dom(S) = dom(R) and S <=H R, so (a, {}) pairs are allowed.
    """
    inner_type(r)
    choices = []
    count = 1
    for row in r.rows:
        reach = union_of_row(row)
        singles = [1 << (1 << b) for b in iter_bits(reach)]
        if variant:
            opts = [1] + singles if row else [0]
        else:
            opts = singles if row & ~1 else [0]
        choices.append(opts)
        count *= len(opts)
        if count > cap:
            raise ResultTooLarge(f"more than {cap} down-d-subfunctions")
    return [Relation._make(r.src, r.tgt, tuple(rows)) for rows in itertools.product(*choices)]


@dataclass
class Decomposition:
    relation: Relation
    family: list
    reconstructed: Relation

    @property
    def ok(self) -> bool:
        return self.reconstructed == self.relation


def decompose_univalent(r: Relation, variant: bool = False) -> Decomposition:
    if not is_univalent(r):
        raise NotUnivalent(f"{r} is not univalent")
    family = down_d_subfunctions(r, variant)
    return Decomposition(r, family, compose(domain(r), big_inner_union(family)))


def decompose_full(r: Relation, variant: bool = False,
                   cap: int = DEFAULT_SUBFUNCTION_CAP) -> Decomposition:
    """R = dom(R) ; union over S <=d R of the big inner union of S's down-d family."""
    nested = []
    parts = []
    for s in d_subfunctions(r, cap):
        fam = down_d_subfunctions(s, variant, cap)
        nested.append((s, fam))
        parts.append(big_inner_union(fam))
    rebuilt = compose(domain(r), union_all(parts, r.src, r.tgt))
    return Decomposition(r, nested, rebuilt)

