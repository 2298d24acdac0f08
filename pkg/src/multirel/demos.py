"""Scripted reproductions of the worked examples on small concrete universes.

Each demo builds its relations, evaluates the stated (in)equalities and records
every claim with its outcome.  ``run_demo(name).passed`` is true iff all claims
come out as stated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import closures, mrcore, relcore
from .errors import UnknownDemo
from .finsets import Base
from .notation import parse_relation
from .relcore import Relation


@dataclass
class DemoResult:
    name: str
    summary: str
    relations: list = field(default_factory=list)  # (label, Relation)
    claims: list = field(default_factory=list)  # (statement, bool)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.claims)

    def show(self, label, r: Relation):
        self.relations.append((label, r))
        return r

    def claim(self, statement, ok):
        self.claims.append((statement, bool(ok)))

    def to_text(self) -> str:
        lines = [f"demo {self.name}: {self.summary}"]
        for label, r in self.relations:
            lines.append(f"  {label} = {r.text()}")
        for statement, ok in self.claims:
            lines.append(f"  [{'pass' if ok else 'FAIL'}] {statement}")
        lines.append(f"  result: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "demo": self.name,
            "summary": self.summary,
            "relations": {label: r.to_json() for label, r in self.relations},
            "claims": [{"claim": s, "pass": ok} for s, ok in self.claims],
            "pass": self.passed,
        }


def _powrel(text, src, inner):
    return parse_relation(text, src, mrcore.powtype(inner))


def example_3_3() -> DemoResult:
    d = DemoResult("example-3-3", "inner union and inner intersection are not idempotent")
    X, Y = Base("X", 1), Base("Y", 2)
    R = d.show("R", _powrel("{(a,{a}),(a,{b})}", X, Y))
    iu = d.show("R icup R", mrcore.inner_union(R, R))
    ii = d.show("R icap R", mrcore.inner_intersection(R, R))
    d.claim("R icup R = R cup {(a,{a,b})}", iu == relcore.union(R, _powrel("{(a,{a,b})}", X, Y)))
    d.claim("R icap R = R cup {(a,∅)}", ii == relcore.union(R, _powrel("{(a,∅)}", X, Y)))
    d.claim("R < R icup R and R < R icap R", R.issubset(iu) and R != iu and R.issubset(ii) and R != ii)
    return d


def example_4_4() -> DemoResult:
    d = DemoResult("example-4-4", "inner union of down-closed and inner intersection of "
                                  "up-closed multirelations need not be idempotent")
    X, Y = Base("X", 1), Base("Y", 2)
    R = d.show("R", _powrel("{(a,{a}),(a,{b})}", X, Y))
    dR = d.show("down(R)", closures.down(R))
    dd = d.show("down(R) icup down(R)", mrcore.inner_union(dR, dR))
    d.claim("down(R) = {(a,∅),(a,{a}),(a,{b})}", dR == _powrel("{(a,∅),(a,{a}),(a,{b})}", X, Y))
    d.claim("down(R) icup down(R) = down(R) cup {(a,{a,b})}",
            dd == relcore.union(dR, _powrel("{(a,{a,b})}", X, Y)))
    d.claim("down(R) < down(R) icup down(R)", dR.issubset(dd) and dR != dd)
    dc = mrcore.inner_intersection(dR, dR)
    d.claim("down(R) icap down(R) = down(R)", dc == dR)

    # the dual on the two-element set {a,b}
    A = Base("A", 2)
    Q = d.show("Q", _powrel("{(a,{a}),(a,{b})}", A, A))
    uQ = d.show("up(Q)", closures.up(Q))
    uu = d.show("up(Q) icap up(Q)", mrcore.inner_intersection(uQ, uQ))
    d.claim("up(Q) = Q icup Q", uQ == mrcore.inner_union(Q, Q))
    d.claim("up(Q) icap up(Q) = (Q icup Q) cup {(a,∅)}",
            uu == relcore.union(mrcore.inner_union(Q, Q), _powrel("{(a,∅)}", A, A)))
    d.claim("up(Q) < up(Q) icap up(Q)", uQ.issubset(uu) and uQ != uu)
    d.claim("up(Q) icup up(Q) = up(Q)", mrcore.inner_union(uQ, uQ) == uQ)
    S = d.show("S", _powrel("{(a,{a,b}),(b,∅)}", A, A))
    uS, dS, dQ = closures.up(S), closures.down(S), closures.down(Q)
    d.claim("up(Q) cap up(S) <= up(Q) icap up(S)",
            relcore.intersection(uQ, uS).issubset(mrcore.inner_intersection(uQ, uS)))
    d.claim("down(Q) cap down(S) <= down(Q) icup down(S)",
            relcore.intersection(dQ, dS).issubset(mrcore.inner_union(dQ, dS)))
    return d


def up_comp_fail() -> DemoResult:
    d = DemoResult("up-comp-fail", "Peleg composition of up-closed multirelations need not be up-closed")
    X, Y = Base("X", 1), Base("Y", 2)
    lu_xy = d.show("lu[X,Y]", mrcore.inner_unit_u(X, Y))
    li_yy = d.show("li[Y,Y]", mrcore.inner_unit_i(Y, Y))
    up_lu = closures.up(lu_xy)
    up_li = closures.up(li_yy)
    lhs = d.show("up(lu) * up(li)", mrcore.peleg_compose(up_lu, up_li))
    rhs = d.show("up(lu * li)", closures.up(mrcore.peleg_compose(lu_xy, li_yy)))
    U = relcore.universal(X, lu_xy.tgt)
    lu_xz = mrcore.inner_unit_u(X, Y)
    li_xz = mrcore.inner_unit_i(X, Y)
    d.claim("up(lu) = U", up_lu == U)
    d.claim("up(li) = li", up_li == li_yy)
    d.claim("U * li = lu cup li", mrcore.peleg_compose(U, li_yy) == relcore.union(lu_xz, li_xz))
    d.claim("lu cup li < U", relcore.union(lu_xz, li_xz).issubset(U) and relcore.union(lu_xz, li_xz) != U)
    d.claim("up(lu * li) = U", rhs == U)
    d.claim("up(lu) * up(li) is not up-closed", not closures.closed_check("up", lhs))
    d.claim("lu and li are deterministic",
            relcore.rel_property("deterministic", lu_xy) and relcore.rel_property("deterministic", li_yy))
    return d


def example_4_9() -> DemoResult:
    d = DemoResult("example-4-9", "up(R * S) = up(R) * up(S) for inner deterministic R "
                                  "does not carry over to down-closure")
    X, Y = Base("X", 1), Base("Y", 2)
    one = d.show("one", mrcore.unit(X))
    empty = d.show("0", relcore.empty(X, mrcore.powtype(Y)))
    lu = mrcore.inner_unit_u(X, Y)
    lhs = d.show("down(one * 0)", closures.down(mrcore.peleg_compose(one, empty)))
    rhs = d.show("down(one) * down(0)", mrcore.peleg_compose(closures.down(one), closures.down(empty)))
    d.claim("down(one * 0) = down(0) = 0", lhs == empty and closures.down(empty) == empty)
    d.claim("lu * 0 = lu", mrcore.peleg_compose(mrcore.inner_unit_u(X, X), empty) == lu)
    d.claim("down(one) = one cup lu",
            closures.down(one) == relcore.union(one, mrcore.inner_unit_u(X, X)))
    d.claim("down(one) * down(0) = lu", rhs == lu)
    d.claim("down(one * 0) < down(one) * down(0)", lhs.issubset(rhs) and lhs != rhs)
    d.claim("one and 0 are inner deterministic",
            mrcore.inner_property("inner_deterministic", one)
            and mrcore.inner_property("inner_deterministic", empty))
    return d


def example_5_11() -> DemoResult:
    d = DemoResult("example-5-11", "the Hoare and Smyth preorders are not antisymmetric")
    X = Base("X", 3)
    R = d.show("R", _powrel("{(a,{a}),(a,{a,b,c})}", X, X))
    S = d.show("S", relcore.union(R, _powrel("{(a,{a,b})}", X, X)))
    d.claim("R =H S", closures.equiv("hoare", R, S))
    d.claim("R =S S", closures.equiv("smyth", R, S))
    d.claim("R != S", R != S)
    d.claim("R and S are inner total",
            mrcore.inner_property("inner_total", R) and mrcore.inner_property("inner_total", S))
    U = relcore.universal(X, X)
    UR = d.show("U;R", relcore.compose(U, R))
    US = d.show("U;S", relcore.compose(U, S))
    d.claim("U;R =H U;S and U;R =S U;S", closures.equiv("hoare", UR, US) and closures.equiv("smyth", UR, US))
    d.claim("U;R != U;S", UR != US)
    d.claim("U;R and U;S are total", relcore.is_total(UR) and relcore.is_total(US))
    d.claim("R =EM S, so the Egli-Milner preorder is not antisymmetric on inner total either",
            closures.equiv("egli_milner", R, S))

    A = Base("A", 1)
    one = d.show("one[A]", mrcore.unit(A))
    UA = d.show("U[A,P(A)]", relcore.universal(A, one.tgt))
    not_one = d.show("~one[A]", relcore.complement(one))
    d.claim("all multirelations on a one-element set are inner univalent",
            all(mrcore.inner_property("inner_univalent", r) for r in relcore.all_relations(A, one.tgt)))
    d.claim("one =H U", closures.equiv("hoare", one, UA))
    d.claim("~one =S U", closures.equiv("smyth", not_one, UA))
    d.claim("one != U != ~one", one != UA and UA != not_one)
    return d


def natural_order_fail() -> DemoResult:
    d = DemoResult("natural-order-fail", "the preorders are not the natural orders of icap and icup")
    X = Base("X", 1)
    R = d.show("R", _powrel("{(a,∅)}", X, X))
    S = d.show("S", _powrel("{(a,{a})}", X, X))
    T = d.show("T", relcore.union(R, S))
    d.claim("S <=H T", closures.preorder_leq("hoare", S, T))
    d.claim("T <=S R", closures.preorder_leq("smyth", T, R))
    d.claim("S icap T = T != S", mrcore.inner_intersection(S, T) == T and T != S)
    d.claim("T icup R = T != R", mrcore.inner_union(T, R) == T and T != R)
    d.claim("R = R icap S implies R <=H S",
            mrcore.inner_intersection(R, S) != R or closures.preorder_leq("hoare", R, S))
    return d


def preorder_incomparable() -> DemoResult:
    d = DemoResult("preorder-incomparable", "the Hoare and Smyth preorders are incomparable")
    X = Base("X", 1)
    one = d.show("one", mrcore.unit(X))
    empty = d.show("0", relcore.empty(X, one.tgt))
    lu = mrcore.inner_unit_u(X, X)
    lu_one = d.show("lu cup one", relcore.union(lu, one))
    leq = closures.preorder_leq
    d.claim("0 <=H one", leq("hoare", empty, one))
    d.claim("one <=S 0", leq("smyth", one, empty))
    d.claim("not 0 <=S one", not leq("smyth", empty, one))
    d.claim("not one <=H 0", not leq("hoare", one, empty))
    d.claim("one <=H lu cup one", leq("hoare", one, lu_one))
    d.claim("lu cup one <=S lu", leq("smyth", lu_one, lu))
    d.claim("not one <=S lu cup one", not leq("smyth", one, lu_one))
    d.claim("not lu cup one <=H lu", not leq("hoare", lu_one, lu))
    d.claim("one and lu cup one are total", relcore.is_total(one) and relcore.is_total(lu_one))
    return d


def hoare_not_subset() -> DemoResult:
    d = DemoResult("hoare-not-subset", "on deterministic multirelations the Hoare order differs from inclusion")
    X = Base("X", 1)
    R = d.show("R", _powrel("{(a,∅)}", X, X))
    S = d.show("S", _powrel("{(a,{a})}", X, X))
    d.claim("R and S are deterministic",
            relcore.rel_property("deterministic", R) and relcore.rel_property("deterministic", S))
    d.claim("R <=H S", closures.preorder_leq("hoare", R, S))
    d.claim("R cap S = 0", not relcore.intersection(R, S))
    d.claim("not R <= S", not R.issubset(S))
    return d


DEMOS = {
    "example-3-3": example_3_3,
    "example-4-4": example_4_4,
    "up-comp-fail": up_comp_fail,
    "example-4-9": example_4_9,
    "example-5-11": example_5_11,
    "natural-order-fail": natural_order_fail,
    "preorder-incomparable": preorder_incomparable,
    "hoare-not-subset": hoare_not_subset,
}


def demo_names() -> list:
    return list(DEMOS)


def run_demo(name: str) -> DemoResult:
    try:
        build = DEMOS[name]
    except KeyError:
        raise UnknownDemo(f"no demo named {name!r}; known demos: {', '.join(DEMOS)}") from None
    return build()
