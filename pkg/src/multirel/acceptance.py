"""The acceptance suite: eleven criteria, each a list of named exact checks.

Used by ``multirel selftest`` and by tests/test_acceptance.py.  Every check
records whether it passed and a short detail string; a criterion passes iff
all of its checks do.
"""

from __future__ import annotations

import contextlib
import itertools
import json
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import closures, demos, mrcore, relcore
from .finsets import Base
from .lawlab import engine
from .relcore import Relation

RANDOM_FAMILIES = 1000
SEED = 0


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CriterionResult:
    number: int
    title: str
    tags: tuple
    budget: float
    checks: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.number:2d} {status}  {self.title}  "
                f"({len(self.checks)} checks, {self.elapsed:.2f}s, budget {self.budget:g}s)")

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "pass": self.passed,
                "elapsed_s": round(self.elapsed, 3), "budget_s": self.budget,
                "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail}
                           for c in self.checks]}


def law_source(name: str) -> str:
    return resources.files("multirel").joinpath("laws").joinpath(name).read_text()


def _law_checks(source: str, mode="exhaustive", samples=engine.DEFAULT_SAMPLES, seed=SEED,
                label=""):
    out = []
    for law in engine.load(source).laws:
        report = engine.check(law, mode=mode, samples=samples, seed=seed)
        detail = f"{report.verdict}, {report.checked} of {report.space_size}"
        if report.bindings:
            detail += "; " + ", ".join(f"{k}={r.text()}" for k, r in report.bindings.items())
        out.append(Check(f"{label}{law.text}", report.ok and not report.found, detail))
    return out


def _random_relation(rng, src, tgt):
    bits = src.size * tgt.size
    return Relation.from_code(src, tgt, int(rng.integers(0, 1 << bits)))


def _random_families(seed, src, tgt, count=RANDOM_FAMILIES, sizes=(2, 5)):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.integers(*sizes))
        yield [_random_relation(rng, src, tgt) for _ in range(k)]


def _intersect_all(family):
    out = family[0]
    for r in family[1:]:
        out = relcore.intersection(out, r)
    return out


def _first_failure(items, ok):
    count = 0
    first = None
    for item in items:
        if not ok(item):
            count += 1
            if first is None:
                first = item
    return count, first


def _family_text(family):
    return "[" + ", ".join(r.text() for r in family) + "]"


# -- criteria -----------------------------------------------------------------------------

def c1_examples():
    out = []
    for name in demos.demo_names():
        result = demos.run_demo(name)
        failed = [s for s, ok in result.claims if not ok]
        out.append(Check(f"demo {name}", result.passed,
                         f"{len(result.claims)} claims" + (f"; failed: {failed}" if failed else "")))
    return out


def c2_inner_quantales():
    out = _law_checks(law_source("prop-3-2.law"))
    X, Y = Base("X", 1), Base("Y", 2)
    PY = mrcore.powtype(Y)
    every = list(relcore.all_relations(X, PY))
    small = [[]] + [[r] for r in every] + [list(p) for p in itertools.combinations(every, 2)]
    random = list(_random_families(SEED, X, PY))

    def preserved(family):
        joined = relcore.union_all(family, X, PY)
        for r in every:
            for op in (mrcore.inner_union, mrcore.inner_intersection):
                rhs = relcore.union_all([op(r, s) for s in family], X, PY)
                if op(r, joined) != rhs or op(joined, r) != rhs:
                    return False
        comp = relcore.union_all([mrcore.inner_complement(s) for s in family], X, PY)
        return mrcore.inner_complement(joined) == comp

    for label, fams in (("all families of size <= 2", small),
                        (f"{len(random)} seeded random families", random)):
        bad, first = _first_failure(fams, preserved)
        out.append(Check(f"icup, icap (both arguments) and ^i preserve unions over {label}",
                         bad == 0, f"{len(fams)} families" +
                         (f"; first failure {_family_text(first)}" if first else "")))
    return out


def c3_closure_homomorphisms():
    out = _law_checks(law_source("closure-homomorphisms.law"))
    X, Y = Base("X", 2), Base("Y", 2)
    PY = mrcore.powtype(Y)
    fams = list(_random_families(SEED, X, PY))
    bad, first = _first_failure(
        fams, lambda f: closures.convex(_intersect_all(f))
        == _intersect_all([closures.convex(r) for r in f]))
    detail = f"{bad} of {len(fams)} families violate it"
    if first is not None:
        lhs = closures.convex(_intersect_all(first))
        rhs = _intersect_all([closures.convex(r) for r in first])
        detail += (f"; first {_family_text(first)}: conv of intersection = {lhs.text()}, "
                   f"intersection of conv = {rhs.text()}")
    out.append(Check("conv preserves intersections of random families", bad == 0, detail))
    bad, first = _first_failure(
        fams, lambda f: closures.convex(_intersect_all(f)).issubset(
            _intersect_all([closures.convex(r) for r in f])))
    out.append(Check("conv of an intersection is included in the intersection of convs",
                     bad == 0, f"{len(fams)} families"))
    bad, first = _first_failure(
        fams, lambda f: closures.closed_check(
            "convex", _intersect_all([closures.convex(r) for r in f])))
    out.append(Check("intersections of convex-closed multirelations are convex-closed",
                     bad == 0, f"{len(fams)} families"))
    return out


def c4_down_as_composition():
    out = []
    for n in (1, 2, 3):
        Y = Base("Y", n)
        lhs = mrcore.peleg_lift(closures.down(mrcore.unit(Y)))
        rhs = relcore.converse(mrcore.omega(Y))
        out.append(Check(f"plift(down(one)) = Om^ at |Y| = {n}", lhs == rhs,
                         f"{len(lhs)} pairs"))
    out += _law_checks(law_source("down-closure-lift.law"))
    return out


def c5_up_and_peleg():
    out = []
    for n in (1, 2):
        out += _law_checks(engine.with_sets(law_source("up-peleg.law"), {"X": n}), label=f"|X|={n}: ")
    return out


def c6_quotients():
    X, Y = Base("X", 1), Base("Y", 2)
    everything = closures.multirelations(X, Y)
    out = []
    for kind, closed_kind in (("hoare", "down"), ("smyth", "up"), ("egli_milner", "convex")):
        q = closures.quotient(kind, X, Y)
        closed = sum(1 for r in everything if closures.closed_check(closed_kind, r))
        out.append(Check(f"{kind}: class count equals {closed_kind}-closed count",
                         len(q.classes) == closed, f"{len(q.classes)} classes, {closed} closed"))
        if kind == "hoare":
            out.append(Check("hoare: 6 classes", len(q.classes) == 6, f"{len(q.classes)}"))
        for c in q.verify():
            out.append(Check(f"{kind}: {c['name']}", c["pass"]))
    out.append(Check("inner complement maps hoare classes onto smyth classes and back",
                     closures.quotient_duality(X, Y)))
    return out


def c7_special_orders():
    X, Y = Base("X", 2), Base("Y", 2)
    out = []
    for kind in ("outer_det", "outer_univ", "inner_univ", "inner_det"):
        res = closures.class_special_order(kind, X, Y)
        for c in res["checks"]:
            extra = f"; witness {c['witness']}" if c["witness"] else ""
            out.append(Check(f"{kind} ({res['members']} members): {c['name']}", c["pass"],
                             f"expected {'to hold' if c['expected'] else 'a witness'}{extra}"))
    res = closures.det_lattice_check(X, Y)
    for c in res["checks"]:
        out.append(Check(f"deterministic lattice ({res['members']} members): {c['name']}",
                         c["pass"]))
    ex = demos.run_demo("example-5-11")
    out.append(Check("control: R =H S and R =S S with R != S", ex.passed,
                     f"{len(ex.claims)} claims"))
    return out


def c8_decompositions():
    X, Y = Base("X", 2), Base("Y", 2)
    PY = mrcore.powtype(Y)
    out = []
    for tgt in (Y, PY):
        rels = list(relcore.all_relations(X, tgt))
        bad, first = _first_failure(
            rels, lambda r: relcore.union_all(relcore.d_subfunctions(r), X, tgt) == r)
        out.append(Check(f"R is the union of its d-subfunctions on X <-> {tgt}", bad == 0,
                         f"{len(rels)} relations"))
    rels = list(relcore.all_relations(X, PY))
    bad, first = _first_failure(rels, lambda r: closures.decompose_full(r, variant=True).ok)
    out.append(Check("reconstruction with the dom-preserving down-d family", bad == 0,
                     f"{len(rels) - bad} of {len(rels)} reconstructed" +
                     (f"; first failure {first.text()}" if first else "")))
    lu = mrcore.inner_unit_u(X, Y)
    primary = {r for r in rels if closures.decompose_full(r).ok}
    expected = {r for r in rels if not relcore.intersection(r, lu)}
    out.append(Check("primary down-d family reconstructs exactly the R without (a, {}) pairs",
                     primary == expected, f"{len(primary)} of {len(rels)}"))
    return out


def c9_co_composition():
    out = _law_checks(law_source("co-composition.law"), label="exhaustive: ")
    out += _law_checks(law_source("co-composition-sampled.law"), mode="sample",
                       samples=10_000, label="10^4 samples: ")
    return out


def c10_basis():
    source = law_source("basis.law")
    out = []
    for n in (1, 2):
        for law in engine.load(engine.with_sets(source, {"X": n})).laws:
            space = engine.Prepared(law, "check").space
            if space > engine.DEFAULT_MAX_SPACE:
                continue
            report = engine.check(law)
            out.append(Check(f"|X|={n}: {law.text}", report.verdict == "valid",
                             f"{report.verdict}, {report.checked} of {space}"))
    return out


PELEG_NONASSOC = """\
set X = 2
var R, S, T : X <-> P(X)

law (R * S) * T = R * (S * T)
law (R * S) * T <= R * (S * T)
"""


def _report_bytes(law, mode, samples, jobs):
    report = engine.check(law, mode=mode, samples=samples, seed=SEED, jobs=jobs)
    return json.dumps(report.to_json(timing=False), sort_keys=True)


def c11_engine():
    out = []
    laws = engine.load(law_source("iu-not-idempotent.law")).laws
    start = time.perf_counter()
    report = engine.find(laws[0])
    took = time.perf_counter() - start
    out.append(Check("find: witness for non-idempotent inner union in under 1 s",
                     report.verdict == "witness" and took < 1.0,
                     f"{report.verdict} in {took * 1000:.0f} ms, "
                     f"R={report.bindings['R'].text() if report.bindings else '-'}"))
    equality, inclusion = engine.load(PELEG_NONASSOC).laws
    report = engine.check(equality, mode="sample", samples=10_000, seed=SEED)
    out.append(Check("sampling refutes associativity of Peleg composition at |X|=2",
                     report.verdict == "counterexample",
                     f"{report.verdict} at sample {report.checked}"))
    report = engine.check(inclusion, mode="sample", samples=100_000, seed=SEED)
    out.append(Check("(R*S)*T <= R*(S*T) on 10^5 samples", report.verdict == "sampled_pass",
                     f"{report.verdict}, {report.checked} samples"))
    for law, mode, samples in ((equality, "sample", 10_000), (inclusion, "sample", 20_000),
                               (engine.load(law_source("prop-3-2.law")).laws[1],
                                "exhaustive", 0)):
        one = _report_bytes(law, mode, samples, 1)
        eight = _report_bytes(law, mode, samples, 8)
        out.append(Check(f"--jobs 1 and --jobs 8 give identical reports: {law.text} ({mode})",
                         one == eight, f"{len(one)} bytes"))
    return out


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    tags: tuple
    budget: float
    run: callable


CRITERIA = [
    Criterion(1, "worked examples reproduce", ("demos", "cli"), 1, c1_examples),
    Criterion(2, "inner union and intersection quantales at |X|=1,|Y|=2", ("mrcore",), 5,
              c2_inner_quantales),
    Criterion(3, "closure homomorphisms at |X|=2,|Y|=2", ("closures",), 30,
              c3_closure_homomorphisms),
    Criterion(4, "down-closure as Peleg composition", ("mrcore", "closures"), 5,
              c4_down_as_composition),
    Criterion(5, "up/down-closure against Peleg composition at |X|=1..2",
              ("mrcore", "closures"), 60, c5_up_and_peleg),
    Criterion(6, "quotients by the three preorders at |X|=1,|Y|=2", ("closures",), 5,
              c6_quotients),
    Criterion(7, "orders on special classes at |X|=2,|Y|=2", ("closures",), 30,
              c7_special_orders),
    Criterion(8, "decomposition into subfunctions at |X|=2,|Y|=2", ("relcore", "closures"), 10,
              c8_decompositions),
    Criterion(9, "co-composition identities", ("mrcore", "lawlab"), 60, c9_co_composition),
    Criterion(10, "derived operations against the basis", ("lawlab", "relcore", "mrcore"), 60,
              c10_basis),
    Criterion(11, "search engine properties", ("lawlab", "engine"), 60, c11_engine),
]


def select(filter_text=None) -> list:
    if not filter_text:
        return list(CRITERIA)
    wanted = filter_text.strip().lower()
    if wanted.isdigit():
        return [c for c in CRITERIA if c.number == int(wanted)]
    return [c for c in CRITERIA if wanted in c.tags or wanted in c.title.lower()]


def run_criterion(c: Criterion) -> CriterionResult:
    start = time.perf_counter()
    checks = c.run()
    return CriterionResult(c.number, c.title, c.tags, c.budget, checks,
                           time.perf_counter() - start)


def run_all(filter_text=None, progress=None) -> list:
    results = []
    for c in select(filter_text):
        res = run_criterion(c)
        if progress:
            progress(res)
        results.append(res)
    return results


# -- mutation hook --------------------------------------------------------------------------

def _corrupt_inner_unit_u(x, y):
    return relcore.empty(x, mrcore.powtype(y))


def _corrupt_inner_union(r, s):
    return relcore.union(r, s)


MUTATIONS = {
    "inner_unit_u": (mrcore, "inner_unit_u", _corrupt_inner_unit_u),
    "inner_union": (mrcore, "inner_union", _corrupt_inner_union),
}


@contextlib.contextmanager
def mutation(name):
    """Temporarily replace a kernel function with a wrong one."""
    try:
        module, attr, replacement = MUTATIONS[name]
    except KeyError:
        raise ValueError(f"unknown mutation {name!r}; known: {', '.join(MUTATIONS)}") from None
    original = getattr(module, attr)
    setattr(module, attr, replacement)
    try:
        yield
    finally:
        setattr(module, attr, original)
