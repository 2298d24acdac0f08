"""Law checking and witness search over finite universes.

The leading block of quantified variables (free declared variables first, in
declaration order, then the leading ``forall`` or ``exists`` binders) is
enumerated in mixed radix with the first variable most significant and each
variable ranging over ascending canonical codes.  The first hit in that order
is the canonical counterexample or witness.  Parallel runs split the index
range into contiguous chunks and keep the smallest hit, so reports do not
depend on the worker count.
"""

from __future__ import annotations

import concurrent.futures
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import LawTypeError, SpaceTooLarge
from ..finsets import Universe
from ..relcore import Relation
from . import syntax as ast
from .evaluator import Compiler, relations_of_type
from .typecheck import check_formula, declared_types

DEFAULT_MAX_SPACE = 1 << 24
DEFAULT_SAMPLES = 10_000
SAMPLE_BLOCK = 1024
_PRECOMPUTE_LIMIT = 1 << 16
_PARALLEL_MIN = 4096


@dataclass
class Law:
    universe: Universe
    var_types: dict
    formula: ast.Node
    text: str
    source: str
    index: int


@dataclass
class LawFile:
    universe: Universe
    var_types: dict
    laws: list
    program: ast.Program = field(repr=False)


def load(source: str, max_base=None, max_object=None) -> LawFile:
    """Parse and typecheck a law file."""
    program = ast.parse(source)
    sets = {}
    for s in program.sets:
        if s.name in sets:
            raise LawTypeError(f"set {s.name!r} declared twice")
        sets[s.name] = s.card
    kwargs = {}
    if max_base is not None:
        kwargs["max_base"] = max_base
    if max_object is not None:
        kwargs["max_object"] = max_object
    universe = Universe(sets, **kwargs)
    var_types = declared_types(universe, program)
    laws = []
    for k, stmt in enumerate(program.laws):
        check_formula(universe, var_types, stmt.formula)
        laws.append(Law(universe, var_types, stmt.formula, stmt.text, source, k))
    return LawFile(universe, var_types, laws, program)


def with_sets(source: str, sizes: dict) -> str:
    """Rewrite the ``set`` statements of a law file to the given cardinalities."""
    program = ast.parse(source)
    unknown = sorted(set(sizes) - {s.name for s in program.sets})
    if unknown:
        raise LawTypeError(f"set {', '.join(unknown)} is not declared in the law file")
    out = source
    for stmt in sorted(program.sets, key=lambda s: -s.offset):
        if stmt.name in sizes:
            end = stmt.offset + len(str(stmt.card))
            out = out[:stmt.offset] + str(sizes[stmt.name]) + out[end:]
    return out


def estimate_space(declarations) -> int:
    """Product over variables of 2^(|src|*|tgt|); accepts a name->(src, tgt) map or pairs."""
    if isinstance(declarations, dict):
        declarations = declarations.values()
    space = 1
    for src, tgt in declarations:
        space <<= src.size * tgt.size
    return space


# -- search preparation ----------------------------------------------------------------

class Prepared:
    """A law split into an enumerated block of variables and a compiled body."""

    def __init__(self, law: Law, kind: str):
        self.law = law
        self.kind = kind
        want_quant = "forall" if kind == "check" else "exists"
        free = _free_declared(law.formula, law.var_types)
        block = [(name, law.var_types[name]) for name in free]
        body = law.formula
        while True:
            node = body
            while isinstance(node, ast.Group):
                node = node.inner
            if not (isinstance(node, ast.Quant) and node.kind == want_quant):
                break
            names = {n for n, _ in block}
            if any(b.name in names for b in node.binders):
                break
            block.extend((b.name, b.ty) for b in node.binders)
            body = node.body
        self.names = [n for n, _ in block]
        self.types = [t for _, t in block]
        self.bits = [src.size * tgt.size for src, tgt in self.types]
        self.space = estimate_space(self.types)
        self.want = kind == "find"
        self.pred = Compiler(self.names).formula(body)
        self._domains = {}

    def value(self, k: int, code: int) -> Relation:
        src, tgt = self.types[k]
        if self.bits[k] <= 16:
            dom = self._domains.get(k)
            if dom is None:
                dom = self._domains[k] = relations_of_type(src, tgt, _PRECOMPUTE_LIMIT)
            return dom[code]
        return Relation.from_code(src, tgt, code)

    def decode(self, index: int) -> list:
        codes = []
        for b in reversed(self.bits):
            codes.append(index & ((1 << b) - 1))
            index >>= b
        return codes[::-1]

    def binding(self, codes) -> dict:
        return {name: self.value(k, c) for k, (name, c) in enumerate(zip(self.names, codes))}

    def holds(self, codes) -> bool:
        return self.pred(self.binding(codes))

    # exhaustive scan of [lo, hi)
    def scan(self, lo: int, hi: int) -> Optional[int]:
        n = len(self.names)
        pred, want = self.pred, self.want
        if n == 0:
            return 0 if lo < hi and pred({}) == want else None
        if lo >= hi:
            return None
        digits = self.decode(lo)
        radix = [1 << b for b in self.bits]
        domains = [self._domain_list(k) for k in range(n)]
        names = self.names
        env = {names[k]: self._get(domains, k, digits[k]) for k in range(n)}
        last = n - 1
        dom_last = domains[last]
        name_last = names[last]
        idx = lo
        while idx < hi:
            # fast inner loop over the least significant variable
            start = digits[last]
            stop = min(radix[last], start + (hi - idx))
            if dom_last is not None:
                for d in range(start, stop):
                    env[name_last] = dom_last[d]
                    if pred(env) == want:
                        return idx + d - start
            else:
                src, tgt = self.types[last]
                for d in range(start, stop):
                    env[name_last] = Relation.from_code(src, tgt, d)
                    if pred(env) == want:
                        return idx + d - start
            idx += stop - start
            digits[last] = 0
            env[name_last] = self._get(domains, last, 0)
            k = last - 1
            while k >= 0:
                digits[k] += 1
                if digits[k] < radix[k]:
                    env[names[k]] = self._get(domains, k, digits[k])
                    break
                digits[k] = 0
                env[names[k]] = self._get(domains, k, 0)
                k -= 1
            if k < 0:
                break
        return None

    def _domain_list(self, k):
        if self.bits[k] <= 16:
            self.value(k, 0)
            return self._domains[k]
        return None

    def _get(self, domains, k, code):
        if domains[k] is not None:
            return domains[k][code]
        src, tgt = self.types[k]
        return Relation.from_code(src, tgt, code)

    # sampling
    def sample_block(self, seed: int, block: int, count: int) -> list:
        """Codes for samples block*SAMPLE_BLOCK .. +count, one list per sample."""
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
        columns = []
        for b in self.bits:
            chunks = max(1, -(-b // 32))
            # always draw a full block so sample k never depends on how many were asked for
            raw = rng.integers(0, 1 << 32, size=(SAMPLE_BLOCK, chunks), dtype=np.uint64)
            raw = raw[:count].tolist()
            mask = (1 << b) - 1
            col = []
            for row in raw:
                code = 0
                for j, part in enumerate(row):
                    code |= part << (32 * j)
                col.append(code & mask)
            columns.append(col)
        return [list(t) for t in zip(*columns)] if columns else [[] for _ in range(count)]

    def sample_codes(self, seed: int, index: int) -> list:
        block, offset = divmod(index, SAMPLE_BLOCK)
        return self.sample_block(seed, block, offset + 1)[offset]

    def scan_samples(self, seed: int, lo: int, hi: int) -> Optional[int]:
        pred, want = self.pred, self.want
        idx = lo
        while idx < hi:
            block, offset = divmod(idx, SAMPLE_BLOCK)
            count = min(SAMPLE_BLOCK, hi - block * SAMPLE_BLOCK)
            codes_list = self.sample_block(seed, block, count)
            for j in range(offset, count):
                if pred(self.binding(codes_list[j])) == want:
                    return block * SAMPLE_BLOCK + j
            idx = block * SAMPLE_BLOCK + count
        return None


def _free_declared(formula, var_types) -> list:
    from .evaluator import free_vars

    fv = free_vars(formula)
    return [name for name in var_types if name in fv]


# -- reports -------------------------------------------------------------------------------

@dataclass
class LawReport:
    law: str
    verdict: str
    bindings: dict
    space_size: int
    checked: int
    mode: str
    seed: Optional[int] = None
    elapsed: float = 0.0
    universe: Optional[dict] = None

    @property
    def found(self) -> bool:
        return self.verdict in ("counterexample", "witness")

    @property
    def ok(self) -> bool:
        return self.verdict in ("valid", "sampled_pass", "witness")

    def note(self) -> Optional[str]:
        where = ", ".join(f"{k}={v}" for k, v in (self.universe or {}).items())
        if self.verdict == "valid":
            return f"holds for every assignment over {where}; finite-universe evidence, not a proof"
        if self.verdict == "sampled_pass":
            return f"no counterexample in {self.checked} seeded samples over {where}; not a proof"
        if self.verdict == "none_found":
            return f"no witness among {self.checked} assignments over {where}"
        return None

    def to_json(self, timing: bool = True) -> dict:
        doc = {
            "law": self.law,
            "verdict": self.verdict,
            "space": self.space_size,
            "checked": self.checked,
            "binding": {k: r.to_json() for k, r in self.bindings.items()},
            "elapsed_ms": int(round(self.elapsed * 1000)) if timing else 0,
            "mode": self.mode,
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        note = self.note()
        if note:
            doc["note"] = note
        return doc

    def to_text(self, timing: bool = True) -> str:
        lines = [f"law {self.law}",
                 f"  {self.verdict} ({self.checked} of {self.space_size} assignments, {self.mode})"]
        for name, r in self.bindings.items():
            lines.append(f"  {name} = {r.text()}")
        note = self.note()
        if note:
            lines.append(f"  note: {note}")
        if timing:
            lines.append(f"  elapsed {self.elapsed * 1000:.0f} ms")
        return "\n".join(lines)


# -- running -------------------------------------------------------------------------------

_WORKER_CACHE = {}


def _worker_prepared(source, index, kind, max_base, max_object):
    key = (source, index, kind, max_base, max_object)
    prepared = _WORKER_CACHE.get(key)
    if prepared is None:
        law = load(source, max_base=max_base, max_object=max_object).laws[index]
        prepared = _WORKER_CACHE[key] = Prepared(law, kind)
    return prepared


def _worker(args):
    source, index, kind, max_base, max_object, mode, seed, lo, hi = args
    prepared = _worker_prepared(source, index, kind, max_base, max_object)
    if mode == "exhaustive":
        return prepared.scan(lo, hi)
    return prepared.scan_samples(seed, lo, hi)


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _run_ranges(prepared, mode, seed, total, jobs):
    """Smallest hit index in [0, total), searched in contiguous chunks."""
    if jobs <= 1 or total < _PARALLEL_MIN:
        if mode == "exhaustive":
            return prepared.scan(0, total)
        return prepared.scan_samples(seed, 0, total)
    law = prepared.law
    chunks = jobs * 4
    step = -(-total // chunks)
    if mode == "sample":
        step = -(-step // SAMPLE_BLOCK) * SAMPLE_BLOCK
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    payload = [(law.source, law.index, prepared.kind, law.universe.max_base,
                law.universe.max_object, mode, seed, lo, hi) for lo, hi in bounds]
    ctx = multiprocessing.get_context("fork") if "fork" in multiprocessing.get_all_start_methods() else None
    pool = concurrent.futures.ProcessPoolExecutor(max_workers=jobs, mp_context=ctx)
    try:
        futures = [pool.submit(_worker, p) for p in payload]
        for fut in futures:
            hit = fut.result()
            if hit is not None:
                return hit
        return None
    finally:
        pool.shutdown(wait=True, cancel_futures=True)


def run(law: Law, kind: str = "check", mode: str = "exhaustive", samples: int = DEFAULT_SAMPLES,
        seed: int = 0, jobs: int = 1, max_space: int = DEFAULT_MAX_SPACE) -> LawReport:
    if kind not in ("check", "find"):
        raise ValueError(f"unknown search kind {kind!r}")
    if mode not in ("exhaustive", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    prepared = Prepared(law, kind)
    if mode == "exhaustive":
        if prepared.space > max_space:
            raise SpaceTooLarge(
                f"law `{law.text}` ranges over {prepared.space} assignments, more than the "
                f"exhaustive cap {max_space}; use sample mode", space=prepared.space)
        total = prepared.space
    else:
        total = samples
    hit = _run_ranges(prepared, mode, seed, total, jobs)
    if hit is None:
        bindings = {}
        checked = total
        if kind == "check":
            verdict = "valid" if mode == "exhaustive" else "sampled_pass"
        else:
            verdict = "none_found"
    else:
        codes = prepared.decode(hit) if mode == "exhaustive" else prepared.sample_codes(seed, hit)
        bindings = prepared.binding(codes)
        # soundness: the binding must reproduce the finding on a fresh evaluation
        if Prepared(law, kind).pred(dict(bindings)) != prepared.want:
            raise AssertionError(f"binding for `{law.text}` does not reproduce on re-evaluation")
        checked = hit + 1
        verdict = "counterexample" if kind == "check" else "witness"
    return LawReport(law=law.text, verdict=verdict, bindings=bindings, space_size=prepared.space,
                     checked=checked, mode=mode, seed=seed if mode == "sample" else None,
                     elapsed=time.perf_counter() - start, universe=law.universe.base_sets)


def check(law: Law, mode: str = "exhaustive", **kwargs) -> LawReport:
    return run(law, "check", mode, **kwargs)


def find(law: Law, mode: str = "exhaustive", **kwargs) -> LawReport:
    return run(law, "find", mode, **kwargs)


def check_source(source: str, kind: str = "check", **kwargs) -> list:
    return [run(law, kind, **kwargs) for law in load(source).laws]
