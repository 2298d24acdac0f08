"""Denotational evaluation of typechecked terms and formulas.

Terms compile to closures ``env -> Relation`` and formulas to ``env -> bool``.
Subterms that depend on only some of the enumerated variables are memoized on
those variables, so e.g. ``plift(S)`` in a law over ``R, S`` is computed once
per ``S`` rather than once per pair.
"""

from __future__ import annotations

from .. import closures, mrcore, relcore
from ..errors import SpaceTooLarge
from ..relcore import Relation
from . import syntax as ast

NESTED_QUANTIFIER_CAP = 1 << 16
_MEMO_LIMIT = 1 << 17


# Operators dispatch through module attributes at call time so tests can patch them.
def _unary(op):
    table = {
        "~": lambda r: relcore.complement(r),
        "^": lambda r: relcore.converse(r),
        "dom": lambda r: relcore.domain(r),
        "^i": lambda r: mrcore.inner_complement(r),
        "^d": lambda r: mrcore.dual(r),
        "_*": lambda r: mrcore.peleg_lift(r),
        "plift": lambda r: mrcore.peleg_lift(r),
        "klift": lambda r: mrcore.kleisli_lift(r),
        "up": lambda r: closures.up(r),
        "down": lambda r: closures.down(r),
        "conv": lambda r: closures.convex(r),
    }
    return table[op]


def _binary(op):
    table = {
        ";": lambda r, s: relcore.compose(r, s),
        "/": lambda r, s: relcore.left_residual(r, s),
        "\\": lambda r, s: relcore.right_residual(r, s),
        "syq": lambda r, s: relcore.syq(r, s),
        "cup": lambda r, s: relcore.union(r, s),
        "cap": lambda r, s: relcore.intersection(r, s),
        "-": lambda r, s: relcore.difference(r, s),
        "icup": lambda r, s: mrcore.inner_union(r, s),
        "icap": lambda r, s: mrcore.inner_intersection(r, s),
        "*": lambda r, s: mrcore.peleg_compose(r, s),
        "@": lambda r, s: mrcore.co_compose(r, s),
    }
    return table[op]


def _compare(op):
    table = {
        "=": lambda r, s: r == s,
        "!=": lambda r, s: r != s,
        "<=": lambda r, s: r.issubset(s),
        ">=": lambda r, s: s.issubset(r),
        "<": lambda r, s: r != s and r.issubset(s),
        "<=H": lambda r, s: closures.preorder_leq("hoare", r, s),
        "<=S": lambda r, s: closures.preorder_leq("smyth", r, s),
        "<=EM": lambda r, s: closures.preorder_leq("egli_milner", r, s),
        "=H": lambda r, s: closures.equiv("hoare", r, s),
        "=S": lambda r, s: closures.equiv("smyth", r, s),
        "=EM": lambda r, s: closures.equiv("egli_milner", r, s),
    }
    return table[op]


def _predicate(name):
    if name in ("univalent", "total", "deterministic", "test"):
        return lambda r: relcore.rel_property(name, r)
    if name.startswith("inner_"):
        return lambda r: mrcore.inner_property(name, r)
    if name in ("union_closed", "intersection_closed"):
        return lambda r: mrcore.closure_property(name, r)
    kind = {"up_closed": "up", "down_closed": "down", "convex_closed": "convex"}[name]
    return lambda r: closures.closed_check(kind, r)


def constant_value(name, src, tgt) -> Relation:
    if name == "0":
        return relcore.empty(src, tgt)
    if name == "U":
        return relcore.universal(src, tgt)
    if name == "Id":
        return relcore.identity(src)
    if name == "one":
        return mrcore.unit(src)
    if name == "eps":
        return mrcore.membership(src)
    if name == "Om":
        return mrcore.omega(src.inner)
    if name == "Cr":
        return mrcore.comp_rel(src.inner)
    builders = {"lu": "inner_unit_u", "li": "inner_unit_i", "Au": "atoms", "Ai": "co_atoms"}
    return getattr(mrcore, builders[name])(src, tgt.inner)


def free_vars(node, bound=frozenset()) -> frozenset:
    if isinstance(node, ast.Var):
        return frozenset() if node.name in bound else frozenset([node.name])
    if isinstance(node, ast.Const):
        return frozenset()
    if isinstance(node, ast.Quant):
        return free_vars(node.body, bound | {b.name for b in node.binders})
    out = frozenset()
    for child in _children(node):
        out |= free_vars(child, bound)
    return out


def _children(node):
    if isinstance(node, (ast.Unary, ast.Pred, ast.Not)):
        return [node.arg]
    if isinstance(node, (ast.Binary, ast.Compare, ast.BoolOp)):
        return [node.left, node.right]
    if isinstance(node, ast.Group):
        return [node.inner]
    if isinstance(node, ast.TermFormula):
        return [node.term]
    if isinstance(node, ast.Quant):
        return [node.body]
    return []


def relations_of_type(src, tgt, cap=NESTED_QUANTIFIER_CAP) -> list:
    bits = src.size * tgt.size
    if bits > 62 or (1 << bits) > cap:
        raise SpaceTooLarge(f"quantifier over {src} <-> {tgt} ranges over 2^{bits} relations",
                            space=1 << bits)
    return [Relation.from_code(src, tgt, code) for code in range(1 << bits)]


class Compiler:
    """Compiles nodes under a fixed set of variables that will vary during a search."""

    def __init__(self, varying=(), memoize=True):
        self.varying = frozenset(varying)
        self.memoize = memoize

    def _wrap(self, node, fn, varying):
        fv = free_vars(node)
        if not fv:
            box = []

            def constant(env):
                if not box:
                    box.append(fn(env))
                return box[0]
            return constant
        if not self.memoize or not (fv < varying):
            return fn
        keys = tuple(sorted(fv))
        memo = {}

        if len(keys) == 1:
            (key,) = keys

            def cached1(env):
                k = env[key]
                try:
                    return memo[k]
                except KeyError:
                    if len(memo) >= _MEMO_LIMIT:
                        memo.clear()
                    v = memo[k] = fn(env)
                    return v
            return cached1

        def cached(env):
            k = tuple(env[v] for v in keys)
            try:
                return memo[k]
            except KeyError:
                if len(memo) >= _MEMO_LIMIT:
                    memo.clear()
                v = memo[k] = fn(env)
                return v
        return cached

    def term(self, node, varying=None):
        varying = self.varying if varying is None else varying
        if isinstance(node, ast.Var):
            name = node.name
            return lambda env: env[name]
        if isinstance(node, ast.Group):
            return self.term(node.inner, varying)
        if isinstance(node, ast.Const):
            value = constant_value(node.name, *node.ty)
            return lambda env: value
        if isinstance(node, ast.Unary):
            f = _unary(node.op)
            a = self.term(node.arg, varying)
            return self._wrap(node, lambda env: f(a(env)), varying)
        if isinstance(node, ast.Binary):
            f = _binary(node.op)
            a = self.term(node.left, varying)
            b = self.term(node.right, varying)
            return self._wrap(node, lambda env: f(a(env), b(env)), varying)
        raise TypeError(f"not a term: {node!r}")

    def formula(self, node, varying=None):
        varying = self.varying if varying is None else varying
        if isinstance(node, ast.Group):
            return self.formula(node.inner, varying)
        if isinstance(node, ast.Compare):
            f = _compare(node.op)
            a = self.term(node.left, varying)
            b = self.term(node.right, varying)
            return self._wrap(node, lambda env: f(a(env), b(env)), varying)
        if isinstance(node, ast.Pred):
            f = _predicate(node.name)
            a = self.term(node.arg, varying)
            return self._wrap(node, lambda env: f(a(env)), varying)
        if isinstance(node, ast.Not):
            a = self.formula(node.arg, varying)
            return lambda env: not a(env)
        if isinstance(node, ast.BoolOp):
            a = self.formula(node.left, varying)
            b = self.formula(node.right, varying)
            if node.op == "and":
                return lambda env: a(env) and b(env)
            if node.op == "or":
                return lambda env: a(env) or b(env)
            if node.op == "->":
                return lambda env: (not a(env)) or b(env)
            return lambda env: a(env) == b(env)
        if isinstance(node, ast.Quant):
            return self.quantifier(node, varying)
        raise TypeError(f"not a formula: {node!r}")

    def quantifier(self, node, varying):
        names = [b.name for b in node.binders]
        inner_varying = varying | set(names)
        body = self.formula(node.body, inner_varying)
        domains = [relations_of_type(*b.ty) for b in node.binders]
        want = node.kind == "exists"

        def search(env, k=0):
            if k == len(names):
                return body(env)
            name = names[k]
            for value in domains[k]:
                env[name] = value
                if search(env, k + 1) == want:
                    return want
            return not want

        def run(env):
            saved = {n: env[n] for n in names if n in env}
            try:
                return search(env)
            finally:
                for n in names:
                    env.pop(n, None)
                env.update(saved)
        return run


def evaluate_term(node, env: dict) -> Relation:
    return Compiler(memoize=False).term(node)(dict(env))


def evaluate_formula(node, env: dict) -> bool:
    return Compiler(memoize=False).formula(node)(dict(env))
