"""Typechecking of law ASTs by first-order unification over object types.

Type terms are tuples: ``("B", name)`` for a base set, ``("P", t)`` for a
powerset, ``("V", n)`` for an unknown.  After :func:`check_formula` every term
node carries ``node.ty = (src, tgt)`` as concrete :mod:`finsets` object types.
"""

from __future__ import annotations

import itertools

from ..errors import CardinalityLimit, LawTypeError
from ..finsets import Pow
from . import syntax as ast

_fresh = itertools.count()


def fresh():
    return ("V", next(_fresh))


def _from_syntax(t):
    if isinstance(t, ast.TypePow):
        return ("P", _from_syntax(t.inner))
    return ("B", t.name)


def show(t, subst=None) -> str:
    if subst is not None:
        t = subst.resolve(t)
    if t[0] == "B":
        return t[1]
    if t[0] == "P":
        return f"P({show(t[1])})"
    return "?"


class Subst:
    def __init__(self):
        self.binding = {}

    def walk(self, t):
        while t[0] == "V" and t in self.binding:
            t = self.binding[t]
        return t

    def resolve(self, t):
        t = self.walk(t)
        if t[0] == "P":
            return ("P", self.resolve(t[1]))
        return t

    def occurs(self, v, t):
        t = self.walk(t)
        if t == v:
            return True
        return t[0] == "P" and self.occurs(v, t[1])

    def unify(self, a, b) -> bool:
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return True
        if a[0] == "V":
            if self.occurs(a, b):
                return False
            self.binding[a] = b
            return True
        if b[0] == "V":
            return self.unify(b, a)
        if a[0] == "P" and b[0] == "P":
            return self.unify(a[1], b[1])
        return False


# constant name -> (number of type arguments, builder from args to (src, tgt))
_CONSTANT_SHAPES = {
    "0": (2, lambda a, b: (a, b)),
    "U": (2, lambda a, b: (a, b)),
    "Id": (1, lambda a: (a, a)),
    "one": (1, lambda a: (a, ("P", a))),
    "eps": (1, lambda a: (a, ("P", a))),
    "Om": (1, lambda a: (("P", a), ("P", a))),
    "Cr": (1, lambda a: (("P", a), ("P", a))),
    "lu": (2, lambda a, b: (a, ("P", b))),
    "li": (2, lambda a, b: (a, ("P", b))),
    "Au": (2, lambda a, b: (a, ("P", b))),
    "Ai": (2, lambda a, b: (a, ("P", b))),
}

_PREDICATES_NEEDING_POW = {
    "inner_univalent", "inner_total", "inner_deterministic",
    "union_closed", "intersection_closed", "up_closed", "down_closed", "convex_closed",
}


class Checker:
    def __init__(self, universe, env_types):
        self.universe = universe
        self.subst = Subst()
        self.scopes = [dict(env_types)]
        self.term_nodes = []
        self.binders = []

    # helpers
    def fail(self, node, message):
        line, col = node.pos
        raise LawTypeError(f"type error at line {line}, column {col} in `{ast.render(node)}`: {message}")

    def known_type(self, node, t):
        t = _from_syntax(t)
        self.validate_names(node, t)
        return t

    def validate_names(self, node, t):
        if t[0] == "P":
            self.validate_names(node, t[1])
        elif t[0] == "B" and t[1] not in self.universe.names():
            self.fail(node, f"unknown base set {t[1]!r}")

    def lookup(self, node):
        for scope in reversed(self.scopes):
            if node.name in scope:
                return scope[node.name]
        self.fail(node, f"undeclared variable {node.name!r}")

    def need(self, node, a, b, what):
        if not self.subst.unify(a, b):
            self.fail(node, f"{what}: expected {show(a, self.subst)}, got {show(b, self.subst)}")

    def need_same(self, node, a, b, what):
        # a and b are (src, tgt) pairs
        if not (self.subst.unify(a[0], b[0]) and self.subst.unify(a[1], b[1])):
            self.fail(node, f"{what}: {show(a[0], self.subst)} <-> {show(a[1], self.subst)} "
                            f"versus {show(b[0], self.subst)} <-> {show(b[1], self.subst)}")

    def inner_of(self, node, tgt, what):
        inner = fresh()
        if not self.subst.unify(tgt, ("P", inner)):
            self.fail(node, f"{what} needs a powerset target, got {show(tgt, self.subst)}")
        return inner

    # terms
    def term(self, node):
        ty = self._term(node)
        node.tyterm = ty
        self.term_nodes.append(node)
        return ty

    def _term(self, node):
        if isinstance(node, ast.Var):
            return self.lookup(node)
        if isinstance(node, ast.Group):
            return self.term(node.inner)
        if isinstance(node, ast.Const):
            arity, build = _CONSTANT_SHAPES[node.name]
            args = node.args
            if args is None:
                args = [fresh() for _ in range(arity)]
            else:
                if len(args) != arity:
                    self.fail(node, f"{node.name} takes {arity} type argument(s), got {len(args)}")
                args = [self.known_type(node, a) for a in args]
            return build(*args)
        if isinstance(node, ast.Unary):
            return self.unary(node)
        if isinstance(node, ast.Binary):
            return self.binary(node)
        self.fail(node, "expected a term")

    def unary(self, node):
        src, tgt = self.term(node.arg)
        op = node.op
        if op == "~":
            return (src, tgt)
        if op == "^":
            return (tgt, src)
        if op == "dom":
            return (src, src)
        self.inner_of(node, tgt, f"operator {op}")
        if op in ("^i", "^d", "up", "down", "conv"):
            return (src, tgt)
        if op in ("_*", "plift", "klift"):
            return (("P", src), tgt)
        raise AssertionError(op)

    def binary(self, node):
        op = node.op
        ls, lt = self.term(node.left)
        rs, rt = self.term(node.right)
        if op in ("cup", "cap", "-"):
            self.need_same(node, (ls, lt), (rs, rt), f"operands of {op} must have equal types")
            return (ls, lt)
        if op in ("icup", "icap"):
            self.inner_of(node, lt, f"operator {op}")
            self.need_same(node, (ls, lt), (rs, rt), f"operands of {op} must have equal types")
            return (ls, lt)
        if op == ";":
            self.need(node, lt, rs, "composition needs left target = right source")
            return (ls, rt)
        if op in ("*", "@"):
            inner = self.inner_of(node, lt, f"operator {op}")
            self.inner_of(node, rt, f"operator {op}")
            self.need(node, inner, rs, f"operator {op} needs left inner type = right source")
            return (ls, rt)
        if op == "/":
            self.need(node, lt, rt, "left residual T/S needs equal targets")
            return (ls, rs)
        if op == "\\":
            self.need(node, ls, rs, "right residual T\\S needs equal sources")
            return (lt, rt)
        if op == "syq":
            self.need(node, ls, rs, "syq needs equal sources")
            return (lt, rt)
        raise AssertionError(op)

    # formulas
    def formula(self, node):
        if isinstance(node, ast.Compare):
            lty = self.term(node.left)
            rty = self.term(node.right)
            self.need_same(node, lty, rty, f"both sides of {node.op} must have equal types")
            if node.op[-1] in "HS" or node.op.endswith("EM"):
                self.inner_of(node, lty[1], f"comparison {node.op}")
        elif isinstance(node, ast.Pred):
            _, tgt = self.term(node.arg)
            if node.name in _PREDICATES_NEEDING_POW:
                self.inner_of(node, tgt, f"predicate {node.name}")
        elif isinstance(node, ast.Not):
            self.formula(node.arg)
        elif isinstance(node, ast.BoolOp):
            self.formula(node.left)
            self.formula(node.right)
        elif isinstance(node, ast.Group):
            self.formula(node.inner)
        elif isinstance(node, ast.Quant):
            scope = {}
            for b in node.binders:
                if b.src is not None:
                    scope[b.name] = (self.known_type(node, b.src), self.known_type(node, b.tgt))
                else:
                    outer = self._outer_type(b.name)
                    if outer is None:
                        self.fail(node, f"bound variable {b.name!r} needs a type annotation")
                    scope[b.name] = outer
                self.binders.append((b, scope[b.name]))
            self.scopes.append(scope)
            try:
                self.formula(node.body)
            finally:
                self.scopes.pop()
        elif isinstance(node, ast.TermFormula):
            self.term(node.term)
            self.fail(node, "a term is not a formula; compare it with = or <=")
        else:
            self.fail(node, "expected a formula")

    def _outer_type(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def finish(self):
        cache = {}
        for node in self.term_nodes:
            src, tgt = (self.subst.resolve(t) for t in node.tyterm)
            del node.tyterm
            try:
                node.ty = (self.objtype(src, cache), self.objtype(tgt, cache))
            except _Unresolved:
                unresolved = node
            else:
                continue
            self.fail(unresolved, "cannot infer the type; add explicit type arguments such as one[X]")
        for binder, (src, tgt) in self.binders:
            binder.ty = (self.objtype(self.subst.resolve(src), cache),
                         self.objtype(self.subst.resolve(tgt), cache))

    def objtype(self, t, cache):
        if t[0] == "V":
            raise _Unresolved
        if t in cache:
            return cache[t]
        if t[0] == "B":
            out = self.universe.base(t[1])
        else:
            inner = self.objtype(t[1], cache)
            if inner.size > 64 or (1 << inner.size) > self.universe.max_object:
                raise CardinalityLimit(f"object type P({inner}) would have 2^{inner.size} "
                                       f"> {self.universe.max_object} elements")
            out = Pow(inner)
        cache[t] = out
        return out


class _Unresolved(Exception):
    pass


def declared_types(universe, program) -> dict:
    """Map each declared variable to its concrete (src, tgt), validating the types."""
    out = {}
    for decl in program.var_decls:
        src = _concrete(universe, decl.src)
        tgt = _concrete(universe, decl.tgt)
        for name in decl.names:
            if name in out:
                raise LawTypeError(f"variable {name!r} declared twice")
            out[name] = (src, tgt)
    return out


def _concrete(universe, t):
    if isinstance(t, ast.TypePow):
        return universe.pow(_concrete(universe, t.inner))
    if t.name not in universe.names():
        raise LawTypeError(f"unknown base set {t.name!r}")
    return universe.base(t.name)


def _to_term(t):
    if isinstance(t, Pow):
        return ("P", _to_term(t.inner))
    return ("B", t.name)


def check_formula(universe, var_types: dict, formula):
    """Typecheck ``formula`` under concrete ``var_types``; annotate nodes in place."""
    checker = Checker(universe, {k: (_to_term(s), _to_term(t)) for k, (s, t) in var_types.items()})
    checker.formula(formula)
    checker.finish()
    return formula


def check_term(universe, var_types: dict, term):
    checker = Checker(universe, {k: (_to_term(s), _to_term(t)) for k, (s, t) in var_types.items()})
    checker.term(term)
    checker.finish()
    return term.ty
