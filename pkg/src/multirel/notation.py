"""Set-notation literals for relations, e.g. ``{(a,{a}),(a,{b}),(b,∅)}``.

Elements of base sets are written a, b, c, ... (or e0, e1, ... beyond 26);
sets are ``{...}`` with ``∅`` or ``{}`` for the empty set.  Whitespace is
ignored.  :meth:`Relation.text` produces exactly this notation.
"""

from __future__ import annotations

import re

from .errors import TypeMismatch
from .finsets import Base, Universe, element_index
from .relcore import Relation

_TOKEN = re.compile(r"\s*(∅|[{}(),]|[A-Za-z][A-Za-z0-9]*)")


def _tokens(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"unexpected character {text[pos]!r} in relation literal")
        out.append(m.group(1))
        pos = m.end()
    return out


def _value(toks, i):
    tok = toks[i] if i < len(toks) else None
    if tok == "∅":
        return [], i + 1
    if tok == "{":
        items = []
        i += 1
        if toks[i] == "}":
            return items, i + 1
        while True:
            v, i = _value(toks, i)
            items.append(v)
            if toks[i] == "}":
                return items, i + 1
            if toks[i] != ",":
                raise ValueError(f"expected ',' or '}}' in set, found {toks[i]!r}")
            i += 1
    if tok is None or tok in "(),}":
        raise ValueError(f"expected an element, found {tok!r}")
    return tok, i + 1


def parse_pairs(text: str) -> list:
    """Parse a literal into a list of (source value, target value) pairs."""
    toks = _tokens(text)
    try:
        if not toks or toks[0] not in ("{", "∅"):
            raise ValueError("a relation literal starts with '{'")
        if toks[0] == "∅":
            if len(toks) != 1:
                raise ValueError("unexpected input after ∅")
            return []
        pairs = []
        i = 1
        if toks[i] == "}":
            i += 1
        else:
            while True:
                if toks[i] != "(":
                    raise ValueError(f"expected '(' to open a pair, found {toks[i]!r}")
                a, i = _value(toks, i + 1)
                if toks[i] != ",":
                    raise ValueError(f"expected ',' inside a pair, found {toks[i]!r}")
                b, i = _value(toks, i + 1)
                if toks[i] != ")":
                    raise ValueError(f"expected ')' to close a pair, found {toks[i]!r}")
                pairs.append((a, b))
                i += 1
                if toks[i] == "}":
                    i += 1
                    break
                if toks[i] != ",":
                    raise ValueError(f"expected ',' between pairs, found {toks[i]!r}")
                i += 1
        if i != len(toks):
            raise ValueError("unexpected input after the closing '}'")
    except IndexError:
        raise ValueError("relation literal ends unexpectedly") from None
    return pairs


def parse_relation(text: str, src, tgt) -> Relation:
    pairs = parse_pairs(text)
    return Relation.from_pairs(src, tgt, [(element_index(src, a), element_index(tgt, b))
                                          for a, b in pairs])


def _depth(value) -> int:
    if isinstance(value, str):
        return 0
    return 1 + max((_depth(v) for v in value), default=0)


def _names(value):
    if isinstance(value, str):
        yield value
    else:
        for v in value:
            yield from _names(v)


def _fits(base: Base, names) -> bool:
    try:
        for n in names:
            element_index(base, n)
    except TypeMismatch:
        return False
    return True


def infer_type(universe: Universe, values, what: str):
    """The object type of the first declared base set (wrapped in P as needed) fitting all values."""
    values = list(values)
    depths = {_depth(v) for v in values}
    if len(depths) != 1:
        raise TypeMismatch(f"cannot infer the {what} type from mixed elements")
    depth = depths.pop()
    if depth > 0 and all(not v for v in values):
        raise TypeMismatch(f"cannot infer the {what} type from empty sets only")
    names = [n for v in values for n in _names(v)]
    for name in universe.names():
        base = universe.base(name)
        if _fits(base, names):
            t = base
            for _ in range(depth):
                t = universe.pow(t)
            return t
    raise TypeMismatch(f"no declared base set contains all {what} elements {sorted(set(names))}")


def parse_binding(universe: Universe, text: str):
    """``NAME=LITERAL`` or ``NAME:Src<->Tgt=LITERAL``; returns (name, Relation)."""
    head, sep, literal = text.partition("=")
    if not sep:
        raise ValueError(f"binding {text!r} lacks '='")
    head = head.strip()
    if ":" in head:
        name, typing = (s.strip() for s in head.split(":", 1))
        if "<->" not in typing:
            raise ValueError(f"binding type {typing!r} must read Src<->Tgt")
        src_text, tgt_text = typing.split("<->", 1)
        src, tgt = universe.parse_type(src_text), universe.parse_type(tgt_text)
        return name, parse_relation(literal, src, tgt)
    if not head.isidentifier():
        raise ValueError(f"bad variable name {head!r}")
    pairs = parse_pairs(literal)
    if not pairs:
        raise TypeMismatch(f"cannot infer the type of the empty relation {head}; "
                           "write NAME:Src<->Tgt=...")
    src = infer_type(universe, [a for a, _ in pairs], "source")
    tgt = infer_type(universe, [b for _, b in pairs], "target")
    return head, parse_relation(literal, src, tgt)
