"""Heterogeneous binary relations between finite object types.

A :class:`Relation` stores one bit-mask row per source element: bit ``j`` of
``rows[i]`` is set iff ``(i, j)`` is in the relation.  The canonical integer
encoding places pair ``(i, j)`` at bit ``i * |tgt| + j``; relations of one
type are totally ordered by this code.
"""

from __future__ import annotations

import itertools

from .errors import ResultTooLarge, TypeMismatch
from .finsets import (
    ObjType, Subset, element_index, element_json, element_text, full_mask, iter_bits,
)

DEFAULT_SUBFUNCTION_CAP = 1 << 20


class Relation:
    __slots__ = ("src", "tgt", "rows", "_hash")

    def __init__(self, src: ObjType, tgt: ObjType, rows):
        rows = tuple(rows)
        if len(rows) != src.size:
            raise TypeMismatch(f"expected {src.size} rows for source {src}, got {len(rows)}")
        limit = 1 << tgt.size
        for row in rows:
            if row < 0 or row >= limit:
                raise TypeMismatch(f"row {row:#x} has bits outside target {tgt}")
        self.src = src
        self.tgt = tgt
        self.rows = rows
        self._hash = None

    @classmethod
    def _make(cls, src, tgt, rows):
        # trusted constructor for results of internal operations
        r = object.__new__(cls)
        r.src = src
        r.tgt = tgt
        r.rows = rows
        r._hash = None
        return r

    @classmethod
    def from_pairs(cls, src, tgt, pairs) -> "Relation":
        rows = [0] * src.size
        for i, j in pairs:
            if not (0 <= i < src.size and 0 <= j < tgt.size):
                raise TypeMismatch(f"pair ({i}, {j}) outside {src} <-> {tgt}")
            rows[i] |= 1 << j
        return cls._make(src, tgt, tuple(rows))

    @classmethod
    def from_code(cls, src, tgt, code: int) -> "Relation":
        width = tgt.size
        mask = full_mask(width)
        return cls._make(src, tgt, tuple((code >> (i * width)) & mask for i in range(src.size)))

    @classmethod
    def from_json(cls, universe, doc) -> "Relation":
        src = universe.parse_type(doc["src"])
        tgt = universe.parse_type(doc["tgt"])
        return cls.from_pairs(src, tgt, [(element_index(src, a), element_index(tgt, b))
                                         for a, b in doc["pairs"]])

    @property
    def code(self) -> int:
        width = self.tgt.size
        code = 0
        for i, row in enumerate(self.rows):
            code |= row << (i * width)
        return code

    @property
    def typing(self):
        return (self.src, self.tgt)

    def pairs(self):
        """Pairs ``(i, j)`` in lexicographic order."""
        for i, row in enumerate(self.rows):
            for j in iter_bits(row):
                yield (i, j)

    def __iter__(self):
        return self.pairs()

    def __len__(self):
        return sum(bin(row).count("1") for row in self.rows)

    def __bool__(self):
        return any(self.rows)

    def __contains__(self, pair):
        i, j = pair
        return bool(self.rows[i] >> j & 1)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.rows == other.rows and self.src == other.src and self.tgt == other.tgt

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.src, self.tgt, self.rows))
        return self._hash

    def issubset(self, other: "Relation") -> bool:
        _same_type(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def image_row(self, i: int) -> Subset:
        return Subset(self.tgt, self.rows[i])

    def text(self) -> str:
        return "{" + ",".join(f"({element_text(self.src, i)},{element_text(self.tgt, j)})"
                              for i, j in self.pairs()) + "}"

    def to_json(self) -> dict:
        return {"src": str(self.src), "tgt": str(self.tgt),
                "pairs": [[element_json(self.src, i), element_json(self.tgt, j)]
                          for i, j in self.pairs()]}

    def __repr__(self):
        return f"Relation({self.src} <-> {self.tgt}, {self.text()})"

    __str__ = text


def _same_type(r: Relation, s: Relation):
    if r.src != s.src or r.tgt != s.tgt:
        raise TypeMismatch(f"{r.src} <-> {r.tgt} versus {s.src} <-> {s.tgt}")


def all_relations(src: ObjType, tgt: ObjType):
    """Every relation of the given type, in ascending canonical code order."""
    nbits = src.size * tgt.size
    for code in range(1 << nbits):
        yield Relation.from_code(src, tgt, code)


# -- constants and boolean structure ---------------------------------------------

def empty(src, tgt) -> Relation:
    return Relation._make(src, tgt, (0,) * src.size)


def universal(src, tgt) -> Relation:
    return Relation._make(src, tgt, (full_mask(tgt.size),) * src.size)


def identity(t) -> Relation:
    return Relation._make(t, t, tuple(1 << i for i in range(t.size)))


def const_relation(kind: str, src: ObjType, tgt: ObjType) -> Relation:
    if kind == "empty":
        return empty(src, tgt)
    if kind == "universal":
        return universal(src, tgt)
    if kind == "identity":
        if src != tgt:
            raise TypeMismatch(f"identity needs src = tgt, got {src} and {tgt}")
        return identity(src)
    raise ValueError(f"unknown constant {kind!r}")


def union(r: Relation, s: Relation) -> Relation:
    _same_type(r, s)
    return Relation._make(r.src, r.tgt, tuple(a | b for a, b in zip(r.rows, s.rows)))


def intersection(r: Relation, s: Relation) -> Relation:
    _same_type(r, s)
    return Relation._make(r.src, r.tgt, tuple(a & b for a, b in zip(r.rows, s.rows)))


def difference(r: Relation, s: Relation) -> Relation:
    _same_type(r, s)
    return Relation._make(r.src, r.tgt, tuple(a & ~b for a, b in zip(r.rows, s.rows)))


def complement(r: Relation) -> Relation:
    full = full_mask(r.tgt.size)
    return Relation._make(r.src, r.tgt, tuple(full ^ a for a in r.rows))


def union_all(family, src=None, tgt=None) -> Relation:
    family = list(family)
    if not family:
        return empty(src, tgt)
    out = family[0]
    for r in family[1:]:
        out = union(out, r)
    return out


def boolean_op(kind: str, r: Relation, s: Relation = None) -> Relation:
    if kind == "complement":
        return complement(r)
    if s is None:
        raise TypeError(f"{kind} needs two operands")
    ops = {"union": union, "intersection": intersection, "difference": difference}
    try:
        return ops[kind](r, s)
    except KeyError:
        raise ValueError(f"unknown boolean operation {kind!r}") from None


# -- composition, converse, domain -------------------------------------------------

def compose(r: Relation, s: Relation) -> Relation:
    if r.tgt != s.src:
        raise TypeMismatch(f"cannot compose {r.src} <-> {r.tgt} with {s.src} <-> {s.tgt}")
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        while row:
            low = row & -row
            acc |= srows[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return Relation._make(r.src, s.tgt, tuple(out))


def converse(r: Relation) -> Relation:
    out = [0] * r.tgt.size
    for i, row in enumerate(r.rows):
        bit = 1 << i
        while row:
            low = row & -row
            out[low.bit_length() - 1] |= bit
            row ^= low
    return Relation._make(r.tgt, r.src, tuple(out))


def domain(r: Relation) -> Relation:
    return Relation._make(r.src, r.src, tuple((1 << i) if row else 0 for i, row in enumerate(r.rows)))


def residual(kind: str, t: Relation, s: Relation) -> Relation:
    """``left``: T/S, the greatest R with R;S <= T.  ``right``: T\\S, the greatest R with T;R <= S."""
    if kind == "left":
        if t.tgt != s.tgt:
            raise TypeMismatch(f"left residual needs equal targets, got {t.tgt} and {s.tgt}")
        return complement(compose(complement(t), converse(s)))
    if kind == "right":
        if t.src != s.src:
            raise TypeMismatch(f"right residual needs equal sources, got {t.src} and {s.src}")
        return complement(compose(converse(t), complement(s)))
    raise ValueError(f"unknown residual {kind!r}")


def left_residual(t, s):
    return residual("left", t, s)


def right_residual(t, s):
    return residual("right", t, s)


def syq(t: Relation, s: Relation) -> Relation:
    if t.src != s.src:
        raise TypeMismatch(f"syq needs equal sources, got {t.src} and {s.src}")
    return intersection(right_residual(t, s), left_residual(converse(t), converse(s)))


# -- properties ------------------------------------------------------------------

def is_total(r: Relation) -> bool:
    return identity(r.src).issubset(compose(r, converse(r)))


def is_univalent(r: Relation) -> bool:
    return compose(converse(r), r).issubset(identity(r.tgt))


def is_test(r: Relation) -> bool:
    return r.src == r.tgt and r.issubset(identity(r.src))


def rel_property(kind: str, r: Relation) -> bool:
    if kind == "total":
        return is_total(r)
    if kind == "univalent":
        return is_univalent(r)
    if kind == "deterministic":
        return is_total(r) and is_univalent(r)
    if kind == "test":
        return is_test(r)
    raise ValueError(f"unknown relation property {kind!r}")


def restrict_image(r: Relation, a: Subset):
    """``(R|_A, R(A))``."""
    if a.objtype != r.src:
        raise TypeMismatch(f"subset of {a.objtype} used on relation from {r.src}")
    restricted = tuple(row if a.mask >> i & 1 else 0 for i, row in enumerate(r.rows))
    img = 0
    for row in restricted:
        img |= row
    return Relation._make(r.src, r.tgt, restricted), Subset(r.tgt, img)


def d_subfunctions(r: Relation, cap: int = DEFAULT_SUBFUNCTION_CAP) -> list:
    """All univalent S <= R with dom(S) = dom(R), in lexicographic choice order."""
    choices = []
    count = 1
    for row in r.rows:
        opts = [1 << j for j in iter_bits(row)] if row else [0]
        choices.append(opts)
        count *= len(opts)
        if count > cap:
            raise ResultTooLarge(f"more than {cap} d-subfunctions")
    return [Relation._make(r.src, r.tgt, tuple(rows)) for rows in itertools.product(*choices)]
