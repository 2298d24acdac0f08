"""Finite typed universes, powerset object types and bit-mask subsets.

Elements of ``Base(name, n)`` are the indices ``0..n-1``.  Elements of
``Pow(T)`` are the subsets of ``T``; the subset with bit-mask ``m`` over
``T``'s element order has index ``m``, so powerset elements are ordered by
ascending mask value.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

from .errors import CardinalityLimit, TypeMismatch

DEFAULT_MAX_BASE = 4
DEFAULT_MAX_OBJECT = 256


@dataclass(frozen=True)
class Base:
    name: str
    size: int

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Pow:
    inner: "ObjType"

    @property
    def size(self) -> int:
        return 1 << self.inner.size

    def __str__(self):
        return f"P({self.inner})"


ObjType = Union[Base, Pow]


def is_pow(t: ObjType) -> bool:
    return isinstance(t, Pow)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(n: int) -> int:
    return (1 << n) - 1


@lru_cache(maxsize=None)
def superset_table(n: int) -> tuple:
    """For each subset ``A`` of an ``n``-set, the mask over P(n) of all supersets of ``A``."""
    size = 1 << n
    table = []
    for a in range(size):
        m = 0
        for b in range(size):
            if a & b == a:
                m |= 1 << b
        table.append(m)
    return tuple(table)


@lru_cache(maxsize=None)
def subset_table(n: int) -> tuple:
    """For each subset ``A`` of an ``n``-set, the mask over P(n) of all subsets of ``A``."""
    size = 1 << n
    table = []
    for a in range(size):
        m = 0
        for b in range(size):
            if a & b == b:
                m |= 1 << b
        table.append(m)
    return tuple(table)


# -- pretty printing -------------------------------------------------------

def base_element_name(index: int, size: int) -> str:
    if size <= 26:
        return string.ascii_lowercase[index]
    return f"e{index}"


def element_text(t: ObjType, index: int) -> str:
    if isinstance(t, Base):
        return base_element_name(index, t.size)
    if index == 0:
        return "∅"
    return "{" + ",".join(element_text(t.inner, i) for i in iter_bits(index)) + "}"


def element_json(t: ObjType, index: int):
    if isinstance(t, Base):
        return base_element_name(index, t.size)
    return [element_json(t.inner, i) for i in iter_bits(index)]


def element_index(t: ObjType, value) -> int:
    """Inverse of :func:`element_json`; accepts names, ints or nested iterables."""
    if isinstance(t, Base):
        if isinstance(value, int) and not isinstance(value, bool):
            idx = value
        elif isinstance(value, str):
            if t.size <= 26 and len(value) == 1 and value in string.ascii_lowercase:
                idx = string.ascii_lowercase.index(value)
            elif value.startswith("e") and value[1:].isdigit():
                idx = int(value[1:])
            else:
                raise TypeMismatch(f"{value!r} is not an element of {t}")
        else:
            raise TypeMismatch(f"{value!r} is not an element of {t}")
        if not 0 <= idx < t.size:
            raise TypeMismatch(f"{value!r} is not an element of {t} (size {t.size})")
        return idx
    if isinstance(value, (str, int)):
        raise TypeMismatch(f"{value!r} is not an element of {t}")
    mask = 0
    for v in value:
        mask |= 1 << element_index(t.inner, v)
    return mask


# -- universes ---------------------------------------------------------------

class Universe:
    """Named finite base sets plus the size caps for materialized object types."""

    def __init__(self, base_sets, max_base=DEFAULT_MAX_BASE, max_object=DEFAULT_MAX_OBJECT):
        self.max_base = max_base
        self.max_object = max_object
        self._bases = {}
        for name, card in base_sets.items():
            if not isinstance(card, int) or card < 1:
                raise CardinalityLimit(f"base set {name} must have cardinality >= 1, got {card!r}")
            base = Base(name, card)
            # every base set must admit multirelations into it
            self.check(Pow(base))
            if card > max_base:
                raise CardinalityLimit(f"base set {name} has {card} > {max_base} elements")
            self._bases[name] = base

    @property
    def base_sets(self) -> dict:
        return {name: b.size for name, b in self._bases.items()}

    def names(self) -> list:
        return list(self._bases)

    def base(self, name: str) -> Base:
        try:
            return self._bases[name]
        except KeyError:
            raise TypeMismatch(f"unknown base set {name!r}") from None

    def pow(self, t: ObjType) -> Pow:
        return self.check(Pow(t))

    def check(self, t: ObjType) -> ObjType:
        if isinstance(t, Pow):
            self.check(t.inner)
            if t.inner.size > 64 or t.size > self.max_object:
                raise CardinalityLimit(
                    f"object type {t} would have 2^{t.inner.size} > {self.max_object} elements")
        return t

    def parse_type(self, text: str) -> ObjType:
        text = text.replace(" ", "")
        if text.startswith("P(") and text.endswith(")"):
            return self.pow(self.parse_type(text[2:-1]))
        return self.base(text)

    def __repr__(self):
        return f"Universe({self.base_sets!r})"

    def __eq__(self, other):
        return (isinstance(other, Universe) and self.base_sets == other.base_sets
                and self.max_base == other.max_base and self.max_object == other.max_object)

    def __hash__(self):
        return hash(tuple(self.base_sets.items()))


def declare_universe(spec, max_base=DEFAULT_MAX_BASE, max_object=DEFAULT_MAX_OBJECT) -> Universe:
    return Universe(dict(spec), max_base=max_base, max_object=max_object)


# -- subsets -------------------------------------------------------------------

@dataclass(frozen=True)
class Subset:
    objtype: ObjType
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.objtype.size:
            raise TypeMismatch(f"mask {self.mask:#x} has bits outside {self.objtype}")

    @classmethod
    def of(cls, objtype: ObjType, indices) -> "Subset":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(objtype, mask)

    def __iter__(self):
        return iter_bits(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, index):
        return bool(self.mask >> index & 1)

    def __str__(self):
        return "{" + ",".join(element_text(self.objtype, i) for i in self) + "}"


def subset_algebra(op: str, a: Subset, b: Subset = None) -> Subset:
    if op == "complement":
        return Subset(a.objtype, full_mask(a.objtype.size) ^ a.mask)
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if a.objtype != b.objtype:
        raise TypeMismatch(f"subsets of {a.objtype} and {b.objtype}")
    if op == "union":
        return Subset(a.objtype, a.mask | b.mask)
    if op == "intersection":
        return Subset(a.objtype, a.mask & b.mask)
    raise ValueError(f"unknown subset operation {op!r}")
