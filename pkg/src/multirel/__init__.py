"""Finite-model kernel for binary relations and multirelations."""

from .errors import (
    CardinalityLimit, EmptyFamily, LawSyntaxError, LawTypeError, MultirelError, NotUnivalent,
    NotUpClosed, ResultTooLarge, SpaceTooLarge, TypeMismatch, UnknownDemo,
)
from .finsets import Base, Pow, Subset, Universe, declare_universe
from .relcore import Relation

__version__ = "0.1.0"

__all__ = [
    "Base", "Pow", "Subset", "Universe", "declare_universe", "Relation",
    "CardinalityLimit", "EmptyFamily", "LawSyntaxError", "LawTypeError", "MultirelError",
    "NotUnivalent", "NotUpClosed", "ResultTooLarge", "SpaceTooLarge", "TypeMismatch",
    "UnknownDemo",
]
