"""Typed law language for relations and multirelations, with a search engine."""

from .engine import (
    DEFAULT_MAX_SPACE, Law, LawFile, LawReport, check, check_source, estimate_space, find, load,
    run, with_sets,
)
from .evaluator import evaluate_formula, evaluate_term
from .syntax import parse, parse_formula, parse_term, render, render_program
from .typecheck import check_formula, check_term

__all__ = [
    "DEFAULT_MAX_SPACE", "Law", "LawFile", "LawReport", "check", "check_source", "estimate_space",
    "find", "load", "run", "with_sets", "evaluate_formula", "evaluate_term", "parse", "parse_formula",
    "parse_term", "render", "render_program", "check_formula", "check_term",
]
