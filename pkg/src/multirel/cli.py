"""Command-line entry point: eval, check, find, demo and selftest.

Exit codes: 0 success, 1 counterexample (check) / nothing found (find) / a
failing demo or selftest, 2 usage, syntax or type error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, demos
from .errors import (
    CardinalityLimit, LawSyntaxError, LawTypeError, ResultTooLarge, SpaceTooLarge, TypeMismatch,
    UnknownDemo,
)
from .finsets import Universe
from .lawlab import engine, evaluator, syntax, typecheck
from .notation import parse_binding

EXIT_OK, EXIT_FOUND, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_sets(text: str) -> dict:
    """``"X=1,Y=2"`` -> ``{"X": 1, "Y": 2}``."""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, card = part.partition("=")
        name, card = name.strip(), card.strip()
        if not sep or not name.isidentifier() or not card.isdigit():
            raise UsageError(f"bad set declaration {part!r}; expected NAME=CARDINALITY")
        if name in out:
            raise UsageError(f"set {name!r} given twice")
        out[name] = int(card)
    return out


def _emit(args, doc, text):
    if args.format == "json":
        print(json.dumps(doc, ensure_ascii=False))
    else:
        print(text)


# -- verbs -----------------------------------------------------------------------------------

def cmd_eval(args) -> int:
    if args.expr is None:
        raise UsageError("eval needs --expr")
    universe = Universe(parse_sets(args.sets or ""))
    env = {}
    for text in args.bind:
        name, rel = parse_binding(universe, text)
        if name in env:
            raise UsageError(f"variable {name!r} bound twice")
        env[name] = rel
    var_types = {k: r.typing for k, r in env.items()}
    try:
        node = syntax.parse_term(args.expr)
    except LawSyntaxError as term_error:
        try:
            node = syntax.parse_formula(args.expr)
        except LawSyntaxError:
            raise term_error from None
        typecheck.check_formula(universe, var_types, node)
        value = evaluator.evaluate_formula(node, env)
        _emit(args, {"expr": args.expr, "value": value}, "true" if value else "false")
        return EXIT_OK
    src, tgt = typecheck.check_term(universe, var_types, node)
    value = evaluator.evaluate_term(node, env)
    _emit(args, {"expr": args.expr, "type": f"{src} <-> {tgt}", "value": value.to_json()},
          value.text())
    return EXIT_OK


def _search(args, kind) -> int:
    if args.file is None:
        raise UsageError(f"{kind} needs a law file")
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    if args.sets:
        source = engine.with_sets(source, parse_sets(args.sets))
    lawfile = engine.load(source)
    if not lawfile.laws:
        raise UsageError(f"{args.file} contains no laws")
    max_space = 1 << args.max_space if args.max_space is not None else engine.DEFAULT_MAX_SPACE
    jobs = args.jobs if args.jobs is not None else engine.default_jobs()
    status = EXIT_OK
    for law in lawfile.laws:
        report = engine.run(law, kind, mode=args.mode, samples=args.samples, seed=args.seed,
                            jobs=jobs, max_space=max_space)
        timing = not args.no_timing
        _emit(args, report.to_json(timing=timing), report.to_text(timing=timing))
        if (kind == "check" and report.found) or (kind == "find" and not report.found):
            status = EXIT_FOUND
    return status


def cmd_check(args) -> int:
    return _search(args, "check")


def cmd_find(args) -> int:
    return _search(args, "find")


def cmd_demo(args) -> int:
    if args.list:
        for name in demos.demo_names():
            print(name)
        return EXIT_OK
    if not args.name:
        raise UsageError("demo needs a name; use --list to see them")
    names = demos.demo_names() if args.name == "all" else [args.name]
    status = EXIT_OK
    for name in names:
        result = demos.run_demo(name)
        _emit(args, result.to_json(), result.to_text())
        if not result.passed:
            status = EXIT_FOUND
    return status


def cmd_selftest(args) -> int:
    selected = acceptance.select(args.filter)
    if not selected:
        raise UsageError(f"no acceptance criteria match {args.filter!r}")

    def show(res):
        if args.format == "json":
            print(json.dumps(res.to_json(), ensure_ascii=False), flush=True)
            return
        print(res.line(), flush=True)
        for c in res.checks:
            if not c.passed:
                print(f"    FAIL {c.name}: {c.detail}", flush=True)

    if args.mutate:
        with acceptance.mutation(args.mutate):
            results = acceptance.run_all(args.filter, progress=show)
    else:
        results = acceptance.run_all(args.filter, progress=show)
    passed = sum(r.passed for r in results)
    if args.format != "json":
        print(f"{passed} of {len(results)} criteria pass")
    return EXIT_OK if passed == len(results) else EXIT_FOUND


# -- argument parsing ------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("file", nargs="?", help="law file")
    search.add_argument("--sets", help="override set sizes, e.g. X=2,Y=2")
    search.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    search.add_argument("--samples", type=int, default=engine.DEFAULT_SAMPLES)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: available cores)")
    search.add_argument("--max-space", type=int, default=None, metavar="BITS",
                        help="exhaustive cap as a power of two (default 24)")
    search.add_argument("--no-timing", action="store_true",
                        help="report elapsed time as 0 so reports compare byte for byte")

    parser = _Parser(prog="multirel", description="Relations and multirelations on finite sets.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term or formula")
    p.add_argument("--sets", default="", help="base sets, e.g. X=1,Y=2")
    p.add_argument("--bind", action="append", default=[],
                   help="NAME=LITERAL or NAME:Src<->Tgt=LITERAL (repeatable)")
    p.add_argument("--expr", help="term or formula")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", parents=[common, search], help="check every law in a file")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("find", parents=[common, search], help="search for witnesses")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("demo", parents=[common], help="reproduce a worked example")
    p.add_argument("name", nargs="?", help="demo name, or 'all'")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--filter", help="criterion number, module tag or title word")
    p.add_argument("--mutate", choices=sorted(acceptance.MUTATIONS), help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpaceTooLarge, CardinalityLimit, ResultTooLarge) as exc:
        print(f"multirel: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (UsageError, LawSyntaxError, LawTypeError, TypeMismatch, UnknownDemo,
            ValueError) as exc:
        print(f"multirel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
