"""Lexer, AST, parser and renderer for law files.

Law-file grammar (statements may share a line)::

    set <Name> = <cardinality>
    var <name>[, <name>...] : <Objtype> <-> <Objtype>
    law <formula>

Term precedence, tightest first: prefix ``~`` and postfix ``^ ^i ^d _*``,
then ``; / \\``, then ``* @``, then ``cap icap``, then ``cup icup``, then ``-``.
Comparisons bind looser than every term operator; ``not``, ``and``, ``or``,
``->``, ``<->`` and quantifiers (``forall R, S . body`` or ``forall R: body``)
combine formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..errors import LawSyntaxError

KEYWORDS = {
    "set", "var", "law", "forall", "exists", "not", "and", "or",
    "cup", "cap", "icup", "icap", "syq",
}
FUNCTIONS = {"up", "down", "conv", "dom", "plift", "klift"}
CONSTANTS = {"0", "U", "Id", "one", "lu", "li", "eps", "Om", "Cr", "Au", "Ai"}
PREDICATES = {
    "univalent", "total", "deterministic", "test",
    "inner_univalent", "inner_total", "inner_deterministic",
    "union_closed", "intersection_closed", "up_closed", "down_closed", "convex_closed",
}
COMPARISONS = {"=", "!=", "<=", ">=", "<", "<=H", "<=S", "<=EM", "=H", "=S", "=EM"}
STATEMENT_START = {"set", "var", "law"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<op><->|<=EM(?![\w])|<=H(?![\w])|<=S(?![\w])|=EM(?![\w])|=H(?![\w])|=S(?![\w])
           |<=|>=|!=|->|\^i(?![A-Za-z0-9])|\^d(?![A-Za-z0-9])|_\*|[=<^~;/\\*@\-()\[\],:.])
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)*)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str  # op, int, name, eof
    text: str
    offset: int
    line: int
    column: int


def tokenize(source: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LawSyntaxError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            tokens.append(Token(kind, text, pos, line, pos - line_start + 1))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", len(source), line, pos - line_start + 1))
    return tokens


# -- AST -------------------------------------------------------------------------------

@dataclass(eq=False)
class TypeName:
    name: str


@dataclass(eq=False)
class TypePow:
    inner: object


@dataclass(eq=False)
class Node:
    pos: tuple = field(default=(0, 0), repr=False, kw_only=True)


@dataclass(eq=False)
class Var(Node):
    name: str


@dataclass(eq=False)
class Const(Node):
    name: str
    args: Optional[list] = None


@dataclass(eq=False)
class Unary(Node):
    op: str  # ~ ^ ^i ^d _* or a function name
    arg: Node


@dataclass(eq=False)
class Binary(Node):
    op: str  # ; / \ * @ cap icap cup icup - syq
    left: Node
    right: Node


@dataclass(eq=False)
class Group(Node):
    inner: Node


@dataclass(eq=False)
class Compare(Node):
    op: str
    left: Node
    right: Node


@dataclass(eq=False)
class Pred(Node):
    name: str
    arg: Node


@dataclass(eq=False)
class Not(Node):
    arg: Node


@dataclass(eq=False)
class BoolOp(Node):
    op: str  # and or -> <->
    left: Node
    right: Node


@dataclass(eq=False)
class Binder:
    name: str
    src: object = None
    tgt: object = None


@dataclass(eq=False)
class Quant(Node):
    kind: str  # forall exists
    binders: list
    body: Node
    sep: str = "."


@dataclass(eq=False)
class TermFormula(Node):
    """A bare term where a formula was expected; rejected by the typechecker."""
    term: Node


@dataclass(eq=False)
class SetStmt:
    name: str
    card: int
    offset: int = -1  # source offset of the cardinality


@dataclass(eq=False)
class VarStmt:
    names: list
    src: object
    tgt: object


@dataclass(eq=False)
class LawStmt:
    formula: Node
    text: str
    line: int


@dataclass(eq=False)
class Program:
    statements: list

    @property
    def sets(self):
        return [s for s in self.statements if isinstance(s, SetStmt)]

    @property
    def var_decls(self):
        return [s for s in self.statements if isinstance(s, VarStmt)]

    @property
    def laws(self):
        return [s for s in self.statements if isinstance(s, LawStmt)]


# -- parser ---------------------------------------------------------------------------------

class Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind != "eof" and t.text in texts

    def error(self, message, tok=None):
        tok = tok or self.tok
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        return LawSyntaxError(f"{message}, found {found}", tok.line, tok.column)

    def expect(self, text) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        tok = self.tok
        self.i += 1
        return tok

    def expect_name(self, what="a name") -> Token:
        tok = self.tok
        if tok.kind != "name" or tok.text in KEYWORDS:
            raise self.error(f"expected {what}")
        self.i += 1
        return tok

    # program
    def program(self) -> Program:
        stmts = []
        while self.tok.kind != "eof":
            if self.at("set"):
                self.i += 1
                name = self.expect_name("a set name").text
                self.expect("=")
                if self.tok.kind != "int":
                    raise self.error("expected a cardinality")
                card = int(self.tok.text)
                offset = self.tok.offset
                self.i += 1
                stmts.append(SetStmt(name, card, offset))
            elif self.at("var"):
                self.i += 1
                names = [self.expect_name("a variable name").text]
                while self.at(","):
                    self.i += 1
                    names.append(self.expect_name("a variable name").text)
                self.expect(":")
                src = self.objtype()
                self.expect("<->")
                tgt = self.objtype()
                stmts.append(VarStmt(names, src, tgt))
            elif self.at("law"):
                self.i += 1
                start = self.tok
                formula = self.formula()
                end = self.tokens[self.i - 1]
                text = self.source[start.offset:end.offset + len(end.text)]
                stmts.append(LawStmt(formula, " ".join(text.split()), start.line))
                if not (self.tok.kind == "eof" or self.at(*STATEMENT_START)):
                    raise self.error("expected end of law")
            else:
                raise self.error("expected 'set', 'var' or 'law'")
        return Program(stmts)

    def objtype(self):
        tok = self.expect_name("an object type")
        if tok.text == "P" and self.at("("):
            self.i += 1
            inner = self.objtype()
            self.expect(")")
            return TypePow(inner)
        return TypeName(tok.text)

    # formulas
    def formula(self) -> Node:
        if self.at("forall", "exists"):
            return self.quantifier()
        left = self.implication()
        if self.at("<->"):
            tok = self.tok
            self.i += 1
            right = self.formula()
            return BoolOp("<->", left, right, pos=(tok.line, tok.column))
        return left

    def quantifier(self) -> Node:
        tok = self.tok
        kind = tok.text
        self.i += 1
        binders = []
        sep = None
        while True:
            name = self.expect_name("a bound variable").text
            binder = Binder(name)
            if self.at(":"):
                save = self.i
                self.i += 1
                try:
                    binder.src = self.objtype()
                    self.expect("<->")
                    binder.tgt = self.objtype()
                except LawSyntaxError:
                    self.i = save + 1
                    binder.src = binder.tgt = None
                    sep = ":"
            binders.append(binder)
            if sep is not None:
                break
            if self.at(","):
                self.i += 1
                continue
            if self.at(".", ":"):
                sep = self.tok.text
                self.i += 1
                break
            raise self.error("expected ',', '.' or ':' after quantified variables")
        body = self.formula()
        return Quant(kind, binders, body, sep, pos=(tok.line, tok.column))

    def implication(self) -> Node:
        left = self.disjunction()
        if self.at("->"):
            tok = self.tok
            self.i += 1
            right = self.formula_no_iff()
            return BoolOp("->", left, right, pos=(tok.line, tok.column))
        return left

    def formula_no_iff(self) -> Node:
        if self.at("forall", "exists"):
            return self.quantifier()
        return self.implication()

    def disjunction(self) -> Node:
        left = self.conjunction()
        while self.at("or"):
            tok = self.tok
            self.i += 1
            left = BoolOp("or", left, self.conjunction(), pos=(tok.line, tok.column))
        return left

    def conjunction(self) -> Node:
        left = self.negation()
        while self.at("and"):
            tok = self.tok
            self.i += 1
            left = BoolOp("and", left, self.negation(), pos=(tok.line, tok.column))
        return left

    def negation(self) -> Node:
        if self.at("not"):
            tok = self.tok
            self.i += 1
            return Not(self.negation(), pos=(tok.line, tok.column))
        if self.at("forall", "exists"):
            return self.quantifier()
        return self.atom_formula()

    def atom_formula(self) -> Node:
        tok = self.tok
        if tok.kind == "name" and tok.text in PREDICATES and self.peek().text == "(":
            self.i += 2
            arg = self.term()
            self.expect(")")
            return Pred(tok.text, arg, pos=(tok.line, tok.column))
        if self.at("("):
            save = self.i
            try:
                return self.comparison()
            except LawSyntaxError as term_error:
                self.i = save + 1
                try:
                    inner = self.formula()
                    self.expect(")")
                except LawSyntaxError as formula_error:
                    raise max(term_error, formula_error,
                              key=lambda e: (e.line or 0, e.column or 0)) from None
                return Group(inner, pos=(tok.line, tok.column))
        return self.comparison()

    def comparison(self) -> Node:
        tok = self.tok
        left = self.term()
        if self.tok.kind == "op" and self.tok.text in COMPARISONS:
            op = self.tok
            self.i += 1
            right = self.term()
            return Compare(op.text, left, right, pos=(op.line, op.column))
        return TermFormula(left, pos=(tok.line, tok.column))

    # terms
    def term(self) -> Node:
        left = self.union_level()
        while self.at("-"):
            tok = self.tok
            self.i += 1
            left = Binary("-", left, self.union_level(), pos=(tok.line, tok.column))
        return left

    def union_level(self) -> Node:
        left = self.inter_level()
        while self.at("cup", "icup"):
            tok = self.tok
            self.i += 1
            left = Binary(tok.text, left, self.inter_level(), pos=(tok.line, tok.column))
        return left

    def inter_level(self) -> Node:
        left = self.peleg_level()
        while self.at("cap", "icap"):
            tok = self.tok
            self.i += 1
            left = Binary(tok.text, left, self.peleg_level(), pos=(tok.line, tok.column))
        return left

    def peleg_level(self) -> Node:
        left = self.seq_level()
        while self.at("*", "@"):
            tok = self.tok
            self.i += 1
            left = Binary(tok.text, left, self.seq_level(), pos=(tok.line, tok.column))
        return left

    def seq_level(self) -> Node:
        left = self.prefix()
        while self.at(";", "/", "\\"):
            tok = self.tok
            self.i += 1
            left = Binary(tok.text, left, self.prefix(), pos=(tok.line, tok.column))
        return left

    def prefix(self) -> Node:
        if self.at("~"):
            tok = self.tok
            self.i += 1
            return Unary("~", self.prefix(), pos=(tok.line, tok.column))
        return self.postfix()

    def postfix(self) -> Node:
        node = self.primary()
        while self.at("^", "^i", "^d", "_*"):
            tok = self.tok
            self.i += 1
            node = Unary(tok.text, node, pos=(tok.line, tok.column))
        return node

    def primary(self) -> Node:
        tok = self.tok
        pos = (tok.line, tok.column)
        if self.at("("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            return Group(inner, pos=pos)
        if tok.kind == "int":
            if tok.text != "0":
                raise self.error("only the constant 0 may be written as a number")
            self.i += 1
            return Const("0", self.type_args(), pos=pos)
        if tok.kind != "name" or tok.text in KEYWORDS - {"syq"}:
            raise self.error("expected a term")
        self.i += 1
        if tok.text == "syq":
            self.expect("(")
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(")")
            return Binary("syq", left, right, pos=pos)
        if tok.text in FUNCTIONS and self.at("("):
            self.i += 1
            arg = self.term()
            self.expect(")")
            return Unary(tok.text, arg, pos=pos)
        if tok.text in CONSTANTS:
            return Const(tok.text, self.type_args(), pos=pos)
        return Var(tok.text, pos=pos)

    def type_args(self):
        if not self.at("["):
            return None
        self.i += 1
        args = [self.objtype()]
        while self.at(","):
            self.i += 1
            args.append(self.objtype())
        self.expect("]")
        return args


def parse(source: str) -> Program:
    return Parser(source).program()


def parse_term(source: str) -> Node:
    p = Parser(source)
    node = p.term()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return node


def parse_formula(source: str) -> Node:
    p = Parser(source)
    node = p.formula()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return node


# -- rendering ---------------------------------------------------------------------------------

def render_type(t) -> str:
    if isinstance(t, TypePow):
        return f"P({render_type(t.inner)})"
    return t.name


def render(node) -> str:
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        if node.args is None:
            return node.name
        return f"{node.name}[{','.join(render_type(a) for a in node.args)}]"
    if isinstance(node, Group):
        return f"({render(node.inner)})"
    if isinstance(node, Unary):
        if node.op in FUNCTIONS:
            return f"{node.op}({render(node.arg)})"
        if node.op == "~":
            return f"~{render(node.arg)}"
        return f"{render(node.arg)}{node.op}"
    if isinstance(node, Binary):
        if node.op == "syq":
            return f"syq({render(node.left)}, {render(node.right)})"
        return f"{render(node.left)} {node.op} {render(node.right)}"
    if isinstance(node, Compare):
        return f"{render(node.left)} {node.op} {render(node.right)}"
    if isinstance(node, Pred):
        return f"{node.name}({render(node.arg)})"
    if isinstance(node, Not):
        return f"not {render(node.arg)}"
    if isinstance(node, BoolOp):
        return f"{render(node.left)} {node.op} {render(node.right)}"
    if isinstance(node, Quant):
        binders = []
        for b in node.binders:
            if b.src is not None:
                binders.append(f"{b.name} : {render_type(b.src)} <-> {render_type(b.tgt)}")
            else:
                binders.append(b.name)
        return f"{node.kind} {', '.join(binders)} {node.sep} {render(node.body)}"
    if isinstance(node, TermFormula):
        return render(node.term)
    raise TypeError(f"cannot render {node!r}")


def render_program(program: Program) -> str:
    lines = []
    for s in program.statements:
        if isinstance(s, SetStmt):
            lines.append(f"set {s.name} = {s.card}")
        elif isinstance(s, VarStmt):
            lines.append(f"var {', '.join(s.names)} : {render_type(s.src)} <-> {render_type(s.tgt)}")
        else:
            lines.append(f"law {render(s.formula)}")
    return "\n".join(lines)
