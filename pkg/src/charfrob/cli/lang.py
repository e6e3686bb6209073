"""Lexer, parser and static checks for .frob scripts.

A script is a sequence of statements ended by ';':

    ring R = ZZ/5[x,y,z];                 -- polynomial ring
    ring Q = ZZ/5[x,y,z] / (x^4+y^4+z^4); -- quotient ring
    I = ideal(x^6*y*z + x*y*z^18);
    expect frobeniusRoot(1, I) == ideal(x, y^2, z^3);
    print isFRegular(4/5, y^2 - x^3, AtOrigin => true);

Comments start with '--'.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class ScriptSyntaxError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str   # INT, IDENT, STRING, OP, EOF
    value: str
    line: int
    col: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>--[^\n]*) |
    (?P<int>\d+) |
    (?P<ident>[A-Za-z_][A-Za-z0-9_']*) |
    (?P<string>"[^"\n]*") |
    (?P<op>=>|==|!=|\.\.|[=+\-*/^:#()\[\]{},;])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScriptSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            out.append(Token({"int": "INT", "ident": "IDENT", "string": "STRING", "op": "OP"}[kind],
                             value, line, col))
            col += len(value)
        pos = m.end()
    out.append(Token("EOF", "", line, col))
    return out


# ---------------------------------------------------------------------------
# syntax tree


@dataclass
class Node:
    line: int
    col: int


@dataclass
class Num(Node):
    value: Fraction


@dataclass
class Str(Node):
    value: str


@dataclass
class Name(Node):
    ident: str


@dataclass
class BinOp(Node):
    op: str
    left: Any
    right: Any


@dataclass
class Neg(Node):
    operand: Any


@dataclass
class Call(Node):
    func: str
    args: list
    options: dict


@dataclass
class Index(Node):
    target: Any
    index: Any


@dataclass
class ListLit(Node):
    items: list


@dataclass
class Seq(Node):
    items: list


@dataclass
class RingDecl(Node):
    name: str
    p: int | None
    variables: list[str] | None
    base: str | None
    quotient: Any


@dataclass
class Assign(Node):
    name: str
    expr: Any


@dataclass
class Expect(Node):
    expr: Any
    text: str


@dataclass
class Print(Node):
    expr: Any


@dataclass
class ExprStmt(Node):
    expr: Any


@dataclass
class Use(Node):
    name: str


@dataclass
class Script:
    statements: list = field(default_factory=list)
    source: str = ""

    @property
    def expectations(self) -> list[Expect]:
        return [s for s in self.statements if isinstance(s, Expect)]


# ---------------------------------------------------------------------------
# parser


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.lines = text.split("\n")
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, value: str, kind: str = "OP") -> bool:
        t = self.peek()
        return t.kind == kind and t.value == value

    def expect(self, value: str, kind: str = "OP") -> Token:
        t = self.peek()
        if t.kind != kind or t.value != value:
            found = t.value or "end of input"
            raise ScriptSyntaxError(f"expected {value!r}, found {found!r}", t.line, t.col)
        return self.next()

    def error(self, msg: str, t: Token | None = None):
        t = t or self.peek()
        raise ScriptSyntaxError(msg, t.line, t.col)

    # statements

    def parse(self) -> Script:
        stmts = []
        while self.peek().kind != "EOF":
            if self.at(";"):
                self.next()
                continue
            stmts.append(self.statement())
        return Script(stmts, self.text)

    def _span_text(self, start: Token, end: Token) -> str:
        if start.line == end.line:
            return self.lines[start.line - 1][start.col - 1:end.col - 1].strip()
        parts = [self.lines[start.line - 1][start.col - 1:]]
        parts.extend(self.lines[start.line:end.line - 1])
        parts.append(self.lines[end.line - 1][:end.col - 1])
        return " ".join(s.strip() for s in parts).strip()

    def statement(self):
        t = self.peek()
        if t.kind == "IDENT" and t.value == "ring" and self.peek(1).kind == "IDENT":
            node = self.ring_decl()
        elif t.kind == "IDENT" and t.value == "expect":
            self.next()
            start = self.peek()
            e = self.expr()
            node = Expect(t.line, t.col, e, self._span_text(start, self.peek()))
        elif t.kind == "IDENT" and t.value == "print" and not (self.peek(1).kind == "OP" and self.peek(1).value in "=;"):
            self.next()
            node = Print(t.line, t.col, self.expr())
        elif t.kind == "IDENT" and t.value == "use" and self.peek(1).kind == "IDENT":
            self.next()
            node = Use(t.line, t.col, self.next().value)
        elif t.kind == "IDENT" and self.peek(1).kind == "OP" and self.peek(1).value == "=":
            self.next()
            self.next()
            node = Assign(t.line, t.col, t.value, self.expr())
        else:
            node = ExprStmt(t.line, t.col, self.expr())
        self.expect(";")
        return node

    def ring_decl(self):
        t = self.next()
        name = self.next().value
        self.expect("=")
        first = self.peek()
        if first.kind == "IDENT" and first.value == "ZZ":
            self.next()
            self.expect("/")
            pt = self.next()
            if pt.kind != "INT":
                self.error("expected a prime after ZZ/", pt)
            self.expect("[")
            variables = self.var_list()
            self.expect("]")
            quotient = None
            if self.at("/"):
                self.next()
                quotient = self.unary()
            return RingDecl(t.line, t.col, name, int(pt.value), variables, None, quotient)
        if first.kind == "IDENT":
            base = self.next().value
            self.expect("/")
            return RingDecl(t.line, t.col, name, None, None, base, self.unary())
        self.error("expected ZZ/p[...] or an existing ring")

    def var_list(self) -> list[str]:
        out = []
        while True:
            t = self.next()
            if t.kind != "IDENT":
                self.error("expected a variable name", t)
            if self.at(".."):
                self.next()
                u = self.next()
                if u.kind != "IDENT" or len(t.value) != 1 or len(u.value) != 1 or u.value < t.value:
                    self.error("variable ranges run between single letters, like a..e", u)
                out.extend(chr(c) for c in range(ord(t.value), ord(u.value) + 1))
            else:
                out.append(t.value)
            if self.at(","):
                self.next()
                continue
            return out

    # expressions, lowest precedence first

    def expr(self):
        left = self.colon()
        while self.peek().kind == "OP" and self.peek().value in ("==", "!="):
            t = self.next()
            left = BinOp(t.line, t.col, t.value, left, self.colon())
        return left

    def colon(self):
        left = self.additive()
        while self.at(":"):
            t = self.next()
            left = BinOp(t.line, t.col, ":", left, self.additive())
        return left

    def additive(self):
        left = self.term()
        while self.peek().kind == "OP" and self.peek().value in "+-" and self.peek().value:
            t = self.next()
            left = BinOp(t.line, t.col, t.value, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while self.peek().kind == "OP" and self.peek().value in ("*", "/"):
            t = self.next()
            left = BinOp(t.line, t.col, t.value, left, self.unary())
        return left

    def unary(self):
        if self.at("-"):
            t = self.next()
            return Neg(t.line, t.col, self.unary())
        if self.at("+"):
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        base = self.postfix()
        if self.at("^"):
            t = self.next()
            return BinOp(t.line, t.col, "^", base, self.unary())
        return base

    def postfix(self):
        node = self.primary()
        while self.at("#"):
            t = self.next()
            node = Index(t.line, t.col, node, self.primary())
        return node

    def primary(self):
        t = self.peek()
        if t.kind == "INT":
            self.next()
            return Num(t.line, t.col, Fraction(int(t.value)))
        if t.kind == "STRING":
            self.next()
            return Str(t.line, t.col, t.value[1:-1])
        if t.kind == "IDENT":
            self.next()
            if self.at("("):
                return self.call(t)
            if self.at("{"):
                # matrix{{...}} style: a call with one list argument
                return Call(t.line, t.col, t.value, [self.primary()], {})
            return Name(t.line, t.col, t.value)
        if self.at("("):
            self.next()
            items = [self.expr()]
            while self.at(","):
                self.next()
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else Seq(t.line, t.col, items)
        if self.at("{"):
            self.next()
            items = []
            if not self.at("}"):
                items.append(self.expr())
                while self.at(","):
                    self.next()
                    items.append(self.expr())
            self.expect("}")
            return ListLit(t.line, t.col, items)
        found = t.value or "end of input"
        self.error(f"unexpected {found!r}")

    def call(self, name_tok: Token):
        open_tok = self.expect("(")
        args, opts = [], {}

        def unclosed():
            # a statement end inside an argument list means the paren never closed
            t = self.peek()
            if t.kind == "EOF" or (t.kind == "OP" and t.value == ";"):
                raise ScriptSyntaxError("unclosed '('", open_tok.line, open_tok.col)

        if not self.at(")"):
            while True:
                unclosed()
                if self.peek().kind == "IDENT" and self.peek(1).kind == "OP" and self.peek(1).value == "=>":
                    key = self.next().value
                    self.next()
                    opts[key] = self.expr()
                else:
                    if opts:
                        self.error("positional argument after an option")
                    args.append(self.expr())
                if self.at(","):
                    self.next()
                    continue
                break
        unclosed()
        self.expect(")")
        return Call(name_tok.line, name_tok.col, name_tok.value, args, opts)


def parse(text: str) -> Script:
    return Parser(text).parse()


# ---------------------------------------------------------------------------
# static check: every identifier is bound before use


def _names_in(node) -> list[Name]:
    out = []
    if isinstance(node, Name):
        out.append(node)
    elif isinstance(node, BinOp):
        out += _names_in(node.left) + _names_in(node.right)
    elif isinstance(node, Neg):
        out += _names_in(node.operand)
    elif isinstance(node, Call):
        for a in node.args:
            out += _names_in(a)
        for v in node.options.values():
            if not isinstance(v, Name):
                out += _names_in(v)
    elif isinstance(node, Index):
        out += _names_in(node.target) + _names_in(node.index)
    elif isinstance(node, (ListLit, Seq)):
        for a in node.items:
            out += _names_in(a)
    return out


CONSTANTS = {"true", "false", "infinity", "inconclusive"}


def check(script: Script, builtins: set[str]) -> None:
    """Raise ScriptSyntaxError for identifiers used before they are bound."""
    bound = set(CONSTANTS)
    for st in script.statements:
        exprs = []
        if isinstance(st, RingDecl):
            if st.base is not None and st.base not in bound:
                raise ScriptSyntaxError(f"undefined ring {st.base!r}", st.line, st.col)
            if st.variables:
                bound.update(st.variables)
            exprs = [st.quotient] if st.quotient is not None else []
        elif isinstance(st, Assign):
            exprs = [st.expr]
        elif isinstance(st, (Expect, Print, ExprStmt)):
            exprs = [st.expr]
        elif isinstance(st, Use):
            if st.name not in bound:
                raise ScriptSyntaxError(f"undefined ring {st.name!r}", st.line, st.col)
        for e in exprs:
            for n in _names_in(e):
                if n.ident not in bound and n.ident not in builtins:
                    raise ScriptSyntaxError(f"undefined identifier {n.ident!r}", n.line, n.col)
            for c in _calls_in(e):
                if c.func not in builtins:
                    raise ScriptSyntaxError(f"unknown function {c.func!r}", c.line, c.col)
        if isinstance(st, RingDecl):
            bound.add(st.name)
        elif isinstance(st, Assign):
            bound.add(st.name)


def _calls_in(node) -> list[Call]:
    out = []
    if isinstance(node, Call):
        out.append(node)
        for a in node.args:
            out += _calls_in(a)
        for v in node.options.values():
            out += _calls_in(v)
    elif isinstance(node, BinOp):
        out += _calls_in(node.left) + _calls_in(node.right)
    elif isinstance(node, Neg):
        out += _calls_in(node.operand)
    elif isinstance(node, Index):
        out += _calls_in(node.target) + _calls_in(node.index)
    elif isinstance(node, (ListLit, Seq)):
        for a in node.items:
            out += _calls_in(a)
    return out
