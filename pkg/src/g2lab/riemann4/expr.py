"""Recursive-descent parser for scalar metric-coefficient expressions.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?          # right associative, binds tighter than unary minus on the left
    atom    := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'
    VAR     := x1 | x2 | x3 | x4
    FUNC    := sin | cos | exp | sqrt

So ``-x1^2`` is ``-(x1^2)`` and ``2^-1`` is ``0.5``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np
import sympy as sp

__all__ = [
    "ParseError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "Node",
    "parse_expr",
    "evaluate",
    "to_sympy",
    "VARIABLES",
    "FUNCTIONS",
]

VARIABLES = ("x1", "x2", "x3", "x4")
FUNCTIONS = {
    "sin": (np.sin, sp.sin),
    "cos": (np.cos, sp.cos),
    "exp": (np.exp, sp.exp),
    "sqrt": (np.sqrt, sp.sqrt),
}


class ParseError(ValueError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(src: str, line0: int = 1, col0: int = 1) -> list[_Token]:
    tokens = []
    pos, line, col = 0, line0, col0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, text, line, col))
        for ch in text:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.line, self.tok.column)
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.line, self.tok.column)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in VARIABLES:
                return Var(t.text)
            raise ParseError(f"unknown name {t.text!r}", t.line, t.column)
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = t.text or "end of input"
        raise ParseError(f"unexpected {found!r}", t.line, t.column)


def parse_expr(src: str, line: int = 1, column: int = 1) -> Node:
    """Parse one expression; ``line``/``column`` offset error positions."""
    return _Parser(_tokenize(src, line, column)).parse()


def evaluate(node: Node, x) -> float | np.ndarray:
    """Reference tree-walking evaluation at ``x = (x1, x2, x3, x4)``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x[VARIABLES.index(node.name)]
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func][0](evaluate(node.arg, x))
    a, b = evaluate(node.left, x), evaluate(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return a ** b


def to_sympy(node: Node, symbols) -> sp.Expr:
    """Translate the tree into a sympy expression in ``symbols`` (x1..x4)."""
    if isinstance(node, Num):
        v = node.value
        return sp.Integer(int(v)) if v.is_integer() and abs(v) < 2 ** 53 else sp.Float(v)
    if isinstance(node, Var):
        return symbols[VARIABLES.index(node.name)]
    if isinstance(node, Neg):
        return -to_sympy(node.operand, symbols)
    if isinstance(node, Call):
        return FUNCTIONS[node.func][1](to_sympy(node.arg, symbols))
    a, b = to_sympy(node.left, symbols), to_sympy(node.right, symbols)
    return {
        "+": lambda: a + b,
        "-": lambda: a - b,
        "*": lambda: a * b,
        "/": lambda: a / b,
        "^": lambda: a ** b,
    }[node.op]()

