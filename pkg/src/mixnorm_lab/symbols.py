"""Tiny arithmetic grammar for multiplier symbols.

Accepted syntax: numeric literals, coordinates ``xi1 .. xi9`` (``xi`` alone in
one dimension), the operators ``+ - * / ^`` with usual precedence (``^`` binds
tightest, right-associative), parentheses, ``abs(...)``, ``exp(...)``, and the
anisotropic ``bracket(xi)``.  Expressions are parsed into a tree and evaluated
on numpy meshes directly; nothing is ever passed to ``eval``.

    parse_symbol("bracket(xi)^2 / (1 + abs(xi1))", n=2, a=(1, 2))
"""

from __future__ import annotations

import re

import numpy as np

from .anisotropy import as_anisotropy, bracket
from .multipliers import MultiplierSpec

__all__ = ["SymbolSyntaxError", "parse_expression", "parse_symbol"]


class SymbolSyntaxError(ValueError):
    """The symbol expression does not conform to the grammar."""


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = ("abs", "exp", "bracket")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None or mo.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise SymbolSyntaxError(f"cannot tokenize {rest!r}")
        pos = mo.end()
        if mo.lastgroup == "num":
            tokens.append(("num", float(mo.group("num"))))
        elif mo.lastgroup == "name":
            tokens.append(("name", mo.group("name")))
        else:
            tokens.append(("op", mo.group("op")))
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, n):
        self.tokens = tokens
        self.pos = 0
        self.n = n

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.next()
        if kind != "op" or val != op:
            raise SymbolSyntaxError(f"expected {op!r}, found {val!r}")

    # expr := term (('+'|'-') term)*
    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            node = (op, node, self.term())
        return node

    # term := factor (('*'|'/') factor)*
    def term(self):
        node = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.next()
            node = (op, node, self.factor())
        return node

    # factor := ('-'|'+') factor | atom ('^' factor)?
    # exponentiation is right-associative and binds tighter than unary minus
    def factor(self):
        if self.peek() == ("op", "-"):
            self.next()
            return ("neg", self.factor())
        if self.peek() == ("op", "+"):
            self.next()
            return self.factor()
        node = self.atom()
        if self.peek() == ("op", "^"):
            self.next()
            node = ("^", node, self.factor())
        return node

    def atom(self):
        kind, val = self.next()
        if kind == "num":
            return ("num", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "name":
            if val in _FUNCTIONS:
                self.expect_op("(")
                if val == "bracket":
                    kind2, val2 = self.next()
                    if (kind2, val2) != ("name", "xi"):
                        raise SymbolSyntaxError("bracket takes the full vector: bracket(xi)")
                    self.expect_op(")")
                    return ("bracket",)
                node = self.expr()
                self.expect_op(")")
                return (val, node)
            if val == "xi":
                if self.n != 1:
                    raise SymbolSyntaxError(
                        "bare 'xi' is only valid in one dimension; use xi1..xi%d" % self.n
                    )
                return ("coord", 0)
            mo = re.fullmatch(r"xi(\d+)", val)
            if mo:
                k = int(mo.group(1))
                if not 1 <= k <= self.n:
                    raise SymbolSyntaxError(f"coordinate {val} out of range 1..{self.n}")
                return ("coord", k - 1)
            raise SymbolSyntaxError(f"unknown identifier {val!r}")
        raise SymbolSyntaxError(f"unexpected token {val!r}")


def parse_expression(text: str, n: int):
    """Parse to an evaluation tree; raises SymbolSyntaxError on bad input."""
    parser = _Parser(_tokenize(text), n)
    tree = parser.expr()
    kind, val = parser.next()
    if kind != "end":
        raise SymbolSyntaxError(f"trailing input starting at {val!r}")
    return tree


def _evaluate(node, pts: np.ndarray, a) -> np.ndarray:
    op = node[0]
    if op == "num":
        return np.full(pts.shape[:-1], node[1], dtype=np.complex128)
    if op == "coord":
        return pts[..., node[1]].astype(np.complex128)
    if op == "neg":
        return -_evaluate(node[1], pts, a)
    if op == "abs":
        return np.abs(_evaluate(node[1], pts, a)).astype(np.complex128)
    if op == "exp":
        return np.exp(_evaluate(node[1], pts, a))
    if op == "bracket":
        return bracket(pts, a, tol=1e-15).astype(np.complex128)
    lhs = _evaluate(node[1], pts, a)
    rhs = _evaluate(node[2], pts, a)
    if op == "+":
        return lhs + rhs
    if op == "-":
        return lhs - rhs
    if op == "*":
        return lhs * rhs
    if op == "/":
        with np.errstate(divide="ignore", invalid="ignore"):
            return lhs / rhs
    if op == "^":
        with np.errstate(invalid="ignore"):
            return lhs**rhs
    raise SymbolSyntaxError(f"unknown node {op!r}")


def parse_symbol(text: str, n: int, a, alpha: float = 0.0,
                 smoothness: int = 3) -> MultiplierSpec:
    """Compile an expression into a finite-difference MultiplierSpec."""
    av = as_anisotropy(a)
    if av.n != n:
        raise ValueError(f"anisotropy has {av.n} entries, expected {n}")
    tree = parse_expression(text, n)

    def sym(pts):
        return _evaluate(tree, np.asarray(pts, dtype=float), av)

    return MultiplierSpec(sym, alpha=alpha, smoothness=smoothness, name=text)
