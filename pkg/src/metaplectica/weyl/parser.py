"""Infix expressions over ``Q, D, E, a, ad, V``.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER | SYMBOL | "(" expr ")" | "[" expr "," expr "]"

``[x, y]`` is the commutator.  Expressions that use ``Q``, ``D`` or ``E`` are
evaluated in the extended Heisenberg algebra, with ``a`` and ``ad`` rewritten
through ``a = (Q + D)/sqrt2``, ``ad = (Q - D)/sqrt2``; otherwise they are
evaluated in the boson algebra.  ``V`` cannot be mixed with ``Q``, ``D``, ``E``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple, Union

from ..errors import ExpressionSyntaxError
from .algebra import AlgebraElement, BosonElement, commutator, from_boson

__all__ = ["tokenize", "parse_expression"]

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|(ad|a|Q|D|E|V)|(.))")

Element = Union[AlgebraElement, BosonElement]


def tokenize(text: str) -> List[Tuple[str, str]]:
    """``[(kind, value), ...]`` with kind in {"num", "sym", "op"}."""
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, sym, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif sym is not None:
            out.append(("sym", sym))
        elif op in "+-*^()[],":
            out.append(("op", op))
        else:
            raise ExpressionSyntaxError(f"unexpected character {op!r} at position {m.start(3)}")
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, weyl: bool, exact: bool):
        self.tokens = tokens
        self.i = 0
        self.weyl = weyl
        self.exact = exact
        cls = AlgebraElement if weyl else BosonElement
        self.cls = cls
        if weyl:
            Q, D, E = AlgebraElement.Q(), AlgebraElement.D(), AlgebraElement.E()
            self.symbols = {
                "Q": Q,
                "D": D,
                "E": E,
                "a": from_boson(BosonElement.a(), exact),
                "ad": from_boson(BosonElement.ad(), exact),
            }
        else:
            self.symbols = {"a": BosonElement.a(), "ad": BosonElement.ad(), "V": BosonElement.V()}

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ExpressionSyntaxError("unexpected end of expression")
        if value is not None and tok[1] != value:
            raise ExpressionSyntaxError(f"expected {value!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek() == ("op", "*"):
            self.take()
            out = out * self.unary()
        return out

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num" or not value.isdigit():
                raise ExpressionSyntaxError("exponent must be a nonnegative integer")
            base = base ** int(value)
        return base

    def atom(self):
        kind, value = self.take()
        if kind == "num":
            num = int(value) if value.isdigit() else (Fraction(value) if self.exact else float(value))
            return self.cls.scalar(num)
        if kind == "sym":
            return self.symbols[value]
        if value == "(":
            out = self.expr()
            self.take(")")
            return out
        if value == "[":
            x = self.expr()
            self.take(",")
            y = self.expr()
            self.take("]")
            return commutator(x, y)
        raise ExpressionSyntaxError(f"unexpected token {value!r}")


def parse_expression(text: str, exact: bool = False) -> Element:
    """Parse and evaluate ``text`` to a normal-ordered element.

    Raises
    ------
    ExpressionSyntaxError
        On malformed input or when ``V`` is mixed with ``Q``, ``D`` or ``E``.
    """
    tokens = tokenize(text)
    if not tokens:
        raise ExpressionSyntaxError("empty expression")
    symbols = {v for k, v in tokens if k == "sym"}
    weyl = bool(symbols & {"Q", "D", "E"})
    if weyl and "V" in symbols:
        raise ExpressionSyntaxError("V cannot be combined with Q, D or E")
    parser = _Parser(tokens, weyl, exact)
    out = parser.expr()
    if parser.i != len(tokens):
        raise ExpressionSyntaxError(f"unexpected token {tokens[parser.i][1]!r}")
    return out
