"""Recursive-descent parser for polynomial expressions.

Grammar (tightest first): ^  >  unary -  >  *  >  + -
No implicit multiplication.  Exponents must be non-negative integer
literals.  Decimal constants convert exactly (1.5 -> 3/2).  Errors carry
line/column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial, VariableSpace


class ExpressionError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # num ident op end
    text: str
    line: int
    column: int


def _tokenize(text: str, line_offset: int = 1) -> list[_Token]:
    tokens = []
    line = line_offset
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(_Token("num", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in "+-*^()":
            tokens.append(_Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], space: VariableSpace):
        self.tokens = tokens
        self.pos = 0
        self.space = space

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, msg: str, tok: _Token):
        raise ExpressionError(msg, tok.line, tok.column)

    def parse(self) -> Polynomial:
        p = self.sum()
        t = self.peek()
        if t.kind != "end":
            hint = ""
            if t.kind in ("num", "ident") or (t.kind == "op" and t.text == "("):
                hint = " (implicit multiplication is not allowed; write '*')"
            self.fail(f"unexpected {t.text!r}{hint}", t)
        return p

    def sum(self) -> Polynomial:
        t = self.peek()
        left = self.product()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                right = self.product()
                left = left + right if t.text == "+" else left - right
            else:
                return left

    def product(self) -> Polynomial:
        left = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.next()
                left = left * self.unary()
            else:
                return left

    def unary(self) -> Polynomial:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return -self.unary()
        if t.kind == "op" and t.text == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            e = self.next()
            if e.kind != "num" or "." in e.text:
                self.fail("exponent must be a non-negative integer literal", e)
            p = base ** int(e.text)
            nxt = self.peek()
            if nxt.kind == "op" and nxt.text == "^":
                self.fail("chained '^' is ambiguous; parenthesize", nxt)
            return p
        return base

    def atom(self) -> Polynomial:
        t = self.next()
        if t.kind == "num":
            # decimals are exact: Fraction("1.5") == 3/2
            return Polynomial.constant(self.space, Fraction(t.text))
        if t.kind == "ident":
            if t.text not in self.space:
                self.fail(f"unknown variable {t.text!r}", t)
            return Polynomial.variable(self.space, t.text)
        if t.kind == "op" and t.text == "(":
            p = self.sum()
            c = self.next()
            if not (c.kind == "op" and c.text == ")"):
                self.fail("expected ')'", c)
            return p
        self.fail(f"expected a number, variable or '(', got {t.text!r}"
                  if t.kind != "end" else "unexpected end of expression", t)


def parse_expression(text: str, space: VariableSpace, line_offset: int = 1) -> Polynomial:
    """Parse an expression into an exact Polynomial over ``space``."""
    return _Parser(_tokenize(text, line_offset), space).parse()
