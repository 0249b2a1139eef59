"""Recursive-descent parser for polynomial expressions in ``n``.

Grammar (whitespace ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary | implicit)*
    implicit:= <juxtaposed factor starting with 'n' or '('>
    unary   := ('+' | '-') unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER ('/' NUMBER)? | 'n' | '(' expr ')'

``3n^2``, ``2n(n+1)`` and ``-2n^3(2n+3)`` are all accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Polynomial

MAX_EXPONENT = 64


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos} in {text!r}")


@dataclass
class _Token:
    kind: str  # NUM, VAR, OP, LPAR, RPAR, END
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(_Token("NUM", text[i:j], i))
            i = j
        elif ch == "n":
            toks.append(_Token("VAR", ch, i))
            i += 1
        elif ch in "+-*/^":
            toks.append(_Token("OP", ch, i))
            i += 1
        elif ch in "({[":
            toks.append(_Token("LPAR", ch, i))
            i += 1
        elif ch in ")}]":
            toks.append(_Token("RPAR", ch, i))
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            raise PolySyntaxError(f"unknown identifier {text[i:j]!r}", text, i)
        else:
            raise PolySyntaxError(f"unexpected character {ch!r}", text, i)
    toks.append(_Token("END", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.toks[self.i]

    def advance(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Token | None = None):
        tok = tok or self.tok
        raise PolySyntaxError(msg, self.text, tok.pos)

    def parse(self) -> Polynomial:
        if self.tok.kind == "END":
            self.error("empty expression")
        p = self.expr()
        if self.tok.kind != "END":
            self.error(f"unexpected {self.tok.value!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.tok.kind == "OP" and self.tok.value in "+-":
            op = self.advance().value
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while True:
            t = self.tok
            if t.kind == "OP" and t.value == "*":
                self.advance()
                p = p * self.unary()
            elif t.kind in ("VAR", "LPAR"):
                p = p * self.power()
            elif t.kind == "NUM":
                self.error("number cannot follow a factor without '*'")
            else:
                return p

    def unary(self) -> Polynomial:
        t = self.tok
        if t.kind == "OP" and t.value in "+-":
            self.advance()
            p = self.unary()
            return -p if t.value == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.tok.kind == "OP" and self.tok.value == "^":
            self.advance()
            t = self.tok
            if t.kind == "OP" and t.value == "-":
                self.error("negative exponent")
            if t.kind != "NUM":
                self.error("exponent must be a nonnegative integer literal")
            self.advance()
            if self.tok.kind == "OP" and self.tok.value == "/":
                self.error("non-integer exponent")
            k = int(t.value)
            if k > MAX_EXPONENT:
                self.error(f"exponent {k} exceeds limit {MAX_EXPONENT}", t)
            base = base**k
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "NUM":
            self.advance()
            val = Fraction(int(t.value))
            if self.tok.kind == "OP" and self.tok.value == "/":
                self.advance()
                d = self.tok
                if d.kind != "NUM":
                    self.error("expected denominator")
                self.advance()
                if int(d.value) == 0:
                    self.error("zero denominator", d)
                val = val / int(d.value)
            return Polynomial.constant(val)
        if t.kind == "VAR":
            self.advance()
            return Polynomial([0, 1])
        if t.kind == "LPAR":
            self.advance()
            p = self.expr()
            if self.tok.kind != "RPAR":
                self.error("expected ')'")
            self.advance()
            return p
        if t.kind == "END":
            self.error("unexpected end of input")
        self.error(f"unexpected {t.value!r}")


def parse_poly(text: str) -> Polynomial:
    """Parse a polynomial expression in ``n`` into its expanded exact form."""
    return _Parser(text).parse()
