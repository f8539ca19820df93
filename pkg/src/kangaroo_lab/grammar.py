"""Text form of polynomials: ``z^2 + x1^3*x2 + (a+1)*x1*x2^3``.

The parser accepts sums, differences, products, powers and parentheses
over integers, the variables z, x1..xn and the extension generator a.
The printer emits the canonical form (graded lex, z greatest, ascending
degree), which the parser reads back to the same polynomial.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .poly import INF, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|(z|x\d+|a)|(\*\*|[-+*^()]))")


def var_name(i):
    return "z" if i == 0 else f"x{i}"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    F = f.field
    parts = []
    for m, c in f:
        mon = "*".join(var_name(i) + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
        coef = F.format(c)
        if F.k > 1 and " + " in coef:
            coef = f"({coef.replace(' ', '')})"
        elif F.k > 1:
            coef = coef.replace(" ", "")
        if not mon:
            parts.append(coef)
        elif coef == "1":
            parts.append(mon)
        else:
            parts.append(f"{coef}*{mon}")
    return " + ".join(parts)


class _Parser:
    def __init__(self, text, field, n, precision, line, col0):
        self.text = text
        self.field = field
        self.n = n
        self.nv = n + 1
        self.precision = precision
        self.line = line
        self.col0 = col0
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            mt = _TOKEN.match(stripped, pos)
            if not mt:
                self.fail(f"unexpected character {stripped[pos:].lstrip()[:1]!r}", pos + len(stripped[pos:]) - len(stripped[pos:].lstrip()))
            start = mt.start(mt.lastindex)
            kind = ("int", "name", "op")[mt.lastindex - 1]
            self.tokens.append((kind, mt.group(mt.lastindex), start))
            pos = mt.end()
        self.i = 0

    def fail(self, msg, pos=None):
        col = None if pos is None else self.col0 + pos + 1
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.fail("empty polynomial", 0)
        value = self.expr()
        kind, tok, pos = self.peek()
        if kind is not None:
            self.fail(f"unexpected {tok!r}", pos)
        return value

    def expr(self):
        kind, tok, _ = self.peek()
        negate = False
        if tok in ("+", "-"):
            self.take()
            negate = tok == "-"
        value = self.term()
        if negate:
            value = -value
        while True:
            kind, tok, _ = self.peek()
            if tok not in ("+", "-"):
                return value
            self.take()
            rhs = self.term()
            value = value + rhs if tok == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while self.peek()[1] == "*":
            self.take()
            value = value * self.power()
        return value

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            kind, tok, pos = self.take()
            if kind != "int":
                self.fail("exponent must be a non-negative integer", pos)
            base = base ** int(tok)
        return base

    def atom(self):
        kind, tok, pos = self.take()
        F, nv = self.field, self.nv
        if kind == "int":
            return Poly.constant(F, nv, int(tok))
        if kind == "name":
            if tok == "z":
                return Poly.var(F, nv, 0)
            if tok == "a":
                if F.k == 1:
                    self.fail("extension generator 'a' used over a prime field", pos)
                return Poly(F, nv, {(0,) * nv: F.p})
            idx = int(tok[1:])
            if not 1 <= idx <= self.n:
                self.fail(f"unknown variable {tok} (ring has x1..x{self.n})", pos)
            return Poly.var(F, nv, idx)
        if tok == "(":
            inner = self.expr()
            k2, t2, p2 = self.take()
            if t2 != ")":
                self.fail("expected ')'", p2)
            return inner
        if kind is None:
            self.fail("unexpected end of polynomial", pos)
        self.fail(f"unexpected {tok!r}", pos)


def parse_poly(text: str, field, n: int, precision=INF, line=None, col0=0) -> Poly:
    """Parse a polynomial in z, x1..xn; the result is truncated to ``precision``."""
    f = _Parser(text, field, n, precision, line, col0).parse()
    if precision != INF:
        f = Poly(f.field, f.nvars, f.terms, precision)
    return f
