"""Text grammar for polynomials and differential forms.

    expr   := term (("+" | "-") term)*
    term   := ["-"] power ("*" power)*
    power  := atom ["^" ["-"] INT]
    atom   := INT | NAME | "(" expr ")"

A NAME is either a declared variable or ``d<variable>`` for its
differential. ``*`` between forms is the wedge product; ``^`` is only
allowed on functions (negative exponents need a unit monomial, i.e. a
Laurent variable). Whitespace is ignored.

Examples: ``3*x^2*y - x^-1 + 2``, ``c*x^-1*dx``, ``x*dx*dy``.
"""

from __future__ import annotations

import re

from .derham import DifferentialForm
from .errors import ParseError
from .exactalg.poly import LaurentPolynomial, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos, text=text)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(f"{msg} at position {tok[2]}", position=tok[2], text=self.text)

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.error(f"expected {op!r}", t)

    def parse(self) -> DifferentialForm:
        out = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return out

    def expr(self):
        out = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        neg = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            neg = True
        out = self.power()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            out = out * self.power()
        return -out if neg else out

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "int":
                self.error("expected an integer exponent", t)
            if base.degrees - {0}:
                self.error("powers of forms of positive degree are not allowed", tok)
            try:
                f = base.function_part() ** (sign * t[1])
            except ValueError as exc:
                self.error(str(exc), tok)
            return DifferentialForm.function(f)
        return base

    def atom(self):
        t = self.take()
        ring = self.ring
        if t[0] == "int":
            return DifferentialForm.function(ring.const(t[1]))
        if t[0] == "name":
            name = t[1]
            if name in ring.variables:
                return DifferentialForm.function(ring.gen(name))
            if name.startswith("d") and name[1:] in ring.variables:
                return DifferentialForm.dx(ring, name[1:])
            self.error(f"unknown symbol {name!r}", t)
        if t[0] == "op" and t[1] == "(":
            out = self.expr()
            self.expect(")")
            return out
        self.error("unexpected token", t)


def parse_form(text: str, ring: PolyRing) -> DifferentialForm:
    return _Parser(str(text), ring).parse()


def parse_polynomial(text: str, ring: PolyRing) -> LaurentPolynomial:
    form = parse_form(text, ring)
    if form.degrees - {0}:
        raise ParseError(f"expected a function, got a form of degree {sorted(form.degrees)}",
                         position=0, text=str(text))
    return form.function_part()


# ---------------------------------------------------------------------------
# Witt vector expressions
#
#   wexpr  := wterm (("+" | "-") wterm)*
#   wterm  := ["-"] watom ("*" watom)*
#   watom  := INT | "[" polynomial "]" | ("V" | "F") "(" wexpr ")" | "(" wexpr ")"
#
# ``[a]`` is the Teichmuller lift of a polynomial over F_p; INT is the image of
# an integer. V keeps the truncation length.



class _WittParser:
    def __init__(self, text: str, ring: PolyRing, p: int, r: int):
        self.text, self.ring, self.p, self.r = text, ring, p, r
        self.pos = 0

    def error(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise ParseError(f"{msg} at position {pos}", position=pos, text=self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        out = self.expr()
        if self.peek():
            self.error("unexpected trailing input")
        return out

    def expr(self):
        out = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        neg = False
        if self.peek() == "-":
            self.pos += 1
            neg = True
        out = self.atom()
        while self.peek() == "*":
            self.pos += 1
            out = out * self.atom()
        return -out if neg else out

    def atom(self):
        from .witt import WittVector, frobenius, verschiebung

        ch = self.peek()
        start = self.pos
        if ch.isdigit():
            m = re.match(r"\d+", self.text[self.pos:])
            self.pos += m.end()
            return WittVector.from_int(int(m.group()), self.p, self.r, self.ring)
        if ch == "[":
            close = self.text.find("]", self.pos)
            if close < 0:
                self.error("unclosed '['")
            inner = self.text[self.pos + 1:close]
            try:
                a = parse_polynomial(inner, self.ring)
            except ParseError as exc:
                self.error("bad polynomial inside brackets", start + 1 + (exc.position or 0))
            self.pos = close + 1
            return WittVector.teichmuller(a, self.p, self.r)
        if ch in ("V", "F"):
            self.pos += 1
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return verschiebung(arg) if ch == "V" else frobenius(arg)
        if ch == "(":
            self.pos += 1
            out = self.expr()
            self.expect(")")
            return out
        self.error("unexpected end of input" if not ch else f"unexpected character {ch!r}")


def parse_witt(text: str, p: int, r: int, ring: PolyRing | None = None):
    """Evaluate a Witt vector expression in W_r(F_p[t]) (or W_r of ``ring``)."""
    ring = ring or PolyRing(("t",), (False,), p)
    return _WittParser(str(text), ring, p, r).parse()
