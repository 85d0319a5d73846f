"""Text form of polynomials.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Juxtaposition is not multiplication, so ``2x`` is a syntax error.  Division
is allowed when the divisor is a nonzero constant of the ring; in a Q(x)
ring that includes any nonzero rational function of x, so ``y/(x+1)`` parses.
"""

from __future__ import annotations

import re

from gmpy2 import mpq

from ..errors import ParseError, UnknownVariable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.start(m.lastindex) != _skip_ws(text, pos):
            raise ParseError(f"unexpected character {text[_skip_ws(text, pos)]!r}", text, _skip_ws(text, pos))
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            if op == "**":
                raise ParseError("use '^' for powers", text, start)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", "", n))
    return out


def _skip_ws(text, pos):
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


class _Parser:
    def __init__(self, text, ring):
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

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, value):
        t = self.peek()
        if t[0] != "op" or t[1] != value:
            self.fail(f"expected {value!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            self.fail(f"unexpected {t[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                q = self.term()
                p = p + q if t[1] == "+" else p - q
            else:
                return p

    def term(self):
        p = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "*/":
                self.take()
                start = self.peek()
                q = self.unary()
                if t[1] == "*":
                    p = p * q
                else:
                    if not q.is_constant():
                        self.fail("division is only allowed by a constant", start)
                    if not q:
                        self.fail("division by zero", start)
                    p = p * (self.ring.cone / q.constant_coeff())
            else:
                return p

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self):
        p = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.peek()
            if e[0] != "int":
                self.fail("exponent must be a nonnegative integer literal")
            self.take()
            p = p ** int(e[1])
        return p

    def atom(self):
        t = self.peek()
        kind, val, pos = t
        if kind == "int":
            self.take()
            return self.ring.const(mpq(int(val)))
        if kind == "name":
            self.take()
            if self.ring.has(val):
                return self.ring.var(val)
            if val == self.ring.coeff_var:
                from .ratfunc import RationalFunction

                return self.ring.const(RationalFunction(val, [mpq(0), mpq(1)]))
            raise UnknownVariable(f"unknown variable {val!r}", self.text, pos)
        if kind == "op" and val == "(":
            self.take()
            p = self.expr()
            self.expect(")")
            return p
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {val!r}")


def parse_poly(text: str, ring):
    """Parse ``text`` into a canonical Polynomial of ``ring``."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text, ring).parse()


# printing

def _mono(ring, exps):
    parts = []
    for name, e in zip(ring.names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _q(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _coef_body(c):
    """(negative?, text) for a coefficient; text is '' for unit magnitude."""
    from .ratfunc import RationalFunction

    if isinstance(c, RationalFunction):
        if c.is_constant():
            return _coef_body(c.constant())
        num = format_poly(c.numerator)
        if c.is_polynomial():
            if len(c.numerator) == 1:
                neg = num.startswith("-")
                return neg, num.lstrip("-")
            return False, f"({num})"
        return False, f"({num})/({format_poly(c.denominator)})"
    neg = c < 0
    a = -c if neg else c
    return neg, "" if a == 1 else _q(a)


def format_poly(p) -> str:
    """Descending graded-lex order; the output parses back to ``p``."""
    pieces = []
    for exps, c in p.terms():
        neg, body = _coef_body(c)
        mono = _mono(p.ring, exps)
        if not mono:
            text = body or "1"
        elif not body:
            text = mono
        else:
            text = f"{body}*{mono}"
        pieces.append((neg, text))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, text in pieces[1:]:
        out += (" - " if neg else " + ") + text
    return out
