"""Expression grammar for base-field and graded-field elements.

::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("+" | "-") unary | power
    power    := atom ("^" exponent)?
    exponent := INT | "(" ["-"] INT ")"
    atom     := INT | NAME | VAR "^(" degree ")" | "(" expr ")"
    degree   := rational ("," rational)*
    rational := ["-"] INT ["/" INT]

``NAME`` is a named generator of the base field (for example ``i`` or
``x``); ``VAR`` is the grading variable of a graded field (``u`` by default).
Columns in error messages are 1-based.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import GradvalError, ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or not text[pos:].strip():
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            toks.append(("int", m.group(1), col))
        elif m.group(2):
            toks.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", col)
            toks.append((ch, ch, col))
        pos = m.end()
    toks.append(("end", "", len(text) + 1))
    return toks


class _FieldOps:
    def __init__(self, F):
        self.F = F
        self.names = F.generators()

    def integer(self, n):
        return self.F.from_int(n)

    def name(self, s, col):
        if s not in self.names:
            raise ParseError(f"unknown name {s!r}", col)
        return self.names[s]

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def div(self, a, b, col):
        if self.F.is_zero(b):
            raise ParseError("division by zero", col)
        return self.F.div(a, b)

    def power(self, a, k, col):
        if k < 0:
            return self.F.inv(self.power(a, -k, col)) if not self.F.is_zero(a) else self.div(a, a, col)
        return self.F.power(a, k)


class _GradedOps:
    def __init__(self, K):
        self.K = K
        self.base = _FieldOps(K.base)

    def integer(self, n):
        return self.K.const(self.base.integer(n))

    def name(self, s, col):
        return self.K.const(self.base.name(s, col))

    def monomial(self, degree, col):
        if len(degree) != self.K.dim:
            raise ParseError(f"degree needs {self.K.dim} component(s)", col)
        if tuple(degree) not in self.K.gamma:
            raise ParseError(f"degree {tuple(str(x) for x in degree)} is not in the grading lattice", col)
        return self.K.t(tuple(degree))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def _check_unit(self, b, col):
        if b.is_zero:
            raise ParseError("division by zero", col)
        if not b.is_homogeneous:
            raise ParseError("can only divide by homogeneous elements", col)

    def div(self, a, b, col):
        self._check_unit(b, col)
        return a * b ** -1

    def power(self, a, k, col):
        if k < 0:
            self._check_unit(a, col)
        return a ** k


class _Parser:
    def __init__(self, text, ops, var=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.ops = ops
        self.var = var

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.tok
        if kind is not None and t[0] != kind:
            what = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {kind!r}, found {what}", t[2])
        self.i += 1
        return t

    def parse(self):
        if self.tok[0] == "end":
            raise ParseError("empty expression", self.tok[2])
        x = self.expr()
        if self.tok[0] != "end":
            raise ParseError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return x

    def expr(self):
        x = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.take()[0]
            y = self.term()
            x = self.ops.add(x, y) if op == "+" else self.ops.sub(x, y)
        return x

    def term(self):
        x = self.unary()
        while self.tok[0] in ("*", "/"):
            op, _, col = self.take()
            y = self.unary()
            x = self.ops.mul(x, y) if op == "*" else self.ops.div(x, y, col)
        return x

    def unary(self):
        if self.tok[0] in ("+", "-"):
            op = self.take()[0]
            x = self.unary()
            return self.ops.neg(x) if op == "-" else x
        return self.power()

    def power(self):
        x = self.atom()
        if self.tok[0] == "^":
            col = self.take()[2]
            x = self.ops.power(x, self.exponent(), col)
        return x

    def exponent(self):
        if self.tok[0] == "(":
            self.take()
            sign = -1 if self.tok[0] == "-" and self.take() else 1
            k = int(self.take("int")[1])
            self.take(")")
            return sign * k
        return int(self.take("int")[1])

    def atom(self):
        kind, text, col = self.tok
        if kind == "int":
            self.take()
            return self.ops.integer(int(text))
        if kind == "name":
            self.take()
            if self.var is not None and text == self.var:
                self.take("^")
                self.take("(")
                deg = [self.rational()]
                while self.tok[0] == ",":
                    self.take()
                    deg.append(self.rational())
                self.take(")")
                return self.ops.monomial(deg, col)
            return self.ops.name(text, col)
        if kind == "(":
            self.take()
            x = self.expr()
            self.take(")")
            return x
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", col)

    def rational(self):
        sign = -1 if self.tok[0] == "-" and self.take() else 1
        n = int(self.take("int")[1])
        d = 1
        if self.tok[0] == "/":
            self.take()
            col = self.tok[2]
            d = int(self.take("int")[1])
            if d == 0:
                raise ParseError("zero denominator", col)
        return Fraction(sign * n, d)


def _run(text, ops, var=None):
    try:
        return _Parser(text, ops, var).parse()
    except ParseError:
        raise
    except GradvalError as exc:
        raise ParseError(str(exc), 1) from exc


def parse_base(text, field):
    """Parse an element of the base field ``field``."""
    return _run(text, _FieldOps(field))


def parse_element(text, K):
    """Parse an element of the split graded field ``K``."""
    return _run(text, _GradedOps(K), K.var)
