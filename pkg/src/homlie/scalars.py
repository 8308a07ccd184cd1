"""Exact scalars: rationals (``fractions.Fraction``) and univariate rational functions.

A scalar is either a :class:`~fractions.Fraction` or a :class:`RatFunc`.  Plain
``int`` values are accepted everywhere and promoted on contact.  Rational
functions live in ``Q(var)`` for a single named indeterminate; mixing two
different indeterminates raises :class:`IndeterminateMismatch`.

Polynomials are tuples of ``Fraction`` coefficients, lowest degree first, with
no trailing zeros (the zero polynomial is the empty tuple).
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "RatFunc",
    "Scalar",
    "IndeterminateMismatch",
    "PoleAtValue",
    "ScalarParseError",
    "canonical",
    "is_zero",
    "parse_scalar",
    "format_scalar",
    "substitute",
    "variable",
]


class IndeterminateMismatch(ValueError):
    pass


class PoleAtValue(ZeroDivisionError):
    pass


class ScalarParseError(ValueError):
    def __init__(self, message: str, column: int = 0):
        super().__init__(message)
        self.column = column


Poly = tuple  # tuple[Fraction, ...]


def _trim(c) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(Fraction(x) for x in c)


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def _pscale(a: Poly, s: Fraction) -> Poly:
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    quot = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        coef = rem[k + db] / lead
        if coef:
            quot[k] = coef
            for j, y in enumerate(b):
                rem[k + j] -= coef * y
    return _trim(quot), _trim(rem[:db])


def _monic(a: Poly) -> Poly:
    return _pscale(a, 1 / a[-1]) if a else a


def _pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a)


def _peval(a: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pformat(a: Poly, var: str) -> str:
    if not a:
        return "0"
    parts = []
    for e in range(len(a) - 1, -1, -1):
        c = a[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


class RatFunc:
    """An element of ``Q(var)`` kept as numerator/denominator in lowest terms.

    The denominator is monic, so two rational functions are equal exactly when
    their stored polynomials coincide.
    """

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=(Fraction(1),), var: str = "q"):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = (), (Fraction(1),)
        elif len(den) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num, den = _pscale(num, 1 / lead), _pscale(den, 1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def constant(cls, value, var: str) -> "RatFunc":
        return cls((Fraction(value),), (Fraction(1),), var)

    @classmethod
    def gen(cls, var: str) -> "RatFunc":
        return cls((Fraction(0), Fraction(1)), (Fraction(1),), var)

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            if other.var != self.var:
                if other.is_constant():
                    return RatFunc.constant(other.constant_value(), self.var)
                if self.is_constant():
                    return other  # caller re-dispatches through the constant path
                raise IndeterminateMismatch(f"cannot mix Q({self.var}) and Q({other.var})")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other, self.var)
        return None

    def _pair(self, other):
        o = self._coerce(other)
        if o is None:
            return None, None
        if o.var != self.var:
            # self is constant, other lives in another field
            return RatFunc.constant(self.constant_value(), o.var), o
        return self, o

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else Fraction(0)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if a.den == b.den:
            return _make(_padd(a.num, b.num), a.den, a.var)
        return _make(_padd(_pmul(a.num, b.den), _pmul(b.num, a.den)), _pmul(a.den, b.den), a.var)

    __radd__ = __add__

    def __neg__(self):
        return _make(_pneg(self.num), self.den, self.var)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return _make(_pmul(a.num, b.num), _pmul(a.den, b.den), a.var)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return _make(self.den, self.num, self.var)

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and not self.num:
            raise ZeroDivisionError("negative power of zero")
        num, den = (self.num, self.den) if k >= 0 else (self.den, self.num)
        return _make(_ppow(num, abs(k)), _ppow(den, abs(k)), self.var)

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RatFunc):
            if other.var == self.var:
                return self.num == other.num and self.den == other.den
            return self.is_constant() and other.is_constant() and self.constant_value() == other.constant_value()
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.var, self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    # -- evaluation / display -------------------------------------------------
    def evaluate(self, value) -> Fraction:
        value = Fraction(value)
        d = _peval(self.den, value)
        if d == 0:
            raise PoleAtValue(f"{self} has a pole at {self.var}={value}")
        return _peval(self.num, value) / d

    def __str__(self):
        n = _pformat(self.num, self.var)
        if self.den == (Fraction(1),):
            return n
        d = _pformat(self.den, self.var)
        if sum(1 for c in self.num if c != 0) > 1:
            n = f"({n})"
        if sum(1 for c in self.den if c != 0) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({str(self)!r}, var={self.var!r})"


def _make(num, den, var: str):
    """Arithmetic results that turn out constant drop back to ``Fraction``."""
    out = RatFunc(num, den, var)
    return out.constant_value() if out.is_constant() else out


def _ppow(a: Poly, k: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(k):
        out = _pmul(out, a)
    return out


Scalar = Union[Fraction, RatFunc]


def variable(name: str) -> RatFunc:
    """The indeterminate ``name`` as an element of ``Q(name)``."""
    return RatFunc.gen(name)


def canonical(x) -> Scalar:
    """Normalise ints to ``Fraction``; leave canonical scalars untouched."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, RatFunc):
        return x.constant_value() if x.is_constant() else x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def is_zero(x) -> bool:
    return x == 0


def substitute(x, value) -> Fraction:
    """Evaluate a scalar at ``var = value``; rationals pass through unchanged."""
    if isinstance(x, RatFunc):
        return x.evaluate(value)
    return canonical(x)


def format_scalar(x) -> str:
    x = canonical(x)
    return str(x)


# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        col = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, var: str | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.var = var

    def peek(self):
        return self.toks[self.i]

    def take(self, op=None):
        tok = self.toks[self.i]
        if op is not None and (tok[0] != "op" or tok[1] != op):
            raise ScalarParseError(f"expected {op!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        tok = self.peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term() * sign
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if tok[1] == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.power()
                if tok[1] == "*":
                    acc = acc * rhs
                else:
                    if rhs == 0:
                        raise ScalarParseError("division by zero", tok[2])
                    acc = acc / rhs
            else:
                return acc

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            sign = 1
            t = self.peek()
            if t[0] == "op" and t[1] == "-":
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise ScalarParseError("exponent must be an integer", t[2])
            k = sign * t[1]
            if k < 0 and base == 0:
                raise ScalarParseError("division by zero", t[2])
            return base ** k
        return base

    def atom(self):
        tok = self.take()
        kind, val, col = tok
        if kind == "num":
            return Fraction(val)
        if kind == "name":
            if self.var is None or val != self.var:
                raise ScalarParseError(f"unknown indeterminate {val!r}", col)
            return RatFunc.gen(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "op" and val in "+-":
            inner = self.power()
            return -inner if val == "-" else inner
        raise ScalarParseError(f"unexpected {val!r}" if val is not None else "unexpected end of input", col)


def parse_scalar(text: str, var: str | None = None) -> Scalar:
    """Parse ``p/q`` rationals or ``(poly)/(poly)`` rational functions in ``var``.

    >>> parse_scalar("1/2") + parse_scalar("1/3")
    Fraction(5, 6)
    >>> str(parse_scalar("(q^2-1)/(q-1)", "q"))
    'q+1'
    """
    p = _Parser(text, var)
    if p.peek()[0] == "end":
        raise ScalarParseError("empty scalar", 0)
    value = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ScalarParseError(f"trailing input {tok[1]!r}", tok[2])
    return canonical(value)
