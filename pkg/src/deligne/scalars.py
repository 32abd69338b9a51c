"""Exact coefficients: rationals, polynomials in ``t``, Laurent polynomials in ``q``.

Rationals are :class:`fractions.Fraction`.  :class:`TPoly` is a univariate
polynomial in the interpolation parameter ``t`` with rational coefficients and
:class:`QLaurent` is a Laurent polynomial in ``q`` whose coefficients are
``TPoly``.  The embeddings ``Fraction -> TPoly -> QLaurent`` are handled by the
arithmetic operators, so mixed expressions such as ``2 * T - Q`` just work.

All values are immutable and hashable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Union

__all__ = [
    "Fraction",
    "TPoly",
    "QLaurent",
    "T",
    "Q",
    "Scalar",
    "ScalarError",
    "as_fraction",
    "evaluate_scalar",
    "format_scalar",
    "parse_scalar",
    "times_t_power",
    "simplify",
]


class ScalarError(ValueError):
    """Raised on unbound parameters, non-invertible ``q`` or unparsable text."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _fmt_fraction(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class TPoly:
    """Polynomial in ``t`` over the rationals, stored as ``{exponent: coeff}``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if e < 0:
                    raise ValueError("TPoly exponents must be nonnegative")
                v = as_fraction(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "TPoly":
        # c must already be normalized: no zero values, nonnegative int keys
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def const(cls, value) -> "TPoly":
        v = as_fraction(value)
        return cls._raw({0: v} if v else {})

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "TPoly":
        return cls({exponent: coeff})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return max(self._c, default=-1)

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._c)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ScalarError(f"{self} is not constant")
        return self._c.get(0, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._c.get(0, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, TPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def _coerce(self, other):
        if isinstance(other, TPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return TPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            s = c.get(e, 0) + v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return TPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return TPoly._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return TPoly._raw({})
        c: dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return TPoly._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = TPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            d = Fraction(other)
            return TPoly._raw({e: v / d for e, v in self._c.items()})
        return NotImplemented

    def shift(self, k: int) -> "TPoly":
        """Multiply by ``t**k``."""
        if k == 0:
            return self
        return TPoly._raw({e + k: v for e, v in self._c.items()})

    def evaluate(self, t) -> Fraction:
        t = as_fraction(t)
        total = Fraction(0)
        for e, v in self._c.items():
            total += v * t**e
        return total

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"TPoly({format_scalar(self)!r})"


class QLaurent:
    """Laurent polynomial in ``q`` with :class:`TPoly` coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _to_tpoly(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "QLaurent":
        p = object.__new__(cls)
        p._c = c
        p._hash = None
        return p

    @classmethod
    def q_power(cls, k: int, coeff=1) -> "QLaurent":
        return cls({k: coeff})

    @property
    def coeffs(self) -> dict[int, TPoly]:
        return dict(self._c)

    def involves_q(self) -> bool:
        return any(e != 0 for e in self._c)

    def q_free_part(self) -> TPoly:
        """The ``q**0`` coefficient; raises if other powers of ``q`` occur."""
        if self.involves_q():
            raise ScalarError(f"{self} depends on q")
        return self._c.get(0, TPoly._raw({}))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __hash__(self) -> int:
        if self._hash is None:
            if not self.involves_q():
                self._hash = hash(self._c.get(0, TPoly._raw({})))
            else:
                self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, QLaurent):
            return self._c == other._c
        if isinstance(other, (int, Fraction, TPoly)):
            o = _to_tpoly(other)
            return self._c == ({0: o} if o else {})
        return NotImplemented

    @staticmethod
    def _coerce(other):
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, (int, Fraction, TPoly)):
            o = _to_tpoly(other)
            return QLaurent._raw({0: o} if o else {})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            s = c[e] + v if e in c else v
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return QLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent._raw({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[int, TPoly] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                e = e1 + e2
                c[e] = c[e] + v1 * v2 if e in c else v1 * v2
        return QLaurent._raw({e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials in q can be inverted")
            ((e, v),) = self._c.items()
            if not v.is_constant():
                raise ValueError("only monomials in q can be inverted")
            return QLaurent._raw({-e * (-k): TPoly.const(1 / v.constant_value() ** (-k))})
        out = QLaurent.q_power(0)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QLaurent._raw({e: v / other for e, v in self._c.items()})
        return NotImplemented

    def shift_t(self, k: int) -> "QLaurent":
        """Multiply by ``t**k``."""
        if k == 0:
            return self
        return QLaurent._raw({e: v.shift(k) for e, v in self._c.items()})

    def specialize_q(self, q) -> TPoly:
        q = as_fraction(q)
        if q == 0 and any(e < 0 for e in self._c):
            raise ScalarError("q must be invertible")
        out = TPoly._raw({})
        for e, v in self._c.items():
            out = out + v * q**e
        return out

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"QLaurent({format_scalar(self)!r})"


Scalar = Union[Fraction, TPoly, QLaurent]

T = TPoly._raw({1: Fraction(1)})
Q = QLaurent._raw({1: TPoly._raw({0: Fraction(1)})})


def _to_tpoly(v) -> TPoly:
    if isinstance(v, TPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return TPoly.const(v)
    if isinstance(v, str):
        return TPoly.const(Fraction(v))
    raise TypeError(f"cannot interpret {v!r} as a polynomial in t")


def times_t_power(c, k: int):
    """Return ``c * t**k`` for any scalar kind (rationals are promoted to TPoly)."""
    if isinstance(c, TPoly):
        return c.shift(k)
    if isinstance(c, QLaurent):
        return c.shift_t(k)
    v = as_fraction(c)
    return TPoly._raw({k: v} if v else {})


def simplify(s):
    """Demote a scalar to the simplest kind that represents it exactly."""
    if isinstance(s, QLaurent):
        if s.involves_q():
            return s
        s = s.q_free_part()
    if isinstance(s, TPoly):
        if s.is_constant():
            return s.constant_value()
        return s
    return as_fraction(s)


def evaluate_scalar(s, assignment: Mapping[str, object]) -> Fraction:
    """Exact value of ``s`` with ``t`` (and ``q``) substituted from ``assignment``."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, QLaurent):
        if s.involves_q():
            if "q" not in assignment:
                raise ScalarError("unbound parameter: q")
            p = s.specialize_q(assignment["q"])
        else:
            p = s.q_free_part()
        s = p
    if isinstance(s, TPoly):
        if s.is_constant():
            return s.constant_value()
        if "t" not in assignment:
            raise ScalarError("unbound parameter: t")
        return s.evaluate(assignment["t"])
    raise TypeError(f"not a scalar: {s!r}")


# -- text format -----------------------------------------------------------


def _monomial(c: Fraction, factors: list[str], first: bool) -> str:
    neg = c < 0
    a = -c if neg else c
    if factors and a == 1:
        body = "*".join(factors)
    else:
        body = "*".join([_fmt_fraction(a)] + factors)
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _t_factor(e: int) -> list[str]:
    if e == 0:
        return []
    return ["t"] if e == 1 else [f"t^{e}"]


def _q_factor(e: int) -> list[str]:
    if e == 0:
        return []
    return ["q"] if e == 1 else [f"q^{e}"]


def _format_tpoly(p: TPoly) -> str:
    if not p:
        return "0"
    parts = []
    for i, e in enumerate(sorted(p._c)):
        parts.append(_monomial(p._c[e], _t_factor(e), i == 0))
    return "".join(parts)


def format_scalar(s) -> str:
    """Lowest-degree-first text with explicit signs, e.g. ``-1/2 + 1/2*t^2``.

    Laurent terms are written ``c*t^k*q^e`` when the ``t`` part is a monomial
    and ``(poly)*q^e`` otherwise.
    """
    if isinstance(s, (int, Fraction)):
        return _fmt_fraction(Fraction(s))
    if isinstance(s, TPoly):
        return _format_tpoly(s)
    if isinstance(s, QLaurent):
        if not s:
            return "0"
        parts = []
        for i, e in enumerate(sorted(s._c)):
            p = s._c[e]
            first = i == 0
            if len(p._c) == 1:
                ((te, c),) = p._c.items()
                parts.append(_monomial(c, _t_factor(te) + _q_factor(e), first))
            elif e == 0:
                parts.append(("" if first else " + ") + f"({_format_tpoly(p)})")
            else:
                parts.append(("" if first else " + ") + f"({_format_tpoly(p)})*" + _q_factor(e)[0])
        return "".join(parts)
    raise TypeError(f"not a scalar: {s!r}")


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([tq])|(\^)|([-+*()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarError(f"cannot parse scalar {text!r} at offset {pos}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ScalarError(f"cannot parse scalar {self.text!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        val = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.factor()
        while self.peek() == "*":
            self.take()
            val = val * self.factor()
        return val

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.take()
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.take() == "-" else 1
        tok = self.take()
        if not tok.isdigit():
            raise ScalarError(f"bad exponent in {self.text!r}")
        return sign * int(tok)

    def factor(self):
        tok = self.take()
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        if tok == "-":
            return -self.factor()
        if tok == "t":
            e = self.exponent()
            if e < 0:
                raise ScalarError("negative powers of t are not allowed")
            return QLaurent({0: TPoly({e: 1})})
        if tok == "q":
            return QLaurent.q_power(self.exponent())
        if tok[0].isdigit():
            return QLaurent({0: Fraction(tok)})
        raise ScalarError(f"cannot parse scalar {self.text!r}")


def parse_scalar(text: str):
    """Parse the text format back into the simplest scalar kind."""
    p = _Parser(text)
    val = p.expr()
    if p.peek() is not None:
        raise ScalarError(f"trailing input in scalar {text!r}")
    return simplify(val)
