"""Exact multivariate polynomials over Q.

``MultiPoly`` stores a dict from exponent tuples to nonzero ``Fraction``
coefficients together with an ordered tuple of variable names.  Instances are
treated as immutable.  Monomials are compared in graded-lex order with the
instance's declared variable order.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Mapping

import numpy as np

Monomial = tuple  # tuple[int, ...]


def grlex_key(e: Monomial):
    return (sum(e), e)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class MultiPoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Iterable[str], terms: Mapping | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for variables {self.vars}")
            c = _as_fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms):
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c, vars=()) -> "MultiPoly":
        c = _as_fraction(c)
        vars = tuple(vars)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, name: str, vars=None) -> "MultiPoly":
        vars = tuple(vars) if vars is not None else (name,)
        if name not in vars:
            vars = vars + (name,)
        e = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {e: Fraction(1)})

    @classmethod
    def from_univariate(cls, coeffs, var: str, vars=None) -> "MultiPoly":
        """Build from coefficients listed lowest degree first."""
        vars = tuple(vars) if vars is not None else (var,)
        i = vars.index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            c = _as_fraction(c)
            if c:
                e = [0] * len(vars)
                e[i] = k
                terms[tuple(e)] = c
        return cls._raw(vars, terms)

    # -- variable handling ----------------------------------------------------
    def with_vars(self, vars: Iterable[str]) -> "MultiPoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        for k, v in enumerate(self.vars):
            if v not in pos and any(e[k] for e in self.terms):
                raise ValueError(f"variable {v} is used and cannot be dropped")
        idx = [self.vars.index(v) if v in self.vars else -1 for v in vars]
        terms = {tuple(e[i] if i >= 0 else 0 for i in idx): c for e, c in self.terms.items()}
        return MultiPoly._raw(vars, terms)

    def used_vars(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vars) if any(e[k] for e in self.terms))

    def trimmed(self) -> "MultiPoly":
        return self.with_vars(self.used_vars())

    def _align(self, other) -> tuple["MultiPoly", "MultiPoly"]:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other, self.vars)
            return self, other
        if self.vars == other.vars:
            return self, other
        vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(vars), other.with_vars(vars)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        t = dict(a.terms)
        for e, c in b.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MultiPoly._raw(a.vars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-other if isinstance(other, MultiPoly) else -_as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return MultiPoly._raw(self.vars, {})
            return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        t: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly._raw(a.vars, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if not other.is_constant():
                raise TypeError("use divrem/exact_div for polynomial division")
            other = other.constant_value()
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        try:
            a, b = self._align(other)
        except ValueError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            t = self.trimmed()
            order = sorted(range(len(t.vars)), key=lambda k: t.vars[k])
            names = tuple(t.vars[k] for k in order)
            items = frozenset((tuple(e[k] for k in order), c) for e, c in t.terms.items())
            self._hash = hash((names, items))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def _index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            return -1

    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        k = self._index(var)
        return 0 if k < 0 else max(e[k] for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading_exponent(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_exponent()] if self.terms else Fraction(0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficients(self, var: str) -> list["MultiPoly"]:
        """Coefficients in ``var`` (lowest power first), as polynomials in the same ring."""
        k = self._index(var)
        d = self.degree(var)
        out = [dict() for _ in range(max(d + 1, 0))]
        for e, c in self.terms.items():
            p = e[k] if k >= 0 else 0
            ee = e[:k] + (0,) + e[k + 1:] if k >= 0 else e
            out[p][ee] = c
        return [MultiPoly._raw(self.vars, t) for t in out]

    def leading_coeff_in(self, var: str) -> "MultiPoly":
        return self.coefficients(var)[-1]

    def univariate_coeffs(self, var: str | None = None) -> list[Fraction]:
        """Rational coefficients, lowest power first, of a univariate polynomial."""
        used = self.used_vars()
        if var is None:
            if len(used) > 1:
                raise ValueError(f"polynomial is not univariate (uses {used})")
            var = used[0] if used else (self.vars[0] if self.vars else "_")
        elif any(v != var for v in used):
            raise ValueError(f"polynomial involves variables other than {var}")
        k = self._index(var)
        d = max(self.degree(var), 0)
        out = [Fraction(0)] * (d + 1)
        for e, c in self.terms.items():
            out[e[k] if k >= 0 else 0] = c
        return out

    def derivative(self, var: str) -> "MultiPoly":
        k = self._index(var)
        if k < 0:
            return MultiPoly._raw(self.vars, {})
        t = {}
        for e, c in self.terms.items():
            if e[k]:
                t[e[:k] + (e[k] - 1,) + e[k + 1:]] = c * e[k]
        return MultiPoly._raw(self.vars, t)

    # -- substitution / evaluation --------------------------------------------
    def subs(self, bindings: Mapping[str, object]) -> "MultiPoly":
        """Exact substitution of polynomials or rationals for variables."""
        bindings = {v: b for v, b in bindings.items() if v in self.vars}
        if not bindings:
            return self
        keep = tuple(v for v in self.vars if v not in bindings)
        targets = [b for b in bindings.values() if isinstance(b, MultiPoly)]
        vars = keep
        for b in targets:
            vars = vars + tuple(v for v in b.vars if v not in vars)
        vals = {v: (b.with_vars(vars) if isinstance(b, MultiPoly) else MultiPoly.const(b, vars))
                for v, b in bindings.items()}
        powcache: dict = {}

        def power(v, n):
            key = (v, n)
            if key not in powcache:
                powcache[key] = vals[v] ** n
            return powcache[key]

        keep_idx = [self.vars.index(v) for v in keep]
        sub_idx = [(self.vars.index(v), v) for v in vals]
        result = MultiPoly._raw(vars, {})
        acc: dict = {}
        for e, c in self.terms.items():
            mono = MultiPoly._raw(vars, {tuple(e[i] for i in keep_idx) + (0,) * (len(vars) - len(keep)): c})
            for i, v in sub_idx:
                if e[i]:
                    mono = mono * power(v, e[i])
            for ee, cc in mono.terms.items():
                acc[ee] = acc.get(ee, 0) + cc
        result = MultiPoly._raw(vars, {e: c for e, c in acc.items() if c})
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Numeric evaluation; values may be numbers or numpy arrays."""
        total = 0
        pows: dict = {}
        for e, c in self.terms.items():
            term = complex(c) if _any_complex(values) else float(c)
            for k, n in enumerate(e):
                if n:
                    v = self.vars[k]
                    if v not in values:
                        raise KeyError(f"no value for variable {v}")
                    key = (v, n)
                    if key not in pows:
                        pows[key] = np.asarray(values[v]) ** n if isinstance(values[v], np.ndarray) else values[v] ** n
                    term = term * pows[key]
            total = total + term
        return total

    def evaluate_exact(self, values: Mapping[str, object]) -> Fraction:
        return self.subs({v: _as_fraction(x) for v, x in values.items()}).constant_value()

    # -- normalization --------------------------------------------------------
    def integer_content_normalized(self) -> "MultiPoly":
        """Integer coefficients, content 1, positive grlex-leading coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = gcd(num, (c * den).numerator)
        scale = Fraction(den, num)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    normalized = integer_content_normalized

    def is_normalized(self) -> bool:
        return self == self.integer_content_normalized() and all(c.denominator == 1 for c in self.terms.values())

    # -- printing / serialization --------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if n == 1 else f"{v}^{n}" for v, n in zip(self.vars, e) if n)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, vars={self.vars})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                      for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "MultiPoly":
        if isinstance(data, str):
            data = json.loads(data)
        terms = {}
        for t in data["terms"]:
            den = int(t.get("den", "1"))
            if den <= 0:
                raise ValueError("denominator must be positive")
            terms[tuple(t["exp"])] = Fraction(int(t["num"]), den)
        return cls(data["vars"], terms)


def _any_complex(values) -> bool:
    for v in values.values():
        if isinstance(v, complex) or (isinstance(v, np.ndarray) and np.iscomplexobj(v)):
            return True
    return False


def poly_vars(*names: str) -> list[MultiPoly]:
    """Generators of Q[names] sharing one variable tuple."""
    return [MultiPoly.var(n, names) for n in names]


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Formal quotient num/den of polynomials; no cancellation is attempted."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(1, num.vars)
        num, den = num._align(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if den.is_constant():
            num, den = num / den.constant_value(), MultiPoly.const(1, num.vars)
        self.num, self.den = num, den

    @property
    def vars(self):
        return self.num.vars

    @staticmethod
    def _lift(x, vars=()):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiPoly):
            return RationalFunction(x)
        return RationalFunction(MultiPoly.const(x, vars))

    def __add__(self, other):
        o = self._lift(other, self.vars)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other, self.vars))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other, self.vars)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other, self.vars)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other, self.vars) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num ** n, self.den ** n)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial (non-constant denominator)")
        return self.num

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def with_vars(self, vars):
        return RationalFunction(self.num.with_vars(vars), self.den.with_vars(vars))

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class PolyParseError(ValueError):
    pass


def _tokenize(text: str):
    pos, out = 0, []
    text = text.replace("−", "-").replace("·", "*")
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, vars):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = tuple(vars) if vars else None
        self.seen: list[str] = []

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise PolyParseError(f"expected {op!r}, got {t[1]!r}")

    def parse(self) -> RationalFunction:
        if not self.toks:
            raise PolyParseError("empty expression")
        r = self.expr()
        if self.i != len(self.toks):
            raise PolyParseError(f"trailing input at token {self.peek()[1]!r}")
        return r

    def expr(self):
        r = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            r = r + t if op == "+" else r - t
        return r

    def term(self):
        r = self.unary()
        while True:
            t = self.peek()
            if t in (("op", "*"), ("op", "/")):
                self.take()
                rhs = self.unary()
                r = r * rhs if t[1] == "*" else r / rhs
            elif t[0] in ("num", "name") or t == ("op", "("):
                r = r * self.unary()  # implicit product, e.g. "2x" or "x y"
            else:
                return r

    def unary(self):
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.unary()
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            t = self.take()
            if t[0] != "num":
                raise PolyParseError("exponent must be an integer literal")
            return base ** (sign * t[1])
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RationalFunction(MultiPoly.const(val, ()))
        if kind == "name":
            if self.vars is not None and val not in self.vars:
                raise PolyParseError(f"unknown variable {val!r} (expected one of {self.vars})")
            if val not in self.seen:
                self.seen.append(val)
            return RationalFunction(MultiPoly.var(val))
        if (kind, val) == ("op", "("):
            r = self.expr()
            self.expect(")")
            return r
        raise PolyParseError(f"unexpected token {val!r}")


def parse_rational(text: str, vars: Iterable[str] | None = None) -> RationalFunction:
    p = _Parser(text, vars)
    r = p.parse()
    order = tuple(vars) if vars else tuple(sorted(p.seen))
    return r.with_vars(order)


def parse_poly(text: str, vars: Iterable[str] | None = None) -> MultiPoly:
    """Parse e.g. ``"z^2 - (1+x^2)*z + 2*x^2 - 1"``; division only by constants.

    Without ``vars`` the variables are those appearing, in sorted order.
    """
    r = parse_rational(text, vars)
    if not r.is_polynomial():
        raise PolyParseError(f"{text!r} is not a polynomial")
    return r.num
