"""Division, resultants, gcds and squarefree parts for ``MultiPoly``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import MultiPoly, grlex_key


class NotDivisibleError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DivResult:
    quotient: MultiPoly
    remainder: MultiPoly
    pseudo: bool = False
    multiplier: MultiPoly | None = None  # multiplier * f = q*g + r when pseudo

    def __iter__(self):
        return iter((self.quotient, self.remainder))


def _mono(vars, var, power, coeff: MultiPoly) -> MultiPoly:
    k = vars.index(var)
    t = {}
    for e, c in coeff.terms.items():
        t[e[:k] + (e[k] + power,) + e[k + 1:]] = c
    return MultiPoly._raw(vars, t)


def divrem(f: MultiPoly, g: MultiPoly, var: str, pseudo: bool = False) -> DivResult:
    """Divide ``f`` by ``g`` as polynomials in ``var``.

    If the leading coefficient of ``g`` in ``var`` is not a rational number,
    ``pseudo=True`` is required and the result is flagged: then
    ``multiplier*f = quotient*g + remainder``.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    f, g = f._align(g)
    if var not in f.vars:
        f, g = f.with_vars(f.vars + (var,)), g.with_vars(f.vars + (var,))
    vars = f.vars
    dg = g.degree(var)
    lc = g.leading_coeff_in(var)
    zero = MultiPoly._raw(vars, {})
    if lc.is_constant():
        inv = 1 / lc.constant_value()
        q, r = zero, f
        while not r.is_zero() and r.degree(var) >= dg:
            d = r.degree(var)
            t = _mono(vars, var, d - dg, r.leading_coeff_in(var) * inv)
            q = q + t
            r = r - t * g
        return DivResult(q, r)
    if not pseudo:
        raise ValueError(
            f"leading coefficient {lc} of the divisor in {var} is not a unit; pass pseudo=True")
    df = f.degree(var)
    if df < dg:
        return DivResult(zero, f, True, MultiPoly.const(1, vars))
    q, r = zero, f
    e = df - dg + 1
    while not r.is_zero() and r.degree(var) >= dg:
        t = _mono(vars, var, r.degree(var) - dg, r.leading_coeff_in(var))
        q = q * lc + t
        r = r * lc - t * g
        e -= 1
    if e:
        s = lc ** e
        q, r = q * s, r * s
    return DivResult(q, r, True, lc ** (df - dg + 1))


def prem(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    return divrem(f, g, var, pseudo=True).remainder


def exact_div(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Multivariate exact quotient f/g; raises ``NotDivisibleError`` otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    f, g = f._align(g)
    if g.is_constant():
        return f / g.constant_value()
    lg = g.leading_exponent()
    lcg = g.terms[lg]
    gterms = list(g.terms.items())
    r = dict(f.terms)
    q = {}
    while r:
        e = max(r, key=grlex_key)
        d = tuple(a - b for a, b in zip(e, lg))
        if any(k < 0 for k in d):
            raise NotDivisibleError("polynomial is not divisible")
        c = r[e] / lcg
        q[d] = c
        for eg, cg in gterms:
            ee = tuple(a + b for a, b in zip(d, eg))
            v = r.get(ee, 0) - c * cg
            if v:
                r[ee] = v
            else:
                r.pop(ee, None)
    return MultiPoly._raw(f.vars, q)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except NotDivisibleError:
        return False


# ---------------------------------------------------------------------------
# resultants


def _det_bareiss(M):
    """Fraction-free determinant of a square matrix of MultiPoly entries."""
    n = len(M)
    if n == 0:
        return None
    M = [row[:] for row in M]
    sign = 1
    prev = None
    for k in range(n - 1):
        if M[k][k].is_zero():
            for i in range(k + 1, n):
                if not M[i][k].is_zero():
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return M[0][0] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = v if prev is None else exact_div(v, prev)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of ``f`` and ``g`` with respect to ``var``."""
    f, g = f._align(g)
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if var not in f.vars or (f.degree(var) <= 0 and g.degree(var) <= 0):
        raise ValueError(f"variable {var} absent from both inputs")
    vars = f.vars
    k = vars.index(var)
    m, n = f.degree(var), g.degree(var)
    rest = vars[:k] + vars[k + 1:]

    def drop(p):
        return p.with_vars(rest)

    fc = [drop(c) for c in f.coefficients(var)]
    gc = [drop(c) for c in g.coefficients(var)]
    if n == 0:
        return (gc[0] ** m).with_vars(rest)
    if m == 0:
        return (fc[0] ** n).with_vars(rest)
    if n == 1:
        # Res(f, b*x + c) = (-1)^m * sum f_i (-c)^i b^(m-i)
        b, c = gc[1], gc[0]
        acc = MultiPoly._raw(rest, {})
        for i, fi in enumerate(fc):
            acc = acc + fi * (-c) ** i * b ** (m - i)
        return acc if m % 2 == 0 else -acc
    if m == 1:
        a, c = fc[1], fc[0]
        acc = MultiPoly._raw(rest, {})
        for i, gi in enumerate(gc):
            acc = acc + gi * (-c) ** i * a ** (n - i)
        return acc
    zero = MultiPoly._raw(rest, {})
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(fc)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(gc)):
            row[i + j] = c
        rows.append(row)
    return _det_bareiss(rows)


def discriminant(f: MultiPoly, var: str) -> MultiPoly:
    """Res(f, f') up to the conventional sign and leading-coefficient factor."""
    return resultant(f, f.derivative(var), var)


# ---------------------------------------------------------------------------
# gcd and squarefree parts


def _main_var(*polys):
    for v in polys[0].vars:
        if any(p.degree(v) > 0 for p in polys):
            return v
    return None


def content(f: MultiPoly, var: str) -> MultiPoly:
    """gcd of the coefficients of ``f`` viewed as a polynomial in ``var``."""
    g = None
    for c in f.coefficients(var):
        if c.is_zero():
            continue
        g = c if g is None else gcd(g, c)
        if g.is_constant():
            return MultiPoly.const(1, f.vars)
    return g if g is not None else MultiPoly._raw(f.vars, {})


def primitive_part(f: MultiPoly, var: str) -> MultiPoly:
    if f.is_zero():
        return f
    return exact_div(f, content(f, var)).integer_content_normalized()


def gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Normalized greatest common divisor (recursive primitive PRS)."""
    f, g = f._align(g)
    if f.is_zero():
        return g.integer_content_normalized()
    if g.is_zero():
        return f.integer_content_normalized()
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(1, f.vars)
    v = _main_var(f, g)
    if f.degree(v) == 0:
        return gcd(f, content(g, v))
    if g.degree(v) == 0:
        return gcd(content(f, v), g)
    cf, cg = content(f, v), content(g, v)
    c = gcd(cf, cg)
    a, b = exact_div(f, cf), exact_div(g, cg)
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while not b.is_zero() and b.degree(v) > 0:
        r = prem(a, b, v)
        a, b = b, (primitive_part(r, v) if not r.is_zero() else r)
    h = a if b.is_zero() else MultiPoly.const(1, f.vars)
    if not h.is_constant():
        h = primitive_part(h, v)
    return (c * h).integer_content_normalized()


def squarefree_part(f: MultiPoly, var: str | None = None) -> MultiPoly:
    """Squarefree part, normalized.

    For the primitive part in ``var`` this is f / gcd(f, df/dvar); the content
    (factors free of ``var``) is made squarefree recursively rather than
    dropped.  With ``var=None`` the first used variable is taken.
    """
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.is_constant():
        return MultiPoly.const(1, f.vars)
    used = f.used_vars()
    v = var if var is not None and var in used else used[0]
    c = content(f, v)
    pp = exact_div(f, c)
    core = exact_div(pp, gcd(pp, pp.derivative(v)))
    if not c.is_constant():
        core = core * squarefree_part(c)
    return core.integer_content_normalized()


def squarefree_decomposition(f: MultiPoly, var: str | None = None) -> list[MultiPoly]:
    """Yun's algorithm for a univariate ``f``: returns [a1, a2, ...] with f ~ prod a_i^i."""
    if var is None:
        used = f.used_vars()
        if len(used) != 1:
            raise ValueError("squarefree_decomposition expects a univariate polynomial")
        var = used[0]
    one = MultiPoly.const(1, f.vars)
    if f.degree(var) <= 0:
        return []
    fp = f.derivative(var)
    a0 = gcd(f, fp)
    b = exact_div(f, a0)
    c = exact_div(fp, a0)
    d = c - b.derivative(var)
    out = []
    while b.degree(var) > 0:
        a = gcd(b, d)
        out.append(a)
        b = exact_div(b, a)
        c = exact_div(d, a)
        d = c - b.derivative(var)
    while out and out[-1] == one:
        out.pop()
    return [p.integer_content_normalized() for p in out]


def strip_monomial(f: MultiPoly) -> MultiPoly:
    """Divide out the largest monomial factor."""
    if f.is_zero():
        return f
    low = tuple(min(e[k] for e in f.terms) for k in range(len(f.vars)))
    if not any(low):
        return f
    return MultiPoly._raw(f.vars, {tuple(a - b for a, b in zip(e, low)): c for e, c in f.terms.items()})


def reduce_mod(f: MultiPoly, modulus: MultiPoly, var: str) -> MultiPoly:
    """Remainder of ``f`` modulo a polynomial with unit leading coefficient in ``var``."""
    if modulus.degree(var) <= 0:
        raise ValueError(f"modulus does not involve {var}")
    return divrem(f, modulus, var).remainder


def as_fraction_list(f: MultiPoly) -> list[Fraction]:
    return f.univariate_coeffs()
