"""Irreducible factorization over Q, delegated to sympy.

Only used to split eliminants into irreducible pieces before numeric
screening; every factor is checked by exact division afterwards.
"""

from __future__ import annotations

import sympy

from .elim import exact_div
from .poly import MultiPoly


def to_sympy(p: MultiPoly):
    gens = sympy.symbols(p.vars) if p.vars else ()
    if not p.vars:
        return sympy.Rational(p.constant_value().numerator, p.constant_value().denominator), ()
    terms = {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()}
    return sympy.Poly.from_dict(terms, *gens) if terms else sympy.Poly(0, *gens), gens


def from_sympy(poly, vars) -> MultiPoly:
    vars = tuple(vars)
    sp = sympy.Poly(poly, *sympy.symbols(vars))
    return MultiPoly(vars, {e: sympy_to_fraction(c) for e, c in sp.as_dict().items()})


def sympy_to_fraction(c):
    from fractions import Fraction

    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


def factor_irreducible(p: MultiPoly) -> list[tuple[MultiPoly, int]]:
    """Normalized irreducible factors with multiplicities (constants dropped)."""
    if p.is_zero():
        raise ValueError("cannot factor zero")
    if p.is_constant():
        return []
    sp, gens = to_sympy(p)
    _, facs = sp.factor_list()
    out = []
    rest = p
    for f, k in facs:
        mp = from_sympy(f.as_expr(), p.vars).integer_content_normalized()
        for _ in range(k):
            rest = exact_div(rest, mp)  # raises if sympy and we disagree
        out.append((mp, k))
    if not rest.is_constant():
        raise ArithmeticError("factorization does not reproduce the input")
    out.sort(key=lambda t: (t[0].total_degree(), str(t[0])))
    return out
