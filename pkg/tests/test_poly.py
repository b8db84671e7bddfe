from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knotchar.factor import from_sympy, to_sympy
from knotchar.poly import MultiPoly, PolyParseError, parse_poly, parse_rational

XZ = ("x", "z")

terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.fractions(min_value=-5, max_value=5, max_denominator=4),
    max_size=5,
)


def poly(d):
    return MultiPoly(XZ, d)


def as_sympy(p):
    return to_sympy(p)[0]


def test_parse_and_print_roundtrip():
    p = parse_poly("x^2*z - 2*x^2 - z^2 + z + 1", XZ)
    assert p.degree("x") == 2 and p.degree("z") == 2
    assert parse_poly(str(p), XZ) == p


def test_parse_rational_function():
    f = parse_rational("(m^2 + l)/(m + 3)", ("m", "l"))
    assert f.evaluate({"m": 1, "l": 2}) == pytest.approx(0.75)
    assert not f.is_polynomial()


def test_parse_error():
    with pytest.raises(PolyParseError):
        parse_poly("x^^2", XZ)


def test_exact_rational_coefficients():
    p = parse_poly("x/3 + z/6", XZ)
    assert p.evaluate_exact({"x": 1, "z": 1}) == Fraction(1, 2)


@settings(max_examples=60, deadline=None)
@given(terms, terms)
def test_arithmetic_matches_sympy(a, b):
    p, q = poly(a), poly(b)
    for ours, theirs in [(p + q, as_sympy(p) + as_sympy(q)),
                         (p - q, as_sympy(p) - as_sympy(q)),
                         (p * q, as_sympy(p) * as_sympy(q))]:
        assert ours == from_sympy(theirs.as_expr(), XZ)


@settings(max_examples=60, deadline=None)
@given(terms, terms, terms)
def test_ring_laws(a, b, c):
    p, q, r = poly(a), poly(b), poly(c)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)


@settings(max_examples=40, deadline=None)
@given(terms)
def test_json_roundtrip(a):
    p = poly(a)
    assert MultiPoly.from_json(p.to_json()) == p


def test_derivative_and_subs():
    p = parse_poly("x^3*z + 2*z^2", XZ)
    assert p.derivative("x") == parse_poly("3*x^2*z", XZ)
    assert p.subs({"z": parse_poly("x + 1", XZ)}) == parse_poly("x^4 + x^3 + 2*x^2 + 4*x + 2", XZ)
