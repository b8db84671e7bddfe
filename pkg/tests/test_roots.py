import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from knotchar.poly import MultiPoly, parse_poly
from knotchar.roots import complex_roots, low_degree_factors, recognize

X = ("x",)


def P(s):
    return parse_poly(s, X)


def test_multiplicities():
    roots = complex_roots(P("(x - 1)^3*(x^2 + 1)*(x + 2)^2"))
    got = sorted((round(r.value.real, 9), round(r.value.imag, 9), r.multiplicity) for r in roots)
    assert got == [(-2.0, 0.0, 2), (0.0, -1.0, 1), (0.0, 1.0, 1), (1.0, 0.0, 3)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=3, max_size=9).filter(lambda c: c[-1] != 0 and c[0] != 0))
def test_roots_match_numpy(coeffs):
    p = MultiPoly.from_univariate(coeffs, "x")
    if len(complex_roots(p)) != p.degree("x"):
        return  # repeated roots: numpy's values are not comparable at this tolerance
    ours = np.sort_complex(np.array([r.value for r in complex_roots(p)]))
    theirs = np.sort_complex(np.roots(coeffs[::-1]))
    for z in ours:
        assert np.min(np.abs(theirs - z)) < 1e-6 * max(1, abs(z))


def test_exact_recognition():
    p = P("(x^2 - 2*x - 1)*(x - 1)*(x^2 - 5)")
    facs = low_degree_factors(p)
    assert all(f.exact for f in facs)
    q = recognize(1 + np.sqrt(2), facs)
    assert str(q) == "1 + sqrt(2)"
    assert str(recognize(-np.sqrt(5), facs)) == "-sqrt(5)"


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        complex_roots(parse_poly("x*z", ("x", "z")))
    with pytest.raises(ValueError):
        complex_roots(P("0"))
