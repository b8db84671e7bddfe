import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from knotchar.boundary import (base_point, eigen_lifts, involution_image, is_involution_symmetric, point_test,
                               surface_residual, t_D)
from knotchar.poly import parse_poly

XZ, ML = ("x", "z"), ("m", "l")
# [DERIVED] sympy: numerator of F(m + 1/m) - (l + 1/l), with F the longitude trace below
A0 = "m^8*l - m^6*l - m^4*l^2 - 2*m^4*l - m^4 - m^2*l + l"

nonzero = st.fractions(min_value=-20, max_value=20, max_denominator=30).filter(lambda q: q != 0)
cplx = st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(nonzero, nonzero)
def test_tD_exact_symmetry_and_surface(m, l):
    assert t_D(m, l) == t_D(1 / m, 1 / l)
    assert surface_residual(*t_D(m, l)) == 0


@settings(max_examples=100, deadline=None)
@given(cplx, cplx)
def test_tD_numeric_surface(m, l):
    x, y, z = t_D(m, l)
    assert abs(surface_residual(x, y, z)) < 1e-9 * max(1.0, abs(x), abs(y), abs(z)) ** 3


def test_tD_rejects_zero():
    with pytest.raises(ValueError):
        t_D(0, 1)


def test_restriction_map(fig8):
    tr = fig8.triple
    assert tr.I_mu.with_vars(XZ) == parse_poly("x", XZ)
    assert tr.I_lambda.with_vars(XZ) == parse_poly("x^4 - 5*x^2 + 2", XZ)
    assert tr.I_mulambda.with_vars(XZ) == parse_poly("(4*x - x^3)*z + x^5 - 4*x^3 - x", XZ)
    assert tr.surface_remainder().is_zero()


def test_apolynomial(fig8):
    A = fig8.apoly.poly
    assert A == parse_poly(A0, ML)
    assert is_involution_symmetric(A)
    assert involution_image(A) == A
    assert A.evaluate_exact({"m": 1, "l": -1}) == 0


def test_point_test(fig8):
    res = point_test(fig8.apoly.poly, fig8.triple, 50, np.random.default_rng(3))
    assert res.passed == res.tried == 50 and res.max_residual < 1e-7


def test_eigen_lifts_are_on_apoly(fig8):
    A = fig8.apoly.poly
    x0 = 0.7 + 0.2j
    z0 = complex(np.roots([-1, 1 + x0 ** 2, 1 - 2 * x0 ** 2])[0])
    lifts = eigen_lifts(fig8.triple, x0, z0)
    assert len(lifts) == 2
    for m, l in lifts:
        assert abs(complex(A.evaluate({"m": m, "l": l}))) < 1e-10


def test_base_point(fig8):
    m, l = base_point(fig8.apoly.poly)
    assert m == 1 and l == pytest.approx(-1)
