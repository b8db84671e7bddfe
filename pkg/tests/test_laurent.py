import numpy as np
import pytest
import sympy

from knotchar.laurent import Laurent, PrecisionError

t = sympy.symbols("t")


def coeffs(expr, n):
    s = sympy.series(expr, t, 0, n).removeO()
    return np.array([complex(s.coeff(t, k)) for k in range(n)])


def test_inverse_and_sqrt_match_sympy():
    N = 10
    a = Laurent([1, 2, 3], 0, N)           # 1 + 2t + 3t^2
    inv = a.inverse()
    assert np.allclose([inv.coeff(k) for k in range(N)], coeffs(1 / (1 + 2 * t + 3 * t ** 2), N))
    r = a.sqrt()
    assert np.allclose([r.coeff(k) for k in range(N)], coeffs(sympy.sqrt(1 + 2 * t + 3 * t ** 2), N))


def test_valuation_arithmetic():
    a = Laurent([2, 1], -3, 8)
    b = Laurent([5], 2, 8)
    assert (a * b).valuation() == -1
    assert (a / b).valuation() == -5
    assert (a * b).leading() == 10


def test_cancellation_raises():
    a = Laurent([1, 1], 0, 4)
    with pytest.raises(PrecisionError):
        (a - a).valuation()


def test_ramify_and_evaluate():
    a = Laurent([1, 1], 0, 5).ramify(2)     # 1 + t^2
    assert a.coeff(2) == 1 and a.coeff(1) == 0
    assert a.evaluate(0.1) == pytest.approx(1.01)
