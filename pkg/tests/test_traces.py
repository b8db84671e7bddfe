import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from knotchar.traces import (GroupWord, WordParseError, at_equal_meridians, chebyshev, peripheral_trace,
                             reduce_word, trace_poly)
from knotchar.poly import MultiPoly, parse_poly

XZ = ("x", "z")
rng = np.random.default_rng(7)


def random_sl2():
    M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return M / np.sqrt(np.linalg.det(M))


def matrix_of(word, A, B):
    mats = {"a": A, "b": B, "A": np.linalg.inv(A), "B": np.linalg.inv(B)}
    out = np.eye(2, dtype=complex)
    for ch in word:
        out = out @ mats[ch]
    return out


words = st.text(alphabet="abAB", min_size=0, max_size=12)


@settings(max_examples=80, deadline=None)
@given(words)
def test_trace_poly_matches_matrices(w):
    # independent oracle: traces of random SL2(C) matrices
    A, B = random_sl2(), random_sl2()
    p = trace_poly(w)
    vals = {"x": np.trace(A), "y": np.trace(B), "z": np.trace(A @ B)}
    got = complex(p.evaluate(vals))
    want = np.trace(matrix_of(w, A, B))
    assert abs(got - want) < 1e-8 * max(1.0, abs(want))


@pytest.mark.parametrize("word,expected", [
    ("aa", "x^2 - 2"),
    ("BabA", "z^2 - x^2*z + 2*x^2 - 2"),
    ("aab", "x*z - x"),
    ("bAAb", "x^4 - z*x^2 - 2*x^2 + 2"),
    ("aBabA", "x"),
])
def test_known_trace_identities(word, expected):
    assert at_equal_meridians(trace_poly(word)) == parse_poly(expected, XZ)


@settings(max_examples=40, deadline=None)
@given(words)
def test_trace_invariant_under_inverse_and_rotation(w):
    g = GroupWord.parse(w)
    assert trace_poly(g) == trace_poly(g.inverse())
    if w:
        assert trace_poly(w) == trace_poly(w[1:] + w[0])


def test_free_reduction():
    assert str(reduce_word("abBA")) == str(GroupWord.parse(""))
    with pytest.raises(WordParseError):
        GroupWord.parse("abc")


def test_chebyshev_is_trace_of_power():
    t = MultiPoly.var("x", ("x",))
    M = random_sl2()
    for n in range(0, 7):
        assert abs(complex(chebyshev(t, n).evaluate({"x": np.trace(M)}))
                   - np.trace(np.linalg.matrix_power(M, n))) < 1e-8


@pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (3, 1), (-2, 3), (5, -2), (-4, -1)])
def test_peripheral_trace_on_diagonal(p, q):
    m, l = 1.3 + 0.4j, -0.7 + 0.9j
    u, v, w = m + 1 / m, l + 1 / l, m * l + 1 / (m * l)
    got = complex(peripheral_trace(p, q).evaluate({"u": u, "v": v, "w": w}))
    want = m ** p * l ** q + m ** -p * l ** -q
    assert abs(got - want) < 1e-9 * max(1, abs(want))
