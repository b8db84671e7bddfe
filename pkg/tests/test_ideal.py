from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knotchar.charvar import PlaneCurve
from knotchar.ideal import (affine_point, branch_expansions, cs_norm, eigen_functionals, format_point,
                            ideal_orders, ideal_points, projective_closure, tame_symbol, valuation)
from knotchar.poly import parse_poly, parse_rational
from knotchar.surgery import coprime_slopes

UV, ML = ("u", "v"), ("m", "l")


def closure(text, vars=UV):
    return projective_closure(PlaneCurve(parse_poly(text, vars), vars))


def test_fig8_ideal_points(fig8):
    nd = fig8.norm
    assert sorted(format_point(p) for p in nd.points) == ["[0:0:1]", "[1:0:0]"]
    assert [-2 * b.v_mu for b in nd.branches] == [2, 2]
    assert [-2 * b.v_lambda for b in nd.branches] == [8, 8]


def test_norm_formula(fig8):
    # closed form of the norm for the figure-eight knot
    for s in coprime_slopes(10, 10):
        assert cs_norm(fig8.norm, s.p, s.q) == 2 * (abs(s.p + 4 * s.q) + abs(s.p - 4 * s.q))
    assert cs_norm(fig8.norm, 1, 0) == 4 and cs_norm(fig8.norm, 0, 1) == 16


def test_eigenvalue_functionals_agree_with_traces(fig8):
    nd = fig8.norm
    for (a, b), bd, s in zip(eigen_functionals(nd), nd.branches, nd.signs):
        assert abs(a) == bd.weights[0] and abs(b) == bd.weights[1]


def test_ideal_orders(fig8):
    assert ideal_orders(fig8.norm, 1, 1) == [-6, -10]
    assert ideal_orders(fig8.norm, 4, 1) == [4, -16]  # a boundary slope: f_gamma vanishes at one ideal point
    # all poles of f_gamma sit at ideal points, so their total is the degree, i.e. the norm
    for s in coprime_slopes(5, 5):
        assert sum(-v for v in ideal_orders(fig8.norm, s.p, s.q) if v < 0) == cs_norm(fig8.norm, s.p, s.q)


def test_cusp_branch():
    pc = closure("v^2 - u^3")
    [br] = branch_expansions(pc, affine_point(pc, 0, 0))
    assert br.e == 2
    u, v = parse_rational("u", UV), parse_rational("v", UV)
    assert valuation(u, br).value == 2 and valuation(v, br).value == 3
    # T(u, v - 3) = u^0 / (v - 3)^2 at the point
    assert tame_symbol(u, parse_rational("v - 3", UV), br) == pytest.approx(1 / 9)


def test_node_has_two_branches():
    pc = closure("v^2 - u^2 - u^3")
    brs = branch_expansions(pc, affine_point(pc, 0, 0))
    assert sorted(b.e for b in brs) == [1, 1]
    slopes = sorted(b.series[Fraction(1)].real for b in brs)
    assert slopes == pytest.approx([-1, 1])


def test_tangent_multiple_root():
    # (v - u)^2 = u^3: one branch tangent to the diagonal, ramified
    pc = closure("(v - u)^2 - u^3")
    [br] = branch_expansions(pc, affine_point(pc, 0, 0))
    assert br.e == 2 and br.residual < 1e-8


def test_apoly_ideal_point_with_two_ramified_branches(fig8):
    pc = projective_closure(PlaneCurve(fig8.apoly.poly, ML))
    P = [p for p in ideal_points(pc) if format_point(p) == "[0:0:1]"][0]
    brs = branch_expansions(pc, P)
    assert sorted(b.e for b in brs) == [3, 5]
    assert all(b.residual < 1e-8 for b in brs)


def test_tame_symbol_at_origin_of_apoly(fig8):
    # the branch l ~ m^4 through (0, 0): T(l, m + 2) = 1 / 2^4
    pc = projective_closure(PlaneCurve(fig8.apoly.poly, ML))
    [br] = branch_expansions(pc, affine_point(pc, 0, 0))
    T = tame_symbol(parse_rational("l", ML), parse_rational("m + 2", ML), br)
    assert T == pytest.approx(1 / 16, abs=1e-12)


fns = st.sampled_from(["x", "z", "x + 1", "z - 2", "x^2 - z", "(x + 3)/(z + 1)", "x*z + 5", "2"])


@settings(max_examples=40, deadline=None)
@given(fns, fns, fns)
def test_tame_symbol_laws(fig8, a, b, c):
    XZ = ("x", "z")
    f, g, h = (parse_rational(s, XZ) for s in (a, b, c))
    for bd in fig8.norm.branches:
        br = bd.branch
        T = lambda p, q: tame_symbol(p, q, br)  # noqa: E731
        assert T(f, g) * T(g, f) == pytest.approx(1)
        assert T(f * g, h) == pytest.approx(T(f, h) * T(g, h))
