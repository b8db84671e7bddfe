from fractions import Fraction

import numpy as np
import pytest

from knotchar.regulator import (Arc, PathError, PathSpec, QuadratureError, Segment, circle, detect_rational,
                                fiber_roots, holonomy, integrate_forms, loop_library, parse_driver, romberg,
                                track_path, vol_cs)

VOLK = 2.029883212819307


@pytest.fixture(scope="module")
def curve(fig8):
    return fig8.eigencurve


@pytest.fixture(scope="module")
def loops(curve):
    return loop_library(curve)


def test_romberg_exact_for_smooth_integrand():
    s = np.linspace(0, 1, 65)
    v, err = romberg(np.exp(s), 1 / 64)
    assert v == pytest.approx(np.e - 1, abs=1e-13) and err < 1e-10
    with pytest.raises(ValueError):
        romberg(np.ones(10), 0.1)


def test_parse_driver():
    pieces = parse_driver("segment(1, 1.1); arc(1, 0.1, 0, 1/2)")
    assert isinstance(pieces[0], Segment) and isinstance(pieces[1], Arc)
    assert pieces[1].turn1 == Fraction(1, 2)
    lasso = parse_driver("circle(1.0, 0.1)", base_m=1 + 0j)
    assert lasso[0].start == lasso[-1].end == 1
    assert len(parse_driver("segment(1, 1.1+0.05i) + segment(1.1+0.05i, 2)")) == 2
    with pytest.raises(ValueError):
        parse_driver("spiral(1, 2)")
    with pytest.raises(ValueError):
        parse_driver("segment(1, 2) segment(2, 3)")
    with pytest.raises(ValueError):
        PathSpec([circle(0.05, 0.05)], 1)  # passes through m = 0


def test_volume_along_real_deformation(curve):
    # [DERIVED] independent oracle: numpy roots of A0 tracked on 40001 real m-values,
    # eta by the trapezoid rule in arg l; agrees to 4e-10
    m1 = np.exp(0.1)
    geo = track_path(curve, PathSpec(parse_driver(f"segment(1, {m1})"), -1))
    other = track_path(curve, PathSpec(parse_driver(f"segment(1, {m1})"), -1, branch="other"))
    assert vol_cs(geo, VOLK, 0)[0] == pytest.approx(1.99453724356, abs=1e-8)
    assert vol_cs(other, VOLK, 0)[0] == pytest.approx(2.06522918208, abs=1e-8)
    assert geo.l[-1] == pytest.approx(-0.938994383780621 + 0.343932474809303j, abs=1e-10)


def test_reversal_negates_integrals(curve):
    fwd = track_path(curve, PathSpec(parse_driver("segment(1, 1.1+0.05i); segment(1.1+0.05i, 0.9+0.1i)"), -1))
    back = track_path(curve, PathSpec([p.reversed() for p in reversed(fwd.spec.pieces)], fwd.l[-1]))
    a, b = integrate_forms(fwd), integrate_forms(back)
    assert back.l[-1] == pytest.approx(-1, abs=1e-9)
    assert a.eta == pytest.approx(-b.eta, abs=1e-10)
    assert a.xi == pytest.approx(-b.xi, abs=1e-10)


def test_concatenation_adds_integrals(curve):
    whole = track_path(curve, PathSpec(parse_driver("segment(1, 1.1+0.05i); segment(1.1+0.05i, 0.9+0.1i)"), -1))
    first = track_path(curve, PathSpec(parse_driver("segment(1, 1.1+0.05i)"), -1))
    second = track_path(curve, PathSpec(parse_driver("segment(1.1+0.05i, 0.9+0.1i)"), first.l[-1]))
    w, a, b = (integrate_forms(p) for p in (whole, first, second))
    assert w.eta == pytest.approx(a.eta + b.eta, abs=1e-10)
    assert w.xi == pytest.approx(a.xi + b.xi, abs=1e-10)


def test_lasso_returns_to_volume(curve):
    path = track_path(curve, PathSpec(parse_driver("circle(1.0, 0.1)", 1 + 0j), -1))
    assert path.closed
    assert vol_cs(path, VOLK, 0)[0] == pytest.approx(VOLK, abs=1e-9)


def test_loop_library(loops):
    assert len(loops) >= 4
    for loop, path in loops:
        assert path.closed
        fi = integrate_forms(path, tol=1e-6)
        assert abs(fi.eta) < 1e-6
        assert detect_rational(fi.xi_loop / (4 * np.pi ** 2)) is not None


def _lift_near_zero(curve, m):
    return complex([l for l in fiber_roots(curve.C, m) if abs(l) < 0.5][0])


def test_base_point_independence(curve):
    # the same small circle around m = 0, started at two different angles
    vals = []
    for t0 in (Fraction(0), Fraction(3, 8)):
        arc = Arc(0j, 0.1, t0, t0 + 1)
        path = track_path(curve, PathSpec([arc], _lift_near_zero(curve, arc.start)))
        fi = integrate_forms(path)
        vals.append((holonomy("l", "m + 2", path), fi.xi_loop, fi.eta))
    (h0, x0, e0), (h1, x1, e1) = vals
    assert h0 == pytest.approx(h1, abs=1e-9) == pytest.approx(1 / 16, abs=1e-9)
    assert e0 == pytest.approx(e1, abs=1e-8)
    # xi/4pi^2 depends on the log branches at the base point only up to an integer
    k = (x0 - x1) / (4 * np.pi ** 2)
    assert k == pytest.approx(round(k), abs=1e-8)


def test_holonomy_bimultiplicative(loops):
    checked = 0
    for _, path in loops[:8]:
        try:
            lhs = holonomy("(m + 2)*(l - 3)", "l", path)
            rhs = holonomy("m + 2", "l", path) * holonomy("l - 3", "l", path)
        except (PathError, QuadratureError):
            continue
        assert lhs == pytest.approx(rhs, abs=1e-8)
        checked += 1
    assert checked >= 3


def test_holonomy_needs_closed_loop(curve):
    path = track_path(curve, PathSpec(parse_driver("segment(1, 1.1)"), -1))
    with pytest.raises(PathError):
        holonomy("m", "l", path)


def test_detect_rational():
    assert detect_rational(0.75 + 1e-9) == (3, 4)
    assert detect_rational(np.pi, max_den=64) is None
    with pytest.raises(ValueError):
        detect_rational(0.5, max_den=0)


def test_csv_dump(curve):
    path = track_path(curve, PathSpec(parse_driver("segment(1, 1.1)"), -1))
    lines = path.to_csv().splitlines()
    assert lines[0] == "t,re_m,im_m,re_l,im_l,log_abs_m,log_abs_l,arg_m,arg_l"
    assert len(lines) == len(path.m) + 1
