import numpy as np
import pytest

from knotchar.charvar import (CharacterVarietyError, is_smooth_affine, numeric_rep_at, points_over_x,
                              reducible_characters)
from knotchar.poly import parse_poly
from knotchar.presentation import PresetError, builtin_presets, load_preset, lobachevsky, parse_preset

XZ = ("x", "z")


def test_presets_ship():
    assert "fig8" in builtin_presets()
    pres = load_preset("fig8")
    assert pres.vol_constant == pytest.approx(2.029883212819307, abs=1e-12)
    with pytest.raises(PresetError):
        parse_preset("name = broken\n")


def test_volume_constant_from_lobachevsky():
    # [DERIVED] 6 * Lambda(pi/3) computed independently with mpmath's Clausen function
    import mpmath

    assert 6 * lobachevsky(np.pi / 3) == pytest.approx(float(3 * mpmath.clsin(2, 2 * mpmath.pi / 3)), abs=1e-12)
    assert load_preset("fig8").vol_constant == pytest.approx(6 * lobachevsky(np.pi / 3), abs=1e-12)


def test_defining_polynomial(fig8):
    want = parse_poly("(x^2 - z - 2)*(z^2 - (1 + x^2)*z + 2*x^2 - 1)", XZ)
    assert fig8.curve.poly in (want, -want)
    assert [c.poly for c in fig8.components] == [parse_poly("x^2*z - 2*x^2 - z^2 + z + 1", XZ)]


def test_component_is_smooth(fig8):
    assert is_smooth_affine(fig8.component)


def test_reducible_characters(fig8):
    red = reducible_characters(fig8.component, fig8.pres.alexander)
    assert sorted(str(p.x_exact) for p in red) == ["-sqrt(5)", "sqrt(5)"]
    assert all(str(p.z_exact) == "3" and p.multiplicity == 2 for p in red)


def test_numeric_representation_satisfies_relator(fig8):
    C = fig8.component
    for pt in points_over_x(C, parse_poly("x^2 - 3", XZ)):
        rep = numeric_rep_at(C, (pt.x, pt.z), fig8.pres)
        assert not rep.reducible and rep.residual < 1e-10


def test_point_off_curve_rejected(fig8):
    with pytest.raises(CharacterVarietyError):
        numeric_rep_at(fig8.component, (0.3, 0.1), fig8.pres)


def test_trefoil_preset():
    from knotchar import Knot

    k = Knot("trefoil")
    assert [c.poly for c in k.components] == [parse_poly("z - 1", XZ)]
    # the torus-knot A-polynomial 1 + l m^6
    assert k.apoly.poly == parse_poly("m^6*l + 1", ("m", "l"))
