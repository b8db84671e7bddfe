import json
import os
import subprocess
import sys

import numpy as np
import pytest

from knotchar import _kernels_numba as nb
from knotchar import _kernels_numpy as npk
from knotchar.regulator import Segment, circle, coefficient_matrix
from knotchar.poly import parse_poly

A0 = parse_poly("m^8*l - m^6*l - m^4*l^2 - 2*m^4*l - m^4 - m^2*l + l", ("m", "l"))
rng = np.random.default_rng(11)


def sorted_roots(z):
    return np.array(sorted(z, key=lambda w: (round(w.real, 8), round(w.imag, 8))))


@pytest.mark.parametrize("deg", [2, 5, 9, 16])
def test_poly_roots_backends_agree(deg):
    c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    a, _, ok_a = nb.poly_roots(c, 1e-15, 500)
    b, _, ok_b = npk.poly_roots(c, 1e-15, 500)
    assert ok_a and ok_b
    ref = np.roots(c)
    for z in (a, b):
        assert max(np.min(np.abs(ref - w)) for w in z) < 1e-9


def test_eval_partials_backends_agree():
    C = coefficient_matrix(A0)
    m, l = 0.8 + 0.3j, -1.1 + 0.2j
    va = nb.eval_partials(C, m, l)
    vb = npk.eval_partials(C, m, l)
    assert np.allclose(va, vb, atol=1e-12)
    want = complex(A0.evaluate({"m": m, "l": l}))
    assert va[0] == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("piece", [Segment(1.05 + 0j, 1.3 + 0.2j), circle(0j, 0.5)])
def test_track_piece_backends_agree(piece):
    C = coefficient_matrix(A0)
    grid = np.linspace(0, 1, 129)
    l0 = complex(np.roots((piece.start ** np.arange(C.shape[0]) @ C)[::-1])[0])
    out = [k.track_piece(C, piece.kind, piece.params(), grid, l0, 1e-6, 40, 1e-14) for k in (nb, npk)]
    (la, _, sa, _), (lb, _, sb, _) = out
    assert sa == sb == nb.OK
    assert np.max(np.abs(la - lb)) < 1e-10


def test_disable_flag_selects_numpy(tmp_path):
    env = dict(os.environ, KNOTCHAR_DISABLE_JIT="1")
    code = ("import json; from knotchar import kernels; from knotchar.pipeline import Knot;"
            "from knotchar.regulator import loop_library, integrate_forms;"
            "L = loop_library(Knot('fig8').eigencurve);"
            "print(json.dumps([kernels.BACKEND, len(L), [integrate_forms(p).xi_loop for _, p in L]]))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, n, xis = json.loads(out.stdout)
    assert backend == "numpy"
    from knotchar.pipeline import Knot
    from knotchar.regulator import integrate_forms, loop_library

    L = loop_library(Knot("fig8").eigencurve)
    assert n == len(L)
    assert xis == pytest.approx([integrate_forms(p).xi_loop for _, p in L], abs=1e-6)
