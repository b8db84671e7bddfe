"""Hot numerical kernels: root finding, bivariate evaluation, curve tracking.

The numba implementation is used by default; set ``KNOTCHAR_DISABLE_JIT=1``
to run the pure numpy implementation instead.  Both expose:

``poly_roots(c, tol, maxiter)``
    all roots of the polynomial with complex coefficients ``c`` (highest
    degree first); returns (roots, sweeps, converged).
``eval_partials(A, m, l)``
    A(m,l), dA/dm, dA/dl for the coefficient grid ``A[i, j]`` of m^i l^j.
``track_piece(A, kind, prm, s_grid, l0, min_sep, max_halvings, tol)``
    follow a root of A(m(s), l) = 0 along a segment (kind 0, prm = [a, b])
    or an arc (kind 1, prm = [center, radius, angle0, angle1]).
"""

from ._accel import JIT_ENABLED

if JIT_ENABLED:
    from ._kernels_numba import (COLLISION, NO_CONVERGENCE, OK, SINGULAR, STEP_FAILURE,
                                 eval_partials, poly_roots, track_piece)
else:
    from ._kernels_numpy import (COLLISION, NO_CONVERGENCE, OK, SINGULAR, STEP_FAILURE,  # noqa: F401
                                 eval_partials, poly_roots, track_piece)

BACKEND = "numba" if JIT_ENABLED else "numpy"

STATUS_TEXT = {
    OK: "ok",
    COLLISION: "fibre roots collide (branch point or node)",
    STEP_FAILURE: "step size underflow",
    NO_CONVERGENCE: "root iteration did not converge",
    SINGULAR: "singular point of the curve",
}
