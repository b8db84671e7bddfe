"""Loop-style kernels compiled with numba (see ``knotchar.kernels``)."""

import numpy as np

from ._accel import njit

# status codes shared with the numpy implementation
OK, COLLISION, STEP_FAILURE, NO_CONVERGENCE, SINGULAR = 0, 1, 2, 3, 4


@njit
def horner(c, z):
    """Value and derivative of sum c[k] z^(n-k) (coefficients highest first)."""
    p = c[0]
    dp = 0j
    for k in range(1, c.shape[0]):
        dp = dp * z + p
        p = p * z + c[k]
    return p, dp


@njit
def initial_guesses(c):
    n = c.shape[0] - 1
    lead = abs(c[0])
    bound = 0.0
    for k in range(1, n + 1):
        r = (abs(c[k]) / lead) ** (1.0 / k)
        if r > bound:
            bound = r
    if bound == 0.0:
        bound = 1.0
    z = np.empty(n, np.complex128)
    for k in range(n):
        ang = 2.0 * np.pi * k / n + 0.4
        z[k] = bound * (np.cos(ang) + 1j * np.sin(ang))
    return z


@njit
def aberth(c, z, tol, maxiter):
    """Aberth-Ehrlich sweeps in place on ``z``; returns (iterations, converged)."""
    n = z.shape[0]
    for it in range(maxiter):
        worst = 0.0
        for i in range(n):
            p, dp = horner(c, z[i])
            if p == 0:
                continue
            if dp == 0:
                ratio = p
            else:
                ratio = p / dp
            s = 0j
            for j in range(n):
                if j != i:
                    d = z[i] - z[j]
                    if d != 0:
                        s += 1.0 / d
            w = ratio / (1.0 - ratio * s)
            z[i] -= w
            rel = abs(w) / max(1.0, abs(z[i]))
            if rel > worst:
                worst = rel
        if worst < tol:
            return it + 1, True
    return maxiter, False


@njit
def _m_of(kind, prm, s):
    if kind == 0:
        return prm[0] + (prm[1] - prm[0]) * s, prm[1] - prm[0]
    ang = prm[2].real + (prm[3].real - prm[2].real) * s
    e = np.cos(ang) + 1j * np.sin(ang)
    r = prm[1].real
    return prm[0] + r * e, 1j * (prm[3].real - prm[2].real) * r * e


@njit
def _fiber(A, m, out):
    # out[k] = coefficient of l^(nl-k) at m (highest first)
    nm, nl1 = A.shape
    for j in range(nl1):
        acc = 0j
        for i in range(nm - 1, -1, -1):
            acc = acc * m + A[i, j]
        out[nl1 - 1 - j] = acc


@njit
def eval_partials(A, m, l):
    """A(m,l), dA/dm, dA/dl for A[i, j] = coefficient of m^i l^j."""
    nm, nl1 = A.shape
    val = 0j
    dm = 0j
    dl = 0j
    for j in range(nl1 - 1, -1, -1):
        c = 0j
        cd = 0j
        for i in range(nm - 1, -1, -1):
            cd = cd * m + c
            c = c * m + A[i, j]
        dl = dl * l + val
        val = val * l + c
        dm = dm * l + cd
    return val, dm, dl


@njit
def _nearest(roots, target):
    best = 0
    bd = abs(roots[0] - target)
    for k in range(1, roots.shape[0]):
        d = abs(roots[k] - target)
        if d < bd:
            bd = d
            best = k
    return best, bd


@njit
def _separation(roots, idx):
    sep = np.inf
    for k in range(roots.shape[0]):
        if k != idx:
            d = abs(roots[k] - roots[idx])
            if d < sep:
                sep = d
    return sep


@njit
def track_piece(A, kind, prm, s_grid, l0, min_sep, max_halvings, tol):
    """Follow the root l(s) of A(m(s), l) = 0 over the grid ``s_grid``.

    Returns (l values, dl/ds values, status, s at failure).  A step is accepted
    when the chosen root lies within a third of the root separation of the
    Euler prediction; otherwise the step is halved.
    """
    n = s_grid.shape[0]
    nl = A.shape[1] - 1
    ls = np.zeros(n, np.complex128)
    dls = np.zeros(n, np.complex128)
    coef = np.empty(nl + 1, np.complex128)
    s = s_grid[0]
    m, dm = _m_of(kind, prm, s)
    _fiber(A, m, coef)
    roots = initial_guesses(coef)
    it, ok = aberth(coef, roots, tol, 500)
    if not ok:
        return ls, dls, NO_CONVERGENCE, s
    idx, _ = _nearest(roots, l0)
    l = roots[idx]
    if _separation(roots, idx) < min_sep:
        return ls, dls, COLLISION, s
    val, am, al = eval_partials(A, m, l)
    if al == 0:
        return ls, dls, SINGULAR, s
    dl = -am / al * dm
    ls[0] = l
    dls[0] = dl
    trial = np.empty(nl, np.complex128)
    for k in range(1, n):
        target = s_grid[k]
        h = target - s
        halv = 0
        while target - s > 1e-15:
            if h > target - s:
                h = target - s
            mn, dmn = _m_of(kind, prm, s + h)
            _fiber(A, mn, coef)
            for q in range(nl):
                trial[q] = roots[q]
            it, ok = aberth(coef, trial, tol, 200)
            if not ok:
                return ls, dls, NO_CONVERGENCE, s + h
            pred = l + dl * h
            j, drift = _nearest(trial, pred)
            sep = _separation(trial, j)
            if sep < min_sep:
                return ls, dls, COLLISION, s + h
            if drift > sep / 3.0:
                h *= 0.5
                halv += 1
                if halv > max_halvings:
                    return ls, dls, STEP_FAILURE, s
                continue
            s = s + h
            l = trial[j]
            for q in range(nl):
                roots[q] = trial[q]
            val, am, al = eval_partials(A, mn, l)
            if al == 0:
                return ls, dls, SINGULAR, s
            dl = -am / al * dmn
            h *= 2.0
        ls[k] = l
        dls[k] = dl
    return ls, dls, OK, s_grid[n - 1]


@njit
def poly_roots(c, tol, maxiter):
    z = initial_guesses(c)
    it, ok = aberth(c, z, tol, maxiter)
    return z, it, ok
