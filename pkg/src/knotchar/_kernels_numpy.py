"""Pure numpy versions of the kernels in ``_kernels_numba``.

Same signatures and status codes; root solving uses vectorised
(simultaneous-update) Aberth sweeps and companion-matrix eigenvalues.
"""

import numpy as np

OK, COLLISION, STEP_FAILURE, NO_CONVERGENCE, SINGULAR = 0, 1, 2, 3, 4


def horner(c, z):
    c = np.asarray(c, dtype=complex)
    return np.polyval(c, z), np.polyval(np.polyder(c), z) if c.size > 1 else 0j


def initial_guesses(c):
    c = np.asarray(c, dtype=complex)
    n = c.size - 1
    k = np.arange(1, n + 1)
    bound = np.max((np.abs(c[1:]) / abs(c[0])) ** (1.0 / k)) if n else 1.0
    if bound == 0:
        bound = 1.0
    return bound * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))


def aberth(c, z, tol, maxiter):
    c = np.asarray(c, dtype=complex)
    dc = np.polyder(c)
    n = z.size
    for it in range(maxiter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, p)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = np.where(p != 0, ratio / (1.0 - ratio * s), 0)
        w = np.nan_to_num(w)
        z -= w
        if n == 0 or np.max(np.abs(w) / np.maximum(1.0, np.abs(z))) < tol:
            return it + 1, True
    return maxiter, False


def poly_roots(c, tol, maxiter):
    z = initial_guesses(c)
    it, ok = aberth(c, z, tol, maxiter)
    return z, it, ok


def _m_of(kind, prm, s):
    if kind == 0:
        return prm[0] + (prm[1] - prm[0]) * s, prm[1] - prm[0]
    a0, a1, r = prm[2].real, prm[3].real, prm[1].real
    e = np.exp(1j * (a0 + (a1 - a0) * s))
    return prm[0] + r * e, 1j * (a1 - a0) * r * e


def eval_partials(A, m, l):
    nm, nl1 = A.shape
    mp = m ** np.arange(nm)
    lp = l ** np.arange(nl1)
    val = mp @ A @ lp
    dm = (np.arange(1, nm) * mp[:-1]) @ A[1:] @ lp if nm > 1 else 0j
    dl = mp @ A[:, 1:] @ (np.arange(1, nl1) * lp[:-1]) if nl1 > 1 else 0j
    return val, dm, dl


def _fiber(A, m):
    return (m ** np.arange(A.shape[0]) @ A)[::-1]


def _roots(coef):
    return np.roots(coef).astype(complex)


def track_piece(A, kind, prm, s_grid, l0, min_sep, max_halvings, tol):
    n = s_grid.size
    ls = np.zeros(n, complex)
    dls = np.zeros(n, complex)
    s = s_grid[0]
    m, dm = _m_of(kind, prm, s)
    roots = _roots(_fiber(A, m))
    idx = int(np.argmin(np.abs(roots - l0)))
    l = roots[idx]

    def sep_of(r, j):
        d = np.abs(r - r[j])
        d[j] = np.inf
        return d.min() if d.size > 1 else np.inf

    if sep_of(roots, idx) < min_sep:
        return ls, dls, COLLISION, s
    _, am, al = eval_partials(A, m, l)
    if al == 0:
        return ls, dls, SINGULAR, s
    dl = -am / al * dm
    ls[0], dls[0] = l, dl
    for k in range(1, n):
        target = s_grid[k]
        h = target - s
        halv = 0
        while target - s > 1e-15:
            h = min(h, target - s)
            mn, dmn = _m_of(kind, prm, s + h)
            trial = _roots(_fiber(A, mn))
            pred = l + dl * h
            j = int(np.argmin(np.abs(trial - pred)))
            drift = abs(trial[j] - pred)
            sep = sep_of(trial, j)
            if sep < min_sep:
                return ls, dls, COLLISION, s + h
            if drift > sep / 3.0:
                h *= 0.5
                halv += 1
                if halv > max_halvings:
                    return ls, dls, STEP_FAILURE, s
                continue
            s += h
            # one Newton step on the fibre polynomial to polish the eigenvalue root
            val, am, al = eval_partials(A, mn, trial[j])
            l = trial[j] - val / al if al != 0 else trial[j]
            _, am, al = eval_partials(A, mn, l)
            if al == 0:
                return ls, dls, SINGULAR, s
            dl = -am / al * dmn
            h *= 2.0
        ls[k], dls[k] = l, dl
    return ls, dls, OK, s_grid[-1]
