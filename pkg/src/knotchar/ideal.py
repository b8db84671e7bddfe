"""Ideal points, Puiseux branches, valuations, the Culler-Shalen norm, tame symbols.

A component curve in (x, z) is closed up in P^2 with the homogenizing
coordinate in the middle: x = X/Y, z = Z/Y, so the ideal points lie on Y = 0.
Local branches come from a numerical Newton-polygon engine: coefficients are
complex floats, exponents (and hence valuations) are exact integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd as igcd

import numpy as np

from .charvar import PlaneCurve
from .laurent import Laurent, PrecisionError, eval_poly
from .poly import MultiPoly, RationalFunction
from .roots import _clean, complex_roots

DEFAULT_ORDER = 12
MAX_ORDER = 96
LOCAL_TOL = 1e-10  # relative size below which a local coefficient is zero
RESIDUAL_TOL = 1e-8
_SHEARS = (1.0, -1.0, 2.0, 0.5, -2.0, 3.0, 1.0 + 1.0j)


class IdealPointError(ArithmeticError):
    pass


class NormError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# projective closure


@dataclass(frozen=True)
class ProjectiveCurve:
    """Homogeneous polynomial in three coordinates.

    ``affine_vars[k]`` equals coordinate ``affine_index(k)`` divided by the
    coordinate at ``hom_index``.
    """

    poly: MultiPoly
    degree: int
    affine_vars: tuple = ("x", "z")
    hom_index: int = 1

    def __post_init__(self):
        if not self.poly.is_homogeneous() or self.poly.total_degree() != self.degree:
            raise ValueError(f"{self.poly} is not homogeneous of degree {self.degree}")

    @property
    def vars(self) -> tuple:
        return self.poly.vars

    def affine_index(self, k: int) -> int:
        return [i for i in range(3) if i != self.hom_index][k]

    def __call__(self, *P):
        return complex(self.poly.evaluate(dict(zip(self.vars, P))))

    def __str__(self):
        return str(self.poly)


def _proj_names(u: str, v: str, hom: int) -> tuple:
    U, V = u.upper(), v.upper()
    H = next(h for h in ("Y", "W", "T", "S") if h not in (U, V))
    names = [U, V]
    names.insert(hom, H)
    return tuple(names)


def projective_closure(curve: PlaneCurve, embedding: int = 1) -> ProjectiveCurve:
    """Homogenize; ``embedding`` is the index (0, 1, 2) of the new coordinate."""
    if embedding not in (0, 1, 2):
        raise ValueError("embedding must be 0, 1 or 2")
    p = curve.poly
    d = p.total_degree()
    names = _proj_names(*curve.vars, embedding)
    terms = {}
    for (a, b), c in p.terms.items():
        e = [a, b]
        e.insert(embedding, d - a - b)
        terms[tuple(e)] = c
    return ProjectiveCurve(MultiPoly(names, terms), d, tuple(curve.vars), embedding)


def dehomogenize(pc: ProjectiveCurve) -> PlaneCurve:
    H = pc.vars[pc.hom_index]
    names = tuple(pc.vars[pc.affine_index(k)] for k in range(2))
    p = pc.poly.subs({H: 1}).with_vars(names)
    renamed = MultiPoly(pc.affine_vars, dict(p.terms))
    return PlaneCurve(renamed, pc.affine_vars)


def _normalize_point(P) -> tuple:
    P = np.asarray(P, dtype=complex)
    k = next(i for i in range(3) if abs(P[i]) > 1e-12 * np.max(np.abs(P)))
    P = P / P[k]
    return tuple(_clean(complex(c), 1e-12) for c in P)


def format_point(P) -> str:
    def f(c):
        c = complex(c)
        if c.imag == 0:
            return str(int(c.real)) if c.real == int(c.real) else f"{c.real:.12g}"
        if c.real == 0:
            if abs(c.imag) == 1:
                return "i" if c.imag > 0 else "-i"
            return f"{c.imag:.12g}i"
        return f"({c.real:.12g}{c.imag:+.12g}i)"
    return "[" + ":".join(f(c) for c in P) + "]"


def ideal_points(pc: ProjectiveCurve) -> list[tuple]:
    """Distinct points of the closure on the line at infinity."""
    H = pc.vars[pc.hom_index]
    i1, i2 = pc.affine_index(0), pc.affine_index(1)
    n1, n2 = pc.vars[i1], pc.vars[i2]
    form = pc.poly.subs({H: 0})
    if form.is_zero():
        raise IdealPointError("degenerate closure: the curve contains the line at infinity")
    pts = []
    uni = form.subs({n2: 1}).with_vars((n1,))
    if uni.degree(n1) > 0:
        for r in complex_roots(uni):
            P = [0j, 0j, 0j]
            P[i1], P[i2] = r.value, 1
            pts.append(_normalize_point(P))
    if uni.degree(n1) < pc.degree:  # n2 divides the form
        P = [0j, 0j, 0j]
        P[i1] = 1
        pts.append(_normalize_point(P))
    return pts


def affine_point(pc: ProjectiveCurve, u: complex, v: complex) -> tuple:
    P = [0j, 0j, 0j]
    P[pc.hom_index] = 1
    P[pc.affine_index(0)], P[pc.affine_index(1)] = u, v
    return tuple(complex(c) for c in P)


# ---------------------------------------------------------------------------
# local equations and the Newton-Puiseux engine


def _binom_row(a: complex, n: int) -> np.ndarray:
    """Coefficients of (a + u)^n, low to high."""
    return np.array([comb(n, k) * a ** (n - k) for k in range(n + 1)], dtype=complex)


def _local_array(pc: ProjectiveCurve, chart: int, locs, center) -> np.ndarray:
    d = pc.degree
    L = np.zeros((d + 1, d + 1), complex)
    a, b = center[locs[0]], center[locs[1]]
    rows_a = [_binom_row(a, n) for n in range(d + 1)]
    rows_b = [_binom_row(b, n) for n in range(d + 1)]
    for e, c in pc.poly.terms.items():
        ea, eb = e[locs[0]], e[locs[1]]
        L[:ea + 1, :eb + 1] += float(c) * np.outer(rows_a[ea], rows_b[eb])
    return L


def _clean2(A: np.ndarray, tol: float = LOCAL_TOL) -> np.ndarray:
    A = A.copy()
    big = np.max(np.abs(A), initial=0.0)
    A[np.abs(A) <= tol * big] = 0
    return A


def _shear(L: np.ndarray, c: complex) -> np.ndarray:
    """L'(p, v) = L(p - c v, v)."""
    n = L.shape[0] + L.shape[1]
    out = np.zeros((n, n), complex)
    for i, j in zip(*np.nonzero(L)):
        for k in range(i + 1):
            out[k, j + i - k] += L[i, j] * comb(i, k) * (-c) ** (i - k)
    return out


def _ser_mul(a, b, n):
    return np.convolve(a, b)[:n]


def _ser_div(a, b, n):
    out = np.zeros(n, complex)
    b0 = b[0]
    for k in range(n):
        acc = a[k] if k < a.size else 0
        m = min(k, b.size - 1)
        if m:
            acc = acc - np.dot(b[1:m + 1], out[k - 1::-1][:m])
        out[k] = acc / b0
    return out


def _eval_series(h: np.ndarray, w: np.ndarray, n: int):
    """h(s, w(s)) and dh/dw(s, w(s)) truncated to n terms (Horner in w)."""
    J = h.shape[1] - 1
    col = lambda j: np.pad(h[:n, j], (0, max(0, n - h.shape[0])))
    val = col(J).copy()
    der = np.zeros(n, complex)
    for j in range(J - 1, -1, -1):
        der = _ser_mul(der, w, n) + val
        val = _ser_mul(val, w, n) + col(j)
    return val, der


def _solve_regular(h: np.ndarray, n: int) -> np.ndarray:
    """w(s) = O(s) with h(s, w(s)) = 0 through s^(n-1); needs h_w(0,0) != 0."""
    w = np.zeros(n, complex)
    if n <= 1:
        return w
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        val, der = _eval_series(h, w[:prec], prec)
        if der[0] == 0:
            raise IdealPointError("singular series step; increase the truncation order")
        w[:prec] = w[:prec] - _ser_div(val, der, prec)
        w[0] = 0
    return w


def _lower_hull(pts):
    hull = []
    for p in sorted(pts):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edge_roots(phi: np.ndarray):
    """Distinct nonzero roots of sum phi[k] z^k, with multiplicities, refined."""
    coeffs = phi[::-1]
    r = np.roots(coeffs)
    groups: list[list[complex]] = []
    for z in r:
        for g in groups:
            if abs(z - np.mean(g)) < 1e-5 * max(1.0, abs(z)):
                g.append(z)
                break
        else:
            groups.append([z])
    out = []
    for g in groups:
        mu = len(g)
        z = complex(np.mean(g))
        d = np.polyder(coeffs, mu - 1) if mu > 1 else coeffs
        dd = np.polyder(d)
        for _ in range(8):
            den = np.polyval(dd, z)
            if den == 0:
                break
            step = np.polyval(d, z) / den
            z -= step
            if abs(step) < 1e-16 * max(1.0, abs(z)):
                break
        out.append((z, mu))
    return out


def _substitute(A: np.ndarray, a: int, b: int, c: complex, N: int) -> np.ndarray:
    """h(s1, w1) = s1^-N A(s1^b, s1^a (c + w1))."""
    J = A.shape[1]
    I = max(b * i + a * j - N for i, j in zip(*np.nonzero(A))) + 1
    h = np.zeros((I, J), complex)
    for i, j in zip(*np.nonzero(A)):
        k = b * i + a * j - N
        h[k, :j + 1] += A[i, j] * _binom_row(c, j)
    return h


def _branches(A: np.ndarray, K: Fraction):
    """Branches w = w(s) through the origin of A(s, w) = 0 with w -> 0.

    Returns (Q, coeffs): s = t^Q and w = sum coeffs[k] t^k, known through the
    t-exponent floor(K*Q).
    """
    A = _clean2(A)
    out = []
    nz_cols = [j for j in range(A.shape[1]) if np.any(A[:, j])]
    if not nz_cols:
        raise IdealPointError("local equation vanishes identically")
    if nz_cols[0] >= 1:
        if nz_cols[0] > 1:
            raise IdealPointError("non-reduced local equation (repeated component)")
        out.append((1, np.zeros(int(K) + 1, complex)))
        A = A[:, 1:]
    s_free = [j for j in range(A.shape[1]) if A[0, j] != 0]
    if not s_free:
        raise IdealPointError("local equation contains the parameter axis")
    jstar = s_free[0]
    if jstar == 0:
        return out
    pts = []
    for j in range(jstar + 1):
        col = np.nonzero(A[:, j])[0]
        if col.size:
            pts.append((j, int(col[0])))
    hull = _lower_hull(pts)
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        di, dj = i1 - i2, j2 - j1
        g = igcd(di, dj)
        a, b = di // g, dj // g
        phi = np.array([A[i1 - k * a, j1 + k * b] for k in range(g + 1)], dtype=complex)
        N = b * i1 + a * j1
        for zeta, mu in _edge_roots(phi):
            c = complex(zeta) ** (1.0 / b)
            h = _clean2(_substitute(A, a, b, c, N))
            need = K * b - a  # exponent of s1 needed for w1
            if mu == 1:
                n1 = max(int(need), 0) + 1
                w1 = _solve_regular(h, n1)
                w = np.zeros(int(K * b) + 1, complex)
                w[a] = c
                w[a + 1:a + 1 + max(n1 - 1, 0)] += w1[1:n1][: w.size - a - 1]
                out.append((b, w))
            else:
                for Q1, w1 in _branches(h, max(need, Fraction(0))):
                    w = np.zeros(int(K * b * Q1) + 1, complex)
                    off = a * Q1
                    if off < w.size:
                        w[off] += c
                        m = min(w1.size, w.size - off)
                        w[off:off + m] += w1[:m]
                    out.append((b * Q1, w))
    return out


@dataclass(eq=False)
class PuiseuxBranch:
    """One local branch: chart coordinate = 1, the two local coordinates are
    center + (U(t), V(t)); the parameter coordinate equals t^e."""

    center: tuple
    chart: int
    local: tuple
    e: int
    order: int
    U: np.ndarray
    V: np.ndarray
    param: str
    frame: str  # 'u', 'v' or 'shear:<c>'
    curve: ProjectiveCurve = field(repr=False)
    index: int = 0
    residual: float = 0.0

    @property
    def series(self) -> dict:
        """Non-parameter local coordinate as a series in the parameter."""
        w = self.V if self.frame in ("u",) or self.frame.startswith("shear") else self.U
        return {Fraction(k, self.e): complex(c) for k, c in enumerate(w) if abs(c) > 1e-14}

    def coordinates(self) -> list[Laurent]:
        prec = self.order * self.e + 1
        P = [None, None, None]
        P[self.chart] = Laurent.const(1.0, prec)
        a, b = self.center[self.local[0]], self.center[self.local[1]]
        Ua = self.U.copy()
        Ua[0] += a
        Vb = self.V.copy()
        Vb[0] += b
        P[self.local[0]] = Laurent(Ua, 0, prec, scale=max(1.0, np.max(np.abs(Ua))))
        P[self.local[1]] = Laurent(Vb, 0, prec, scale=max(1.0, np.max(np.abs(Vb))))
        return P

    def affine_series(self) -> dict:
        P = self.coordinates()
        h = P[self.curve.hom_index]
        return {name: P[self.curve.affine_index(k)] / h for k, name in enumerate(self.curve.affine_vars)}

    def refined(self, order: int) -> "PuiseuxBranch":
        again = branch_expansions(self.curve, self.center, order, chart=self.chart)
        if self.index >= len(again) or again[self.index].e != self.e:
            raise IdealPointError("branch structure changed under refinement")
        return again[self.index]

    def to_json(self):
        return {"center": format_point(self.center), "e": self.e, "param": self.param,
                "order": self.order, "residual": self.residual,
                "series": {str(k): [v.real, v.imag] for k, v in list(self.series.items())[:8]}}


def _residual(L: np.ndarray, U: np.ndarray, V: np.ndarray, n: int) -> float:
    """max |L(U, V)| over t-exponents < n, relative to the term sizes."""
    powU = [np.zeros(n, complex)]
    powU[0][0] = 1
    powV = [powU[0].copy()]
    for _ in range(L.shape[0]):
        powU.append(_ser_mul(powU[-1], U[:n], n))
    for _ in range(L.shape[1]):
        powV.append(_ser_mul(powV[-1], V[:n], n))
    tot = np.zeros(n, complex)
    scale = np.zeros(n)
    for i, j in zip(*np.nonzero(L)):
        term = L[i, j] * _ser_mul(powU[i], powV[j], n)
        tot += term
        scale += np.abs(term)
    return float(np.max(np.abs(tot) / np.maximum(scale, 1e-300) * (scale > 0), initial=0.0))


def branch_expansions(pc: ProjectiveCurve, point, order: int = DEFAULT_ORDER,
                      chart: int | None = None) -> list[PuiseuxBranch]:
    """All branches of ``pc`` at ``point``, truncated at parameter-order ``order``.

    The chart (coordinate set to 1) defaults to the largest coordinate of the
    point; pass ``chart=pc.hom_index`` for expansions in the affine variables.
    """
    if order < 1:
        raise ValueError("order must be positive")
    P = np.asarray(point, dtype=complex)
    if chart is None:
        chart = int(np.argmax(np.abs(P)))
    elif abs(P[chart]) == 0:
        raise IdealPointError("chart coordinate vanishes at the point")
    P = P / P[chart]
    center = tuple(complex(c) for c in P)
    if abs(pc(*center)) > 1e-8 * max(1.0, max(abs(float(c)) for c in pc.poly.terms.values())):
        raise IdealPointError(f"point {format_point(center)} is not on the curve")
    locs = tuple(i for i in range(3) if i != chart)
    L = _clean2(_local_array(pc, chart, locs, center))
    L[0, 0] = 0
    nz = list(zip(*np.nonzero(L)))
    mult = min(i + j for i, j in nz)
    ord_v = min((j for i, j in nz if i == 0), default=None)
    ord_u = min((i for i, j in nz if j == 0), default=None)
    names = pc.vars
    # expand over an axis that is not a component; the orders of the parameter
    # along the branches then add up to the axis' intersection number
    if ord_v is not None and (ord_v == mult or ord_u is None or ord_v <= ord_u):
        frame, A, shear, total = "u", L, 0, ord_v
    elif ord_u is not None:
        frame, A, shear, total = "v", L.T.copy(), 0, ord_u
    else:
        total = mult
        for c in _SHEARS:
            A = _clean2(_shear(L, c))
            nzA = list(zip(*np.nonzero(A)))
            if min((j for i, j in nzA if i == 0), default=None) == mult:
                frame, shear = f"shear:{c}", c
                break
        else:
            raise IdealPointError("no admissible local frame found")
    K = Fraction(order)
    raw = _branches(A, K)
    out = []
    for idx, (Q, w) in enumerate(raw):
        n = order * Q + 1
        w = np.pad(w, (0, max(0, n - w.size)))[:n]
        s = np.zeros(n, complex)
        s[Q] = 1
        if frame == "u":
            U, V, param = s, w, names[locs[0]]
        elif frame == "v":
            U, V, param = w, s, names[locs[1]]
        else:
            U, V = s - shear * w, w
            param = f"{names[locs[0]]} + {shear}*{names[locs[1]]}"
        res = _residual(L, U, V, n)
        if res > RESIDUAL_TOL:
            raise IdealPointError(
                f"branch residual {res:.2e} at order {order}; increase the truncation order")
        out.append(PuiseuxBranch(center, chart, locs, Q, order, U, V, param, frame, pc, idx, res))
    if sum(b.e for b in out) != total:
        raise IdealPointError(
            f"ramification indices sum to {sum(b.e for b in out)}, expected {total}; "
            "increase the truncation order")
    for b1, b2 in itertools.combinations(out, 2):
        if b1.e == b2.e and np.allclose(b1.U, b2.U, atol=1e-9) and np.allclose(b1.V, b2.V, atol=1e-9):
            raise IdealPointError("order too small to separate branches; increase the truncation order")
    return out


# ---------------------------------------------------------------------------
# valuations


@dataclass(frozen=True)
class Valuation:
    branch: PuiseuxBranch
    value: int

    def __int__(self):
        return self.value


def _as_rational(f, vars) -> RationalFunction:
    if isinstance(f, RationalFunction):
        r = f
    elif isinstance(f, MultiPoly):
        r = RationalFunction(f)
    elif isinstance(f, tuple):
        r = RationalFunction(*f)
    else:
        r = RationalFunction(MultiPoly.const(f, vars))
    extra = (set(r.num.used_vars()) | set(r.den.used_vars())) - set(vars)
    if extra:
        raise ValueError(f"function uses {sorted(extra)}, curve variables are {vars}")
    return r.with_vars(vars)


def _series_once(f, branch: PuiseuxBranch) -> Laurent:
    r = _as_rational(f, branch.curve.affine_vars)
    vals = branch.affine_series()
    num = eval_poly(r.num, vals)
    den = eval_poly(r.den, vals)
    num.valuation(), den.valuation()  # raise on cancellation
    return num / den


def with_refinement(fn, branch: PuiseuxBranch, max_order: int = MAX_ORDER):
    """Call fn(branch), doubling the truncation order on PrecisionError."""
    b = branch
    while True:
        try:
            return fn(b)
        except PrecisionError:
            if 2 * b.order > max_order:
                raise PrecisionError(
                    f"cancellation persists at order {b.order}; increase the truncation order") from None
            b = b.refined(2 * b.order)


def laurent_on(f, branch: PuiseuxBranch) -> Laurent:
    """f composed with the branch parametrization (nonzero to precision)."""
    def go(b):
        s = _series_once(f, b)
        s.valuation()
        return s
    return with_refinement(go, branch)


def valuation(f, branch: PuiseuxBranch) -> Valuation:
    """Order of ``f`` along the branch in its intrinsic parameter (poles negative)."""
    return Valuation(branch, with_refinement(lambda b: _series_once(f, b).valuation(), branch))


def tame_symbol(f, g, branch: PuiseuxBranch) -> complex:
    """(-1)^(v(f)v(g)) f^v(g) / g^v(f) evaluated at the branch center."""
    def go(b):
        F, G = _series_once(f, b), _series_once(g, b)
        vf, vg = F.valuation(), G.valuation()
        return complex((-1) ** (vf * vg) * F.leading() ** vg / G.leading() ** vf)
    return with_refinement(go, branch)


# ---------------------------------------------------------------------------
# the Culler-Shalen norm


@dataclass
class BranchData:
    branch: PuiseuxBranch
    v_mu: int
    v_lambda: int
    v_m: Fraction | None = None  # eigenvalue route
    v_l: Fraction | None = None

    @property
    def weights(self) -> tuple[int, int]:
        return 2 * max(0, -self.v_mu), 2 * max(0, -self.v_lambda)


@dataclass
class NormData:
    curve: ProjectiveCurve
    triple: object
    points: list
    branches: list[BranchData]
    signs: tuple

    def functionals(self) -> list[tuple[int, int]]:
        return [(bd.weights[0], s * bd.weights[1]) for bd, s in zip(self.branches, self.signs)]

    def phi(self, p: int, q: int) -> list[int]:
        return [a * p + b * q for a, b in self.functionals()]

    def norm(self, p: int, q: int) -> int:
        if (p, q) == (0, 0):
            raise ValueError("(p, q) = (0, 0) has no norm")
        return sum(abs(v) for v in self.phi(p, q))

    def breakdown(self, p: int, q: int) -> list[dict]:
        out = []
        for bd, s, ph in zip(self.branches, self.signs, self.phi(p, q)):
            out.append({"point": format_point(bd.branch.center), "e": bd.branch.e,
                        "v_I_mu": bd.v_mu, "v_I_lambda": bd.v_lambda, "sign": s,
                        "phi": ph, "abs_phi": abs(ph)})
        return out


def _rank2(rows) -> bool:
    M = np.array(rows, dtype=float).reshape(-1, 2)
    return M.shape[0] > 0 and np.linalg.matrix_rank(M) == 2


def resolve_signs(weights: list[tuple[int, int]]) -> tuple:
    """Lexicographically smallest sign vector (-1 before +1) giving rank 2."""
    for signs in itertools.product((-1, 1), repeat=len(weights)):
        if _rank2([(a, s * b) for (a, b), s in zip(weights, signs)]):
            return signs
    raise NormError(f"no sign assignment makes the functionals a norm; weights={weights}")


def norm_data(triple, order: int = DEFAULT_ORDER, eigen: bool = True) -> NormData:
    """Ideal points and branch valuations of I_mu, I_lambda on the triple's component."""
    pc = projective_closure(triple.modulus)
    pts = ideal_points(pc)
    bds = []
    for P in pts:
        for br in branch_expansions(pc, P, order):
            bd = BranchData(br, valuation(triple.I_mu, br).value, valuation(triple.I_lambda, br).value)
            if eigen:
                bd.v_m, bd.v_l = eigen_valuations(triple, br)
            bds.append(bd)
    signs = resolve_signs([bd.weights for bd in bds])
    return NormData(pc, triple, pts, bds, signs)


def cs_norm(data, p: int, q: int) -> int:
    """Culler-Shalen norm of p*mu + q*lambda; ``data`` is a NormData or a BoundaryTriple."""
    if not isinstance(data, NormData):
        data = norm_data(data)
    return data.norm(p, q)


# -- eigenvalue route ------------------------------------------------------


def _eigen_series(triple, b: PuiseuxBranch):
    """Laurent series (m, l, ram) of eigenvalues over the branch; ram = 1 or 2."""
    X = _series_once(triple.I_mu, b)
    F = _series_once(triple.I_lambda, b)
    G = _series_once(triple.I_mulambda, b)
    Dm, Dl = X * X - 4, F * F - 4
    ram = 2 if (Dm.valuation() % 2 or Dl.valuation() % 2) else 1
    if ram == 2:
        X, F, G, Dm, Dl = (s.ramify(2) for s in (X, F, G, Dm, Dl))
    m = (X + Dm.sqrt()) * 0.5
    sl = Dl.sqrt()
    best = None
    for l in ((F + sl) * 0.5, (F - sl) * 0.5):
        ml = m * l
        r = ml + ml.inverse() - G
        score = r.prec if r.is_zero() else r.val
        if best is None or score > best[0]:
            best = (score, l)
    return m, best[1], ram


def eigen_valuations(triple, branch: PuiseuxBranch) -> tuple[Fraction, Fraction]:
    """v(m), v(l) on the branch (half-integers when the eigenvalues ramify)."""
    def go(b):
        m, l, ram = _eigen_series(triple, b)
        return Fraction(m.valuation(), ram), Fraction(l.valuation(), ram)
    return with_refinement(go, branch)


def f_gamma_valuation(triple, branch: PuiseuxBranch, p: int, q: int) -> int:
    """Order of I_gamma^2 - 4 = (E - 1/E)^2 along the branch, E = m^p l^q."""
    def go(b):
        m, l, ram = _eigen_series(triple, b)
        E = (m ** p) * (l ** q)
        d = E - E.inverse()
        v = 2 * d.valuation()
        if v % ram:
            raise IdealPointError("ramified eigenvalue order is not integral")
        return v // ram
    return with_refinement(go, branch)


def eigen_functionals(data: NormData) -> list[tuple[Fraction, Fraction]]:
    """phi_x(gamma) = 2(p v(m) + q v(l)), as coefficient pairs per branch."""
    return [(2 * bd.v_m, 2 * bd.v_l) for bd in data.branches]


def ideal_orders(data: NormData, p: int, q: int) -> list[int]:
    """v(f_gamma) at each ideal branch (negative: pole order, positive: zero order)."""
    return [f_gamma_valuation(data.triple, bd.branch, p, q) for bd in data.branches]
