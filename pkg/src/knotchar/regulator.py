"""Paths on the eigenvalue curve A0(m, l) = 0 and the regulator integrals.

Along a path the 1-forms

    eta = log|l| d arg m - log|m| d arg l
    xi  = -(log|m| d log|l| + arg l d arg m)

are integrated by Romberg quadrature on uniformly sampled pieces.  Vol and CS
are the base-point integrals of these forms shifted by the knot constants; on
closed loops eta integrates to zero and xi / 4 pi^2 is rational.  The
holonomy of a pair of functions is the regulator formula with a fixed branch
of log g at the base point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .charvar import PlaneCurve
from .elim import discriminant, squarefree_part
from .poly import MultiPoly, RationalFunction, parse_rational
from .roots import complex_roots

TWO_PI = 2 * np.pi
MIN_SEP = 1e-6
DEFAULT_LEVELS = 8  # 2^8 intervals per piece
CURVE_RESIDUAL = 1e-9
NODE_ORDER = 48


class PathError(ArithmeticError):
    """Tracking failed (branch point, collision, or an invalid path)."""


class QuadratureError(ArithmeticError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# drivers


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    kind = 0

    def params(self):
        return np.array([self.a, self.b, 0, 0], dtype=np.complex128)

    def point(self, s):
        return self.a + (self.b - self.a) * np.asarray(s)

    def deriv(self, s):
        return np.full(np.shape(s), self.b - self.a, dtype=complex)

    @property
    def start(self):
        return complex(self.a)

    @property
    def end(self):
        return complex(self.b)

    def reversed(self):
        return Segment(self.b, self.a)


@dataclass(frozen=True)
class Arc:
    """m = center + radius * exp(2 pi i turn), turn from turn0 to turn1."""

    center: complex
    radius: float
    turn0: Fraction
    turn1: Fraction

    kind = 1

    def params(self):
        return np.array([self.center, self.radius, TWO_PI * float(self.turn0),
                         TWO_PI * float(self.turn1)], dtype=np.complex128)

    def _theta(self, s):
        return TWO_PI * (float(self.turn0) + (float(self.turn1) - float(self.turn0)) * np.asarray(s))

    def point(self, s):
        return self.center + self.radius * np.exp(1j * self._theta(s))

    def deriv(self, s):
        dth = TWO_PI * (float(self.turn1) - float(self.turn0))
        return 1j * dth * self.radius * np.exp(1j * self._theta(s))

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))

    def reversed(self):
        return Arc(self.center, self.radius, self.turn1, self.turn0)


def circle(center: complex, radius: float, turns: int = 1) -> Arc:
    return Arc(complex(center), float(radius), Fraction(0), Fraction(turns))


@dataclass
class PathSpec:
    pieces: list
    start_l: complex
    branch: object = "geometric"  # node start: 'geometric', 'other' or a slope dl/dm
    orientation: int = 1

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a path needs at least one piece")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if abs(p.end - q.start) > 1e-12 * max(1.0, abs(p.end)):
                raise ValueError("path pieces are not contiguous")
        for p in self.pieces:
            ms = p.point(np.linspace(0, 1, 65))
            if np.min(np.abs(ms)) < 1e-12:
                raise ValueError("driver passes through m = 0")

    @property
    def start_m(self) -> complex:
        return self.pieces[0].start


_PIECE = re.compile(r"\s*(segment|line|arc|circle)\s*\(([^()]*)\)\s*")
_SEP = re.compile(r"[;+]\s*")


def _cnum(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    return complex(t)


def parse_driver(text: str, base_m: complex | None = None) -> list:
    """Pieces from e.g. ``"circle(1.0, 0.1)"`` or ``"segment(1, 1.1); arc(1, 0.1, 0, 1/2)"``.

    Arc angles are in turns (fractions of a full circle).  With ``base_m`` the
    pieces are joined to the base by straight segments at both ends (a lasso).
    """
    pieces = []
    pos = 0
    while pos < len(text):
        mt = _PIECE.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse driver piece {text[pos:]!r}")
        pos = mt.end()
        sep = _SEP.match(text, pos)
        if sep is None and pos < len(text):
            raise ValueError(f"expected ';' or '+' between driver pieces at {text[pos:]!r}")
        if sep is not None:
            pos = sep.end()
        name, args = mt.group(1), [a for a in mt.group(2).split(",")]
        if name in ("segment", "line"):
            pieces.append(Segment(_cnum(args[0]), _cnum(args[1])))
        elif name == "circle":
            turns = int(args[2]) if len(args) > 2 else 1
            pieces.append(circle(_cnum(args[0]), float(args[1]), turns))
        else:
            pieces.append(Arc(_cnum(args[0]), float(args[1]), Fraction(args[2].strip()), Fraction(args[3].strip())))
    if not pieces:
        raise ValueError("empty driver")
    if base_m is not None:
        if abs(pieces[0].start - base_m) > 1e-12:
            pieces.insert(0, Segment(complex(base_m), pieces[0].start))
        if abs(pieces[-1].end - base_m) > 1e-12:
            pieces.append(Segment(pieces[-1].end, complex(base_m)))
    return pieces


# ---------------------------------------------------------------------------
# the curve


def coefficient_matrix(A: MultiPoly) -> np.ndarray:
    """C[i, j] = coefficient of m^i l^j."""
    A = A.with_vars(("m", "l"))
    C = np.zeros((A.degree("m") + 1, A.degree("l") + 1), dtype=np.complex128)
    for (i, j), c in A.terms.items():
        C[i, j] = float(c)
    return C


def eval_matrix(C: np.ndarray, m, l):
    """A, A_m, A_l at arrays of (m, l)."""
    m = np.asarray(m, dtype=complex)
    l = np.asarray(l, dtype=complex)
    I, J = C.shape
    val = np.zeros(np.broadcast(m, l).shape, complex)
    dm = np.zeros_like(val)
    dl = np.zeros_like(val)
    mp = [np.ones_like(m)]
    for _ in range(I):
        mp.append(mp[-1] * m)
    lp = [np.ones_like(l)]
    for _ in range(J):
        lp.append(lp[-1] * l)
    for i in range(I):
        for j in range(J):
            c = C[i, j]
            if c == 0:
                continue
            val += c * mp[i] * lp[j]
            if i:
                dm += c * i * mp[i - 1] * lp[j]
            if j:
                dl += c * j * mp[i] * lp[j - 1]
    return val, dm, dl


def fiber_roots(C: np.ndarray, m: complex) -> np.ndarray:
    coeffs = np.array([np.polyval(C[::-1, j], m) for j in range(C.shape[1])])[::-1]
    while coeffs.size > 1 and abs(coeffs[0]) < 1e-14 * np.max(np.abs(coeffs)):
        coeffs = coeffs[1:]
    return np.roots(coeffs)


@dataclass
class _NodeBranch:
    m0: complex
    l0: complex
    coeffs: np.ndarray  # l = l0 + sum coeffs[k] (m - m0)^k
    radius: float       # series used for |m - m0| <= radius

    @property
    def slope(self) -> complex:
        return complex(self.coeffs[1])

    def value(self, m):
        return self.l0 + np.polyval(self.coeffs[::-1], np.asarray(m) - self.m0)

    def deriv(self, m):
        d = np.polyder(self.coeffs[::-1])
        return np.polyval(d, np.asarray(m) - self.m0)


class EigenvalueCurve:
    """A0 with cached numerical data (coefficients, singular m-values, node series)."""

    def __init__(self, A: MultiPoly | PlaneCurve):
        if isinstance(A, PlaneCurve):
            A = A.poly
        self.poly = A.with_vars(("m", "l"))
        self.C = coefficient_matrix(self.poly)
        self._nodes: dict = {}
        self._singular = None

    def residual(self, m, l) -> np.ndarray:
        return np.abs(eval_matrix(self.C, m, l)[0])

    def singular_m_values(self) -> np.ndarray:
        """m-values where the l-fiber degenerates: discriminant and leading-coefficient roots, and 0."""
        if self._singular is None:
            vals = [0j]
            lc = self.poly.leading_coeff_in("l").with_vars(("m",))
            disc = discriminant(self.poly, "l").with_vars(("m",))
            for p in (lc, disc):
                if p.used_vars():
                    for r in complex_roots(squarefree_part(p)):
                        vals.append(r.value)
            out = []
            for v in vals:
                if all(abs(v - w) > 1e-9 for w in out):
                    out.append(complex(v))
            self._singular = np.array(sorted(out, key=lambda z: (abs(z), np.angle(z))))
        return self._singular

    def node_branches(self, m0: complex, l0: complex) -> list[_NodeBranch]:
        key = (round(m0.real, 12), round(m0.imag, 12), round(l0.real, 12), round(l0.imag, 12))
        if key not in self._nodes:
            from .ideal import affine_point, branch_expansions, projective_closure

            pc = projective_closure(PlaneCurve(self.poly, ("m", "l")))
            brs = branch_expansions(pc, affine_point(pc, m0, l0), NODE_ORDER, chart=pc.hom_index)
            out = []
            for b in brs:
                if b.e != 1 or b.frame != "u":
                    raise PathError(f"branch at ({m0}, {l0}) is not a graph over m; reroute the path")
                V = np.array(b.V, dtype=complex)
                k = np.arange(V.size)
                tail = np.abs(V[V.size // 2:])
                kk = k[V.size // 2:]
                nz = tail > 0
                if np.any(nz):
                    rconv = 1.0 / np.max(tail[nz] ** (1.0 / kk[nz]))
                else:
                    rconv = 1.0
                out.append(_NodeBranch(complex(m0), complex(l0), V, 0.25 * rconv))
            self._nodes[key] = out
        return self._nodes[key]


def _collides(C, m, l, tol=MIN_SEP) -> bool:
    r = fiber_roots(C, m)
    near = np.abs(r - l)
    return np.sum(near < max(tol, 1e-7 * max(1.0, abs(l)))) >= 2 or (
        r.size >= 2 and np.sort(near)[1] < 1e3 * tol)


# ---------------------------------------------------------------------------
# tracking


@dataclass
class PieceSamples:
    s: np.ndarray
    m: np.ndarray
    dm: np.ndarray
    l: np.ndarray
    dl: np.ndarray


@dataclass
class CurvePath:
    spec: PathSpec
    pieces: list[PieceSamples]
    levels: int
    max_residual: float
    arg_m0: float = 0.0  # base-point branch of arg, in [0, 2 pi)
    arg_l0: float = 0.0
    curve: object = None  # EigenvalueCurve, for re-tracking on finer grids

    @property
    def m(self):
        return np.concatenate([p.m if k == 0 else p.m[1:] for k, p in enumerate(self.pieces)])

    @property
    def l(self):
        return np.concatenate([p.l if k == 0 else p.l[1:] for k, p in enumerate(self.pieces)])

    @property
    def t(self):
        n = len(self.pieces)
        return np.concatenate([(k + p.s) / n if k == 0 else (k + p.s[1:]) / n for k, p in enumerate(self.pieces)])

    def unwrapped(self):
        """Continuous (log m, log l) along the path from the base-point branch."""
        m, l = self.m, self.l
        am = np.unwrap(np.angle(m))
        al = np.unwrap(np.angle(l))
        am += self.arg_m0 - am[0]
        al += self.arg_l0 - al[0]
        return np.log(np.abs(m)) + 1j * am, np.log(np.abs(l)) + 1j * al

    @property
    def closed(self) -> bool:
        m, l = self.m, self.l
        return bool(abs(m[-1] - m[0]) < 1e-9 * max(1.0, abs(m[0])) and abs(l[-1] - l[0]) < 1e-8 * max(1.0, abs(l[0])))

    @property
    def l_drift(self) -> float:
        l = self.l
        return float(abs(l[-1] - l[0]))

    def samples(self):
        """Rows (t, m, l, log m, log l, arg m, arg l)."""
        lm, ll = self.unwrapped()
        return np.column_stack([self.t, self.m, self.l, lm, ll, lm.imag, ll.imag])

    def to_csv(self) -> str:
        lines = ["t,re_m,im_m,re_l,im_l,log_abs_m,log_abs_l,arg_m,arg_l"]
        lm, ll = self.unwrapped()
        for t, m, l, a, b in zip(self.t, self.m, self.l, lm, ll):
            lines.append(f"{t:.10f},{m.real:.15g},{m.imag:.15g},{l.real:.15g},{l.imag:.15g},"
                         f"{a.real:.15g},{b.real:.15g},{a.imag:.15g},{b.imag:.15g}")
        return "\n".join(lines) + "\n"


def _pick_node_branch(branches, how, l0):
    if isinstance(how, (complex, float, int)) and not isinstance(how, bool):
        return min(branches, key=lambda b: abs(b.slope - how))
    geo = [b for b in branches if (b.slope / l0).imag < 0]
    other = [b for b in branches if (b.slope / l0).imag >= 0]
    if how == "geometric" and geo:
        return geo[0]
    if how == "other" and other:
        return other[0]
    raise PathError(f"no {how!r} branch at the node ({branches[0].m0}, {l0})")


def _track_piece(curve: EigenvalueCurve, piece, l_start: complex, n: int, branch_hint) -> tuple[PieceSamples, complex]:
    s = np.linspace(0.0, 1.0, n + 1)
    m = piece.point(s)
    dm = piece.deriv(s)
    L = np.full(n + 1, np.nan + 0j)
    D = np.full(n + 1, np.nan + 0j)
    C = curve.C
    lo, hi = 0, n
    node_in = None
    if _collides(C, m[0], l_start):
        node_in = _pick_node_branch(curve.node_branches(complex(m[0]), complex(l_start)), branch_hint, l_start)
        inside = np.abs(m - m[0]) <= node_in.radius
        k = 0
        while k <= n and inside[k]:
            k += 1
        L[:k] = node_in.value(m[:k])
        D[:k] = node_in.deriv(m[:k]) * dm[:k]
        lo = k - 1 if k > 0 else 0
        if k == n + 1:
            return PieceSamples(s, m, dm, L, D), node_in.slope
        l_start = complex(L[lo])
    # a node at the end of the piece
    end_branches = []
    r_end = fiber_roots(C, m[-1])
    close = [r for r in r_end if np.sum(np.abs(r_end - r) < MIN_SEP) >= 2]
    if close and abs(m[-1] - m[0]) > 0:
        l_node = complex(np.mean(close[:2]))
        try:
            end_branches = curve.node_branches(complex(m[-1]), l_node)
        except Exception:  # noqa: BLE001 - fall back to plain tracking
            end_branches = []
        if end_branches:
            rad = min(b.radius for b in end_branches)
            inside = np.abs(m - m[-1]) <= rad
            k = n
            while k >= 0 and inside[k]:
                k -= 1
            hi = max(k, lo)
    if hi > lo:
        grid = s[lo:hi + 1]
        ls, dls, status, s_fail = kernels.track_piece(curve.C, piece.kind, piece.params(), grid,
                                                      complex(l_start), MIN_SEP, 40, 1e-14)
        if status != kernels.OK:
            raise PathError(f"tracking failed ({kernels.STATUS_TEXT[status]}) at s = {s_fail:.6g} "
                            f"(m = {complex(piece.point(s_fail)):.6g}); reroute the path")
        L[lo:hi + 1] = ls
        D[lo:hi + 1] = dls
    elif hi == lo and np.isnan(L[lo]):
        L[lo] = l_start
    slope_out = None
    if end_branches and hi < n:
        b = min(end_branches, key=lambda b: abs(b.value(m[hi]) - L[hi]))
        if abs(b.value(m[hi]) - L[hi]) > 1e-6 * max(1.0, abs(L[hi])):
            raise PathError("path reaches a node off its branch series; reroute the path")
        L[hi:] = b.value(m[hi:])
        D[hi:] = b.deriv(m[hi:]) * dm[hi:]
        slope_out = b.slope
    # Newton polish of tracked values away from nodes
    val, am, al = eval_matrix(C, m, L)
    ok = np.abs(al) > 1e-8
    L = np.where(ok, L - val / np.where(ok, al, 1), L)
    val, am, al = eval_matrix(C, m, L)
    D = np.where(ok, -am / np.where(ok, al, 1) * dm, D)
    return PieceSamples(s, m, dm, L, D), slope_out


def _base_arg(z: complex) -> float:
    a = float(np.angle(z))
    return a + TWO_PI if a < 0 else a


def track_path(curve, spec: PathSpec, levels: int = DEFAULT_LEVELS) -> CurvePath:
    """Follow the m-driver of a PathSpec on A0 from its start point."""
    if not isinstance(curve, EigenvalueCurve):
        curve = EigenvalueCurve(curve)
    m0 = spec.start_m
    res0 = curve.residual(m0, spec.start_l)
    if res0 > 1e-10 * max(1.0, np.max(np.abs(curve.C))):
        raise PathError(f"start ({m0}, {spec.start_l}) is not on the curve (|A0| = {res0:.3g})")
    n = 2 ** levels
    pieces = []
    l_cur = complex(spec.start_l)
    hint = spec.branch
    for piece in spec.pieces:
        ps, slope_out = _track_piece(curve, piece, l_cur, n, hint)
        pieces.append(ps)
        l_cur = complex(ps.l[-1])
        if slope_out is not None:
            hint = slope_out  # leave a node along the branch we arrived on
    resid = max(float(np.max(curve.residual(p.m, p.l))) for p in pieces)
    scale = max(1.0, float(np.max(np.abs(curve.C))))
    if resid > CURVE_RESIDUAL * scale:
        raise PathError(f"samples leave the curve (|A0| = {resid:.3g})")
    path = CurvePath(spec, pieces, levels, resid, _base_arg(m0), _base_arg(spec.start_l), curve)
    for z in (path.m, path.l):
        jumps = np.abs(np.diff(np.unwrap(np.angle(z))))
        if jumps.size and np.max(jumps) >= np.pi / 2:
            raise PathError("argument jumps by more than pi/2 between samples; refine the path")
    return path


# ---------------------------------------------------------------------------
# quadrature


def romberg(y: np.ndarray, h: float) -> tuple[float, float]:
    """Romberg value and error estimate from 2^k + 1 uniform samples."""
    y = np.asarray(y)
    n = y.size - 1
    if n == 0:
        return 0.0 * y[0], 0.0
    k = int(round(np.log2(n)))
    if 2 ** k != n:
        raise ValueError("Romberg needs 2^k + 1 samples")
    prev = None
    best, err = None, 0.0
    for j in range(k + 1):  # coarse to fine
        step = n // (2 ** j)
        ys = y[::step]
        row = [h * step * (ys.sum() - 0.5 * (ys[0] + ys[-1]))]
        if prev is not None:
            for i in range(1, min(j, 4) + 1):  # cap the extrapolation depth
                row.append(row[i - 1] + (row[i - 1] - prev[i - 1]) / (4 ** i - 1))
            err = abs(row[-1] - prev[-1])
        prev = row
        best = row[-1]
    return best, float(err)


@dataclass
class FormIntegrals:
    eta: float
    xi: float
    xi_loop: float  # xi with the base-point correction (closed loops)
    error: float
    holonomy: complex | None = None
    delta_arg_m: float = 0.0
    delta_arg_l: float = 0.0

    def to_json(self):
        out = {"eta": self.eta, "xi": self.xi, "xi_loop": self.xi_loop, "error": self.error,
               "xi_over_4pi2": self.xi_loop / (4 * np.pi ** 2),
               "winding_m": self.delta_arg_m / TWO_PI, "winding_l": self.delta_arg_l / TWO_PI}
        if self.holonomy is not None:
            out["holonomy"] = [self.holonomy.real, self.holonomy.imag]
        return out


def _piece_integrals(path: CurvePath, integrand) -> tuple[complex, float]:
    """Sum over pieces of Romberg integrals of integrand(piece, arrays...)."""
    total, err = 0.0, 0.0
    lm_all, ll_all = path.unwrapped()
    off = 0
    for k, p in enumerate(path.pieces):
        n = p.s.size
        lm = lm_all[off:off + n]
        ll = ll_all[off:off + n]
        off += n - 1
        y = integrand(p, lm, ll)
        v, e = romberg(y, 1.0 / (n - 1))
        total += v
        err += e
    return total, err


def integrate_forms(path: CurvePath, tol: float = 1e-8) -> FormIntegrals:
    """Integrals of eta and xi along the path (with error estimate)."""
    def eta(p, lm, ll):
        return ll.real * (p.dm / p.m).imag - lm.real * (p.dl / p.l).imag

    def xi(p, lm, ll):
        return -(lm.real * (p.dl / p.l).real + ll.imag * (p.dm / p.m).imag)

    e, ee = _piece_integrals(path, eta)
    x, xe = _piece_integrals(path, xi)
    lm, ll = path.unwrapped()
    dam = float(lm[-1].imag - lm[0].imag)
    dal = float(ll[-1].imag - ll[0].imag)
    # moving the base point along a loop changes int arg l d arg m by
    # delta(arg m) * delta(arg l); subtracting arg m(t0) * delta arg l cancels it
    x_loop = x + float(lm[0].imag) * dal
    err = float(ee + xe)
    if err > tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} above {tol:.3g}",
                              partial=FormIntegrals(float(e), float(x), float(x_loop), err, None, dam, dal))
    return FormIntegrals(float(e), float(x), float(x_loop), err, None, dam, dal)


def vol_cs(path: CurvePath, volK: float, csK: float) -> tuple[float, float]:
    """Vol and CS at the end of a path starting at the base point (m = 1)."""
    if abs(path.m[0] - 1) > 1e-9:
        raise PathError("path is not anchored at the base point m = 1")
    if path.pieces and path.pieces[0].s.size == 1:
        return volK, csK
    fi = integrate_forms(path, tol=1e-6)
    vol = volK - 2 * fi.eta
    cs = csK + fi.xi / np.pi ** 2
    return float(vol), float(cs)


# ---------------------------------------------------------------------------
# holonomy


def _rational(f, vars=("m", "l")) -> RationalFunction:
    if isinstance(f, str):
        return parse_rational(f, vars)
    if isinstance(f, RationalFunction):
        return f.with_vars(vars)
    if isinstance(f, MultiPoly):
        return RationalFunction(f.with_vars(vars))
    return RationalFunction(MultiPoly.const(f, vars))


def _values_and_log_derivative(r: RationalFunction, p: PieceSamples):
    """f and df/ds along a piece."""
    vals = {"m": p.m, "l": p.l}
    num = np.asarray(r.num.evaluate(vals), dtype=complex) * np.ones_like(p.m)
    den = np.asarray(r.den.evaluate(vals), dtype=complex) * np.ones_like(p.m)
    dnum = (np.asarray(r.num.derivative("m").evaluate(vals), dtype=complex) * p.dm
            + np.asarray(r.num.derivative("l").evaluate(vals), dtype=complex) * p.dl)
    dden = (np.asarray(r.den.derivative("m").evaluate(vals), dtype=complex) * p.dm
            + np.asarray(r.den.derivative("l").evaluate(vals), dtype=complex) * p.dl)
    return num, den, dnum / num - dden / den


def _holonomy_once(F: RationalFunction, G: RationalFunction, loop: CurvePath) -> complex | None:
    """One evaluation of the regulator formula; None when log f is under-resolved."""
    fvals_p, dlf, dlg = [], [], []
    for p in loop.pieces:
        nf, df_, lf = _values_and_log_derivative(F, p)
        ng, dg_, lg = _values_and_log_derivative(G, p)
        for arr in (nf, df_, ng, dg_):
            if np.min(np.abs(arr)) < 1e-9 * max(1.0, float(np.max(np.abs(arr)))):
                raise PathError("loop meets S(f) ∪ S(g)")
        fvals_p.append(nf / df_)
        dlf.append(lf)
        dlg.append(lg)
    fvals = np.concatenate([v if k == 0 else v[1:] for k, v in enumerate(fvals_p)])
    jumps = np.abs(np.diff(np.unwrap(np.angle(fvals))))
    if jumps.size and np.max(jumps) >= np.pi / 2:
        return None
    arg = np.unwrap(np.angle(fvals))
    arg += _base_arg(fvals[0]) - arg[0]
    logf = np.log(np.abs(fvals)) + 1j * arg
    g0 = complex(G.evaluate({"m": loop.m[0], "l": loop.l[0]}))
    log_g0 = np.log(abs(g0)) + 1j * _base_arg(g0)
    I1, I2, off = 0j, 0j, 0
    for p, a, b in zip(loop.pieces, dlf, dlg):
        n = p.s.size
        I1 += romberg(logf[off:off + n] * b, 1.0 / (n - 1))[0]
        I2 += romberg(a, 1.0 / (n - 1))[0]
        off += n - 1
    return complex(np.exp((I1 - log_g0 * I2) / (TWO_PI * 1j)))


def holonomy(f, g, loop: CurvePath, tol: float = 1e-10, max_refine: int = 5) -> complex:
    """exp((1/2 pi i)(int log f dg/g - log g(t0) int df/f)) around a closed loop.

    The loop is re-tracked on finer grids until two successive values agree
    within ``tol`` (relative).
    """
    if not loop.closed:
        raise PathError("holonomy needs a closed loop")
    F, G = _rational(f), _rational(g)
    prev = None
    path = loop
    for extra in range(max_refine + 1):
        if extra:
            if loop.curve is None:
                break
            path = track_path(loop.curve, loop.spec, loop.levels + extra)
        h = _holonomy_once(F, G, path)
        if h is not None and prev is not None and abs(h - prev) < tol * max(1.0, abs(h)):
            return h
        prev = h
    raise QuadratureError(f"holonomy not converged after {max_refine} refinements", partial=prev)


# ---------------------------------------------------------------------------
# quantization and the loop library


def detect_rational(value: float, max_den: int = 64, tol: float = 1e-6):
    """Nearest k/N with N <= max_den, or None when none is within tol."""
    if max_den < 1:
        raise ValueError("max_den must be at least 1")
    fr = Fraction(float(value)).limit_denominator(max_den)
    if abs(float(fr) - value) < tol:
        return fr.numerator, fr.denominator
    return None


@dataclass
class Loop:
    name: str
    spec: PathSpec
    turns: int


def _closed_loop(curve: EigenvalueCurve, name: str, arc: Arc, l0: complex, levels: int, max_turns: int):
    """Repeat a circle until the l-lift closes; returns a tracked CurvePath."""
    pieces = []
    for k in range(1, max_turns + 1):
        pieces.append(arc)
        spec = PathSpec(list(pieces), l0)
        path = track_path(curve, spec, levels)
        if path.closed:
            return Loop(name, spec, k), path
    raise PathError(f"loop {name} does not close after {max_turns} turns")


def loop_library(curve, levels: int = DEFAULT_LEVELS) -> list[tuple[Loop, CurvePath]]:
    """Circles around singular m-values (radius half the distance to the nearest
    other one), around m = 0, and rings |m| = r between singular moduli; one
    closed lift per sheet, duplicates removed."""
    if not isinstance(curve, EigenvalueCurve):
        curve = EigenvalueCurve(curve)
    sing = curve.singular_m_values()
    deg_l = curve.C.shape[1] - 1
    arcs = []
    for k, c in enumerate(sing):
        others = np.delete(sing, k)
        r = 0.5 * float(np.min(np.abs(others - c))) if others.size else 0.5
        arcs.append((f"circle(m={c:.4g}, r={r:.4g})", circle(c, r)))
    mods = sorted({round(abs(c), 9) for c in sing if abs(c) > 0})
    for a, b in zip(mods, mods[1:]):
        r = 0.5 * (a + b)
        arcs.append((f"ring(|m|={r:.4g})", circle(0, r)))
    out = []
    seen: list = []
    for name, arc in arcs:
        start = arc.start
        for l0 in fiber_roots(curve.C, start):
            try:
                loop, path = _closed_loop(curve, name, arc, complex(l0), levels, deg_l)
            except PathError:
                continue
            # a multi-turn loop visits every sheet it permutes; keep it once
            ls = path.l
            if any(s[0] == name and np.min(np.abs(s[1] - l0)) < 1e-8 for s in seen):
                continue
            seen.append((name, ls))
            out.append((loop, path))
    return out


def refined(loop: Loop, curve, factor_levels: int) -> CurvePath:
    return track_path(curve, loop.spec, DEFAULT_LEVELS + factor_levels)


def geometric_start(curve) -> tuple[complex, complex]:
    """Base point (1, l0) with l0 = -1 when it lies on the curve."""
    if not isinstance(curve, EigenvalueCurve):
        curve = EigenvalueCurve(curve)
    if curve.residual(1.0, -1.0) < 1e-12:
        return 1 + 0j, -1 + 0j
    roots = fiber_roots(curve.C, 1.0)
    return 1 + 0j, complex(roots[0])
