"""SL2(C) character varieties of two-generator one-relator knot groups.

With conjugate generators (tr a = tr b = x) and z = tr ab, the characters of
representations killing the relator R are cut out by

    tr R - 2 = 0,   tr(R a) - x = 0,   tr(R b) - x = 0.

The common factor of these three polynomials is the plane curve returned by
``defining_polynomial``; each irreducible piece is checked by exact division
and by rebuilding matrices at random points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elim import divides, gcd, resultant, squarefree_part
from .factor import factor_irreducible
from .kernels import poly_roots
from .poly import MultiPoly
from .presentation import KnotPresentation
from .roots import QuadraticNumber, complex_roots, low_degree_factors, recognize
from .traces import GroupWord, at_equal_meridians, trace_poly

XZ = ("x", "z")


class CharacterVarietyError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PlaneCurve:
    """Squarefree, content-normalized polynomial in two named variables."""

    poly: MultiPoly
    vars: tuple = XZ
    factors: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("plane curve polynomial is zero")
        extra = set(self.poly.used_vars()) - set(self.vars)
        if extra:
            raise ValueError(f"curve uses variables {sorted(extra)} outside {self.vars}")
        object.__setattr__(self, "poly", self.poly.with_vars(self.vars))

    @classmethod
    def from_poly(cls, p: MultiPoly, vars=XZ) -> "PlaneCurve":
        p = p.with_vars(vars)
        return cls(squarefree_part(p), tuple(vars))

    def __call__(self, a, b):
        return self.poly.evaluate({self.vars[0]: a, self.vars[1]: b})

    def __str__(self):
        return str(self.poly)

    def component(self, i: int) -> "PlaneCurve":
        return PlaneCurve(self.factors[i], self.vars)


# ---------------------------------------------------------------------------
# numerical matrices


def word_matrix(word: GroupWord, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    mats = (A, B)
    inv = tuple(np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) for M in mats)
    out = np.eye(2, dtype=complex)
    for g, e in word.syllables:
        M = mats[g] if e > 0 else inv[g]
        out = out @ np.linalg.matrix_power(M, abs(e))
    return out


def random_sl2(rng: np.random.Generator, box: float = 1.5) -> np.ndarray:
    while True:
        M = rng.uniform(-box, box, (2, 2)) + 1j * rng.uniform(-box, box, (2, 2))
        d = np.linalg.det(M)
        if abs(d) > 0.1:
            return M / np.sqrt(d)


# ---------------------------------------------------------------------------
# conditions and the defining polynomial


def rep_conditions(pres: KnotPresentation) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(tr R - 2, tr Ra - x, tr Rb - x) in (x, z)."""
    R = pres.relator
    x = MultiPoly.var("x", XZ)
    a, b = GroupWord([(0, 1)]), GroupWord([(1, 1)])
    c1 = at_equal_meridians(trace_poly(R)) - 2
    c2 = at_equal_meridians(trace_poly(R * a)) - x
    c3 = at_equal_meridians(trace_poly(R * b)) - x
    return c1, c2, c3


def abelian_factor() -> MultiPoly:
    """x^2 - z - 2: characters of representations with b = a."""
    return (MultiPoly.var("x", XZ) ** 2 - MultiPoly.var("z", XZ) - 2).integer_content_normalized()


@dataclass(frozen=True)
class ComponentCheck:
    factor: MultiPoly
    abelian: bool
    divides_conditions: bool
    max_residual: float
    points_checked: int


def curve_points(p: MultiPoly, n: int, rng: np.random.Generator, box: float = 1.5,
                 vars=XZ) -> list[tuple[complex, complex]]:
    """Random complex points on {p = 0}: random first coordinate, solve for the second."""
    u, v = vars
    out = []
    if p.degree(v) <= 0:
        for r in complex_roots(p.with_vars((u,))):
            out.append((r.value, complex(rng.uniform(-box, box), rng.uniform(-box, box))))
        return out[:n]
    coeffs = p.coefficients(v)
    tries = 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        x0 = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        c = np.array([complex(cf.evaluate({u: x0})) if not cf.is_zero() else 0j
                      for cf in reversed(coeffs)])
        if abs(c[0]) < 1e-8:
            continue
        zs, _, ok = poly_roots(c / np.max(np.abs(c)), 1e-15, 500)
        if not ok:
            continue
        out.append((x0, complex(zs[rng.integers(len(zs))])))
    return out


def _check_component(f: MultiPoly, conds, pres: KnotPresentation, rng, npoints=10) -> ComponentCheck:
    divs = all(c.is_zero() or divides(f, c) for c in conds)
    abel = f == abelian_factor()
    worst = 0.0
    count = 0
    for x0, z0 in curve_points(f, npoints, rng):
        rep = numeric_rep_at(PlaneCurve(f), (x0, z0), pres, check_on_curve=False)
        worst = max(worst, rep.residual)
        count += 1
    return ComponentCheck(f, abel, divs, worst, count)


def defining_polynomial(pres: KnotPresentation, seed: int = 0, verify: bool = True) -> PlaneCurve:
    """Squarefree curve in (x, z) carrying the characters of the knot group."""
    conds = [c for c in rep_conditions(pres)]
    nonzero = [c for c in conds if not c.is_zero()]
    if not nonzero:
        raise CharacterVarietyError("relator defines free group")
    g = nonzero[0]
    for c in nonzero[1:]:
        g = gcd(g, c)
    if g.is_constant():
        raise CharacterVarietyError("the trace conditions have no common curve component")
    g = squarefree_part(g)
    factors = [f for f, _ in factor_irreducible(g)]
    if verify:
        rng = np.random.default_rng(seed)
        for f in factors:
            chk = _check_component(f, conds, pres, rng)
            if not chk.divides_conditions or chk.max_residual > 1e-7:
                raise CharacterVarietyError(
                    f"factor {f} failed verification (divides={chk.divides_conditions}, "
                    f"residual={chk.max_residual:.3g})")
    # abelian factor first, then by degree
    factors.sort(key=lambda f: (f != abelian_factor(), f.total_degree(), str(f)))
    return PlaneCurve(g.with_vars(XZ), XZ, tuple(factors))


def nonabelian_components(curve: PlaneCurve) -> list[PlaneCurve]:
    return [PlaneCurve(f) for f in curve.factors if f != abelian_factor()]


def verify_components(pres: KnotPresentation, curve: PlaneCurve, seed: int = 0, npoints: int = 10):
    rng = np.random.default_rng(seed)
    conds = rep_conditions(pres)
    return [_check_component(f, conds, pres, rng, npoints) for f in curve.factors]


def is_smooth_affine(curve: PlaneCurve) -> bool:
    """True when {f = f_x = f_z = 0} is empty (resultant test)."""
    f = curve.poly
    u, v = curve.vars
    fu, fv = f.derivative(u), f.derivative(v)
    # eliminate v from (f, f_v) and (f, f_u); a common point gives a common root in u
    if fv.is_zero():
        r1 = f.with_vars(curve.vars)
    else:
        r1 = resultant(f, fv, v)
    if fu.is_zero():
        return gcd(r1, f).is_constant() if not r1.is_zero() else False
    r2 = resultant(f, fu, v) if f.degree(v) > 0 and fu.degree(v) > 0 else None
    if r1.is_zero():
        return False
    candidates = r1 if r2 is None or r2.is_zero() else gcd(r1, r2)
    if candidates.is_constant():
        return True
    # check the remaining candidate u-values numerically against all three equations
    for r in complex_roots(candidates.trimmed() if candidates.used_vars() else candidates):
        coeffs = [complex(c.evaluate({u: r.value})) for c in reversed(f.coefficients(v))]
        if abs(coeffs[0]) < 1e-12:
            continue
        zs, _, _ = poly_roots(np.array(coeffs) / max(abs(c) for c in coeffs), 1e-15, 500)
        for z0 in zs:
            vals = [abs(complex(q.evaluate({u: r.value, v: z0}))) for q in (f, fu, fv)]
            if max(vals) < 1e-7:
                return False
    return True


# ---------------------------------------------------------------------------
# reducible characters


def alexander_filter(alexander: MultiPoly) -> MultiPoly:
    """Polynomial in x vanishing at x = m + 1/m for every root m^2 of Delta."""
    t = MultiPoly.var("t", ("t", "x"))
    x = MultiPoly.var("x", ("t", "x"))
    quad = t * t + (2 - x * x) * t + 1
    return resultant(alexander.with_vars(("t", "x")), quad, "t").with_vars(("x",))


@dataclass(frozen=True)
class CurvePoint:
    x: complex
    z: complex
    multiplicity: int
    x_exact: QuadraticNumber | None = None
    z_exact: QuadraticNumber | None = None
    reducible: bool = True

    def to_json(self):
        return {
            "x": str(self.x_exact) if self.x_exact else [self.x.real, self.x.imag],
            "z": str(self.z_exact) if self.z_exact else [self.z.real, self.z.imag],
            "x_minpoly": str(self.x_exact.minpoly) if self.x_exact else None,
            "multiplicity": self.multiplicity,
            "reducible": self.reducible,
        }


def points_over_x(curve: PlaneCurve, factor: MultiPoly, cluster_tol: float = 1e-6) -> list[CurvePoint]:
    """Curve points with x a root of ``factor`` (univariate in x), with z-multiplicities.

    When the curve reduced modulo the minimal polynomial of x has rational
    coefficients in z the z-roots are found exactly; otherwise numerically.
    """
    u, v = curve.vars
    f = curve.poly
    fx = factor.with_vars((u,))
    out = []
    xs = [r.value for r in complex_roots(fx)]
    # reduce f modulo the minimal polynomial in x
    from .elim import divrem

    red = divrem(f, fx.with_vars(curve.vars), u).remainder
    rational_in_z = red.degree(u) <= 0
    for x0 in xs:
        xq = recognize(x0, low_degree_factors(fx)) if fx.total_degree() <= 2 else None
        if rational_in_z:
            zp = red.with_vars((v,)) if red.used_vars() else red.with_vars((v,))
            if zp.is_constant():
                continue
            zfac = low_degree_factors(zp)
            for r in complex_roots(zp):
                out.append(CurvePoint(x0, r.value, r.multiplicity, xq, recognize(r.value, zfac)))
        else:
            c = np.array([complex(cf.evaluate({u: x0})) for cf in reversed(f.coefficients(v))])
            zs, _, _ = poly_roots(c / np.max(np.abs(c)), 1e-15, 500)
            clusters: list[list[complex]] = []
            for z0 in zs:
                for cl in clusters:
                    if abs(cl[0] - z0) < cluster_tol * max(1.0, abs(z0)):
                        cl.append(z0)
                        break
                else:
                    clusters.append([z0])
            for cl in clusters:
                out.append(CurvePoint(x0, complex(np.mean(cl)), len(cl), xq, None))
    return out


def reducible_characters(curve: PlaneCurve, alexander: MultiPoly) -> list[CurvePoint]:
    """Points of ``curve`` whose x = m + 1/m with m^2 a root of the Alexander polynomial."""
    if alexander.is_constant():
        return []
    filt = alexander_filter(alexander)
    out = []
    for fac in low_degree_factors(filt):
        out.extend(points_over_x(curve, fac.poly))
    out.sort(key=lambda p: (round(p.x.real, 9), round(p.x.imag, 9), round(p.z.real, 9), round(p.z.imag, 9)))
    return out


# ---------------------------------------------------------------------------
# numeric representations


@dataclass
class NumericRep:
    A: np.ndarray | None
    B: np.ndarray | None
    residual: float
    reducible: bool
    abelian: bool = False
    trace_error: float = 0.0
    translation: complex | None = None  # t(rho) for parabolic x = +-2


def _eig_param(x: complex) -> complex:
    s = (x + np.sqrt(complex(x * x - 4))) / 2
    if abs(s) < 1:
        s = 1 / s
    return s


def numeric_rep_at(curve: PlaneCurve, point, pres: KnotPresentation, check_on_curve: bool = True,
                   tol: float = 1e-8) -> NumericRep:
    """Matrices A, B with tr A = tr B = x, tr AB = z in upper/lower normal form.

    At reducible characters ((z - 2)(z - x^2 + 2) = 0) the flag ``reducible`` is
    set; on the abelian locus z = x^2 - 2 the diagonal representation b = a is
    returned together with its relator residual.
    """
    x0, z0 = complex(point[0]), complex(point[1])
    if check_on_curve:
        val = abs(complex(curve(x0, z0)))
        if val > tol * max(1.0, abs(x0), abs(z0)) ** curve.poly.total_degree():
            raise CharacterVarietyError(f"point {point} is not on the curve (|f| = {val:.3g})")
    s = _eig_param(x0)
    c = z0 - x0 * x0 + 2
    comm = (z0 - 2) * c
    scale = max(1.0, abs(z0), abs(x0) ** 2) ** 2
    if abs(comm) < 1e-9 * scale:
        if abs(c) < 1e-9 * max(1.0, abs(x0) ** 2):
            A = np.diag([s, 1 / s]).astype(complex)
            R = word_matrix(pres.relator, A, A)
            return NumericRep(A, A.copy(), float(np.linalg.norm(R - np.eye(2))), True, True)
        return NumericRep(None, None, float("nan"), True)
    A = np.array([[s, 1], [0, 1 / s]], dtype=complex)
    B = np.array([[s, 0], [c, 1 / s]], dtype=complex)
    R = word_matrix(pres.relator, A, B)
    res = float(np.linalg.norm(R - np.eye(2)))
    terr = max(abs(np.trace(A) - x0), abs(np.trace(B) - x0), abs(np.trace(A @ B) - z0))
    rep = NumericRep(A, B, res, False, False, float(terr))
    if abs(abs(x0) - 2) < 1e-12 and abs(x0.imag) < 1e-12 and pres.longitude is not None:
        L = word_matrix(pres.longitude, A, B)
        # A = s [[1, 1/s], [0, 1]] with s = +-1; L = +-[[1, tau], [0, 1]]
        tau = L[0, 1] / L[0, 0]
        rep.translation = complex(tau * s)
    return rep
