"""The boundary torus: t_D, the restriction map, and the A-polynomial factor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charvar import PlaneCurve, curve_points
from .elim import divrem, gcd, resultant, squarefree_part, strip_monomial
from .factor import factor_irreducible
from .poly import MultiPoly
from .presentation import KnotPresentation
from .traces import at_equal_meridians, trace_poly

ML = ("m", "l")


class BoundaryError(ArithmeticError):
    pass


def t_D(m: complex, l: complex) -> tuple[complex, complex, complex]:
    """(m + 1/m, l + 1/l, ml + 1/(ml))."""
    if m == 0 or l == 0:
        raise ValueError("t_D needs nonzero eigenvalues")
    ml = m * l
    return m + 1 / m, l + 1 / l, ml + 1 / ml


def surface_residual(x, y, z):
    """x^2 + y^2 + z^2 - xyz - 4, zero exactly on the boundary character variety."""
    return x * x + y * y + z * z - x * y * z - 4


@dataclass(frozen=True)
class BoundaryTriple:
    I_mu: MultiPoly
    I_lambda: MultiPoly
    I_mulambda: MultiPoly
    modulus: PlaneCurve

    def evaluate(self, x, z):
        vals = {"x": x, "z": z}
        return tuple(complex(p.evaluate(vals)) if not p.is_zero() else 0j
                     for p in (self.I_mu, self.I_lambda, self.I_mulambda))

    def surface_remainder(self) -> MultiPoly:
        """Surface equation pulled back along the restriction, reduced mod the component."""
        u, v, w = self.I_mu, self.I_lambda, self.I_mulambda
        rel = u * u + v * v + w * w - u * v * w - 4
        return reduce_on(self.modulus, rel)

    def to_json(self):
        return {"I_mu": self.I_mu.to_json(), "I_lambda": self.I_lambda.to_json(),
                "I_mulambda": self.I_mulambda.to_json(), "modulus": self.modulus.poly.to_json()}


def _reduction_var(curve: PlaneCurve) -> str:
    u, v = curve.vars
    p = curve.poly
    for var in (v, u):
        if p.degree(var) > 0 and p.leading_coeff_in(var).is_constant():
            return var
    raise BoundaryError(f"component {p} has no variable with a unit leading coefficient")


def reduce_on(curve: PlaneCurve, f: MultiPoly) -> MultiPoly:
    """Normal form of ``f`` modulo the component (division in z, else x)."""
    return divrem(f.with_vars(curve.vars), curve.poly, _reduction_var(curve)).remainder


def restriction_map(component: PlaneCurve, pres: KnotPresentation) -> BoundaryTriple:
    """Traces of meridian, longitude and their product, reduced on the component."""
    if pres.longitude is None:
        raise BoundaryError("presentation has no longitude")
    out = []
    for w in (pres.meridian, pres.longitude, pres.meridian_longitude):
        out.append(reduce_on(component, at_equal_meridians(trace_poly(w))))
    return BoundaryTriple(*out, modulus=component)


# ---------------------------------------------------------------------------
# eigenvalue lifts and the A-polynomial


def _unit_quadratic_roots(t: complex):
    """Roots of s^2 - t s + 1 in closed form (exact when t = +-2)."""
    disc = complex(t * t - 4)
    # t = +-2 up to rounding is the double root +-1; the square root would
    # amplify the rounding to ~1e-8
    d = 0j if abs(disc) < 1e-12 else np.sqrt(disc)
    a = (t + d) / 2 if abs(t + d) >= abs(t - d) else (t - d) / 2
    return (a, 1 / a)


def eigen_lifts(triple: BoundaryTriple, x0: complex, z0: complex, tol: float = 1e-6):
    """All (m, l) with t_D(m, l) = restriction of (x0, z0)."""
    X, F, G = triple.evaluate(x0, z0)
    ms = _unit_quadratic_roots(X)
    ls = _unit_quadratic_roots(F)
    out = []
    for m in ms:
        for l in ls:
            ml = m * l
            if abs(ml + 1 / ml - G) < tol * max(1.0, abs(G)):
                out.append((complex(m), complex(l)))
    return out


@dataclass(frozen=True)
class PointTest:
    passed: int
    tried: int
    max_residual: float


def point_test(A: MultiPoly, triple: BoundaryTriple, npoints: int, rng: np.random.Generator,
               tol: float = 1e-7, require_all: bool = True) -> PointTest:
    """Evaluate A at the eigenvalue lifts of random points of the component."""
    passed = 0
    worst = 0.0
    pts = curve_points(triple.modulus.poly, npoints, rng, box=1.2)
    for x0, z0 in pts:
        lifts = eigen_lifts(triple, x0, z0)
        if not lifts:
            continue
        res = [abs(complex(A.evaluate({"m": m, "l": l}))) for m, l in lifts]
        r = max(res) if require_all else min(res)
        worst = max(worst, r)
        if r < tol:
            passed += 1
    return PointTest(passed, len(pts), worst)


@dataclass(frozen=True)
class APolyResult:
    curve: PlaneCurve
    eliminants: tuple
    kept: tuple
    discarded: tuple


def eliminate_to_ml(component: PlaneCurve, triple: BoundaryTriple) -> tuple[MultiPoly, MultiPoly]:
    """Two eliminants in (m, l): from the lambda equation and the mu-lambda equation."""
    vars4 = ("x", "z", "m", "l")
    C = component.poly.with_vars(vars4)
    x, z, m, l = (MultiPoly.var(v, vars4) for v in vars4)
    X, F, G = (p.with_vars(vars4) for p in (triple.I_mu, triple.I_lambda, triple.I_mulambda))
    Em = m * m - X * m + 1
    El = l * l - F * l + 1
    Eml = (m * l) ** 2 - G * (m * l) + 1

    def elim_z(p):
        if C.degree("z") > 0 and p.degree("z") > 0:
            return resultant(C, p, "z").with_vars(vars4)
        if C.degree("z") > 0:
            return p ** C.degree("z")
        return p

    M = Em if Em.degree("z") <= 0 else elim_z(Em)
    base = C if C.degree("z") <= 0 else None
    out = []
    for E in (El, Eml):
        R = elim_z(E)
        if base is not None:
            R = resultant(base, R, "x").with_vars(vars4) if R.degree("x") > 0 else R
        P = resultant(R, M, "x") if R.degree("x") > 0 else R.with_vars(("z", "m", "l"))
        out.append(P.with_vars(ML) if not set(P.used_vars()) - set(ML) else P)
    return out[0], out[1]


def a_polynomial(component: PlaneCurve, triple: BoundaryTriple, seed: int = 0,
                 attempts: int = 20, details: bool = False):
    """A0(m, l) for the component, squarefree and normalized.

    The gcd of the two eliminants is split into irreducible factors; factors
    vanishing at no eigenvalue lift of ``attempts`` random component points are
    discarded as artefacts of elimination.
    """
    P1, P2 = eliminate_to_ml(component, triple)
    if P1.is_zero() or P2.is_zero():
        raise BoundaryError("component maps to a point")
    g = gcd(P1, P2)
    if g.is_constant():
        g = P2
    g = strip_monomial(squarefree_part(g)).with_vars(ML)
    if g.is_constant():
        raise BoundaryError("component maps to a point")
    rng = np.random.default_rng(seed)
    kept, dropped = [], []
    for f, _ in factor_irreducible(g):
        f = f.with_vars(ML)
        if f.used_vars() in (("m",), ("l",)) and f.total_degree() == 1 and len(f.terms) == 1:
            continue
        test = point_test(f, triple, attempts, rng, require_all=False)
        (kept if test.passed > 0 else dropped).append(f)
    if not kept:
        raise BoundaryError("no eliminant factor passes the numeric point test")
    A = MultiPoly.const(1, ML)
    for f in kept:
        A = A * f
    curve = PlaneCurve(A.integer_content_normalized(), ML, tuple(kept))
    if details:
        return APolyResult(curve, (P1, P2), tuple(kept), tuple(dropped))
    return curve


def involution_image(A: MultiPoly) -> MultiPoly:
    """m^deg_m l^deg_l A(1/m, 1/l), as a polynomial."""
    dm, dl = A.degree("m"), A.degree("l")
    k_m, k_l = A.vars.index("m"), A.vars.index("l")
    terms = {}
    for e, c in A.terms.items():
        e2 = list(e)
        e2[k_m] = dm - e[k_m]
        e2[k_l] = dl - e[k_l]
        terms[tuple(e2)] = c
    return strip_monomial(MultiPoly(A.vars, terms))


def is_involution_symmetric(A: MultiPoly) -> bool:
    B = involution_image(A)
    return B == strip_monomial(A) or B == -strip_monomial(A)


def base_point(A: MultiPoly) -> tuple[complex, complex]:
    """(1, l0) on A0 with l0 = -1 when available (the complete structure's lift)."""
    p = A.subs({"m": 1}).with_vars(("l",))
    if p.is_zero():
        raise BoundaryError("A0 vanishes identically at m = 1")
    if p.evaluate_exact({"l": -1}) == 0:
        return 1 + 0j, -1 + 0j
    from .roots import complex_roots

    r = complex_roots(p)
    return 1 + 0j, r[0].value


