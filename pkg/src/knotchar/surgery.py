"""Dehn-surgery intersection data: S(p,q), b(p,q), lambda(p,q).

Points of the component where the trace of gamma = p*mu + q*lambda equals +2
or -2 are found by a seeded rational shear x = u - c*z followed by the
resultant in z; the multiplicity of a point is the multiplicity of its image
root in that eliminant.  Points with x = +-2 (chi(mu) = +-2) are excluded
from lambda(p,q).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd as igcd

import numpy as np

from .boundary import BoundaryTriple, reduce_on
from .charvar import PlaneCurve, alexander_filter
from .elim import divides, divrem, prem, resultant
from .kernels import poly_roots
from .poly import MultiPoly
from .roots import QuadraticNumber, complex_roots, low_degree_factors, recognize
from .traces import peripheral_recursion

POINT_TOL = 1e-7
ASSUMPTION = ("lambda(p,q) counts characters of the surgered manifold only under the "
              "conjecture that every such character arises this way; S(p,q) itself is unconditional")


class SurgeryError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SurgerySlope:
    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise ValueError("slope (0, 0) is not a curve")
        if igcd(self.p, self.q) != 1:
            raise ValueError(f"slope ({self.p}, {self.q}) is not primitive")

    def canonical(self) -> "SurgerySlope":
        """Representative with q > 0, or q = 0 and p > 0 (gamma and -gamma agree)."""
        if self.q < 0 or (self.q == 0 and self.p < 0):
            return SurgerySlope(-self.p, -self.q)
        return self

    def __str__(self):
        return f"({self.p},{self.q})"


@dataclass
class Intersection:
    x: complex
    z: complex
    sign: int  # chi(gamma) = 2*sign
    multiplicity: int
    x_exact: QuadraticNumber | None = None
    z_exact: QuadraticNumber | None = None
    reducible: bool = False
    excluded: bool = False
    boundary_branch_point: bool = False  # chi(mu), chi(lambda) both +-2

    def to_json(self):
        def num(v, ex):
            return str(ex) if ex is not None else [round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0]
        return {"x": num(self.x, self.x_exact), "z": num(self.z, self.z_exact),
                "x_minpoly": str(self.x_exact.minpoly) if self.x_exact else None,
                "trace_gamma": 2 * self.sign, "multiplicity": self.multiplicity,
                "reducible": self.reducible, "excluded": self.excluded,
                "boundary_branch_point": self.boundary_branch_point}


@dataclass
class SurgeryReport:
    slope: SurgerySlope
    gamma_poly: MultiPoly
    chi_list: list[Intersection]
    shear: Fraction
    seed: int
    x_eliminants: dict = field(default_factory=dict)  # sign -> factored Res_z(C, I_gamma -+ 2)
    assumption: str = ASSUMPTION

    @property
    def b(self) -> int:
        return sum(c.multiplicity for c in self.chi_list)

    @property
    def lam(self) -> int:
        return sum(c.multiplicity for c in self.chi_list if not c.excluded)

    @property
    def transverse(self) -> bool:
        return all(c.multiplicity == 1 for c in self.chi_list)

    def nonexcluded_x(self, sign: int | None = None) -> list[complex]:
        """x-values of non-excluded points, optionally only those with chi(gamma) = 2*sign."""
        return [c.x for c in self.chi_list if not c.excluded and (sign is None or c.sign == sign)]

    def nonexcluded_exact(self, sign: int | None = None) -> set[str]:
        return {str(c.x_exact) if c.x_exact else f"{c.x:.12g}" for c in self.chi_list
                if not c.excluded and (sign is None or c.sign == sign)}

    def to_json(self):
        return {"slope": [self.slope.p, self.slope.q], "gamma_poly": str(self.gamma_poly),
                "b": self.b, "lambda": self.lam, "shear": str(self.shear), "seed": self.seed,
                "transverse": self.transverse,
                "x_eliminants": self.x_eliminants,
                "chi": [c.to_json() for c in self.chi_list], "assumption": self.assumption}


def gamma_trace_on_component(slope: SurgerySlope, triple: BoundaryTriple) -> MultiPoly:
    """I_gamma in (x, z), reduced modulo the component."""
    red = lambda f: reduce_on(triple.modulus, f)
    out = peripheral_recursion(slope.p, slope.q, triple.I_mu, triple.I_lambda, triple.I_mulambda, reduce=red)
    return red(out)


def _factored(p: MultiPoly) -> list[list]:
    out = []
    for f in low_degree_factors(p.trimmed() if p.used_vars() else p):
        out.append([str(f.poly), f.multiplicity])
    return out


def _sheared(f: MultiPoly, c: Fraction) -> MultiPoly:
    V = ("x", "z", "u")
    u, z = MultiPoly.var("u", V), MultiPoly.var("z", V)
    return f.with_vars(V).subs({"x": u - z * c}).with_vars(("u", "z"))


def _z_roots(f: MultiPoly, u0: complex) -> np.ndarray:
    c = np.array([complex(cf.evaluate({"u": u0})) for cf in reversed(f.coefficients("z"))])
    while c.size and abs(c[0]) < 1e-14 * np.max(np.abs(c)):
        c = c[1:]
    if c.size <= 1:
        return np.zeros(0, complex)
    z, _, _ = poly_roots(c / np.max(np.abs(c)), 1e-15, 500)
    return z


def _relative_value(f: MultiPoly, vals: dict) -> float:
    """|f| divided by the sum of the moduli of its terms."""
    tot, scale = 0j, 0.0
    for e, c in f.terms.items():
        t = complex(c)
        for v, k in zip(f.vars, e):
            t *= complex(vals[v]) ** k
        tot += t
        scale += abs(t)
    return abs(tot) / scale if scale else 0.0


def _numeric_gamma_trace(triple: BoundaryTriple, p: int, q: int, x: complex, z: complex) -> complex:
    X, F, G = triple.evaluate(x, z)
    return complex(peripheral_recursion(p, q, X, F, G))


def _points_for_sign(C: MultiPoly, h: MultiPoly, c: Fraction, trace_at, target: int):
    """[(x, z, mult)] on {C = h = 0} via the shear x = u - c z; None if c is not generic.

    ``trace_at(x, z)`` evaluates I_gamma numerically (stably, through the
    peripheral recursion) and decides which point of C over a root u0 lies on
    I_gamma = target.
    """
    Cs, hs = _sheared(C, c), _sheared(h, c)
    if not Cs.leading_coeff_in("z").is_constant():
        return None
    # C has a constant leading coefficient in z, so reducing h first only
    # changes the resultant by a nonzero constant
    hr = divrem(hs, Cs, "z").remainder
    if hr.is_zero():
        raise SurgeryError("slope degenerate on component")
    if hr.degree("z") <= 0:
        R = hr.with_vars(("u",)) ** Cs.degree("z")
    else:
        R = resultant(Cs, hr, "z").with_vars(("u",))
    if R.is_zero():
        raise SurgeryError("slope degenerate on component")
    out = []
    if R.is_constant():
        return out
    cf = float(c)
    for r in complex_roots(R):
        u0 = r.value
        zs = _z_roots(Cs, u0)
        res = sorted((abs(trace_at(u0 - cf * z0, z0) - target), i) for i, z0 in enumerate(zs))
        # exactly one point of C over u0 lies on the level set; two means the shear is not generic
        if res[0][0] > 1e-5 or (len(res) > 1 and res[1][0] < 1e-3):
            return None
        z0 = complex(zs[res[0][1]])
        out.append((complex(u0 - cf * z0), z0, r.multiplicity))
    return out


def _snap(x0: complex, z0: complex, xr, C: MultiPoly):
    """Move a point to the nearest simple root of the x-eliminant and then to the
    nearest root of C(x, .); multiple intersection points are otherwise only
    accurate to the square root of the working precision."""
    if xr is None or xr.size == 0:
        return x0, z0
    k = int(np.argmin(np.abs(xr - x0)))
    if abs(xr[k] - x0) > 1e-5 * max(1.0, abs(x0)):
        return x0, z0
    x1 = complex(xr[k])
    c = np.array([complex(cf.evaluate({"x": x1})) for cf in reversed(C.coefficients("z"))])
    while c.size > 1 and abs(c[0]) < 1e-14 * np.max(np.abs(c)):
        c = c[1:]
    if c.size <= 1:
        return x1, z0
    zs = np.roots(c)
    j = int(np.argmin(np.abs(zs - z0)))
    if abs(zs[j] - z0) > 1e-4 * max(1.0, abs(z0)):
        return x1, z0
    return x1, complex(zs[j])


def intersection_set(slope: SurgerySlope, component: PlaneCurve, triple: BoundaryTriple,
                     alexander: MultiPoly | None = None, seed: int = 0) -> SurgeryReport:
    """All characters on the component with chi(gamma) = +-2, with multiplicities."""
    slope = slope.canonical()
    C = component.poly
    Ig = gamma_trace_on_component(slope, triple)
    rng = np.random.default_rng(seed)
    filt = alexander_filter(alexander) if alexander is not None and not alexander.is_constant() else None
    for s in (1, -1):
        if divides(C, Ig - 2 * s):
            raise SurgeryError("slope degenerate on component")
    elims = {}
    exact_x, exact_z = [], []
    x_roots: dict = {}
    for s in (1, -1):
        h = Ig - 2 * s
        if h.degree("z") > 0 and C.degree("z") > 0:
            Ex = resultant(C, h, "z").with_vars(("x",))
        elif C.degree("z") > 0:
            Ex = h.with_vars(("x",)) ** C.degree("z")
        else:
            Ex = resultant(C, h, "x").with_vars(("z",)) if h.degree("x") > 0 else C
        elims[f"{2 * s:+d}"] = _factored(Ex) if not Ex.is_constant() else []
        if not Ex.is_constant() and Ex.used_vars() == ("x",):
            exact_x.extend(low_degree_factors(Ex))
            x_roots[s] = np.array([r.value for r in complex_roots(Ex)])
        if C.degree("x") > 0 and h.degree("x") > 0:
            # pseudo-reduce first: this only adds powers of lc_x(C) to the eliminant,
            # which is used for recognition of exact z-values alone
            hx = prem(h, C, "x") if h.degree("x") >= C.degree("x") else h
            Ez = resultant(C, hx, "x").with_vars(("z",))
            if not Ez.is_zero() and Ez.used_vars() == ("z",):
                exact_z.extend(low_degree_factors(Ez))
    trace_at = lambda x, z: _numeric_gamma_trace(triple, slope.p, slope.q, x, z)
    for attempt in range(50):
        c = Fraction(int(rng.integers(1, 40)), int(rng.integers(41, 97))) * (1 if attempt % 2 == 0 else -1)
        pts = {}
        for s in (1, -1):
            got = _points_for_sign(C, Ig - 2 * s, c, trace_at, 2 * s)
            if got is None:
                break
            pts[s] = got
        else:
            break
    else:
        raise SurgeryError("no generic shear found")
    chi = []
    for s in (1, -1):
        for x0, z0, n in pts[s]:
            x0, z0 = _snap(x0, z0, x_roots.get(s), C)
            ent = Intersection(x0, z0, s, n)
            ent.x_exact = recognize(x0, exact_x)
            ent.z_exact = recognize(z0, exact_z)
            if ent.x_exact is not None:
                ent.x = ent.x_exact.value
            if ent.z_exact is not None:
                ent.z = ent.z_exact.value
            ent.excluded = abs(x0 - 2) < POINT_TOL or abs(x0 + 2) < POINT_TOL
            if filt is not None:
                ent.reducible = abs(complex(filt.evaluate({"x": x0}))) < POINT_TOL * max(1.0, abs(x0)) ** filt.total_degree()
            if ent.excluded:
                Il = complex(triple.I_lambda.evaluate({"x": x0, "z": z0}))
                ent.boundary_branch_point = abs(abs(Il) - 2) < POINT_TOL and abs(Il.imag) < POINT_TOL
            chi.append(ent)
    chi.sort(key=lambda e: (-e.sign, round(e.x.real, 8), round(e.x.imag, 8), round(e.z.real, 8), round(e.z.imag, 8)))
    return SurgeryReport(slope, Ig, chi, c, seed, elims)


def compare_with_norm(report: SurgeryReport, norm_data) -> dict:
    """lambda, the norm, ideal orders I-hat, and the inequalities between them."""
    from .ideal import ideal_orders

    p, q = report.slope.p, report.slope.q
    nrm = norm_data.norm(p, q)
    orders = ideal_orders(norm_data, p, q)
    I_hat = sum(v for v in orders if v > 0)
    excluded = report.b - report.lam
    hat_proxy = nrm - I_hat - excluded  # zeros of f_gamma at non-excluded affine points
    return {
        "slope": [p, q], "lambda": report.lam, "b": report.b, "norm": nrm,
        "ideal_orders": orders, "I_hat": I_hat, "hat_lambda_proxy": hat_proxy,
        "lambda_le_hat": report.lam <= hat_proxy,
        "lambda_plus_I_hat_le_norm": report.lam + I_hat <= nrm,
        "degree_balance": report.b + I_hat == nrm,
        "transversality_caveat": not report.transverse,
    }


def eigen_check(report: SurgeryReport, triple: BoundaryTriple, A: MultiPoly) -> float:
    """Worst of |A0(m,l)| and |m^p l^q -+ 1| over lifts of non-excluded points."""
    from .boundary import eigen_lifts

    p, q = report.slope.p, report.slope.q
    worst = 0.0
    for e in report.chi_list:
        if e.excluded:
            continue
        lifts = eigen_lifts(triple, e.x, e.z, tol=1e-5)
        if not lifts:
            return float("inf")
        best = min(max(abs(complex(A.evaluate({"m": m, "l": l}))),
                       abs(m ** p * l ** q - e.sign), abs(m ** p * l ** q - 1 / e.sign)) for m, l in lifts)
        # E = m^p l^q with E + 1/E = 2*sign forces E = sign
        worst = max(worst, best)
    return worst


def coprime_slopes(P: int, Q: int) -> list[SurgerySlope]:
    """Canonical primitive slopes with |p| <= P, 0 <= q <= Q."""
    out = []
    for q in range(0, Q + 1):
        for p in range(-P, P + 1):
            if (p, q) == (0, 0) or igcd(p, q) != 1 or (q == 0 and p < 0):
                continue
            out.append(SurgerySlope(p, q))
    return out


def _one(args):
    slope, component, triple, alexander, seed = args
    return intersection_set(slope, component, triple, alexander, seed)


def batch_reports(component: PlaneCurve, triple: BoundaryTriple, P: int, Q: int,
                  alexander: MultiPoly | None = None, seed: int = 0, jobs: int = 1) -> list[SurgeryReport]:
    """Reports for every canonical slope in the box, ordered by slope."""
    work = [(s, component, triple, alexander, seed) for s in coprime_slopes(P, Q)]
    if jobs <= 1:
        return [_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_one, work))
