"""Complex roots of univariate rational polynomials with multiplicities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .elim import divides, exact_div, squarefree_decomposition
from .poly import MultiPoly

CLUSTER_TOL = 1e-10
POLISH_TOL = 1e-13
MAX_SWEEPS = 200


class RootFindingError(ArithmeticError):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class ComplexRoot:
    value: complex
    multiplicity: int
    residual: float

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")


def _scaled_coeffs(p: MultiPoly) -> np.ndarray:
    """Coefficients highest-first, scaled to unit max modulus."""
    c = np.array([float(x) for x in reversed(p.univariate_coeffs())], dtype=complex)
    return c / np.max(np.abs(c))


def _polish(c: np.ndarray, z: complex, steps: int = 6) -> complex:
    cl = c.astype(np.clongdouble)
    dcl = np.polyder(cl)
    zl = np.clongdouble(z)
    for _ in range(steps):
        d = np.polyval(dcl, zl)
        if d == 0:
            break
        w = np.polyval(cl, zl) / d
        zl -= w
        if abs(w) <= POLISH_TOL * max(1.0, abs(zl)) * 1e-3:
            break
    return complex(zl)


def _clean(z: complex, eps: float = 1e-14) -> complex:
    size = max(1.0, abs(z))
    re_, im = z.real, z.imag
    if abs(im) < eps * size:
        im = 0.0
    if abs(re_) < eps * size:
        re_ = 0.0
    return complex(re_ + 0.0, im + 0.0)


def _relative_residual(c: np.ndarray, z: complex) -> float:
    k = np.arange(c.size - 1, -1, -1)
    scale = np.sum(np.abs(c) * np.abs(z) ** k)
    if scale == 0:
        return 0.0
    return float(abs(np.polyval(c.astype(np.clongdouble), np.clongdouble(z))) / scale)


def simple_roots(p: MultiPoly, tol: float = CLUSTER_TOL, maxiter: int = MAX_SWEEPS) -> np.ndarray:
    """Roots of a squarefree univariate polynomial."""
    d = len(p.univariate_coeffs()) - 1
    if d <= 0:
        return np.zeros(0, complex)
    c = _scaled_coeffs(p)
    if d == 1:
        return np.array([_clean(-c[1] / c[0])])
    z, it, ok = kernels.poly_roots(c, 1e-15, maxiter)
    z = np.array([_clean(_polish(c, zi)) for zi in z])
    bad = [_relative_residual(c, zi) for zi in z]
    if not ok and max(bad) > tol:
        raise RootFindingError(f"root iteration did not converge after {maxiter} sweeps", best=z)
    return z


def complex_roots(p: MultiPoly, tol: float = CLUSTER_TOL, maxiter: int = MAX_SWEEPS) -> list[ComplexRoot]:
    """All roots of ``p`` with multiplicities from the squarefree decomposition.

    The residual is |p(r)| / sum |c_k||r|^k (scale invariant); each is < tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root set")
    used = p.used_vars()
    if len(used) > 1:
        raise ValueError("complex_roots expects a univariate polynomial")
    if not used:
        return []
    var = used[0]
    p = p.with_vars((var,))
    full = _scaled_coeffs(p)
    out = []
    for mult, factor in enumerate(squarefree_decomposition(p, var), start=1):
        if factor.degree(var) <= 0:
            continue
        for z in simple_roots(factor, tol, maxiter):
            r = _relative_residual(full, z)
            if r >= tol:
                # very high multiplicity makes the full polynomial flat; the factor decides
                r = min(r, _relative_residual(_scaled_coeffs(factor), z))
            if r >= tol:
                raise RootFindingError(f"root {z} has residual {r:.3g} above {tol}", best=z)
            out.append(ComplexRoot(complex(z), mult, r))
    out.sort(key=lambda r: (round(r.value.real, 9), round(r.value.imag, 9)))
    if sum(r.multiplicity for r in out) != p.degree(var):
        raise RootFindingError("multiplicities do not add up to the degree")
    return out


# ---------------------------------------------------------------------------
# exact recognition of low-degree factors


@dataclass(frozen=True)
class Factor:
    poly: MultiPoly
    multiplicity: int
    exact: bool  # True when the factor was verified by exact division

    @property
    def label(self) -> str:
        return "exact" if self.exact else "heuristic"


def _rationalize(v: float, max_den: int = 10**6) -> Fraction:
    return Fraction(v).limit_denominator(max_den)


def low_degree_factors(p: MultiPoly, tol: float = 1e-8) -> list[Factor]:
    """Split a univariate polynomial into rational linear / quadratic factors.

    Candidates are reconstructed from numerical roots (single roots, and
    conjugate or real pairs) and kept only if they divide exactly.  Whatever
    remains is returned as one factor labelled heuristic.
    """
    used = p.used_vars()
    if len(used) != 1:
        raise ValueError("expected a univariate polynomial")
    var = used[0]
    p = p.with_vars((var,))
    out: list[Factor] = []
    for mult, sq in enumerate(squarefree_decomposition(p, var), start=1):
        rest = sq
        if rest.degree(var) <= 0:
            continue
        roots = list(simple_roots(rest))
        used_idx = set()
        x = MultiPoly.var(var)
        for i, z in enumerate(roots):
            if abs(z.imag) < tol:
                q = _rationalize(z.real)
                if abs(float(q) - z.real) < tol:
                    cand = (x - q).integer_content_normalized()
                    if divides(cand, rest):
                        out.append(Factor(cand, mult, True))
                        rest = exact_div(rest, cand)
                        used_idx.add(i)
        for i, z in enumerate(roots):
            if i in used_idx:
                continue
            for j in range(i + 1, len(roots)):
                if j in used_idx or i in used_idx:
                    continue
                w = roots[j]
                s, pr = z + w, z * w
                if abs(s.imag) > tol or abs(pr.imag) > tol:
                    continue
                a, b = _rationalize(s.real), _rationalize(pr.real)
                if abs(float(a) - s.real) > tol or abs(float(b) - pr.real) > tol:
                    continue
                cand = (x * x - a * x + b).integer_content_normalized()
                if divides(cand, rest):
                    out.append(Factor(cand, mult, True))
                    rest = exact_div(rest, cand)
                    used_idx.update((i, j))
        if rest.degree(var) > 0:
            out.append(Factor(rest.integer_content_normalized(), mult, False))
    return out


@dataclass(frozen=True)
class QuadraticNumber:
    """A root of an irreducible rational polynomial of degree <= 2."""

    minpoly: MultiPoly
    value: complex

    def __str__(self):
        c = self.minpoly.univariate_coeffs()
        if len(c) == 2:
            return str(-c[0] / c[1])
        a, b, cc = c[2], c[1], c[0]
        disc = b * b - 4 * a * cc
        center = -b / (2 * a)
        # value = center ± sqrt(disc)/(2a); write sqrt(disc/(4a^2)) with square-free-ish radicand
        rad = disc / (4 * a * a)
        sign = "+" if (self.value.real - float(center)) + (self.value.imag if rad < 0 else 0) >= 0 else "-"
        radstr = f"sqrt({rad})" if rad > 0 else f"sqrt({rad})"
        if center == 0:
            return f"{'' if sign == '+' else '-'}{radstr}"
        return f"{center} {sign} {radstr}"

    def to_json(self):
        return {"minpoly": str(self.minpoly), "value": [self.value.real, self.value.imag], "text": str(self)}


def recognize(value: complex, factors: list[Factor], tol: float = 1e-7) -> QuadraticNumber | None:
    """Match a numerical value to a root of an exact factor of degree <= 2."""
    for f in factors:
        if not f.exact or f.poly.total_degree() > 2:
            continue
        for z in simple_roots(f.poly):
            if abs(z - value) < tol * max(1.0, abs(value)):
                return QuadraticNumber(f.poly, complex(z))
    return None
