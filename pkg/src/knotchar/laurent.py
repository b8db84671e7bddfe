"""Truncated Laurent series with complex coefficients.

A series stores the exponent of its first coefficient (``val``), the
coefficients themselves, and the absolute precision ``prec``: every exponent
below ``prec`` is known, nothing at or above it is.  Leading coefficients below
``ZERO_TOL`` times the series' magnitude scale are treated as exact zeros.
"""

from __future__ import annotations

import numpy as np

ZERO_TOL = 1e-9


class PrecisionError(ArithmeticError):
    """Cancellation consumed every known coefficient."""


class Laurent:
    __slots__ = ("val", "c", "prec", "scale")

    def __init__(self, coeffs, val: int = 0, prec: int | None = None, scale: float | None = None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if prec is None:
            prec = val + c.size
        c = c[: max(prec - val, 0)]
        self.scale = float(scale) if scale is not None else float(np.max(np.abs(c), initial=0.0))
        self.val, self.c, self.prec = val, c, prec
        self._normalize()

    def _normalize(self):
        thresh = ZERO_TOL * self.scale
        k = 0
        while k < self.c.size and abs(self.c[k]) <= thresh:
            k += 1
        self.val += k
        self.c = self.c[k:]
        if self.c.size == 0:
            self.val = self.prec

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, a: complex, prec: int) -> "Laurent":
        return cls([a], 0, prec, scale=abs(a) or 1.0)

    @classmethod
    def monomial(cls, a: complex, k: int, prec: int) -> "Laurent":
        return cls([a], k, prec, scale=abs(a) or 1.0)

    # -- queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        """True when every known coefficient vanishes (zero to the precision)."""
        return self.c.size == 0

    def valuation(self) -> int:
        if self.is_zero():
            raise PrecisionError(f"series vanishes to order {self.prec}; increase the truncation order")
        return self.val

    def leading(self) -> complex:
        if self.is_zero():
            raise PrecisionError(f"series vanishes to order {self.prec}; increase the truncation order")
        return complex(self.c[0])

    def coeff(self, k: int) -> complex:
        if k >= self.prec:
            raise PrecisionError(f"coefficient {k} beyond precision {self.prec}")
        i = k - self.val
        return complex(self.c[i]) if 0 <= i < self.c.size else 0j

    def __repr__(self):
        head = ", ".join(f"{complex(a):.4g}*t^{self.val + i}" for i, a in enumerate(self.c[:4]))
        return f"Laurent({head} + O(t^{self.prec}))"

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        return Laurent.const(complex(other), self.prec if self.prec > 0 else 1) if other != 0 else \
            Laurent([], 0, max(self.prec, 0), scale=0.0)

    def __add__(self, other):
        o = other if isinstance(other, Laurent) else None
        if o is None:
            other = complex(other)
            if other == 0:
                return self
            # constant term has infinite precision; only self limits
            o = Laurent([other], 0, max(self.prec, 1), scale=abs(other))
        lo = min(self.val, o.val)
        hi = min(self.prec, o.prec)
        n = max(hi - lo, 0)
        out = np.zeros(n, complex)
        for s in (self, o):
            k = s.val - lo
            m = min(s.c.size, n - k) if k < n else 0
            if m > 0:
                out[k:k + m] += s.c[:m]
        return Laurent(out, lo, hi, scale=max(self.scale, o.scale))

    __radd__ = __add__

    def __neg__(self):
        return Laurent(-self.c, self.val, self.prec, self.scale)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Laurent) else -complex(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            a = complex(other)
            if a == 0:
                return Laurent([], self.prec, self.prec, 0.0)
            return Laurent(self.c * a, self.val, self.prec, self.scale * abs(a))
        if self.is_zero() or other.is_zero():
            prec = min(self.prec + (other.val if not other.is_zero() else other.prec),
                       other.prec + (self.val if not self.is_zero() else self.prec))
            return Laurent([], prec, prec, 0.0)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        n = prec - val
        out = np.convolve(self.c, other.c)[:n] if n > 0 else np.zeros(0, complex)
        if out.size < n:
            out = np.concatenate([out, np.zeros(n - out.size, complex)])
        return Laurent(out, val, prec, self.scale * other.scale)

    __rmul__ = __mul__

    def inverse(self) -> "Laurent":
        lead = self.leading()
        n = self.prec - self.val  # relative precision
        u = self.c[:n] / lead
        inv = np.zeros(n, complex)
        inv[0] = 1.0
        for k in range(1, n):
            m = min(k, u.size - 1)
            inv[k] = -np.dot(u[1:m + 1], inv[k - 1::-1][:m]) if m >= 1 else 0
        inv /= lead
        return Laurent(inv, -self.val, -self.val + n, scale=1.0 / abs(lead))

    def __truediv__(self, other):
        if isinstance(other, Laurent):
            return self * other.inverse()
        return self * (1.0 / complex(other))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result if result is not None else Laurent.const(1.0, max(self.prec - self.val, 1))

    def sqrt(self) -> "Laurent":
        """Principal square root; the valuation must be even."""
        v = self.valuation()
        if v % 2:
            raise ValueError("odd valuation: square root needs a ramified parameter")
        lead = complex(self.c[0])
        n = self.prec - self.val
        u = self.c[:n] / lead
        s = np.zeros(n, complex)
        s[0] = 1.0
        for k in range(1, n):
            acc = u[k] if k < u.size else 0j
            if k > 1:
                acc -= np.dot(s[1:k], s[k - 1:0:-1])
            s[k] = acc / 2
        r = np.sqrt(lead)
        return Laurent(s * r, v // 2, v // 2 + n, scale=abs(r))

    def ramify(self, k: int) -> "Laurent":
        """Substitute t -> t^k."""
        if k == 1:
            return self
        out = np.zeros(self.c.size * k - (k - 1) if self.c.size else 0, complex)
        out[::k] = self.c
        return Laurent(out, self.val * k, self.prec * k - (k - 1) if self.prec > self.val else self.prec * k,
                       self.scale)

    def evaluate(self, t: complex) -> complex:
        k = np.arange(self.c.size) + self.val
        return complex(np.sum(self.c * t ** k))


def eval_poly(poly, values: dict) -> Laurent:
    """Evaluate a ``MultiPoly`` at Laurent series (one per variable)."""
    prec = min(v.prec for v in values.values())
    total = None
    cache: dict = {}
    for e, c in poly.terms.items():
        term = None
        for name, n in zip(poly.vars, e):
            if not n:
                continue
            key = (name, n)
            if key not in cache:
                cache[key] = values[name] ** n
            term = cache[key] if term is None else term * cache[key]
        if term is None:
            term = Laurent.const(complex(c), prec)
        else:
            term = term * complex(c)
        total = term if total is None else total + term
    if total is None:
        return Laurent([], prec, prec, 0.0)
    return total
