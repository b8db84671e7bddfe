"""Words in the free group on a, b and their SL2 trace polynomials.

``trace_poly(w)`` returns the polynomial in x = tr a, y = tr b, z = tr ab with
tr w(A, B) = P(tr A, tr B, tr AB) for all A, B in SL2(C).  The reduction uses
only the identities

    tr(UV) = tr(VU),  tr(U) = tr(U^-1),
    tr(U V) = tr(U) tr(V) - tr(U V^-1),

applied in a fixed order: negative letters are removed first, then a repeated
letter is split off, and what remains is a power of ab.
"""

from __future__ import annotations

import threading
from typing import Iterable, Mapping

from .poly import MultiPoly

TRACE_VARS = ("x", "y", "z")
MAX_DEPTH = 10_000

_LETTERS = {"a": (0, 1), "b": (1, 1), "A": (0, -1), "B": (1, -1),
            "α": (0, 1), "β": (1, 1)}


class WordParseError(ValueError):
    pass


class GroupWord:
    """Freely reduced word stored as syllables (generator index, exponent)."""

    __slots__ = ("syllables",)

    def __init__(self, syllables: Iterable[tuple[int, int]] = ()):
        self.syllables = _reduce_syllables(syllables)

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        return reduce_word(text)

    @property
    def letters(self) -> tuple[int, ...]:
        """Expanded letters: +1/-1 for a^±1, +2/-2 for b^±1."""
        out = []
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            out.extend([s * (g + 1)] * abs(e))
        return tuple(out)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "GroupWord":
        return cls(((abs(c) - 1, 1 if c > 0 else -1) for c in letters))

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.syllables + other.syllables)

    def inverse(self) -> "GroupWord":
        return GroupWord((g, -e) for g, e in reversed(self.syllables))

    def __pow__(self, n: int) -> "GroupWord":
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.syllables * abs(n))

    def __eq__(self, other):
        return isinstance(other, GroupWord) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __str__(self):
        parts = []
        for g, e in self.syllables:
            ch = "ab"[g]
            if e < 0:
                ch = ch.upper()
            parts.append(ch if abs(e) == 1 else f"{ch}^{abs(e)}")
        return "".join(parts)

    def __repr__(self):
        return f"GroupWord({str(self)!r})"

    def exponent_sums(self) -> tuple[int, int]:
        s = [0, 0]
        for g, e in self.syllables:
            s[g] += e
        return s[0], s[1]


def _reduce_syllables(syllables) -> tuple:
    stack: list[list[int]] = []
    for g, e in syllables:
        g, e = int(g), int(e)
        if g not in (0, 1):
            raise WordParseError(f"generator index {g} not in {{0, 1}}")
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return tuple((g, e) for g, e in stack)


def reduce_word(w) -> GroupWord:
    """Freely reduce a word given as text (``"abBa"``, ``"a^-1 b^2"``,
    ``"β⁻¹α⁻¹βα"``) or as a sequence of (generator, exponent) pairs."""
    if isinstance(w, GroupWord):
        return w
    if not isinstance(w, str):
        return GroupWord(w)
    text = w.replace("⁻¹", "^-1").replace("^{-1}", "^-1")
    syl = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace() or ch in "*·":
            i += 1
            continue
        if ch not in _LETTERS:
            raise WordParseError(f"unknown letter {ch!r} in word {w!r}")
        g, e = _LETTERS[ch]
        i += 1
        if i < len(text) and text[i] == "^":
            j = i + 1
            if j < len(text) and text[j] in "+-":
                j += 1
            k = j
            while k < len(text) and text[k].isdigit():
                k += 1
            if k == j:
                raise WordParseError(f"bad exponent in word {w!r}")
            e *= int(text[i + 1:k])
            i = k
        syl.append((g, e))
    return GroupWord(syl)


# ---------------------------------------------------------------------------
# trace reduction


def _x(name):
    return MultiPoly.var(name, TRACE_VARS)


_ONE = MultiPoly.const(1, TRACE_VARS)
_TWO = MultiPoly.const(2, TRACE_VARS)


def chebyshev(t: MultiPoly, n: int) -> MultiPoly:
    """tr(M^n) as a polynomial in t = tr M (T_0 = 2, T_1 = t)."""
    n = abs(n)
    a, b = MultiPoly.const(2, t.vars), t
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, t * b - a
    return b


def _cyclic_reduce(w: tuple) -> tuple:
    w = list(w)
    # free reduction
    out: list[int] = []
    for c in w:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    i, j = 0, len(out)
    while j - i >= 2 and out[i] == -out[j - 1]:
        i += 1
        j -= 1
    return tuple(out[i:j])


def _canonical(w: tuple) -> tuple:
    """Lexicographically least rotation of w and of w^-1."""
    if not w:
        return w
    inv = tuple(-c for c in reversed(w))
    best = None
    for word in (w, inv):
        for k in range(len(word)):
            r = word[k:] + word[:k]
            if best is None or r < best:
                best = r
    return best


class TraceEngine:
    """Memoized trace reduction.  Thread-safe: reads are lock-free, writes locked."""

    def __init__(self, memoize: bool = True):
        self.memoize = memoize
        self._memo: dict[tuple, MultiPoly] = {}
        self._lock = threading.Lock()
        self._local = threading.local()

    def trace(self, w) -> MultiPoly:
        w = reduce_word(w)
        self._local.depth = 0
        self._local.active = set()
        return self._trace(_cyclic_reduce(w.letters))

    def _trace(self, w: tuple) -> MultiPoly:
        if not w:
            return _TWO
        key = _canonical(w)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        loc = self._local
        loc.depth += 1
        if loc.depth > MAX_DEPTH:
            raise RecursionError("trace reduction exceeded the depth cap")
        if key in loc.active:
            raise RecursionError(f"trace reduction revisited word {key}")
        loc.active.add(key)
        try:
            result = self._reduce(w)
        finally:
            loc.active.discard(key)
            loc.depth -= 1
        if self.memoize:
            with self._lock:
                self._memo.setdefault(key, result)
        return result

    def _reduce(self, w: tuple) -> MultiPoly:
        gens = {abs(c) for c in w}
        if len(gens) == 1:
            g = gens.pop()
            return chebyshev(_x("x" if g == 1 else "y"), len(w))
        neg = [k for k, c in enumerate(w) if c < 0]
        if 2 * len(neg) > len(w):
            w = tuple(-c for c in reversed(w))
            neg = [k for k, c in enumerate(w) if c < 0]
        if neg:
            # rotate so that a negative letter g^-1 is last: tr(V g^-1) = tr V tr g - tr(V g)
            k = neg[0]
            r = w[k + 1:] + w[:k + 1]
            v, g = r[:-1], -r[-1]
            tg = _x("x" if g == 1 else "y")
            return self._trace(_cyclic_reduce(v)) * tg - self._trace(_cyclic_reduce(v + (g,)))
        n = len(w)
        for k in range(n):
            if w[k] == w[(k + 1) % n]:
                # tr(g . g R) = tr g tr(g R) - tr(R)
                r = w[k:] + w[:k]
                g = r[0]
                tg = _x("x" if g == 1 else "y")
                return tg * self._trace(_cyclic_reduce(r[1:])) - self._trace(_cyclic_reduce(r[2:]))
        # alternating positive word: (ab)^k
        return chebyshev(_x("z"), n // 2)


_default_engine = TraceEngine()


def trace_poly(w) -> MultiPoly:
    """Trace polynomial of a word in variables (x, y, z)."""
    return _default_engine.trace(w)


def specialize(p: MultiPoly, bindings: Mapping[str, object], ground: bool = False) -> MultiPoly:
    """Substitute polynomials or numbers for variables; with ``ground=True``
    every variable must be bound."""
    if ground:
        missing = [v for v in p.used_vars() if v not in bindings]
        if missing:
            raise ValueError(f"unbound variables remain: {missing}")
    out = p.subs(dict(bindings))
    return out.trimmed() if ground else out


def at_equal_meridians(p: MultiPoly) -> MultiPoly:
    """The knot-group specialization y = x, as a polynomial in (x, z)."""
    return specialize(p, {"y": _x("x")}).with_vars(("x", "z"))


# ---------------------------------------------------------------------------
# peripheral traces


def peripheral_recursion(p: int, q: int, u, v, w, reduce=lambda f: f):
    """tr(mu^p lambda^q) for commuting mu, lambda with tr mu = u, tr lambda = v,
    tr mu lambda = w.  ``u, v, w`` are elements of any ring supporting + - *;
    ``reduce`` is applied after every product (e.g. reduction modulo a curve).
    """
    if (p, q) == (0, 0):
        raise ValueError("trivial peripheral class")
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    two = u * 0 + 2
    # T(0, j) and T(1, j) by the lambda recursion
    t0 = [two, v]
    t1 = [u, w]
    for _ in range(2, q + 1):
        t0.append(reduce(v * t0[-1]) - t0[-2])
        t1.append(reduce(v * t1[-1]) - t1[-2])
    a, b = t0[q], t1[q]  # T(0, q), T(1, q)
    if p >= 0:
        if p == 0:
            return a
        for _ in range(p - 1):
            a, b = b, reduce(u * b) - a
        return b
    # T(-1, q) = u T(0, q) - T(1, q), then downward
    c = reduce(u * a) - b
    b, a = a, c  # b = T(0,q), a = T(-1,q)
    for _ in range(-p - 1):
        b, a = a, reduce(u * a) - b
    return a


def peripheral_trace(p: int, q: int) -> MultiPoly:
    """tr(mu^p lambda^q) as a polynomial in (u, v, w)."""
    vars_ = ("u", "v", "w")
    u, v, w = (MultiPoly.var(s, vars_) for s in vars_)
    return peripheral_recursion(p, q, u, v, w)
