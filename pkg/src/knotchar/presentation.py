"""Knot presentations and preset files.

Preset files are ``key = value`` text; ``#`` starts a comment.  Required keys:
name, relator, meridian, longitude, alexander.  Optional: vol_constant,
cs_constant (floats).
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .poly import MultiPoly, parse_poly
from .traces import GroupWord, reduce_word


class PresetError(ValueError):
    pass


@dataclass(frozen=True)
class KnotPresentation:
    name: str
    relator: GroupWord
    meridian: GroupWord
    longitude: GroupWord | None
    alexander: MultiPoly
    vol_constant: float | None = None
    cs_constant: float | None = None

    def __post_init__(self):
        if self.alexander.used_vars() not in ((), ("t",)):
            raise PresetError("alexander polynomial must be univariate in t")
        if self.alexander.with_vars(("t",)).evaluate_exact({"t": 1}) == 0:
            raise PresetError("alexander polynomial vanishes at t = 1")

    @property
    def meridian_longitude(self) -> GroupWord:
        if self.longitude is None:
            raise PresetError("presentation has no longitude")
        return self.meridian * self.longitude

    @classmethod
    def from_strings(cls, name, relator, meridian, longitude, alexander,
                     vol_constant=None, cs_constant=None) -> "KnotPresentation":
        return cls(
            name=name,
            relator=reduce_word(relator),
            meridian=reduce_word(meridian),
            longitude=reduce_word(longitude) if longitude is not None else None,
            alexander=parse_poly(alexander, ("t",)),
            vol_constant=None if vol_constant is None else float(vol_constant),
            cs_constant=None if cs_constant is None else float(cs_constant),
        )


def parse_preset(text: str) -> KnotPresentation:
    data = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PresetError(f"line {n}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        data[k] = v
    missing = [k for k in ("name", "relator", "meridian", "longitude", "alexander") if k not in data]
    if missing:
        raise PresetError(f"preset is missing keys: {', '.join(missing)}")
    try:
        return KnotPresentation.from_strings(
            data["name"], data["relator"], data["meridian"], data["longitude"], data["alexander"],
            data.get("vol_constant"), data.get("cs_constant"))
    except ValueError as exc:
        raise PresetError(str(exc)) from exc


def builtin_presets() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("knotchar.presets").iterdir()
                  if p.name.endswith(".knot"))


def load_preset(spec: str | Path) -> KnotPresentation:
    """Load a preset by built-in name (``fig8``) or by file path."""
    path = Path(spec)
    if path.exists():
        return parse_preset(path.read_text(encoding="utf-8"))
    name = str(spec)
    res = resources.files("knotchar.presets") / f"{name}.knot"
    if not res.is_file():
        raise PresetError(f"no preset named {name!r} (built-in: {', '.join(builtin_presets())})")
    return parse_preset(res.read_text(encoding="utf-8"))


def _zeta_even(k: int) -> float:
    """zeta(2k) for k >= 1 by direct summation plus an integral tail."""
    import math

    s = 2 * k
    n = 60
    return (math.fsum(j ** -s for j in range(1, n)) + n ** (1 - s) / (s - 1) + 0.5 * n ** -s
            + s * n ** (-s - 1) / 12 - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720)


def clausen(theta: float) -> float:
    """Cl_2(theta) = sum sin(n theta)/n^2, via its zeta-value expansion."""
    import math

    theta = math.remainder(theta, 2 * math.pi)
    if theta == 0:
        return 0.0
    acc = 0.0
    r = (theta / (2 * math.pi)) ** 2
    term = 1.0
    for k in range(1, 80):
        term *= r
        acc += _zeta_even(k) / (k * (2 * k + 1)) * term
    return theta - theta * math.log(abs(theta)) + theta * acc


def lobachevsky(theta: float) -> float:
    """Lobachevsky function Lambda(theta) = 1/2 sum sin(2 n theta)/n^2."""
    return 0.5 * clausen(2 * theta)
