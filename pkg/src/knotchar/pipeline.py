"""Per-knot computation chain with caching: presentation -> curve -> triple -> A0."""

from __future__ import annotations

from functools import cached_property

from .boundary import a_polynomial, base_point, restriction_map
from .charvar import PlaneCurve, defining_polynomial, nonabelian_components
from .ideal import norm_data
from .presentation import KnotPresentation, load_preset


class Knot:
    """Lazily computed invariants of one preset; ``component`` picks a nonabelian factor."""

    def __init__(self, pres: KnotPresentation | str, seed: int = 0, component: int = 0):
        self.pres = load_preset(pres) if isinstance(pres, str) else pres
        self.seed = seed
        self.component_index = component

    @property
    def name(self) -> str:
        return self.pres.name

    @cached_property
    def curve(self) -> PlaneCurve:
        return defining_polynomial(self.pres, seed=self.seed)

    @cached_property
    def components(self) -> list[PlaneCurve]:
        return nonabelian_components(self.curve)

    @cached_property
    def component(self) -> PlaneCurve:
        comps = self.components
        if not comps:
            raise ValueError(f"{self.name}: no nonabelian component")
        if not 0 <= self.component_index < len(comps):
            raise ValueError(f"{self.name}: component {self.component_index} out of range (have {len(comps)})")
        return comps[self.component_index]

    @cached_property
    def triple(self):
        return restriction_map(self.component, self.pres)

    @cached_property
    def apoly_details(self):
        return a_polynomial(self.component, self.triple, seed=self.seed, details=True)

    @property
    def apoly(self) -> PlaneCurve:
        return self.apoly_details.curve

    @cached_property
    def norm(self):
        return norm_data(self.triple)

    @cached_property
    def eigencurve(self):
        from .regulator import EigenvalueCurve

        return EigenvalueCurve(self.apoly.poly)

    @cached_property
    def base(self) -> tuple[complex, complex]:
        return base_point(self.apoly.poly)
