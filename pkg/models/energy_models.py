"""
Energy and noise models for the Boltzmann / softmax evaluators.
"""
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Callable, Dict, Iterable, List, Literal, Optional, Union

import numpy as np

from core.errors import DomainError, MissingEnergyError


class ParametricNoise(BaseModel):
    """Thermal noise κ(t) = k·t."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["parametric"] = "parametric"
    k: float = Field(1.0, gt=0, description="Positive scale of κ(t)=k·t (Boltzmann constant, default 1)")

    def kappa(self, t: float) -> float:
        return self.k * float(t)


class TabulatedNoise(BaseModel):
    """Noise map given on a table, log-log linear between nodes, never extrapolated."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["tabulated"] = "tabulated"
    temperatures: List[float] = Field(..., description="Strictly increasing positive temperatures")
    values: List[float] = Field(..., description="κ at each temperature, strictly positive and increasing")

    @model_validator(mode="after")
    def _increasing_bijection(self):
        t = np.asarray(self.temperatures, dtype=float)
        k = np.asarray(self.values, dtype=float)
        if t.shape != k.shape or t.size < 2:
            raise ValueError("a κ table needs at least two (t, κ) points of matching length")
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("κ table temperatures must be positive and strictly increasing")
        if np.any(k <= 0) or np.any(np.diff(k) <= 0):
            raise ValueError("κ table values must be positive and strictly increasing")
        return self

    @classmethod
    def from_function(cls, fn: Callable[[float], float], temperatures: Iterable[float]) -> "TabulatedNoise":
        temps = [float(t) for t in temperatures]
        return cls(temperatures=temps, values=[float(fn(t)) for t in temps])

    def kappa(self, t: float) -> float:
        t = float(t)
        nodes = self.temperatures
        idx = int(np.searchsorted(nodes, t))
        if idx < len(nodes) and nodes[idx] == t:
            return self.values[idx]
        if t < nodes[0] or t > nodes[-1]:
            raise DomainError(f"t={t} is outside the κ table [{nodes[0]}, {nodes[-1]}]; extrapolation is refused")
        return float(np.exp(np.interp(np.log(t), np.log(nodes), np.log(self.values))))


NoiseMap = Union[ParametricNoise, TabulatedNoise]


class EnergyModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    energies: Dict[str, float] = Field(..., description="Energy of each state")
    noise: NoiseMap = Field(default_factory=ParametricNoise, discriminator="kind")

    @field_validator("energies")
    @classmethod
    def _finite(cls, v):
        for state, e in v.items():
            if not np.isfinite(e):
                raise ValueError(f"energy of '{state}' must be finite")
        return v

    def energy(self, state: str) -> float:
        try:
            return self.energies[state]
        except KeyError:
            raise MissingEnergyError(f"no energy entry for state '{state}'")

    def kappa(self, t: float) -> float:
        if not t > 0:
            raise DomainError(f"temperature must be positive, got {t}")
        return self.noise.kappa(t)

    def shifted(self, q: float) -> "EnergyModel":
        return EnergyModel(energies={a: e + q for a, e in self.energies.items()}, noise=self.noise)


class PairLimit(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: str
    b: str
    p0: Optional[float] = Field(..., description="Freezing limit of p_t(a,b) as t→0, None when not estimable")


class StateLimit(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: str
    menu: List[str] = Field(..., description="Sorted members of the menu")
    mass: float


class FreezingProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    pairs: List[PairLimit] = Field(default_factory=list, description="Both orientations of every pair")
    masses: List[StateLimit] = Field(default_factory=list)

    @model_validator(mode="after")
    def _complementary(self):
        lookup = {(p.a, p.b): p.p0 for p in self.pairs}
        for (a, b), p0 in lookup.items():
            other = lookup.get((b, a))
            if a != b and p0 is not None and other is not None and abs(p0 + other - 1.0) > 1e-12:
                raise ValueError(f"p0({a},{b}) + p0({b},{a}) must equal 1")
        return self

    def p0(self, a: str, b: str) -> Optional[float]:
        for p in self.pairs:
            if p.a == a and p.b == b:
                return p.p0
        raise KeyError(f"no freezing limit for ({a}, {b})")

    def mass(self, state: str) -> float:
        for m in self.masses:
            if m.state == state:
                return m.mass
        raise KeyError(f"no limit mass for '{state}'")
