from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, List, Literal, Optional

from models.energy_models import NoiseMap
from models.state_models import Menu, TemperatureGrid

FamilyKind = Literal[
    "boltzmann",
    "softmax",
    "uniform",
    "probit-binary",
    "crossing-logodds",
    "scaled-conditioning-breaker",
    "flat-binary",
]

# kinds whose probabilities are defined only on menus of size ≤ 2
BINARY_ONLY = {"probit-binary", "crossing-logodds"}
NEEDS_ENERGIES = {"boltzmann", "softmax", "probit-binary", "scaled-conditioning-breaker", "flat-binary"}


class FamilySpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: FamilyKind = Field(..., description="Family to generate")
    grid: TemperatureGrid
    menus: List[Menu] = Field(default_factory=list, description="Menus observed at every temperature")
    n: int = Field(0, ge=0, description="Draws per (t, menu) cell; 0 gives exact frequencies")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Seed of the per-cell generators")
    energies: Optional[Dict[str, float]] = Field(None, description="Energy per state")
    k: float = Field(1.0, gt=0, description="Scale of κ(t)=k·t for parametric kinds")
    noise: Optional[NoiseMap] = Field(None, description="κ for the softmax kind")
    c0: float = Field(1.0, gt=0, description="Crossing family: ln r_t(a,b) = c0 − c1·t")
    c1: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def _parameters_present(self):
        if self.kind in NEEDS_ENERGIES:
            if self.energies is None:
                raise ValueError(f"kind '{self.kind}' needs energies")
            missing = sorted({s for m in self.menus for s in m.members} - set(self.energies))
            if missing:
                raise ValueError(f"no energy for states {missing}")
        if self.kind == "softmax" and self.noise is None:
            raise ValueError("kind 'softmax' needs a noise map")
        ids = [m.id for m in self.menus]
        if len(set(ids)) != len(ids):
            raise ValueError("menu ids must be unique")
        return self

    @property
    def exact(self) -> bool:
        return self.n == 0


class QuadraticEnergySpec(BaseModel):
    """E(x) = xᵀQx + cᵀx + e₀ on a box, for the convexity command."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["quadratic"] = "quadratic"
    matrix: List[List[float]] = Field(..., description="Q, square d×d")
    linear: Optional[List[float]] = Field(None, description="c, length d")
    constant: float = 0.0
    k: float = Field(1.0, gt=0)
    low: List[float] = Field(..., description="Lower corner of the sampling box")
    high: List[float] = Field(..., description="Upper corner of the sampling box")
    trials: int = Field(1000, ge=1, description="Random (a, b, α) triples")
    menu_trials: int = Field(100, ge=0, description="Random menu instances")
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _shapes(self):
        d = len(self.matrix)
        if d == 0 or any(len(row) != d for row in self.matrix):
            raise ValueError("matrix must be square and nonempty")
        if self.linear is not None and len(self.linear) != d:
            raise ValueError("linear term must have length d")
        if len(self.low) != d or len(self.high) != d:
            raise ValueError("box corners must have length d")
        if any(h <= l for l, h in zip(self.low, self.high)):
            raise ValueError("low must be below high in every coordinate")
        return self
