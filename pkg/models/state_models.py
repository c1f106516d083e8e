from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing import Dict, FrozenSet, List, Optional, Sequence


class State(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="State label, unique within a state space")
    coords: Optional[List[float]] = Field(None, description="Coordinates in R^d, needed only for convexity tests")

    @field_validator("coords")
    @classmethod
    def _coords_not_empty(cls, v):
        if v is not None and len(v) == 0:
            raise ValueError("coords must have dimension d >= 1")
        return v


class StateSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    states: List[State] = Field(..., description="States with unique ids")

    @field_validator("states")
    @classmethod
    def _unique_and_same_dimension(cls, v):
        ids = [s.id for s in v]
        if len(set(ids)) != len(ids):
            raise ValueError("state ids must be unique")
        dims = {len(s.coords) for s in v if s.coords is not None}
        if len(dims) > 1:
            raise ValueError(f"coords must share one dimension, got {sorted(dims)}")
        return v

    @classmethod
    def from_coords(cls, coords: Dict[str, Sequence[float]]) -> "StateSpace":
        return cls(states=[State(id=s, coords=list(c)) for s, c in coords.items()])

    def ids(self) -> List[str]:
        return [s.id for s in self.states]

    def located(self) -> Dict[str, List[float]]:
        """States that carry coordinates."""
        return {s.id: s.coords for s in self.states if s.coords is not None}


class Menu(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., description="Menu identifier", examples=["abc"])
    members: FrozenSet[str] = Field(..., description="Accessible state ids")

    @field_validator("members")
    @classmethod
    def _nonempty(cls, v):
        if len(v) == 0:
            raise ValueError("a menu needs at least one member")
        return v

    def sorted_members(self) -> List[str]:
        return sorted(self.members)


class TemperatureGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: List[float] = Field(..., description="Strictly increasing positive temperatures")

    @field_validator("values")
    @classmethod
    def _valid_grid(cls, v):
        if len(v) < 3:
            raise ValueError("a temperature grid needs at least 3 points")
        if any(t <= 0 for t in v):
            raise ValueError("temperatures must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("temperatures must be strictly increasing")
        return v
