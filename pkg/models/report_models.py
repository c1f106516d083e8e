from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Any, Dict, List, Literal, Optional

from core import config
from models.energy_models import FreezingProfile

Verdict = Literal["pass", "fail", "inconclusive"]
Relation = Literal["succ", "sim", "prec", "unknown"]
CurveClass = Literal["increasing-to-inf", "constant-1", "decreasing-to-0", "unclassified"]

AXIOM_NAMES = {
    "A1": "Positivity",
    "A2": "Conditioning",
    "A3": "Continuity",
    "A4": "Consistency",
    "A5": "Zero Uniformity",
    "A6": "Boundedness",
    "A7": "Weak Boundedness",
    "A8": "Monotonicity",
    "A9": "Concatenation",
}


class ToleranceConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(config.DEFAULT_ALPHA, gt=0, lt=1, description="Significance level per axiom")
    sum_tol: float = Field(1e-9, gt=0, description="Normalization tolerance")
    min_samples: int = Field(config.DEFAULT_MIN_SAMPLES, ge=2, description="Minimum grid points per pair")
    smoothing: Optional[Literal["jeffreys"]] = Field(None, description="Opt-in Jeffreys smoothing of zero counts")


class AxiomVerdict(BaseModel):
    axiom: str = Field(..., description="Axiom tag, A1 … A9")
    name: str
    verdict: Verdict
    statistic: Optional[float] = Field(None, description="Worst test statistic observed")
    threshold: Optional[float] = Field(None, description="Critical value the statistic was compared with")
    tests: int = Field(0, description="Number of individual tests (Bonferroni family size)")
    witness: Optional[Dict[str, Any]] = Field(None, description="Offending tuple when the verdict is fail")
    note: Optional[str] = None

    @model_validator(mode="after")
    def _fail_needs_witness(self):
        if self.verdict == "fail" and not self.witness:
            raise ValueError(f"{self.axiom} fail verdict must carry a witness")
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


class FreezingEstimate(BaseModel):
    a: str
    b: str
    p0: Optional[float] = Field(..., description="Estimated p0(a,b); None when inconclusive")
    curve_class: CurveClass
    verdict: Verdict = Field("pass", description="inconclusive when data was insufficient")
    tail_log_odds: Optional[float] = None
    tail_stderr: Optional[float] = None


class PairRelation(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: str
    b: str
    relation: Relation


class RevealedOrder(BaseModel):
    relations: List[PairRelation] = Field(default_factory=list)

    @model_validator(mode="after")
    def _trichotomy(self):
        flip = {"succ": "prec", "prec": "succ", "sim": "sim", "unknown": "unknown"}
        lookup = {(r.a, r.b): r.relation for r in self.relations}
        for (a, b), rel in lookup.items():
            other = lookup.get((b, a))
            if other is not None and other != flip[rel]:
                raise ValueError(f"revealed order is not antisymmetric on ({a}, {b})")
        return self

    def relation(self, a: str, b: str) -> Relation:
        for r in self.relations:
            if r.a == a and r.b == b:
                return r.relation
        return "unknown"


class AxiomReport(BaseModel):
    verdicts: Dict[str, AxiomVerdict] = Field(..., description="Verdict per axiom tag")
    boltzmannian: bool = Field(..., description="A1–A6 all pass at the gate level")
    softmax_representable: bool = Field(..., description="A1–A5 and A7 all pass at the gate level")
    gate_alpha: float = Field(..., description="Per-axiom level of the two flags: alpha split over six axioms")
    gate: Dict[str, Verdict] = Field(default_factory=dict, description="A1–A7 verdicts at gate_alpha")
    a4_and_a7: bool
    a8_and_a9: bool
    freezing: FreezingProfile
    freezing_estimates: List[FreezingEstimate] = Field(default_factory=list)
    revealed_order: RevealedOrder
    generator: Optional[Dict[str, Any]] = Field(None, description="Generator A7 was tested with")

    @property
    def alternative_axioms_agree(self) -> bool:
        return self.a4_and_a7 == self.a8_and_a9


class Pivot(BaseModel):
    model_config = ConfigDict(frozen=True)

    temperature: float = Field(..., gt=0, description="v̄, a grid temperature")
    c: str = Field(..., description="c̄, the preferred state")
    d: str = Field(..., description="d̄")
    log_odds: Optional[float] = Field(None, description="ln r_v̄(c̄,d̄), positive")
    z: Optional[float] = Field(None, description="|ln r| / stderr at the pivot")

    @field_validator("log_odds")
    @classmethod
    def _strict(cls, v):
        if v is not None and not v > 0:
            raise ValueError("pivot needs ln r_v̄(c̄,d̄) > 0")
        return v


class RecoveredEnergy(BaseModel):
    energies: Dict[str, float] = Field(default_factory=dict, description="Ẽ(a) = ln r_v̄(c̄,a)")
    unrecoverable: List[str] = Field(default_factory=list)
    conditioning_dependent: List[str] = Field(default_factory=list, description="States recovered through a larger menu")


class RecoveredKappa(BaseModel):
    temperatures: List[float] = Field(default_factory=list)
    values: List[float] = Field(default_factory=list, description="κ̃(t) = ln r_v̄(c̄,d̄) / ln r_t(c̄,d̄)")
    projected: List[float] = Field(default_factory=list, description="Isotonic projection of the values")
    gaps: List[float] = Field(default_factory=list, description="Grid temperatures where κ̃ is undefined")
    monotone: bool = True
    conditioning_dependent: bool = False
    method: Literal["pivot", "pooled"] = Field("pivot", description="Pivot pair alone, or averaged over strict pairs")
    pairs: int = Field(1, ge=1, description="Strict pairs the ratio was averaged over")


class RecoveryResult(BaseModel):
    uniform: bool = False
    kappa_undetermined: bool = False
    pivot: Optional[Pivot] = None
    energy: RecoveredEnergy = Field(default_factory=RecoveredEnergy)
    kappa: RecoveredKappa = Field(default_factory=RecoveredKappa)
    generator: Optional[Dict[str, Any]] = None
    notes: List[str] = Field(default_factory=list)


class InequalityCheck(BaseModel):
    applicable: bool = True
    holds: Optional[bool] = Field(None, description="None when not applicable")
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    witness: Optional[Dict[str, Any]] = None
    note: Optional[str] = None


class ConvexityReport(BaseModel):
    convex: bool = Field(..., description="All mixture-pair inequalities hold")
    oracle_convex: bool = Field(..., description="Direct midpoint inequality on the same triples")
    agrees_with_oracle: bool
    pair_checks: int
    menu_checks: int
    menu_shrink_failures: int = 0
    argmin_shrink_failures: int = 0
    second_temperature_consistent: bool = True
    witness: Optional[Dict[str, Any]] = None


class ReportConfig(BaseModel):
    alpha: float
    sum_tol: float
    min_samples: int
    smoothing: Optional[str] = None
    exact_input: bool = False
    seed: Optional[int] = None
    rng: str = config.RNG_IDENTITY


class ReportDocument(BaseModel):
    format_version: str = config.REPORT_FORMAT_VERSION
    command: str
    config: ReportConfig
    overall: Optional[bool] = Field(None, description="Boltzmannian flag for check runs")
    axioms: Optional[AxiomReport] = None
    recovery: Optional[RecoveryResult] = None
    convexity: Optional[ConvexityReport] = None
