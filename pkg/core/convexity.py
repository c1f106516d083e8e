"""
Convexity of the energy seen through the odds.

For a Boltzmann family on a convex state space the energy is convex exactly
when mixing toward b and cooling by the same factor never lowers the odds:

    p_{αt}(αa + (1−α)b, b) ≥ p_t(a, b)

Two menu forms follow: shrinking a menu toward b at temperature s is never
better for b than the full menu at ηs, and in particular for the least
likely state of A.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from pydantic import ValidationError
from scipy.special import expit, logsumexp
from scipy.stats import norm

from core.errors import CellLookupError, InapplicableError, PreconditionError
from core.rsf import EmpiricalRSF, frequency
from core.workers import parallel_map
from models.report_models import ConvexityReport, InequalityCheck
from models.state_models import StateSpace

logger = logging.getLogger(__name__)

RTOL = 1e-9
ATOL = 1e-12

Point = np.ndarray


def _point(x) -> Point:
    return np.atleast_1d(np.asarray(x, dtype=float))


def _unique(points: Sequence[Point]) -> List[Point]:
    seen, out = set(), []
    for p in points:
        key = tuple(p.tolist())
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


class ExactMixtureFamily:
    """Boltzmann family over R^d with energy ``energy(x)`` and κ(t) = k·t."""

    empirical = False

    def __init__(self, energy: Callable[[Point], float], k: float = 1.0,
                 bounds: Optional[Tuple[Sequence[float], Sequence[float]]] = None):
        if not k > 0:
            raise PreconditionError("k must be positive")
        self.energy = energy
        self.k = float(k)
        self.bounds = None
        if bounds is not None:
            lo, hi = _point(bounds[0]), _point(bounds[1])
            if lo.shape != hi.shape or np.any(hi <= lo):
                raise PreconditionError("bounds must be (low, high) with low < high in every coordinate")
            self.bounds = (lo, hi)

    @property
    def dim(self) -> int:
        return len(self.bounds[0]) if self.bounds else 1

    def E(self, x: Point) -> float:
        return float(self.energy(_point(x)))

    def logit(self, t: float, x: Point, y: Point) -> float:
        """ln r_t(x, y) = −(E(x) − E(y)) / kt."""
        return -(self.E(x) - self.E(y)) / (self.k * t)

    def log_prob(self, t: float, x: Point, menu: Sequence[Point]) -> Tuple[float, float]:
        points = _unique([_point(p) for p in menu])
        logits = np.array([-self.E(p) / (self.k * t) for p in points])
        i = next(i for i, p in enumerate(points) if np.array_equal(p, _point(x)))
        return float(logits[i] - logsumexp(logits)), 0.0


class EmpiricalMixtureFamily:
    """Observed family whose states carry coordinates; mixtures must be observed states."""

    empirical = True

    def __init__(self, rsf: EmpiricalRSF, space: Union[StateSpace, Dict[str, Sequence[float]]], atol: float = 1e-9):
        if not isinstance(space, StateSpace):
            try:
                space = StateSpace.from_coords(space)
            except ValidationError as e:
                raise PreconditionError(f"invalid state coordinates: {e.errors()[0]['msg']}")
        unknown = sorted(set(space.ids()) - set(rsf.states))
        if unknown:
            raise PreconditionError(f"states {unknown} are not observed")
        self.rsf = rsf
        self.space = space
        self.coords = {s: _point(c) for s, c in space.located().items()}
        self.atol = atol

    def resolve(self, x: Point) -> str:
        x = _point(x)
        for state, c in self.coords.items():
            if c.shape == x.shape and np.allclose(c, x, rtol=0.0, atol=self.atol):
                return state
        raise InapplicableError(f"no observed state at coordinates {x.tolist()}")

    def logit(self, t: float, x: Point, y: Point) -> Tuple[float, float]:
        a, b = self.resolve(x), self.resolve(y)
        if a == b:
            return 0.0, 0.0
        try:
            sample = self.rsf.odds_sample(t, a, b)
        except CellLookupError as e:
            raise InapplicableError(e.detail)
        if sample is None:
            raise InapplicableError(f"odds ({a},{b}) not observed at t={t}")
        return sample.log_r, sample.stderr

    def log_prob(self, t: float, x: Point, menu: Sequence[Point]) -> Tuple[float, float]:
        ids = sorted({self.resolve(p) for p in menu})
        found = self.rsf.find_menu(ids)
        if found is None:
            raise InapplicableError(f"menu {ids} was not observed")
        try:
            f, se = frequency(self.rsf, t, self.resolve(x), found)
        except CellLookupError as e:
            raise InapplicableError(e.detail)
        if f <= 0:
            return -np.inf, np.inf
        return float(np.log(f)), se / f


def _holds_exact(lhs: float, rhs: float, direction: int) -> bool:
    """direction=+1 checks lhs ≥ rhs, −1 checks lhs ≤ rhs, with relative tolerance."""
    slack = RTOL * max(abs(lhs), abs(rhs)) + ATOL
    return direction * (lhs - rhs) >= -slack


def _holds_noisy(lhs: float, rhs: float, se: float, direction: int, alpha: float) -> bool:
    return direction * (lhs - rhs) >= -norm.isf(alpha) * se


def _inapplicable(e: InapplicableError) -> InequalityCheck:
    return InequalityCheck(applicable=False, holds=None, note=e.detail)


def check_mixture_pair(family, t: float, a, b, alpha: float, level: float = 0.01) -> InequalityCheck:
    """p_{αt}(αa + (1−α)b, b) ≥ p_t(a, b).

    Exact families compare the two log-odds, which orders the binary
    probabilities without saturating. Empirical families fail only when the
    left side is significantly smaller at one-sided ``level``.
    """
    if not 0.0 < alpha < 1.0:
        raise PreconditionError("alpha must lie strictly inside (0, 1)")
    if not t > 0:
        raise PreconditionError("t must be positive")
    a, b = _point(a), _point(b)
    mix = alpha * a + (1.0 - alpha) * b
    try:
        if family.empirical:
            (lhs, se_l), (rhs, se_r) = family.logit(alpha * t, mix, b), family.logit(t, a, b)
            holds = _holds_noisy(lhs, rhs, float(np.hypot(se_l, se_r)), +1, level)
        else:
            lhs, rhs = family.logit(alpha * t, mix, b), family.logit(t, a, b)
            holds = _holds_exact(lhs, rhs, +1)
    except InapplicableError as e:
        return _inapplicable(e)
    witness = None if holds else {"a": a.tolist(), "b": b.tolist(), "alpha": alpha, "t": t}
    return InequalityCheck(holds=holds, lhs=float(expit(lhs)), rhs=float(expit(rhs)), witness=witness)


def _shrink(menu: Sequence[Point], b: Point, eta: float) -> List[Point]:
    # b is a fixed point of the shrink; keep it bit-exact so it can be found in the new menu
    return [b if np.array_equal(p, b) else p / eta + (1.0 - 1.0 / eta) * b for p in menu]


def check_menu_shrink(family, s: float, A: Sequence, b, eta: float, level: float = 0.01) -> InequalityCheck:
    """p_s(b | A/η + (1−1/η)b) ≤ p_{ηs}(b | A)."""
    if not eta > 1.0:
        raise PreconditionError("eta must be greater than 1")
    menu = [_point(p) for p in A]
    b = _point(b)
    if not any(np.array_equal(p, b) for p in menu):
        raise PreconditionError("b must be a member of A")
    try:
        lhs, se_l = family.log_prob(s, b, _shrink(menu, b, eta))
        rhs, se_r = family.log_prob(eta * s, b, menu)
    except InapplicableError as e:
        return _inapplicable(e)
    if family.empirical:
        holds = _holds_noisy(lhs, rhs, float(np.hypot(se_l, se_r)), -1, level)
    else:
        holds = _holds_exact(lhs, rhs, -1)
    witness = None if holds else {"A": [p.tolist() for p in menu], "b": b.tolist(), "eta": eta, "s": s}
    return InequalityCheck(holds=holds, lhs=float(np.exp(lhs)), rhs=float(np.exp(rhs)), witness=witness)


def check_argmin_shrink(family, s: float, A: Sequence, eta: float, level: float = 0.01) -> InequalityCheck:
    """The menu-shrink inequality for every least likely state of A at ηs."""
    if not eta > 1.0:
        raise PreconditionError("eta must be greater than 1")
    menu = _unique([_point(p) for p in A])
    if len(menu) == 1:
        return InequalityCheck(holds=True, lhs=1.0, rhs=1.0, note="singleton menu")
    try:
        logp = np.array([family.log_prob(eta * s, p, menu)[0] for p in menu])
    except InapplicableError as e:
        return _inapplicable(e)
    low = logp.min()
    minimisers = [p for p, lp in zip(menu, logp) if lp == low or np.isclose(lp, low, rtol=1e-12, atol=0.0)]
    first = None
    for b in minimisers:
        check = check_menu_shrink(family, s, menu, b, eta, level)
        if not check.applicable or not check.holds:
            return check
        first = first or check
    return first


def _random_menu(rng: np.random.Generator, lo: Point, hi: Point, size: int) -> List[Point]:
    return [rng.uniform(lo, hi) for _ in range(size)]


def convexity_verdict(family: ExactMixtureFamily, trials: int = 1000, menu_trials: int = 100,
                      seed: int = 0, t: float = 1.0, second_t: float = 2.0) -> ConvexityReport:
    """Test convexity through the mixture-pair inequality on random triples.

    The same triples are judged by the midpoint oracle
    E(αa + (1−α)b) ≤ αE(a) + (1−α)E(b). On exact families the inequality
    does not depend on t; ``second_t`` spot-checks that.
    """
    if family.empirical:
        raise PreconditionError("convexity_verdict needs an exact family")
    if family.bounds is None:
        raise PreconditionError("convexity_verdict needs sampling bounds")
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    lo, hi = family.bounds
    triples = [(rng.uniform(lo, hi), rng.uniform(lo, hi), float(rng.uniform(0.05, 0.95))) for _ in range(trials)]
    menus = [(_random_menu(rng, lo, hi, 3), float(rng.uniform(1.25, 3.0))) for _ in range(menu_trials)]

    def judge(item):
        a, b, alpha = item
        first = check_mixture_pair(family, t, a, b, alpha)
        second = check_mixture_pair(family, second_t, a, b, alpha)
        mix = family.E(alpha * a + (1.0 - alpha) * b)
        chord = alpha * family.E(a) + (1.0 - alpha) * family.E(b)
        oracle = _holds_exact(chord, mix, +1)
        return first, second.holds, oracle

    results = parallel_map(judge, triples)
    convex = all(r[0].holds for r in results)
    oracle_convex = all(r[2] for r in results)
    witness = next((r[0].witness for r in results if not r[0].holds), None)

    def judge_menu(item):
        menu, eta = item
        every_b = all(check_menu_shrink(family, t, menu, b, eta).holds for b in menu)
        return every_b, check_argmin_shrink(family, t, menu, eta).holds

    menu_results = parallel_map(judge_menu, menus)
    report = ConvexityReport(
        convex=convex,
        oracle_convex=oracle_convex,
        agrees_with_oracle=convex == oracle_convex,
        pair_checks=len(results),
        menu_checks=len(menu_results),
        menu_shrink_failures=sum(not every_b for every_b, _ in menu_results),
        argmin_shrink_failures=sum(not argmin for _, argmin in menu_results),
        second_temperature_consistent=all(r[0].holds == r[1] for r in results),
        witness=witness,
    )
    status = "✅ convex" if convex else "❌ not convex"
    logger.info(f"{status} over {trials} triples (oracle agrees: {report.agrees_with_oracle})")
    return report
