"""
Closed-form recovery of the energy Ẽ and noise map κ̃ from observed odds,
identification of the compatible concatenation, and affine equivalence of
two (E, κ) representations.

With a pivot (v̄, c̄, d̄) where c̄ is strictly preferred to d̄ at v̄:

    Ẽ(a) = ln r_v̄(c̄, a)            κ̃(t) = ln r_v̄(c̄, d̄) / ln r_t(c̄, d̄)

Any softmax representation (E, κ) then satisfies Ẽ = mE + q and κ̃ = mκ
with m = 1/κ(v̄). Sampled families average the κ̃ ratio over every strict
pair instead of reading it off the pivot pair alone.
"""
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union
import logging

import numpy as np
from sklearn.isotonic import IsotonicRegression

from core.concat import TableGenerator
from core.errors import CellLookupError, DomainError, NotBijectiveError, PreconditionError, UniformFamilySignal
from core.rsf import EmpiricalRSF, OddsSample
from core.stats import bonferroni_z
from models.energy_models import NoiseMap, ParametricNoise, TabulatedNoise
from models.report_models import (
    Pivot,
    RecoveredEnergy,
    RecoveredKappa,
    RecoveryResult,
    ToleranceConfig,
)

logger = logging.getLogger(__name__)

KappaLike = Union[NoiseMap, RecoveredKappa, Mapping[float, float]]


def _co_occurring_pairs(rsf: EmpiricalRSF) -> List[Tuple[str, str]]:
    pairs = set()
    for menu in rsf.menus:
        pairs.update(combinations(menu.sorted_members(), 2))
    return sorted(pairs)


def select_pivot(rsf: EmpiricalRSF, cfg: Optional[ToleranceConfig] = None) -> Pivot:
    """Pick (v̄, c̄, d̄) maximising |ln r| / stderr among significant samples.

    Orientation makes ln r_v̄(c̄, d̄) > 0. Equal scores are broken by the
    smallest (c̄, d̄, v̄). Raises UniformFamilySignal when no sample is
    significant.
    """
    cfg = cfg or ToleranceConfig()
    candidates = []
    for a, b in _co_occurring_pairs(rsf):
        for token, t in zip(rsf.tokens, rsf.temperatures):
            sample = rsf.odds_sample(token, a, b, via_menus=True)
            if sample is not None:
                candidates.append((a, b, float(t), sample))
    crit = bonferroni_z(cfg.alpha, len(candidates))
    best = None
    for a, b, t, sample in candidates:
        z = abs(sample.log_r) / sample.stderr
        if z <= crit:
            continue
        c, d = (a, b) if sample.log_r > 0 else (b, a)
        key = (-z, c, d, t)
        if best is None or key < best[0]:
            best = (key, Pivot(temperature=t, c=c, d=d, log_odds=abs(sample.log_r), z=z))
    if best is None:
        raise UniformFamilySignal("no significantly strict pair: E is constant and κ is undetermined")
    pivot = best[1]
    logger.info(f"🔍 Pivot v̄={pivot.temperature} c̄={pivot.c} d̄={pivot.d} (z={pivot.z:.3g})")
    return pivot


def _pivot_log_odds(rsf: EmpiricalRSF, pivot: Pivot) -> float:
    if pivot.log_odds is not None:
        return pivot.log_odds
    sample = rsf.odds_sample(pivot.temperature, pivot.c, pivot.d, via_menus=True)
    if sample is None or not sample.log_r > 0:
        raise PreconditionError(
            f"pivot needs ln r_{pivot.temperature}({pivot.c},{pivot.d}) > 0 in the data")
    return sample.log_r


def recover_energy(rsf: EmpiricalRSF, pivot: Pivot) -> RecoveredEnergy:
    """Ẽ(a) = ln r_v̄(c̄, a); states without usable odds against c̄ are listed as unrecoverable."""
    energies: Dict[str, float] = {}
    unrecoverable: List[str] = []
    dependent: List[str] = []
    for state in rsf.states:
        if state == pivot.c:
            energies[state] = 0.0
            continue
        sample = rsf.odds_sample(pivot.temperature, pivot.c, state, via_menus=True)
        if sample is None:
            unrecoverable.append(state)
            continue
        energies[state] = sample.log_r
        if sample.conditioning_dependent:
            dependent.append(state)
    if unrecoverable:
        logger.warning(f"⚠️ No odds against {pivot.c} at t={pivot.temperature} for {unrecoverable}")
    return RecoveredEnergy(energies=energies, unrecoverable=unrecoverable, conditioning_dependent=dependent)


def _kappa_table(temps: List[float], values: List[float], gaps: List[float], dependent: bool,
                 method: str = "pivot", pairs: int = 1) -> RecoveredKappa:
    arr = np.asarray(values, dtype=float)
    monotone = bool(np.all(arr > 0) and np.all(np.diff(arr) > 0))
    projected = values
    if len(values) >= 2:
        iso = IsotonicRegression(increasing=True, out_of_bounds="clip")
        projected = iso.fit_transform(np.asarray(temps), arr).tolist()
    if not monotone:
        logger.warning(f"⚠️ Recovered κ̃ is not strictly increasing: {dict(zip(temps, values))}")
    if gaps:
        logger.warning(f"⚠️ κ̃ undefined at t={gaps}")
    return RecoveredKappa(temperatures=temps, values=values, projected=projected, gaps=gaps,
                          monotone=monotone, conditioning_dependent=dependent, method=method, pairs=pairs)


def recover_kappa(rsf: EmpiricalRSF, pivot: Pivot) -> RecoveredKappa:
    """κ̃(t) = ln r_v̄(c̄,d̄) / ln r_t(c̄,d̄) on the grid, never extrapolated."""
    top = _pivot_log_odds(rsf, pivot)
    temps, values, gaps = [], [], []
    dependent = False
    for token, t in zip(rsf.tokens, rsf.temperatures):
        sample: Optional[OddsSample] = rsf.odds_sample(token, pivot.c, pivot.d, via_menus=True)
        if sample is None or sample.log_r == 0.0:
            gaps.append(float(t))
            continue
        temps.append(float(t))
        values.append(top / sample.log_r)
        dependent = dependent or sample.conditioning_dependent
    if float(pivot.temperature) in temps:
        values[temps.index(float(pivot.temperature))] = 1.0
    return _kappa_table(temps, values, gaps, dependent)


def pooled_kappa(rsf: EmpiricalRSF, pivot: Pivot, cfg: Optional[ToleranceConfig] = None) -> RecoveredKappa:
    """Inverse-variance average of ln r_v̄(a,b) / ln r_t(a,b) over every strict pair.

    A pair enters at t only when its log-odds are significant both at v̄ and
    at t. Each ratio is already normalised to 1 at v̄, so for a softmax family
    every pair estimates the same κ(t)/κ(v̄).
    """
    cfg = cfg or ToleranceConfig()
    pairs = _co_occurring_pairs(rsf)
    crit = bonferroni_z(cfg.alpha, len(pairs) * len(rsf.tokens))
    anchors = {}
    for a, b in pairs:
        sample = rsf.odds_sample(pivot.temperature, a, b, via_menus=True)
        if sample is not None and abs(sample.log_r) > crit * sample.stderr:
            anchors[(a, b)] = sample
    if (pivot.c, pivot.d) not in anchors and (pivot.d, pivot.c) not in anchors:
        raise PreconditionError(f"pivot pair ({pivot.c}, {pivot.d}) is not significant at t={pivot.temperature}")

    temps, values, gaps = [], [], []
    dependent = False
    for token, t in zip(rsf.tokens, rsf.temperatures):
        if float(t) == float(pivot.temperature):
            temps.append(float(t))
            values.append(1.0)
            continue
        ratios, weights = [], []
        for (a, b), top in anchors.items():
            sample = rsf.odds_sample(token, a, b, via_menus=True)
            if sample is None or not abs(sample.log_r) > crit * sample.stderr:
                continue
            r = top.log_r / sample.log_r
            rel = (top.stderr / top.log_r) ** 2 + (sample.stderr / sample.log_r) ** 2
            ratios.append(r)
            weights.append(1.0 / (r * r * rel))
            dependent = dependent or sample.conditioning_dependent or top.conditioning_dependent
        if not ratios:
            gaps.append(float(t))
            continue
        temps.append(float(t))
        values.append(float(np.average(ratios, weights=weights)))
    logger.info(f"🔍 κ̃ pooled over {len(anchors)} strict pairs at v̄={pivot.temperature}")
    return _kappa_table(temps, values, gaps, dependent, method="pooled", pairs=len(anchors))


def estimate_kappa(rsf: EmpiricalRSF, pivot: Pivot, cfg: Optional[ToleranceConfig] = None) -> RecoveredKappa:
    """Closed-form pivot ratio for exact families, pooled ratio for sampled ones."""
    if rsf.exact:
        return recover_kappa(rsf, pivot)
    return pooled_kappa(rsf, pivot, cfg)


def identify_concatenation(kappa: Union[RecoveredKappa, TabulatedNoise]) -> TableGenerator:
    """Generator φ(v) = 1/κ̃(1/v) as a table on the inverse grid, normalised to φ(1) = 1."""
    if isinstance(kappa, RecoveredKappa) and not kappa.monotone:
        raise NotBijectiveError("recovered κ̃ is not strictly increasing; no concatenation is compatible")
    temps = np.asarray(kappa.temperatures, dtype=float)
    values = np.asarray(kappa.values, dtype=float)
    if temps.size < 2:
        raise PreconditionError("need κ̃ on at least two temperatures to identify a concatenation")
    if np.any(values <= 0) or np.any(np.diff(values) <= 0):
        raise NotBijectiveError("κ̃ table is not a strictly increasing positive map")
    g = TableGenerator((1.0 / temps)[::-1], (1.0 / values)[::-1])
    return g.normalized()


class AffineFit(NamedTuple):
    equivalent: bool
    m: float
    q: float


def _kappa_at(kappa: KappaLike, t: float) -> float:
    if isinstance(kappa, (ParametricNoise, TabulatedNoise)):
        return kappa.kappa(t)
    if isinstance(kappa, RecoveredKappa):
        kappa = dict(zip(kappa.temperatures, kappa.values))
    return float(kappa[t])


def _default_grid(kappas: Iterable[KappaLike]) -> List[float]:
    for kappa in kappas:
        if isinstance(kappa, TabulatedNoise):
            return list(kappa.temperatures)
        if isinstance(kappa, RecoveredKappa):
            return list(kappa.temperatures)
        if isinstance(kappa, Mapping):
            return sorted(float(t) for t in kappa)
    return [1.0]


def _kappa_pairs(k1: KappaLike, k2: KappaLike, grid: Optional[Iterable[float]]) -> np.ndarray:
    grid = list(grid) if grid is not None else _default_grid((k1, k2))
    pairs = []
    for t in grid:
        try:
            pairs.append((_kappa_at(k1, t), _kappa_at(k2, t)))
        except (DomainError, KeyError):
            continue
    if not pairs:
        raise PreconditionError("the two noise maps share no temperature to compare on")
    return np.asarray(pairs, dtype=float)


def affine_residuals(E1: Mapping[str, float], k1: KappaLike, E2: Mapping[str, float], k2: KappaLike,
                     m: float, q: float, grid: Optional[Iterable[float]] = None) -> Tuple[float, float]:
    """(max |(E2 − q)/m − E1|, max |κ2/(m κ1) − 1|)."""
    shared = sorted(set(E1) & set(E2))
    e1 = np.array([E1[s] for s in shared])
    e2 = np.array([E2[s] for s in shared])
    energy_res = float(np.max(np.abs((e2 - q) / m - e1))) if shared else 0.0
    kk = _kappa_pairs(k1, k2, grid)
    kappa_res = float(np.max(np.abs(kk[:, 1] / (m * kk[:, 0]) - 1.0)))
    return energy_res, kappa_res


def affine_equivalent(E1: Mapping[str, float], k1: KappaLike, E2: Mapping[str, float], k2: KappaLike,
                      tol: float = 1e-9, grid: Optional[Iterable[float]] = None,
                      fix_scale: bool = False) -> AffineFit:
    """Do (E1, κ1) and (E2, κ2) induce the same family, i.e. E2 = mE1 + q and κ2 = mκ1?

    ``m`` and ``q`` are fitted by least squares on the shared states
    (``fix_scale`` pins m = 1). Two constant energies are always
    equivalent; exactly one constant energy never is.
    """
    shared = sorted(set(E1) & set(E2))
    if not shared:
        raise PreconditionError("the two energy maps share no state")
    x = np.array([E1[s] for s in shared], dtype=float)
    y = np.array([E2[s] for s in shared], dtype=float)
    flat1 = np.ptp(x) <= tol
    flat2 = np.ptp(y) <= tol
    if flat1 and flat2:
        kk = _kappa_pairs(k1, k2, grid)
        m = 1.0 if fix_scale else float(np.mean(kk[:, 1] / kk[:, 0]))
        return AffineFit(True, m, float(y[0] - m * x[0]))
    if flat1 != flat2:
        return AffineFit(False, float("nan"), float("nan"))

    if fix_scale:
        m, q = 1.0, float(np.mean(y - x))
    else:
        m, q = (float(v) for v in np.polyfit(x, y, 1))
    if not m > 0:
        return AffineFit(False, m, q)
    energy_res, kappa_res = affine_residuals(E1, k1, E2, k2, m, q, grid)
    return AffineFit(energy_res <= tol and kappa_res <= tol, m, q)


def recover(rsf: EmpiricalRSF, cfg: Optional[ToleranceConfig] = None) -> RecoveryResult:
    """Pivot, Ẽ, κ̃ and the identified concatenation in one result."""
    cfg = cfg or ToleranceConfig()
    try:
        pivot = select_pivot(rsf, cfg)
    except UniformFamilySignal as e:
        logger.info(f"✅ Uniform family: {e.detail}")
        return RecoveryResult(
            uniform=True,
            kappa_undetermined=True,
            energy=RecoveredEnergy(energies={s: 0.0 for s in rsf.states}),
            notes=["E is constant; κ is undetermined"],
        )

    energy = recover_energy(rsf, pivot)
    kappa = estimate_kappa(rsf, pivot, cfg)
    notes: List[str] = []
    generator = None
    try:
        generator = identify_concatenation(kappa).describe()
    except (NotBijectiveError, PreconditionError, CellLookupError) as e:
        notes.append(f"no concatenation identified: {e.detail}")
    if energy.conditioning_dependent or kappa.conditioning_dependent:
        notes.append("some odds were derived from larger menus and rely on the conditioning axiom")
    if not kappa.monotone:
        notes.append("κ̃ is not strictly increasing; see the isotonic projection")
    logger.info(f"✅ Recovered energies for {len(energy.energies)} states, κ̃ on {len(kappa.values)} temperatures")
    return RecoveryResult(pivot=pivot, energy=energy, kappa=kappa, generator=generator, notes=notes)
