"""
Exact and Monte Carlo sampled families used as oracles: Boltzmann, general
softmax, uniform, and counterexamples that break one axiom cluster each.
"""
from itertools import combinations
from typing import List, Sequence, Tuple
import logging

import numpy as np
from scipy.special import log_expit
from scipy.stats import norm

from core.boltzmann import log_softmax
from core.errors import PreconditionError, UnsupportedFamilyError
from core.rsf import EmpiricalRSF, build_empirical_rsf, build_exact_rsf
from core.utils import temperature_token
from core.workers import parallel_map
from models.energy_models import EnergyModel, ParametricNoise
from models.family_models import BINARY_ONLY, FamilySpec
from models.state_models import Menu

logger = logging.getLogger(__name__)


def standard_menus(states: Sequence[str], binary: bool = True, full: bool = True) -> List[Menu]:
    """Every binary menu and/or the full menu over ``states``; ids join members with '-'."""
    states = sorted(states)
    menus = []
    if binary:
        menus += [Menu(id=f"{a}-{b}", members={a, b}) for a, b in combinations(states, 2)]
    if full and len(states) > 2:
        menus.append(Menu(id="-".join(states), members=set(states)))
    return menus


def _boltzmann(spec: FamilySpec, k: float) -> EnergyModel:
    return EnergyModel(energies=spec.energies, noise=ParametricNoise(k=k))


def cell_log_probs(spec: FamilySpec, t: float, menu: Menu) -> Tuple[List[str], np.ndarray]:
    """(sorted members, ln p_t(·|menu)) under the family."""
    members = menu.sorted_members()
    size = len(members)
    if size == 1:
        return members, np.zeros(1)
    if spec.kind in BINARY_ONLY and size > 2:
        raise UnsupportedFamilyError(f"kind '{spec.kind}' is defined on binary menus only, menu '{menu.id}' has {size}")

    if spec.kind == "uniform":
        return members, np.full(size, -np.log(size))
    if spec.kind == "probit-binary":
        a, b = members
        x = (spec.energies[b] - spec.energies[a]) / t
        return members, np.array([norm.logcdf(x), norm.logcdf(-x)])
    if spec.kind == "crossing-logodds":
        w = spec.c0 - spec.c1 * t
        return members, np.array([log_expit(w), log_expit(-w)])
    if spec.kind == "flat-binary" and size == 2:
        return members, np.full(2, -np.log(2.0))
    if spec.kind == "scaled-conditioning-breaker" and size == 2:
        model = _boltzmann(spec, 2.0 * spec.k)
    elif spec.kind == "softmax":
        model = EnergyModel(energies=spec.energies, noise=spec.noise)
    else:
        model = _boltzmann(spec, spec.k)
    logp = log_softmax(model, t, members)
    return members, np.array([logp[a] for a in members])


def _cells(spec: FamilySpec) -> List[Tuple[float, Menu]]:
    return [(t, menu) for t in spec.grid.values for menu in spec.menus]


def exact_family(spec: FamilySpec) -> EmpiricalRSF:
    """Noise-free family: frequencies are the closed-form probabilities, stderr floored."""
    if not spec.exact:
        raise PreconditionError("exact_family needs n = 0; use sample_family for n > 0")
    rows = []
    for t, menu in _cells(spec):
        members, logp = cell_log_probs(spec, t, menu)
        rows += [(temperature_token(t), menu.id, a, float(np.exp(lp))) for a, lp in zip(members, logp)]
    return build_exact_rsf(rows)


def _cell_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_family(spec: FamilySpec) -> EmpiricalRSF:
    """Multinomial(n, p) counts per cell from per-cell seeded PCG64 streams."""
    if spec.n < 1:
        raise PreconditionError("sample_family needs n >= 1")

    def draw(item):
        index, (t, menu) = item
        members, logp = cell_log_probs(spec, t, menu)
        probs = np.exp(logp)
        counts = _cell_generator(spec.seed, index).multinomial(spec.n, probs / probs.sum())
        return [(temperature_token(t), menu.id, a, int(c)) for a, c in zip(members, counts)]

    records = [r for cell in parallel_map(draw, list(enumerate(_cells(spec)))) for r in cell]
    logger.info(f"✅ Sampled {spec.kind} family: {len(spec.grid.values)} temperatures × "
                f"{len(spec.menus)} menus, n={spec.n}, seed={spec.seed}")
    return build_empirical_rsf(records)


def generate(spec: FamilySpec) -> EmpiricalRSF:
    return exact_family(spec) if spec.exact else sample_family(spec)


def emit_records(rsf: EmpiricalRSF) -> List[Tuple[str, str, str, int]]:
    """(t, menu_id, state, count) rows, sorted by grid, menu id and state."""
    if rsf.exact:
        raise PreconditionError("exact family has no counts to emit; export frequencies instead")
    return [(token, menu.id, state, int(count))
            for token, menu, cell in rsf.cells()
            for state, count in zip(cell.members, cell.counts)]


def emit_frequency_rows(rsf: EmpiricalRSF) -> List[Tuple[str, str, str, float]]:
    return [(token, menu.id, state, float(freq))
            for token, menu, cell in rsf.cells()
            for state, freq in zip(cell.members, cell.freqs)]
