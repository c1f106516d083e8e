"""
Exact evaluation of the Boltzmann form e^{-E(a)/kt} / Σ e^{-E(b)/kt} and of
the general softmax form with a noise map κ(t), plus the freezing limit.
"""
from itertools import permutations
from typing import Dict, Iterable, List, Union

import numpy as np
from scipy.special import logsumexp

from core.errors import DomainError, PreconditionError
from models.energy_models import EnergyModel, FreezingProfile, PairLimit, ParametricNoise, StateLimit
from models.state_models import Menu

MenuLike = Union[Menu, Iterable[str]]


def menu_members(A: MenuLike) -> List[str]:
    members = A.sorted_members() if isinstance(A, Menu) else sorted(set(A))
    if not members:
        raise PreconditionError("menu must be nonempty")
    return members


def log_softmax(model: EnergyModel, t: float, A: MenuLike) -> Dict[str, float]:
    """ln p_t(a|A) for every a in A, computed with max-subtraction."""
    if not (np.isfinite(t) and t > 0):
        raise DomainError(f"temperature must be positive, got {t}")
    members = menu_members(A)
    energies = np.array([model.energy(a) for a in members])
    logits = -energies / model.kappa(t)
    logp = logits - logsumexp(logits)
    return dict(zip(members, logp.tolist()))


def menu_distribution(model: EnergyModel, t: float, A: MenuLike) -> Dict[str, float]:
    return {a: float(np.exp(lp)) for a, lp in log_softmax(model, t, A).items()}


def softmax_prob(model: EnergyModel, t: float, a: str, A: MenuLike) -> float:
    logp = log_softmax(model, t, A)
    if a not in logp:
        return 0.0
    return float(np.exp(logp[a]))


def boltzmann_prob(model: EnergyModel, t: float, a: str, A: MenuLike) -> float:
    if not isinstance(model.noise, ParametricNoise):
        raise PreconditionError("boltzmann_prob needs Parametric noise κ(t)=k·t")
    return softmax_prob(model, t, a, A)


def log_odds(model: EnergyModel, t: float, a: str, b: str) -> float:
    """ln r_t(a,b) = −(E(a) − E(b)) / κ(t)."""
    if not (np.isfinite(t) and t > 0):
        raise DomainError(f"temperature must be positive, got {t}")
    return -(model.energy(a) - model.energy(b)) / model.kappa(t)


def zero_limit(model: EnergyModel, A: MenuLike) -> FreezingProfile:
    """Freezing limit on A: mass spread uniformly over argmin E, pairs in {0, ½, 1}.

    Ties are exact equality of stored energies.
    """
    members = menu_members(A)
    energies = {a: model.energy(a) for a in members}
    low = min(energies.values())
    winners = [a for a in members if energies[a] == low]
    masses = [StateLimit(state=a, menu=members, mass=(1.0 / len(winners) if a in winners else 0.0))
              for a in members]
    pairs = []
    for a, b in permutations(members, 2):
        if energies[a] < energies[b]:
            p0 = 1.0
        elif energies[a] > energies[b]:
            p0 = 0.0
        else:
            p0 = 0.5
        pairs.append(PairLimit(a=a, b=b, p0=p0))
    return FreezingProfile(pairs=pairs, masses=masses)
