"""
Empirical random state function: tabulated frequencies p_t(a|A) over a
temperature grid and a menu family, with the derived binary odds curves.
"""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from core import config
from core.errors import (
    CellLookupError,
    InsufficientDataError,
    PreconditionError,
    RecordError,
)
from core.stats import classify_trend
from core.utils import Temperature, menu_key, temperature_token, temperature_value
from models.report_models import ToleranceConfig
from models.state_models import Menu

logger = logging.getLogger(__name__)

MenuRef = Union[str, Menu, Iterable[str]]
Record = Tuple[Temperature, str, str, int]


@dataclass(frozen=True, eq=False)
class MenuCell:
    """Frequencies of one (t, menu) group, aligned with ``members``."""
    members: Tuple[str, ...]
    freqs: np.ndarray
    stderrs: np.ndarray
    counts: Optional[np.ndarray] = None
    total: Optional[int] = None
    smoothed: bool = False

    def index(self, state: str) -> Optional[int]:
        try:
            return self.members.index(state)
        except ValueError:
            return None

    def effective_counts(self) -> Optional[np.ndarray]:
        if self.counts is None:
            return None
        return self.counts + 0.5 if self.smoothed else self.counts.astype(float)


@dataclass(frozen=True)
class OddsSample:
    log_r: float
    stderr: float
    menu_id: str
    conditioning_dependent: bool = False


class EmpiricalRSF:
    """Immutable table of p_t(a|A).

    Build it with :func:`build_empirical_rsf` (counts) or
    :func:`build_exact_rsf` (noise-free frequencies).
    """

    def __init__(self, tokens: Sequence[str], menus: Dict[str, Menu],
                 cells: Dict[Tuple[str, str], MenuCell], exact: bool = False,
                 smoothing: Optional[str] = None):
        order = sorted(tokens, key=temperature_value)
        self._tokens: Tuple[str, ...] = tuple(order)
        self._values = np.array([temperature_value(tok) for tok in order])
        self._menus = dict(sorted(menus.items()))
        self._cells = cells
        self._by_members = {menu_key(m.members): m for m in self._menus.values()}
        self.exact = exact
        self.smoothing = smoothing

    # -- grid and menus ---------------------------------------------------
    @property
    def tokens(self) -> Tuple[str, ...]:
        return self._tokens

    @property
    def temperatures(self) -> np.ndarray:
        return self._values.copy()

    @property
    def menus(self) -> List[Menu]:
        return list(self._menus.values())

    @property
    def states(self) -> List[str]:
        return sorted({s for m in self._menus.values() for s in m.members})

    @property
    def has_counts(self) -> bool:
        return not self.exact

    def token(self, t: Temperature) -> str:
        if isinstance(t, str):
            token = temperature_token(t)
            if token in self._tokens:
                return token
        else:
            matches = np.nonzero(self._values == float(t))[0]
            if len(matches):
                return self._tokens[int(matches[0])]
        raise CellLookupError(f"temperature {t} is not on the grid")

    def menu(self, ref: MenuRef) -> Menu:
        if isinstance(ref, Menu):
            ref = ref.id
        if isinstance(ref, str):
            if ref in self._menus:
                return self._menus[ref]
            raise CellLookupError(f"unknown menu '{ref}'")
        menu = self._by_members.get(menu_key(ref))
        if menu is None:
            raise CellLookupError(f"no menu with members {sorted(set(ref))}")
        return menu

    def find_menu(self, members: Iterable[str]) -> Optional[Menu]:
        return self._by_members.get(menu_key(members))

    def binary_pairs(self) -> List[Tuple[str, str]]:
        """Unordered pairs (a < b) that have a binary menu."""
        return sorted(k for k in self._by_members if len(k) == 2)

    def cell(self, t: Temperature, menu: MenuRef) -> MenuCell:
        token = self.token(t)
        m = self.menu(menu)
        try:
            return self._cells[(token, m.id)]
        except KeyError:
            raise CellLookupError(f"menu '{m.id}' was not observed at t={token}")

    def has_cell(self, t: Temperature, menu: MenuRef) -> bool:
        try:
            self.cell(t, menu)
            return True
        except CellLookupError:
            return False

    def cells(self) -> Iterable[Tuple[str, Menu, MenuCell]]:
        """(token, menu, cell) in grid order, then menu id."""
        for token in self._tokens:
            for menu in self._menus.values():
                cell = self._cells.get((token, menu.id))
                if cell is not None:
                    yield token, menu, cell

    # -- odds -------------------------------------------------------------
    def _sample_from(self, cell: MenuCell, menu_id: str, a: str, b: str, via: bool) -> Optional[OddsSample]:
        ia, ib = cell.index(a), cell.index(b)
        fa, fb = cell.freqs[ia], cell.freqs[ib]
        if fa <= 0 or fb <= 0:
            return None
        log_r = float(np.log(fa) - np.log(fb))
        counts = cell.effective_counts()
        if counts is None:
            stderr = config.STDERR_FLOOR
        else:
            stderr = max(float(np.sqrt(1.0 / counts[ia] + 1.0 / counts[ib])), config.STDERR_FLOOR)
        return OddsSample(log_r, stderr, menu_id, conditioning_dependent=via)

    def odds_sample(self, t: Temperature, a: str, b: str, via_menus: bool = False) -> Optional[OddsSample]:
        """ln r_t(a,b) from the binary menu, or from a shared larger menu.

        Larger menus give r_t(a,b) = p_t(a|A)/p_t(b|A), which relies on A.2;
        such samples are flagged ``conditioning_dependent``. Returns None when
        nothing usable was observed.
        """
        token = self.token(t)
        binary = self.find_menu((a, b))
        if binary is not None and (token, binary.id) in self._cells:
            return self._sample_from(self._cells[(token, binary.id)], binary.id, a, b, via=False)
        if not via_menus:
            return None
        candidates = [m for m in self._menus.values()
                      if a in m.members and b in m.members and (token, m.id) in self._cells]
        for menu in sorted(candidates, key=lambda m: (len(m.members), m.id)):
            sample = self._sample_from(self._cells[(token, menu.id)], menu.id, a, b, via=True)
            if sample is not None:
                return sample
        return None


def _check_count(value, row: int) -> int:
    text = value.strip() if isinstance(value, str) else value
    try:
        count = int(text)
    except (TypeError, ValueError):
        raise RecordError(f"count '{value}' is not an integer", row)
    if count < 0:
        raise RecordError(f"count {count} is negative", row)
    if not isinstance(text, str) and count != text:
        raise RecordError(f"count '{value}' is not an integer", row)
    return count


def _group_records(rows: Iterable[Tuple[Temperature, str, str, object]], check_value):
    groups: Dict[Tuple[str, str], Dict[str, object]] = {}
    first_row: Dict[Tuple[str, str], int] = {}
    floats: Dict[float, str] = {}
    for row, record in enumerate(rows):
        try:
            t, menu_id, state, value = record
        except (TypeError, ValueError):
            raise RecordError("expected (temperature, menu_id, state, value)", row)
        token = temperature_token(t)
        t_value = temperature_value(token)
        if floats.setdefault(t_value, token) != token:
            raise RecordError(f"temperature tokens '{floats[t_value]}' and '{token}' denote the same value", row)
        menu_id, state = str(menu_id), str(state)
        group = groups.setdefault((token, menu_id), {})
        first_row.setdefault((token, menu_id), row)
        if state in group:
            raise RecordError(f"duplicate cell (t={token}, menu={menu_id}, state={state})", row)
        group[state] = check_value(value, row)

    members: Dict[str, FrozenSet[str]] = {}
    for (token, menu_id), group in groups.items():
        current = frozenset(group)
        known = members.setdefault(menu_id, current)
        if known != current:
            raise RecordError(
                f"menu '{menu_id}' lists {sorted(current)} at t={token} but {sorted(known)} elsewhere",
                first_row[(token, menu_id)])
    seen: Dict[Tuple[str, ...], str] = {}
    for menu_id, mem in sorted(members.items()):
        key = menu_key(mem)
        if key in seen:
            raise RecordError(f"menus '{seen[key]}' and '{menu_id}' have the same members")
        seen[key] = menu_id
    menus = {mid: Menu(id=mid, members=mem) for mid, mem in members.items()}
    return groups, first_row, menus, sorted(set(floats.values()), key=temperature_value)


def build_empirical_rsf(records: Iterable[Record], smoothing: Optional[str] = None) -> EmpiricalRSF:
    """Normalise (t, menu_id, state, count) records into an EmpiricalRSF.

    Menu membership is the set of states appearing in a group. Frequencies are
    count/total with multinomial standard errors sqrt(f(1−f)/total). With
    ``smoothing="jeffreys"`` half a count is added to every cell of a group.
    """
    if smoothing not in (None, "jeffreys"):
        raise PreconditionError(f"unknown smoothing '{smoothing}'")
    groups, first_row, menus, tokens = _group_records(records, _check_count)
    cells: Dict[Tuple[str, str], MenuCell] = {}
    for (token, menu_id), group in groups.items():
        members = tuple(sorted(group))
        counts = np.array([group[s] for s in members], dtype=np.int64)
        total = int(counts.sum())
        if total <= 0:
            raise RecordError(f"group (t={token}, menu={menu_id}) has zero total count", first_row[(token, menu_id)])
        smoothed = smoothing == "jeffreys"
        effective = counts + 0.5 if smoothed else counts.astype(float)
        n = float(effective.sum())
        freqs = effective / n
        stderrs = np.sqrt(freqs * (1.0 - freqs) / n)
        cells[(token, menu_id)] = MenuCell(members, freqs, stderrs, counts, total, smoothed)
    if smoothing:
        logger.info(f"⚠️ Jeffreys smoothing applied to {len(cells)} groups")
    return EmpiricalRSF(tokens, menus, cells, exact=False, smoothing=smoothing)


def _check_frequency(value, row: int) -> float:
    try:
        freq = float(value)
    except (TypeError, ValueError):
        raise RecordError(f"frequency '{value}' is not a number", row)
    if not 0.0 <= freq <= 1.0:
        raise RecordError(f"frequency {freq} is outside [0, 1]", row)
    return freq


def build_exact_rsf(rows: Iterable[Tuple[Temperature, str, str, float]], sum_tol: float = 1e-12) -> EmpiricalRSF:
    """Build a noise-free EmpiricalRSF from (t, menu_id, state, frequency) rows.

    Standard errors are set to the floor so statistical checks reduce to
    near-exact identities.
    """
    groups, first_row, menus, tokens = _group_records(rows, _check_frequency)
    cells: Dict[Tuple[str, str], MenuCell] = {}
    for (token, menu_id), group in groups.items():
        members = tuple(sorted(group))
        freqs = np.array([group[s] for s in members], dtype=float)
        if abs(freqs.sum() - 1.0) > sum_tol:
            raise RecordError(f"group (t={token}, menu={menu_id}) sums to {freqs.sum()!r}", first_row[(token, menu_id)])
        stderrs = np.full(len(members), config.STDERR_FLOOR)
        cells[(token, menu_id)] = MenuCell(members, freqs, stderrs)
    return EmpiricalRSF(tokens, menus, cells, exact=True)


def frequency(rsf: EmpiricalRSF, t: Temperature, a: str, A: MenuRef) -> Tuple[float, float]:
    """(p_t(a|A), stderr); (0, 0) when a is not a member of A."""
    cell = rsf.cell(t, A)
    i = cell.index(a)
    if i is None:
        return 0.0, 0.0
    return float(cell.freqs[i]), float(cell.stderrs[i])


def conditional_frequency(rsf: EmpiricalRSF, t: Temperature, B: Iterable[str], A: MenuRef) -> float:
    """p_t(B|A) = Σ_{b∈B} p_t(b|A)."""
    cell = rsf.cell(t, A)
    B = set(B)
    outside = B - set(cell.members)
    if outside:
        raise PreconditionError(f"B is not a subset of A: {sorted(outside)} not in {list(cell.members)}")
    return float(sum(cell.freqs[cell.index(b)] for b in sorted(B)))


class OddsCurve:
    """t ↦ r_t(a,b) on the grid, with w(u) = ln r_{1/u}(a,b) on the inverse-temperature axis."""

    def __init__(self, pair: Tuple[str, str], temperatures: np.ndarray, log_r: np.ndarray,
                 stderr: np.ndarray, curve_class: str, p0: float,
                 dropped: Sequence[float] = (), conditioning_dependent: bool = False):
        self.pair = pair
        self.temperatures = np.asarray(temperatures, dtype=float)
        self.log_r = np.asarray(log_r, dtype=float)
        self.stderr = np.asarray(stderr, dtype=float)
        self.curve_class = curve_class
        self.p0 = p0
        self.dropped = list(dropped)
        self.conditioning_dependent = conditioning_dependent

    @property
    def samples(self) -> Dict[float, float]:
        return {float(t): float(np.exp(lr)) for t, lr in zip(self.temperatures, self.log_r)}

    @property
    def logw(self) -> Dict[float, float]:
        return {1.0 / float(t): float(lr) for t, lr in zip(self.temperatures, self.log_r)}

    def inverse_axis(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u, w, stderr) sorted by ascending inverse temperature u = 1/t."""
        order = np.argsort(1.0 / self.temperatures)
        return 1.0 / self.temperatures[order], self.log_r[order], self.stderr[order]

    def __len__(self) -> int:
        return len(self.temperatures)


def odds_curve(rsf: EmpiricalRSF, a: str, b: str, cfg: Optional[ToleranceConfig] = None,
               via_menus: bool = False) -> OddsCurve:
    """Odds curve of the pair (a, b) over the grid.

    Samples where either binary frequency is zero are dropped and flagged.
    Raises InsufficientDataError with fewer than ``cfg.min_samples`` usable
    samples.
    """
    cfg = cfg or ToleranceConfig()
    temps = rsf.temperatures
    if a == b:
        zeros = np.zeros(len(temps))
        return OddsCurve((a, b), temps, zeros, np.full(len(temps), config.STDERR_FLOOR), "constant-1", 1.0)

    kept_t, log_r, stderr, dropped = [], [], [], []
    via = False
    binary = rsf.find_menu((a, b))
    for token, t in zip(rsf.tokens, temps):
        sample = rsf.odds_sample(token, a, b, via_menus=via_menus)
        if sample is None:
            if binary is not None and rsf.has_cell(token, binary):
                dropped.append(float(t))
            continue
        kept_t.append(t)
        log_r.append(sample.log_r)
        stderr.append(sample.stderr)
        via = via or sample.conditioning_dependent
    if dropped:
        logger.warning(f"⚠️ Odds ({a},{b}) dropped at t={dropped}: zero frequency")
    if len(kept_t) < cfg.min_samples:
        raise InsufficientDataError(
            f"pair ({a},{b}) has {len(kept_t)} usable temperatures, {cfg.min_samples} required")
    kept_t = np.array(kept_t)
    log_r = np.array(log_r)
    stderr = np.array(stderr)
    order = np.argsort(1.0 / kept_t)
    trend = classify_trend(1.0 / kept_t[order], log_r[order], stderr[order], cfg.alpha)
    return OddsCurve((a, b), kept_t, log_r, stderr, trend.curve_class, trend.p0, dropped, via)
