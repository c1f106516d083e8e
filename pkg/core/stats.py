"""
Test statistics shared by the axiom checkers and the recovery layer.

Log-odds samples are treated as independent normal estimates with known
standard errors (delta method on multinomial counts). Multiple testing is
controlled with Bonferroni inside each family of tests.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import statsmodels.api as sm
from scipy import stats
from scipy.special import expit


def bonferroni_z(alpha: float, tests: int, two_sided: bool = True) -> float:
    tests = max(int(tests), 1)
    level = alpha / tests
    if two_sided:
        level /= 2.0
    return float(stats.norm.isf(level))


def significant(value: float, stderr: float, crit: float) -> bool:
    return abs(value) > crit * stderr


@dataclass(frozen=True)
class LineFit:
    slope: float
    chi2: float
    dof: int
    p_value: float
    residuals: np.ndarray


def zero_intercept_fit(x: Sequence[float], y: Sequence[float], stderr: Sequence[float]) -> LineFit:
    """Weighted least squares of y = c·x and its residual chi-square.

    The chi-square uses the supplied standard errors, so it is a lack-of-fit
    statistic with n−1 degrees of freedom.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    se = np.asarray(stderr, dtype=float)
    fit = sm.WLS(y, x.reshape(-1, 1), weights=1.0 / se ** 2).fit()
    slope = float(fit.params[0])
    residuals = y - slope * x
    chi2 = float(np.sum((residuals / se) ** 2))
    dof = max(len(y) - 1, 1)
    return LineFit(slope=slope, chi2=chi2, dof=dof, p_value=float(stats.chi2.sf(chi2, dof)), residuals=residuals)


@dataclass(frozen=True)
class ConstancyTest:
    mean: float
    chi2: float
    dof: int
    p_value: float


def ratio_constancy(ratios: Sequence[float], variances: Sequence[float]) -> ConstancyTest:
    """Chi-square test that a set of ratio estimates share one value."""
    r = np.asarray(ratios, dtype=float)
    w = 1.0 / np.asarray(variances, dtype=float)
    mean = float(np.sum(w * r) / np.sum(w))
    chi2 = float(np.sum(w * (r - mean) ** 2))
    dof = max(len(r) - 1, 1)
    return ConstancyTest(mean=mean, chi2=chi2, dof=dof, p_value=float(stats.chi2.sf(chi2, dof)))


@dataclass(frozen=True)
class TrendClass:
    curve_class: str
    p0: float
    tail: float
    tail_stderr: float
    statistic: float


def classify_trend(u: Sequence[float], w: Sequence[float], se: Sequence[float], alpha: float) -> TrendClass:
    """Classify w(u) = ln r_{1/u}(a,b) by its behaviour as u → ∞ (t → 0).

    ``u`` must be sorted ascending. Returns the curve class and the implied
    freezing limit p0(a,b): 1 when w diverges upward, 0 when it diverges
    downward, ½ when w is flat at 0, and expit(tail) when the tail levels off
    away from 0 or falls back (unclassified, interior limit).
    """
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    se = np.asarray(se, dtype=float)
    crit = bonferroni_z(alpha, len(w))
    z = np.abs(w) / se
    if not np.any(z > crit):
        return TrendClass("constant-1", 0.5, float(w[-1]), float(se[-1]), float(z.max()))

    tail, tail_se = float(w[-1]), float(se[-1])
    if not significant(tail, tail_se, crit):
        return TrendClass("unclassified", float(expit(tail)), tail, tail_se, float(z.max()))

    sign = 1.0 if tail > 0 else -1.0
    a_last, a_prev = sign * tail, sign * float(w[-2])
    step = a_last - a_prev
    step_se = float(np.hypot(se[-1], se[-2]))
    diverging = "increasing-to-inf" if sign > 0 else "decreasing-to-0"
    p0 = 1.0 if sign > 0 else 0.0
    if step > crit * step_se:
        return TrendClass(diverging, p0, tail, tail_se, step / step_se)

    # Tail no longer growing: is it significantly below linear growth through the origin?
    ratio = float(u[-2] / u[-1])
    gap = a_prev - ratio * a_last
    gap_se = float(np.hypot(se[-2], ratio * se[-1]))
    if gap > crit * gap_se:
        return TrendClass("unclassified", float(expit(tail)), tail, tail_se, gap / gap_se)
    return TrendClass(diverging, p0, tail, tail_se, step / step_se)


def spike_scan(w: Sequence[float], se: Sequence[float], alpha: float) -> Optional[tuple]:
    """Find the strongest isolated spike in a sequence.

    A spike is an interior point significantly above both neighbours or
    significantly below both. Returns (index, z) of the worst spike or None.
    """
    w = np.asarray(w, dtype=float)
    se = np.asarray(se, dtype=float)
    if len(w) < 3:
        return None
    crit = bonferroni_z(alpha, len(w) - 2)
    worst = None
    for i in range(1, len(w) - 1):
        left = (w[i] - w[i - 1]) / np.hypot(se[i], se[i - 1])
        right = (w[i] - w[i + 1]) / np.hypot(se[i], se[i + 1])
        if left > crit and right > crit or left < -crit and right < -crit:
            z = float(min(abs(left), abs(right)))
            if worst is None or z > worst[1]:
                worst = (i, z)
    return worst
