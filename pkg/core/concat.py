"""
Concatenation operations t ⊕ s = f⁻¹(f(t) + f(s)) generated by a strictly
increasing bijection f of [0, ∞) with f(0) = 0, and the correspondence
φ(v) = 1/κ(1/v) between generators and noise maps.
"""
from typing import Any, Dict, Iterable, Optional, Sequence
import logging

import numpy as np
from scipy.optimize import bisect

from core.errors import GeneratorRangeError, NotBijectiveError, PreconditionError
from models.energy_models import NoiseMap, ParametricNoise, TabulatedNoise
from models.report_models import InequalityCheck

logger = logging.getLogger(__name__)

RTOL = 1e-9
ATOL = 1e-10


class ConcatGenerator:
    """Generator f of a concatenation, optionally multiplied by a positive ``scale``."""

    kind = "generator"

    def __init__(self, scale: float = 1.0):
        if not scale > 0:
            raise PreconditionError("generator scale must be positive")
        self.scale = float(scale)

    # subclasses implement the unscaled pair
    def _f(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _f_inv(self, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def upper(self) -> float:
        """Largest x where f is defined."""
        return np.inf

    def f(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise GeneratorRangeError("generator arguments must be nonnegative")
        if np.any(x > self.upper):
            raise GeneratorRangeError(f"argument beyond the generator table (max {self.upper})")
        out = self.scale * self._f(x)
        return float(out) if out.ndim == 0 else out

    def f_inv(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise GeneratorRangeError("generator values must be nonnegative")
        out = self._f_inv(y / self.scale)
        return float(out) if np.ndim(out) == 0 else out

    def scaled(self, m: float) -> "ConcatGenerator":
        clone = self._copy()
        clone.scale = self.scale * float(m)
        return clone

    def normalized(self) -> "ConcatGenerator":
        """Canonical representative with f(1) = 1 (when 1 lies in the domain)."""
        if self.upper < 1.0:
            return self
        return self.scaled(1.0 / self.f(1.0))

    def _copy(self) -> "ConcatGenerator":
        raise NotImplementedError

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "scale": self.scale}


class LinearGenerator(ConcatGenerator):
    """f(x) = x / k; every k gives the ordinary sum."""

    kind = "identity-over-k"

    def __init__(self, k: float = 1.0, scale: float = 1.0):
        super().__init__(scale)
        if not k > 0:
            raise PreconditionError("k must be positive")
        self.k = float(k)

    def _f(self, x):
        return x / self.k

    def _f_inv(self, y):
        return y * self.k

    def _copy(self):
        return LinearGenerator(self.k, self.scale)

    def describe(self):
        return {**super().describe(), "k": self.k}


class Log1pGenerator(ConcatGenerator):
    """f(x) = ln(1 + ηx); t ⊕ s = t + s + ηts."""

    kind = "log1p"

    def __init__(self, eta: float = 1.0, scale: float = 1.0):
        super().__init__(scale)
        if not eta > 0:
            raise PreconditionError("eta must be positive")
        self.eta = float(eta)

    def _f(self, x):
        return np.log1p(self.eta * x)

    def _f_inv(self, y):
        return np.expm1(y) / self.eta

    def _copy(self):
        return Log1pGenerator(self.eta, self.scale)

    def describe(self):
        return {**super().describe(), "eta": self.eta}


class PowerGenerator(ConcatGenerator):
    """f(x) = x^η; t ⊕ s = (t^η + s^η)^{1/η}."""

    kind = "power"

    def __init__(self, eta: float = 1.0, scale: float = 1.0):
        super().__init__(scale)
        if not eta > 0:
            raise PreconditionError("eta must be positive")
        self.eta = float(eta)

    def _f(self, x):
        return np.power(x, self.eta)

    def _f_inv(self, y):
        return np.power(y, 1.0 / self.eta)

    def _copy(self):
        return PowerGenerator(self.eta, self.scale)

    def describe(self):
        return {**super().describe(), "eta": self.eta}


class TableGenerator(ConcatGenerator):
    """Generator given on knots: linear from (0, 0) to the first knot,
    log-log linear between knots, undefined beyond the last knot.

    Knots must be strictly increasing and values positive; monotonicity of
    the values is *not* enforced here (see :func:`validate_concatenation`).
    """

    kind = "table"

    def __init__(self, nodes: Sequence[float], values: Sequence[float], scale: float = 1.0):
        super().__init__(scale)
        nodes = np.asarray(nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if nodes.shape != values.shape or nodes.size < 2:
            raise PreconditionError("a generator table needs at least two knots")
        if np.any(nodes <= 0) or np.any(np.diff(nodes) <= 0):
            raise PreconditionError("generator knots must be positive and strictly increasing")
        if np.any(values <= 0):
            raise PreconditionError("generator values must be positive at positive knots")
        self.nodes = nodes
        self.values = values
        self._log_nodes = np.log(nodes)
        self._log_values = np.log(values)

    @property
    def upper(self) -> float:
        return float(self.nodes[-1])

    @property
    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) > 0))

    def _f_scalar(self, x: float) -> float:
        if x == 0.0:
            return 0.0
        idx = int(np.searchsorted(self.nodes, x))
        if idx < len(self.nodes) and self.nodes[idx] == x:
            return float(self.values[idx])
        if x < self.nodes[0]:
            return float(self.values[0] * x / self.nodes[0])
        return float(np.exp(np.interp(np.log(x), self._log_nodes, self._log_values)))

    def _f(self, x):
        return np.vectorize(self._f_scalar, otypes=[float])(x)

    def _f_inv_scalar(self, y: float) -> float:
        if y == 0.0:
            return 0.0
        if y > self.values.max():
            raise GeneratorRangeError(f"value {y} is beyond the generator table (max {self.values.max()})")
        hits = np.nonzero(self.values == y)[0]
        if len(hits):
            return float(self.nodes[hits[0]])
        return float(bisect(lambda x: self._f_scalar(x) - y, 0.0, self.upper, xtol=1e-12, rtol=4 * np.finfo(float).eps))

    def _f_inv(self, y):
        return np.vectorize(self._f_inv_scalar, otypes=[float])(y)

    def normalized(self) -> "ConcatGenerator":
        if self.upper < 1.0:
            return self.scaled(1.0 / self.f(self.nodes[0]))
        return self.scaled(1.0 / self.f(1.0))

    def _copy(self):
        return TableGenerator(self.nodes, self.values, self.scale)

    def describe(self):
        return {**super().describe(), "nodes": self.nodes.tolist(),
                "values": (self.scale * self.values).tolist()}


def concat_apply(g: ConcatGenerator, t: float, s: float) -> float:
    """t ⊕_g s = g⁻¹(g(t) + g(s))."""
    if t < 0 or s < 0:
        raise PreconditionError("concatenation is defined on nonnegative reals")
    return float(g.f_inv(g.f(t) + g.f(s)))


def _close(x: float, y: float) -> bool:
    return bool(np.isclose(x, y, rtol=RTOL, atol=ATOL))


def _sample_upper(g: ConcatGenerator) -> float:
    """Largest draw keeping f(t)+f(s)+f(v) inside the generator's range."""
    if np.isfinite(g.upper):
        top = float(g.f(g.upper))
        return float(g.f_inv(top / 3.0))
    return 10.0


def validate_concatenation(g: ConcatGenerator, trials: int = 1000, seed: int = 0) -> InequalityCheck:
    """Check associativity, commutativity, identity 0 and strict monotonicity
    of ⊕_g on random nonnegative triples. ``holds`` is the verdict; a failing
    check carries the offending triple as witness.
    """
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    hi = _sample_upper(g)
    lo = float(g.nodes[0]) if isinstance(g, TableGenerator) else 0.0
    triples = rng.uniform(lo, hi, size=(trials, 3))

    def fail(reason: str, t: float, s: float, v: float, **extra) -> InequalityCheck:
        logger.info(f"❌ {g.kind} generator fails {reason} at ({t}, {s}, {v})")
        return InequalityCheck(holds=False, witness={"reason": reason, "t": t, "s": s, "v": v, **extra})

    for t, s, v in triples.tolist():
        try:
            ft, fs, fv = g.f(t), g.f(s), g.f(v)
            if (t > s) != (ft > fs) and t != s:
                return fail("strict monotonicity of f", t, s, v, f_t=ft, f_s=fs)
            ts = concat_apply(g, t, s)
            left = concat_apply(g, ts, v)
            right = concat_apply(g, t, concat_apply(g, s, v))
            if not _close(left, right):
                return fail("associativity", t, s, v, left=left, right=right)
            if not _close(ts, concat_apply(g, s, t)):
                return fail("commutativity", t, s, v)
            if not _close(concat_apply(g, t, 0.0), t):
                return fail("identity", t, s, v)
            hi_t, lo_t = max(t, s), min(t, s)
            if hi_t > lo_t and v > 0 and not concat_apply(g, hi_t, v) > concat_apply(g, lo_t, v):
                return fail("strict monotonicity of ⊕", hi_t, lo_t, v)
        except GeneratorRangeError as e:
            return fail(f"range ({e.detail})", t, s, v)
    return InequalityCheck(holds=True)


def generator_from_kappa(noise: NoiseMap) -> ConcatGenerator:
    """φ(v) = 1/κ(1/v), φ(0) = 0, normalised to φ(1) = 1.

    κ is identified only up to a positive factor, so the round trip through
    :func:`kappa_from_generator` returns κ scaled to κ(1) = 1.
    """
    if isinstance(noise, ParametricNoise):
        return LinearGenerator(noise.k).normalized()
    temps = np.asarray(noise.temperatures, dtype=float)
    kappas = np.asarray(noise.values, dtype=float)
    if np.any(np.diff(kappas) <= 0) or np.any(kappas <= 0):
        raise NotBijectiveError("κ table is not a strictly increasing positive map")
    nodes = (1.0 / temps)[::-1]
    values = (1.0 / kappas)[::-1]
    return TableGenerator(nodes, values).normalized()


def kappa_from_generator(g: ConcatGenerator, temperatures: Optional[Iterable[float]] = None) -> NoiseMap:
    """κ(t) = 1/f(1/t): Parametric for identity-over-k, otherwise a table on ``temperatures``."""
    if isinstance(g, LinearGenerator):
        return ParametricNoise(k=g.k / g.scale)
    if temperatures is None:
        if isinstance(g, TableGenerator):
            temperatures = (1.0 / g.nodes)[::-1]
        else:
            temperatures = np.geomspace(1e-2, 1e2, 81)
    temps = np.asarray(list(temperatures), dtype=float)
    values = 1.0 / np.asarray(g.f(1.0 / temps), dtype=float)
    if np.any(np.diff(values) <= 0):
        raise NotBijectiveError("generator does not induce a strictly increasing κ")
    return TabulatedNoise(temperatures=temps.tolist(), values=values.tolist())
