import numpy as np
import pytest
from scipy.special import expit

from core.axioms import (
    check_boundedness,
    check_concatenation_axiom,
    check_conditioning,
    check_consistency,
    check_continuity,
    check_monotonicity,
    check_positivity,
    check_weak_boundedness,
    check_zero_uniformity,
    estimate_freezing_limit,
    gate_verdicts,
    run_suite,
)
from core.concat import LinearGenerator, PowerGenerator
from core.rsf import build_empirical_rsf, build_exact_rsf
from factories import GRID, THREE, family
from models.energy_models import TabulatedNoise
from models.report_models import ToleranceConfig


def pair_family(log_odds):
    """Exact binary family on {a, b} with the given ln r_t(a,b) per temperature."""
    rows = []
    for t, w in log_odds.items():
        rows += [(t, "a-b", "a", float(expit(w))), (t, "a-b", "b", float(expit(-w)))]
    return build_exact_rsf(rows)


def verdicts(report):
    return {tag: v.verdict for tag, v in report.verdicts.items()}


class TestBoltzmannFamily:
    def test_exact_family_passes_everything(self, boltzmann_exact):
        report = run_suite(boltzmann_exact)
        assert set(verdicts(report).values()) == {"pass"}
        assert report.boltzmannian
        assert report.softmax_representable
        assert report.a4_and_a7 and report.a8_and_a9

    def test_revealed_order_and_freezing(self, boltzmann_exact):
        report = run_suite(boltzmann_exact)
        assert report.revealed_order.relation("a", "b") == "succ"
        assert report.revealed_order.relation("c", "a") == "prec"
        assert report.freezing.p0("a", "c") == 1.0
        assert report.freezing.p0("c", "a") == 0.0
        assert report.freezing.mass("a") == 1.0

    def test_generator_is_reported(self, boltzmann_exact):
        report = run_suite(boltzmann_exact)
        assert report.generator["kind"] == "table"

    def test_wrong_generator_fails_weak_boundedness(self, boltzmann_exact):
        verdict = check_weak_boundedness(boltzmann_exact, PowerGenerator(2.0))
        assert verdict.verdict == "fail"
        assert {"a", "b", "p_value"} <= set(verdict.witness)

    def test_sampled_family_passes_the_gate_in_99_percent_of_seeds(self):
        rejected = [seed for seed in range(200)
                    if not run_suite(family("boltzmann", THREE, n=100_000, seed=seed)).boltzmannian]
        assert len(rejected) <= 2, rejected

    def test_gate_splits_alpha_over_six_axioms(self, boltzmann_exact):
        report = run_suite(boltzmann_exact, ToleranceConfig(alpha=0.03))
        assert report.gate_alpha == pytest.approx(0.005)
        assert report.gate == {f"A{i}": "pass" for i in range(1, 8)}

    def test_gate_retests_failures_at_the_stricter_level(self, boltzmann_exact):
        cfg = ToleranceConfig()
        report = run_suite(boltzmann_exact, cfg)
        verdicts = dict(report.verdicts)
        verdicts["A6"] = verdicts["A6"].model_copy(update={"verdict": "fail", "witness": {"a": "a", "b": "b"}})
        gate = gate_verdicts(boltzmann_exact, cfg, verdicts, LinearGenerator())
        assert gate["A6"] == "pass"
        assert gate["A2"] == "pass"

    def test_gate_keeps_real_failures(self, squared_exact):
        report = run_suite(squared_exact)
        assert report.gate["A6"] == "fail"
        assert not report.boltzmannian


class TestSoftmaxFamily:
    def test_squared_noise_breaks_boundedness_only(self, squared_exact):
        report = run_suite(squared_exact)
        assert report.verdicts["A6"].verdict == "fail"
        assert not report.boltzmannian
        assert report.softmax_representable
        assert report.verdicts["A7"].verdict == "pass"

    def test_squared_noise_with_its_power_generator(self, squared_exact):
        report = run_suite(squared_exact, generator=PowerGenerator(2.0))
        assert report.verdicts["A7"].verdict == "pass"
        assert report.generator["kind"] == "power"
        assert check_weak_boundedness(squared_exact, LinearGenerator()).verdict == "fail"

    @pytest.mark.parametrize("seed", range(5))
    def test_alternative_axioms_agree_on_random_softmax(self, seed):
        rng = np.random.default_rng(seed)
        energies = dict(zip("abc", rng.uniform(0.0, 3.0, 3).tolist()))
        values = np.exp(np.cumsum(rng.uniform(0.1, 1.0, len(GRID))))
        noise = TabulatedNoise(temperatures=GRID, values=values.tolist())
        report = run_suite(family("softmax", energies, noise=noise))
        assert report.a4_and_a7
        assert report.a8_and_a9


class TestCounterexamples:
    def test_probit_breaks_boundedness_and_concatenation(self):
        report = run_suite(family("probit-binary", THREE, full=False))
        assert report.verdicts["A6"].verdict == "fail"
        assert report.verdicts["A9"].verdict == "fail"
        assert report.verdicts["A2"].verdict == "inconclusive"
        assert report.a4_and_a7 == report.a8_and_a9

    def test_crossing_odds_break_consistency_and_monotonicity(self):
        rsf = family("crossing-logodds", states=["a", "b"], full=False)
        report = run_suite(rsf)
        assert report.verdicts["A4"].verdict == "fail"
        assert report.verdicts["A8"].verdict == "fail"
        assert report.verdicts["A8"].witness["reason"] == "moves away from r = 1"
        assert not report.a4_and_a7 and not report.a8_and_a9

    def test_flat_binary_breaks_conditioning(self):
        verdict = check_conditioning(family("flat-binary", THREE))
        assert verdict.verdict == "fail"
        assert verdict.witness["A"] == "a-b-c"

    def test_scaled_conditioning_breaker(self):
        rsf = family("scaled-conditioning-breaker", THREE, k=1.0)
        assert check_conditioning(rsf).verdict == "fail"
        assert check_boundedness(rsf).verdict == "pass"

    def test_interior_freezing_limit_breaks_zero_uniformity(self):
        rsf = pair_family({0.25: np.log(3), 0.5: np.log(3), 1.0: np.log(3), 2.0: np.log(3) / 2, 4.0: np.log(3) / 4})
        estimate = estimate_freezing_limit(rsf, ("a", "b"))
        assert estimate.curve_class == "unclassified"
        assert estimate.p0 == pytest.approx(0.75)
        verdict = check_zero_uniformity(rsf)
        assert verdict.verdict == "fail"
        assert verdict.witness["p0"] == pytest.approx(0.75)
        assert check_consistency(rsf).verdict == "pass"

    def test_isolated_spike_breaks_continuity(self):
        rsf = pair_family({4.0: 0.25, 2.0: 0.5, 1.0: 5.0, 0.5: 2.0, 0.25: 4.0})
        verdict = check_continuity(rsf)
        assert verdict.verdict == "fail"
        assert verdict.witness["t"] == 1.0

    def test_zero_count_breaks_positivity(self):
        rsf = build_empirical_rsf([(1.0, "a-b", "a", 10), (1.0, "a-b", "b", 0)])
        verdict = check_positivity(rsf)
        assert verdict.verdict == "fail"
        assert verdict.witness["state"] == "b"

    def test_smoothing_hides_zero_counts(self):
        rsf = build_empirical_rsf([(1.0, "a-b", "a", 10), (1.0, "a-b", "b", 0)], smoothing="jeffreys")
        assert check_positivity(rsf).verdict == "pass"


class TestInconclusive:
    def test_too_few_samples_per_pair(self, boltzmann_exact):
        report = run_suite(boltzmann_exact, ToleranceConfig(min_samples=10))
        for tag in ("A3", "A4", "A5", "A6", "A7", "A8", "A9"):
            assert report.verdicts[tag].verdict == "inconclusive", tag
        assert not report.boltzmannian
        assert report.revealed_order.relation("a", "b") == "unknown"
        assert all(e.verdict == "inconclusive" for e in report.freezing_estimates)

    def test_no_binary_menus(self):
        rsf = family("boltzmann", THREE, binary=False)
        assert check_monotonicity(rsf).verdict == "inconclusive"
        assert check_concatenation_axiom(rsf).verdict == "inconclusive"
        assert check_conditioning(rsf).verdict == "inconclusive"

    def test_single_strict_pair(self):
        rsf = pair_family({t: 1.0 / t for t in GRID})
        assert check_concatenation_axiom(rsf).verdict == "inconclusive"


class TestUniformFamily:
    def test_uniform_is_boltzmannian(self, uniform_exact):
        report = run_suite(uniform_exact)
        assert report.boltzmannian
        assert report.generator["kind"] == "identity-over-k"
        assert report.revealed_order.relation("a", "c") == "sim"
        assert report.freezing.p0("a", "b") == 0.5
        assert report.freezing.mass("a") == pytest.approx(0.5)


class TestMonotonicity:
    def test_boltzmann_odds_shrink_toward_one(self, boltzmann_exact):
        verdict = check_monotonicity(boltzmann_exact)
        assert verdict.verdict == "pass"
        assert verdict.tests == 15

    def test_constant_odds_never_approach_one(self):
        verdict = check_monotonicity(pair_family({t: np.log(3) for t in GRID}))
        assert verdict.verdict == "fail"
        assert verdict.witness["reason"] == "does not decrease toward r = 1"

    def test_plateau_breaks_strict_decrease(self):
        rsf = pair_family({0.25: 3.0, 0.5: 1.5, 1.0: np.log(2), 2.0: np.log(2), 4.0: np.log(2)})
        verdict = check_monotonicity(rsf)
        assert verdict.verdict == "fail"
        assert verdict.witness["reason"] == "does not decrease toward r = 1"
        assert verdict.witness["s"] == 1.0
        assert verdict.witness["part"] == "monotone"

    def test_sampled_constant_odds_fail_the_limit(self):
        rows = []
        for t in GRID:
            rows += [(t, "a-b", "a", 75_000), (t, "a-b", "b", 25_000)]
        verdict = check_monotonicity(build_empirical_rsf(rows))
        assert verdict.verdict == "fail"
        assert verdict.witness["part"] == "limit"
        assert verdict.witness["reason"] == "does not approach r = 1"
        assert verdict.witness["t"] == 4.0

    def test_sampled_boltzmann_passes(self):
        assert check_monotonicity(family("boltzmann", THREE, n=100_000, seed=3)).verdict == "pass"

    def test_uniform_family(self, uniform_exact):
        assert check_monotonicity(uniform_exact).verdict == "pass"
