import numpy as np
import pytest

from core.errors import NotBijectiveError, PreconditionError, UniformFamilySignal
from core.recovery import (
    affine_equivalent,
    affine_residuals,
    estimate_kappa,
    identify_concatenation,
    pooled_kappa,
    recover,
    recover_energy,
    recover_kappa,
    select_pivot,
)
from core.synth import generate
from factories import GRID, THREE, family, tabulated
from models.energy_models import ParametricNoise
from models.family_models import FamilySpec
from models.report_models import Pivot, RecoveredKappa
from models.state_models import Menu, TemperatureGrid

UNIT_PIVOT = Pivot(temperature=1.0, c="a", d="c")
FIVE = {"a": 0.0, "b": 0.75, "c": 1.5, "d": 2.25, "e": 3.0}


class TestSelectPivot:
    def test_strongest_pair_is_chosen(self, boltzmann_exact):
        pivot = select_pivot(boltzmann_exact)
        assert (pivot.temperature, pivot.c, pivot.d) == (0.25, "a", "c")
        assert pivot.log_odds == pytest.approx(8.0)

    def test_uniform_family_has_no_pivot(self, uniform_exact):
        with pytest.raises(UniformFamilySignal):
            select_pivot(uniform_exact)

    def test_pivot_must_be_strict(self):
        with pytest.raises(ValueError):
            Pivot(temperature=1.0, c="a", d="b", log_odds=-1.0)


class TestRecoverEnergy:
    def test_boltzmann_energies(self, boltzmann_exact):
        energy = recover_energy(boltzmann_exact, UNIT_PIVOT)
        assert energy.energies == pytest.approx({"a": 0.0, "b": 1.0, "c": 2.0}, abs=1e-12)
        assert energy.unrecoverable == []
        assert energy.conditioning_dependent == []

    def test_boltzmann_constant_scales_energies(self):
        rsf = family("boltzmann", THREE, k=2.0)
        energy = recover_energy(rsf, UNIT_PIVOT)
        assert energy.energies == pytest.approx({"a": 0.0, "b": 0.5, "c": 1.0}, abs=1e-12)

    def test_state_without_odds_against_the_pivot(self):
        menus = [Menu(id="a-b", members={"a", "b"}), Menu(id="c-d", members={"c", "d"})]
        spec = FamilySpec(kind="boltzmann", grid=TemperatureGrid(values=GRID), menus=menus,
                          energies={**THREE, "d": 3.0})
        energy = recover_energy(generate(spec), Pivot(temperature=1.0, c="a", d="b"))
        assert energy.unrecoverable == ["c", "d"]
        assert set(energy.energies) == {"a", "b"}

    def test_larger_menus_are_flagged(self):
        rsf = family("boltzmann", THREE, binary=False)
        energy = recover_energy(rsf, UNIT_PIVOT)
        assert energy.energies["c"] == pytest.approx(2.0)
        assert energy.conditioning_dependent == ["b", "c"]


class TestRecoverKappa:
    def test_linear_noise(self, boltzmann_exact):
        kappa = recover_kappa(boltzmann_exact, UNIT_PIVOT)
        np.testing.assert_allclose(kappa.values, GRID, rtol=1e-12)
        assert kappa.monotone
        assert kappa.gaps == []
        assert kappa.values[GRID.index(1.0)] == 1.0

    def test_squared_noise(self, squared_exact):
        kappa = recover_kappa(squared_exact, UNIT_PIVOT)
        np.testing.assert_allclose(kappa.values, [t * t for t in GRID], rtol=1e-12)

    def test_crossing_odds_are_not_monotone(self):
        rsf = family("crossing-logodds", states=["a", "b"], full=False)
        kappa = recover_kappa(rsf, Pivot(temperature=0.25, c="a", d="b"))
        assert not kappa.monotone
        assert kappa.gaps == [1.0]
        assert all(np.diff(kappa.projected) >= 0)
        with pytest.raises(NotBijectiveError):
            identify_concatenation(kappa)

    def test_pooled_ratio_matches_the_pivot_ratio_on_exact_data(self, boltzmann_exact):
        kappa = pooled_kappa(boltzmann_exact, UNIT_PIVOT)
        assert kappa.method == "pooled" and kappa.pairs == 3
        np.testing.assert_allclose(kappa.values, GRID, rtol=1e-9)

    def test_exact_families_keep_the_pivot_ratio(self, boltzmann_exact):
        assert estimate_kappa(boltzmann_exact, UNIT_PIVOT).method == "pivot"

    def test_pooled_ratio_needs_a_significant_pivot(self, uniform_exact):
        with pytest.raises(PreconditionError):
            pooled_kappa(uniform_exact, UNIT_PIVOT)


class TestIdentifyConcatenation:
    def test_linear_noise_gives_identity(self, boltzmann_exact):
        g = identify_concatenation(recover_kappa(boltzmann_exact, UNIT_PIVOT))
        assert g.f(1.0) == pytest.approx(1.0)
        assert g.f(2.0) == pytest.approx(2.0)

    def test_squared_noise_gives_square(self, squared_exact):
        g = identify_concatenation(recover_kappa(squared_exact, UNIT_PIVOT))
        assert g.f(2.0) == pytest.approx(4.0)
        assert g.f(0.5) == pytest.approx(0.25)

    def test_needs_two_points(self):
        with pytest.raises(PreconditionError):
            identify_concatenation(RecoveredKappa(temperatures=[1.0], values=[1.0]))


class TestAffineEquivalence:
    def test_scaled_and_shifted(self):
        E2 = {s: 3.0 * e + 7.0 for s, e in THREE.items()}
        fit = affine_equivalent(THREE, ParametricNoise(), E2, ParametricNoise(k=3.0), grid=GRID)
        assert fit.equivalent
        assert fit.m == pytest.approx(3.0)
        assert fit.q == pytest.approx(7.0)

    def test_mismatched_noise(self):
        E2 = {s: 3.0 * e + 7.0 for s, e in THREE.items()}
        fit = affine_equivalent(THREE, ParametricNoise(), E2, ParametricNoise(k=2.0), grid=GRID)
        assert not fit.equivalent
        assert affine_residuals(THREE, ParametricNoise(), E2, ParametricNoise(k=2.0), 3.0, 7.0, GRID)[1] > 0.3

    def test_fixed_scale(self):
        shifted = {s: e + 5.0 for s, e in THREE.items()}
        fit = affine_equivalent(THREE, ParametricNoise(), shifted, ParametricNoise(), fix_scale=True)
        assert fit.equivalent and fit.m == 1.0
        assert fit.q == pytest.approx(5.0)
        scaled = {s: 3.0 * e for s, e in THREE.items()}
        assert not affine_equivalent(THREE, ParametricNoise(), scaled, ParametricNoise(k=3.0), fix_scale=True).equivalent

    def test_reversed_order_is_not_equivalent(self):
        flipped = {s: -e for s, e in THREE.items()}
        assert not affine_equivalent(THREE, ParametricNoise(), flipped, ParametricNoise()).equivalent

    def test_constant_energies(self):
        flat = {s: 0.0 for s in THREE}
        assert affine_equivalent(flat, ParametricNoise(), {s: 4.0 for s in THREE}, ParametricNoise(k=9.0)).equivalent
        fit = affine_equivalent(flat, ParametricNoise(), THREE, ParametricNoise())
        assert not fit.equivalent
        assert np.isnan(fit.m)

    def test_no_shared_states(self):
        with pytest.raises(PreconditionError):
            affine_equivalent({"a": 0.0}, ParametricNoise(), {"z": 0.0}, ParametricNoise())


class TestRecover:
    @pytest.mark.parametrize("fixture", ["boltzmann_exact", "squared_exact"])
    def test_round_trip(self, fixture, request):
        rsf = request.getfixturevalue(fixture)
        original = ParametricNoise() if fixture == "boltzmann_exact" else tabulated(lambda t: t * t)
        result = recover(rsf)
        assert not result.uniform
        assert result.generator is not None
        fit = affine_equivalent(THREE, original, result.energy.energies, result.kappa)
        assert fit.equivalent
        assert fit.m == pytest.approx(1.0 / original.kappa(result.pivot.temperature))

    def test_any_pivot_gives_an_equivalent_pair(self, boltzmann_exact):
        other = Pivot(temperature=0.5, c="b", d="c")
        e1, k1 = recover_energy(boltzmann_exact, UNIT_PIVOT), recover_kappa(boltzmann_exact, UNIT_PIVOT)
        e2, k2 = recover_energy(boltzmann_exact, other), recover_kappa(boltzmann_exact, other)
        assert e2.energies == pytest.approx({"a": -2.0, "b": 0.0, "c": 2.0})
        fit = affine_equivalent(e1.energies, k1, e2.energies, k2)
        assert fit.equivalent
        assert fit.m == pytest.approx(2.0)

    def test_uniform_family(self, uniform_exact):
        result = recover(uniform_exact)
        assert result.uniform and result.kappa_undetermined
        assert result.energy.energies == {"a": 0.0, "b": 0.0, "c": 0.0}
        assert result.notes == ["E is constant; κ is undetermined"]

    def test_larger_menus_add_a_note(self):
        result = recover(family("boltzmann", THREE, binary=False))
        assert any("larger menus" in note for note in result.notes)

    def test_sampled_boltzmann_recovers_within_tolerance(self):
        truth = np.array(list(FIVE.values()))
        misses = []
        for seed in range(200):
            result = recover(family("boltzmann", FIVE, n=100_000, seed=seed))
            assert result.kappa.method == "pooled"
            v = result.pivot.temperature
            kappa_error = max(abs(k * v / t - 1.0) for t, k in zip(result.kappa.temperatures, result.kappa.values))
            estimate = np.array([result.energy.energies.get(s, np.nan) for s in FIVE])
            if np.isnan(estimate).any():
                misses.append(seed)
                continue
            m, q = np.polyfit(truth, estimate, 1)
            energy_error = float(np.max(np.abs((estimate - q) / m - truth)))
            if kappa_error > 0.02 or energy_error > 0.05 or len(result.kappa.temperatures) < len(GRID):
                misses.append(seed)
        assert len(misses) <= 10, misses
