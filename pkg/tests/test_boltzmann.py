import numpy as np
import pytest

from core.boltzmann import (
    boltzmann_prob,
    log_odds,
    log_softmax,
    menu_distribution,
    softmax_prob,
    zero_limit,
)
from core.errors import DomainError, MissingEnergyError, PreconditionError
from factories import THREE, tabulated
from models.energy_models import EnergyModel, ParametricNoise


@pytest.fixture
def model():
    return EnergyModel(energies=THREE)


class TestBoltzmannForm:
    def test_three_states_at_unit_temperature(self, model):
        probs = [boltzmann_prob(model, 1.0, a, ["a", "b", "c"]) for a in "abc"]
        np.testing.assert_allclose(probs, [0.665241, 0.244728, 0.090031], atol=1e-6)
        assert sum(probs) == pytest.approx(1.0)

    def test_state_outside_menu_has_zero_probability(self, model):
        assert boltzmann_prob(model, 1.0, "c", ["a", "b"]) == 0.0

    def test_translation_invariance(self, model):
        shifted = model.shifted(17.5)
        for t in (0.1, 1.0, 10.0):
            before = menu_distribution(model, t, "abc")
            after = menu_distribution(shifted, t, "abc")
            for a in "abc":
                assert after[a] == pytest.approx(before[a], rel=1e-12)

    def test_k_rescales_temperature(self):
        doubled = EnergyModel(energies=THREE, noise=ParametricNoise(k=2.0))
        plain = EnergyModel(energies=THREE)
        assert softmax_prob(doubled, 1.0, "a", "abc") == pytest.approx(softmax_prob(plain, 2.0, "a", "abc"))

    def test_large_energy_gaps_do_not_overflow(self):
        model = EnergyModel(energies={"a": 0.0, "b": 1000.0})
        logp = log_softmax(model, 1.0, ["a", "b"])
        assert logp["a"] == pytest.approx(0.0)
        assert logp["b"] == pytest.approx(-1000.0)
        assert np.isfinite(list(logp.values())).all()

    def test_needs_parametric_noise(self):
        model = EnergyModel(energies=THREE, noise=tabulated(lambda t: t * t))
        with pytest.raises(PreconditionError):
            boltzmann_prob(model, 1.0, "a", "ab")


class TestSoftmaxForm:
    def test_squared_noise_binary(self):
        model = EnergyModel(energies=THREE, noise=tabulated(lambda t: t * t))
        assert softmax_prob(model, 2.0, "a", ["a", "b"]) == pytest.approx(0.562177, abs=1e-6)

    def test_tabulated_noise_is_not_extrapolated(self):
        model = EnergyModel(energies=THREE, noise=tabulated(lambda t: t * t))
        with pytest.raises(DomainError):
            softmax_prob(model, 8.0, "a", "ab")

    @pytest.mark.parametrize("t", [0.0, -1.0, float("inf"), float("nan")])
    def test_bad_temperature(self, model, t):
        with pytest.raises(DomainError):
            log_softmax(model, t, "abc")

    def test_missing_energy(self, model):
        with pytest.raises(MissingEnergyError):
            softmax_prob(model, 1.0, "a", ["a", "z"])

    def test_empty_menu(self, model):
        with pytest.raises(PreconditionError):
            log_softmax(model, 1.0, [])

    def test_log_odds(self, model):
        assert log_odds(model, 0.5, "a", "c") == pytest.approx(4.0)
        assert log_odds(model, 0.5, "c", "a") == pytest.approx(-4.0)


class TestZeroLimit:
    def test_unique_minimum(self, model):
        profile = zero_limit(model, "abc")
        assert profile.mass("a") == 1.0
        assert profile.mass("c") == 0.0
        assert profile.p0("a", "b") == 1.0
        assert profile.p0("c", "b") == 0.0

    def test_tied_minimum_splits_mass(self):
        model = EnergyModel(energies={"a": 0.0, "b": 0.0, "c": 1.0})
        profile = zero_limit(model, "abc")
        assert [profile.mass(s) for s in "abc"] == [0.5, 0.5, 0.0]
        assert profile.p0("a", "b") == 0.5
        assert profile.p0("b", "c") == 1.0

    def test_matches_low_temperature_frequencies(self, model):
        cold = menu_distribution(model, 1e-3, "abc")
        profile = zero_limit(model, "abc")
        for a in "abc":
            assert cold[a] == pytest.approx(profile.mass(a), abs=1e-12)
