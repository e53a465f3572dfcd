"""
Unit tests for bath degeneracy models.
"""
import pytest

from src.exceptions import BathConstructionError
from src.thermo.degeneracy_models import (
    DegeneracyModelFactory, ExactGeometricModel, MultinomialModel
)


class TestExactGeometricModel:
    """Tests for g(k) = s r^k."""

    def test_profile(self):
        """Scale 3, ratio 2."""
        profile = ExactGeometricModel(2.0, scale=3).profile(4)
        assert profile.degeneracies == (3, 6, 12, 24)
        assert profile.delta == 0.0
        assert profile.first_rung == 0

    def test_non_integer_ratio(self):
        """The Gibbs ratio can only hold exactly for integer r."""
        with pytest.raises(BathConstructionError) as exc_info:
            ExactGeometricModel(2.5)
        assert "integer" in exc_info.value.message

    def test_nearly_integer_ratio_is_accepted(self):
        """Floating error in e^(beta eps) is rounded away."""
        assert ExactGeometricModel(2.0 + 1e-13).base == 2

    def test_bad_scale(self):
        """The scale multiplies integer degeneracies."""
        with pytest.raises(BathConstructionError):
            ExactGeometricModel(2.0, scale=0)

    def test_ratio_below_one(self):
        """beta >= 0 keeps r >= 1."""
        with pytest.raises(BathConstructionError):
            ExactGeometricModel(0.5)


class TestMultinomialModel:
    """Tests for the binomial two-level-copy bath."""

    def test_window_centred_on_thermal_occupation(self):
        """20 copies at r = 2 centre on k = 7 and start at 5."""
        profile = MultinomialModel(2.0, copies=20).profile(5)
        assert profile.first_rung == 5
        assert profile.degeneracies == (15504, 38760, 77520, 125970, 167960)
        assert 0.0 < profile.tail_mass < 1.0

    def test_delta_measures_ratio_mismatch(self):
        """C(20, 6) / C(20, 5) = 2.5 against r = 2."""
        profile = MultinomialModel(2.0, copies=20).profile(5)
        assert profile.delta >= 0.25
        assert MultinomialModel(2.0).measure_delta([1, 2, 4]) == 0.0

    def test_too_few_copies(self):
        """Non-decreasing rungs stop at n/2."""
        with pytest.raises(BathConstructionError):
            MultinomialModel(2.0, copies=4).profile(5)


class TestDegeneracyModelFactory:
    """Tests for the model registry."""

    def test_create(self):
        """Modes map to model classes."""
        model = DegeneracyModelFactory.create("multinomial", ratio=2.0, copies=10)
        assert isinstance(model, MultinomialModel)
        assert model.get_model_type() == "multinomial"
        model = DegeneracyModelFactory.create("exact_geometric", ratio=3.0, scale=2)
        assert model.get_model_type() == "exact_geometric"

    def test_unknown_mode(self):
        """Unsupported modes raise."""
        with pytest.raises(BathConstructionError) as exc_info:
            DegeneracyModelFactory.create("lattice", ratio=2.0)
        assert "not supported" in exc_info.value.message
