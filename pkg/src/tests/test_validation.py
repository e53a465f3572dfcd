"""
Unit tests for validation logic.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError
from src.models.schemas import (
    ChannelFile, ComplexMatrix, KappaRequest, StateFile, TransitionRequest
)
from src.exceptions import DimensionMismatchError, DMPViolationError, ValidationError

LN2 = math.log(2.0)


class TestComplexMatrix:
    """Tests for ComplexMatrix validation."""

    def test_real_only(self):
        """A missing imaginary part means zero."""
        matrix = ComplexMatrix(re=[[0.5, 0.1], [0.1, 0.5]]).to_array()
        assert matrix.dtype == complex
        assert np.all(matrix.imag == 0)

    def test_ragged_rows(self):
        """Rows must have equal length."""
        with pytest.raises(ValidationError) as exc_info:
            ComplexMatrix(re=[[1.0, 0.0], [0.0]])
        assert "equal length" in exc_info.value.message

    def test_non_finite(self):
        """NaN entries are rejected with their position."""
        with pytest.raises(ValidationError) as exc_info:
            ComplexMatrix(re=[[1.0, float("nan")], [0.0, 0.0]])
        assert "(0, 1)" in exc_info.value.message

    def test_shape_mismatch(self):
        """Real and imaginary parts must have the same shape."""
        with pytest.raises(DimensionMismatchError):
            ComplexMatrix(re=[[1.0, 0.0], [0.0, 0.0]], im=[[0.0]]).to_array()

    def test_from_array_writes_imaginary_part(self):
        """Serialization keeps the phase."""
        matrix = ComplexMatrix.from_array(np.array([[0.5, 0.1j], [-0.1j, 0.5]]))
        assert matrix.im[0][1] == pytest.approx(0.1)


class TestSystemSpec:
    """Tests for energies and temperature."""

    def test_negative_beta(self):
        """beta < 0 is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            StateFile(energies=[0.0, 1.0], beta=-0.5, rho={"re": [[1.0, 0.0], [0.0, 0.0]]})
        assert exc_info.value.field == "beta"

    def test_empty_energies(self):
        """At least one level."""
        with pytest.raises(ValidationError) as exc_info:
            StateFile(energies=[], beta=1.0, rho={"re": [[1.0]]})
        assert "cannot be empty" in exc_info.value.message

    def test_unsorted_energies(self):
        """The Hamiltonian needs ascending levels."""
        state = StateFile(energies=[1.0, 0.0], beta=1.0, rho={"re": [[1.0, 0.0], [0.0, 0.0]]})
        with pytest.raises(ValidationError):
            state.hamiltonian()

    def test_state_dimension(self):
        """rho must match the number of levels."""
        state = StateFile(energies=[0.0, 1.0, 3.0], beta=1.0,
                          rho={"re": [[1.0, 0.0], [0.0, 0.0]]})
        with pytest.raises(DimensionMismatchError):
            state.density()

    def test_kappa_gap(self):
        """The qubit gap must be positive."""
        with pytest.raises(PydanticValidationError):
            KappaRequest(p=0.9, q=0.8, beta=1.0, energy_gap=-1.0)


class TestTransitionRequest:
    """Tests for combining state files."""

    def test_from_files(self):
        """Two files on one system."""
        state = StateFile(energies=[0.0, LN2], beta=1.0, rho={"re": [[0.9, 0.0], [0.0, 0.1]]})
        target = StateFile(energies=[0.0, LN2], beta=1.0, rho={"re": [[0.8, 0.0], [0.0, 0.2]]})
        request = TransitionRequest.from_files(state, target, "eto")
        rho, sigma = request.states()
        assert rho.populations[0] == pytest.approx(0.9)
        assert sigma.populations[0] == pytest.approx(0.8)
        assert request.mode == "eto"

    def test_from_files_different_systems(self):
        """Different temperatures cannot be compared."""
        state = StateFile(energies=[0.0, LN2], beta=1.0, rho={"re": [[0.9, 0.0], [0.0, 0.1]]})
        target = StateFile(energies=[0.0, LN2], beta=2.0, rho={"re": [[0.8, 0.0], [0.0, 0.2]]})
        with pytest.raises(ValidationError) as exc_info:
            TransitionRequest.from_files(state, target)
        assert exc_info.value.field == "target"


class TestChannelFile:
    """Tests for channel files."""

    @staticmethod
    def _file(alpha):
        return ChannelFile(energies=[0.0, LN2], beta=1.0,
                           G=[[6 / 7, 1 / 7], [2 / 7, 5 / 7]],
                           alpha={"re": [[1.0, alpha], [alpha, 1.0]]})

    def test_round_trip(self):
        """Building and serializing keeps G and alpha."""
        channel_file = self._file(0.5)
        restored = ChannelFile.from_channel(channel_file.to_channel())
        np.testing.assert_allclose(restored.G, channel_file.G)
        assert restored.alpha.re[0][1] == pytest.approx(0.5)

    def test_invalid_channel(self):
        """alpha beyond the minor bound fails on build."""
        with pytest.raises(DMPViolationError):
            self._file(0.9).to_channel()

    def test_non_finite_g(self):
        """G entries must be finite."""
        with pytest.raises(ValidationError):
            ChannelFile(energies=[0.0, LN2], beta=1.0, G=[[float("inf"), 0.0], [0.0, 1.0]],
                        alpha={"re": [[1.0, 0.0], [0.0, 1.0]]})
