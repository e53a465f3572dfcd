"""
Unit tests for Hamiltonians, states and thermal primitives.
"""
import numpy as np
import pytest

from src.exceptions import DomainError, StateValidationError, ValidationError
from src.thermo.core import (
    Hamiltonian, InverseTemperature, assert_state, bohr_spectrum, free_energy, gibbs_state,
    gibbs_vector, random_density_matrix, random_unitary, relative_entropy_to_gibbs, rotate,
    state_from_populations, von_neumann_entropy
)


class TestHamiltonian:
    """Tests for Hamiltonian construction."""

    def test_levels_shifted_to_ground(self):
        """The ground level is moved to zero and the shift kept."""
        H = Hamiltonian((1.0, 2.5))
        assert H.levels == (0.0, 1.5)
        assert H.offset == 1.0

    def test_unsorted_levels_rejected(self):
        """Levels must be ascending."""
        with pytest.raises(ValidationError) as exc_info:
            Hamiltonian((1.0, 0.0))
        assert "ascending" in exc_info.value.message

    def test_from_energies_sorts(self):
        """from_energies accepts any order."""
        H = Hamiltonian.from_energies([3.0, 0.0, 1.0])
        assert H.levels == (0.0, 1.0, 3.0)

    def test_negative_beta_rejected(self):
        """beta must be non-negative."""
        with pytest.raises(ValidationError):
            InverseTemperature(-0.1)


class TestBohrSpectrum:
    """Tests for the degeneracy check on level differences."""

    def test_nondegenerate(self):
        """Gaps 1, 2, 3 are all distinct."""
        assert bohr_spectrum(Hamiltonian((0.0, 1.0, 3.0))).nondegenerate

    def test_equally_spaced_is_degenerate(self):
        """Equal spacing repeats the gap."""
        assert not bohr_spectrum(Hamiltonian((0.0, 1.0, 2.0))).nondegenerate

    def test_repeated_level_is_degenerate(self):
        """A zero difference counts as degeneracy."""
        assert not bohr_spectrum([0.0, 0.0]).nondegenerate


class TestAssertState:
    """Tests for density matrix validation."""

    def test_valid_state(self):
        """A proper qubit state passes."""
        state = assert_state([[0.7, 0.1], [0.1, 0.3]])
        assert state.dimension == 2
        np.testing.assert_allclose(state.populations, [0.7, 0.3])

    def test_non_hermitian(self):
        """Hermiticity is checked first."""
        with pytest.raises(StateValidationError) as exc_info:
            assert_state([[0.5, 0.2], [0.0, 0.5]])
        assert exc_info.value.invariant == "hermiticity"

    def test_wrong_trace(self):
        """Trace must be one."""
        with pytest.raises(StateValidationError) as exc_info:
            assert_state([[0.5, 0.0], [0.0, 0.4]])
        assert exc_info.value.invariant == "trace"

    def test_not_positive(self):
        """A negative eigenvalue is caught."""
        with pytest.raises(StateValidationError) as exc_info:
            assert_state([[1.5, 0.0], [0.0, -0.5]])
        assert exc_info.value.invariant == "positivity"

    def test_non_square(self):
        """Shape is validated before anything else."""
        with pytest.raises(ValidationError):
            assert_state([[1.0, 0.0]])

    def test_random_states_are_valid(self):
        """Ginibre states pass validation."""
        rng = np.random.default_rng(3)
        for d in (2, 3, 5):
            assert_state(random_density_matrix(d, rng).matrix)

    def test_state_from_populations_fills_partner(self):
        """The Hermitian partner of a coherence is filled in."""
        state = state_from_populations([0.6, 0.4], {(0, 1): 0.1 + 0.2j})
        assert state.coherence(1, 0) == pytest.approx(0.1 - 0.2j)


class TestThermalQuantities:
    """Tests for Gibbs states, entropy and free energy."""

    def test_gibbs_infinite_temperature_is_uniform(self):
        """beta = 0 gives the maximally mixed state."""
        np.testing.assert_allclose(gibbs_vector(Hamiltonian((0.0, 1.0, 3.0)), 0.0),
                                   [1 / 3, 1 / 3, 1 / 3])

    def test_gibbs_ratio(self):
        """Populations follow e^{-beta E}."""
        gibbs = gibbs_vector(Hamiltonian((0.0, np.log(2.0))), 1.0)
        np.testing.assert_allclose(gibbs, [2 / 3, 1 / 3])

    def test_entropy_of_maximally_mixed_qubit(self):
        """ln 2 nats, one bit."""
        rho = np.eye(2) / 2
        assert von_neumann_entropy(rho) == pytest.approx(np.log(2.0))
        assert von_neumann_entropy(rho, base="2") == pytest.approx(1.0)

    def test_entropy_of_pure_state(self):
        """0 log 0 = 0."""
        assert von_neumann_entropy(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)

    def test_free_energy_undefined_at_infinite_temperature(self):
        """F needs beta > 0."""
        H = Hamiltonian((0.0, 1.0))
        with pytest.raises(DomainError):
            free_energy(gibbs_state(H, 0.0), H, 0.0)

    def test_relative_entropy_of_gibbs_is_zero(self):
        """The Gibbs state is the minimum."""
        H = Hamiltonian((0.0, 1.0, 3.0))
        assert relative_entropy_to_gibbs(gibbs_state(H, 0.7), H, 0.7) == pytest.approx(0.0,
                                                                                        abs=1e-12)

    def test_relative_entropy_positive_off_gibbs(self):
        """Any other state has more free energy."""
        H = Hamiltonian((0.0, 1.0))
        rho = assert_state(np.diag([0.5, 0.5]))
        assert relative_entropy_to_gibbs(rho, H, 1.0) > 0

    def test_rotation_keeps_populations_and_phases_coherence(self):
        """e^{-iHt} rho e^{iHt} multiplies rho_01 by e^{i (E1 - E0) t}."""
        H = Hamiltonian((0.0, 2.0))
        rho = np.array([[0.6, 0.2], [0.2, 0.4]], dtype=complex)
        rotated = rotate(rho, H, 0.5)
        np.testing.assert_allclose(np.diag(rotated), np.diag(rho))
        assert rotated[0, 1] == pytest.approx(0.2 * np.exp(1j * 1.0))


class TestThermalProperties:
    """Sampled properties of free energy and entropy."""

    def test_gibbs_minimizes_free_energy(self):
        """F(tau) <= F(rho) for random states."""
        H = Hamiltonian((0.0, 1.0, 3.0))
        rng = np.random.default_rng(41)
        minimum = free_energy(gibbs_state(H, 1.0), H, 1.0)
        for _ in range(1000):
            assert minimum <= free_energy(random_density_matrix(3, rng), H, 1.0) + 1e-12

    def test_entropy_is_unitarily_invariant(self):
        """S(U rho U^dag) = S(rho)."""
        rng = np.random.default_rng(42)
        for _ in range(200):
            rho = random_density_matrix(4, rng).matrix
            U = random_unitary(4, rng)
            assert von_neumann_entropy(U @ rho @ U.conj().T) == pytest.approx(
                von_neumann_entropy(rho), abs=1e-10)
