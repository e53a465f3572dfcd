"""
Unit tests for the qutrit quasi-cycle, its no-go check and the coherence search.
"""
import numpy as np
import pytest

from src.exceptions import InadmissiblePerturbationError, PreconditionError, ValidationError
from src.thermo.finite_bath_sim import identity_unitary
from src.thermo.quasicycle import (
    FORBIDDEN, QuasiCycleSpec, admissible_epsilon, brute_quasicycle_unitary, conjecture_search,
    default_search_bath, descending_view, gibbs_of, maximize_trace_overlap, nogo_check,
    perturbation_slope, perturbed_probs, quasicycle_effect, quasicycle_probs,
    required_rotation_weight, solve_transition_constraints, vonneumann_trace_bound
)


def cycle_spec(epsilon=0.0):
    """Levels 0, 1, 2 at beta = ln 2: a = 1/2, b = 1/4, c = 1/2."""
    return QuasiCycleSpec(dE21=1.0, dE20=2.0, beta=np.log(2.0), epsilon=epsilon)


class TestSpec:
    """Tests for the cycle parameters."""

    def test_factors(self):
        """Boltzmann factors of the two gaps."""
        spec = cycle_spec()
        assert spec.a == pytest.approx(0.5)
        assert spec.b == pytest.approx(0.25)
        assert spec.c == pytest.approx(0.5)
        assert spec.hamiltonian.levels == pytest.approx((0.0, 1.0, 2.0))

    def test_gap_order(self):
        """E2 - E1 must be the smaller gap."""
        with pytest.raises(ValidationError):
            QuasiCycleSpec(dE21=2.0, dE20=1.0, beta=1.0)

    def test_negative_epsilon(self):
        """Perturbations are probabilities."""
        with pytest.raises(InadmissiblePerturbationError):
            cycle_spec(-0.01)

    def test_from_factors(self):
        """a and b round-trip through the gaps."""
        spec = QuasiCycleSpec.from_factors(0.5, 0.25)
        assert spec.dE21 == pytest.approx(np.log(2.0))
        assert spec.a == pytest.approx(0.5)


class TestProbabilities:
    """Tests for the exact and perturbed cycle matrices."""

    def test_exact_cycle(self):
        """Forbidden entries vanish and the rest are fixed."""
        G = quasicycle_probs(cycle_spec()).G
        np.testing.assert_allclose(G, [[0.75, 0.25, 0.0], [0.0, 0.5, 0.5], [1.0, 0.0, 0.0]],
                                   atol=1e-12)
        for i, j in FORBIDDEN:
            assert G[i, j] == 0.0

    def test_gibbs_preserved(self):
        """(4/7, 2/7, 1/7) is a fixed point for every admissible epsilon."""
        spec = cycle_spec()
        gibbs = gibbs_of(spec)
        np.testing.assert_allclose(gibbs, [4 / 7, 2 / 7, 1 / 7])
        for eps in (0.0, 0.05, 0.2):
            np.testing.assert_allclose(gibbs @ perturbed_probs(spec, eps).G, gibbs, atol=1e-12)

    def test_admissible_range(self):
        """p(1->2) = 1/2 - 5 eps / 2 hits zero at 0.2."""
        spec = cycle_spec()
        assert admissible_epsilon(spec) == pytest.approx(0.2)
        assert perturbed_probs(spec, 0.01).G[1, 2] == pytest.approx(0.475)
        with pytest.raises(InadmissiblePerturbationError):
            perturbed_probs(spec, 0.25)

    def test_slope(self):
        """The largest entry moves at rate 5/2."""
        assert perturbation_slope(cycle_spec()) == pytest.approx(2.5)

    def test_descending_effect(self):
        """(0, 1/2, 1/2) in (2, 1, 0) order maps to (1/4, 3/8, 3/8)."""
        np.testing.assert_allclose(quasicycle_effect(cycle_spec(), (0.0, 0.5, 0.5), "210"),
                                   [0.25, 0.375, 0.375], atol=1e-12)
        G = quasicycle_probs(cycle_spec())
        assert descending_view(G)[0, 2] == pytest.approx(1.0)

    def test_unknown_ordering(self):
        """Only the two level orders exist."""
        with pytest.raises(ValidationError):
            quasicycle_effect(cycle_spec(), (0.2, 0.3, 0.5), "102")

    def test_constraints_fix_the_cycle(self):
        """Row sums, Gibbs columns and four zeros have a unique solution."""
        spec = cycle_spec(0.05)
        solution = solve_transition_constraints(gibbs_of(spec), {ij: 0.05 for ij in FORBIDDEN})
        assert solution.unique
        assert solution.residual < 1e-12
        np.testing.assert_allclose(solution.G, perturbed_probs(spec).G, atol=1e-10)


class TestTraceOverlap:
    """Tests for the unitary trace maximization."""

    def test_bound(self):
        """Singular values pair up in order."""
        assert vonneumann_trace_bound(np.diag([3.0, 1.0]), np.diag([2.0, 1.0])) == pytest.approx(7)

    def test_ascent_reaches_bound(self):
        """Polar ascent converges to the sum of singular value products."""
        rng = np.random.default_rng(2)
        X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Y = rng.normal(size=(4, 4))
        overlap = maximize_trace_overlap(X, Y, rng=rng)
        assert overlap.value == pytest.approx(overlap.bound, rel=1e-6)


class TestNoGo:
    """Tests for the structure of exact realizations."""

    def test_brute_force_unitary(self):
        """Permutations realize the cycle but cannot saturate the bound."""
        spec = cycle_spec()
        bath, layout = default_search_bath(spec)
        assert bath.degeneracies == (3, 6, 12, 24, 48)
        report = nogo_check(brute_quasicycle_unitary(layout), layout, bath, spec)
        assert not report.saturation_possible
        assert report.zero_block_max == 0.0
        assert report.singular_values_binary
        assert report.witness_rung == 2
        assert report.unit_counts == (9, 6)
        assert report.gap == pytest.approx(np.sqrt(54.0) - 6.0)
        assert report.alpha == pytest.approx(0.5)
        assert report.bound == pytest.approx(np.sqrt(0.375))

    def test_wrong_unitary(self):
        """The identity does not realize the cycle."""
        spec = cycle_spec()
        bath, layout = default_search_bath(spec)
        with pytest.raises(PreconditionError) as exc_info:
            nogo_check(identity_unitary(layout), layout, bath, spec)
        assert exc_info.value.quantity.startswith("p(")


class TestSearch:
    """Tests for the seeded coherence search."""

    def test_required_weights(self):
        """Block (12, 6, 3) needs 9 eps on the C pairs."""
        weights = required_rotation_weight((12, 6, 3), 0.1)
        assert weights["C"] == pytest.approx(0.9)
        assert weights["A"] == weights["B"] == weights["D"] == pytest.approx(0.3)

    def test_search_realizes_cycle(self):
        """Every candidate keeps the perturbed populations."""
        spec = cycle_spec(0.05)
        bath, layout = default_search_bath(spec)
        report = conjecture_search(spec, layout, bath, budget=150, seed=3, restarts=2,
                                   trace_every=50)
        assert report.status == "gap"
        assert report.g_error <= 1e-6
        assert report.best_alpha <= report.bound + 1e-9
        assert report.trace[0][0] == 0
        gaps = [gap for _, gap in report.trace]
        assert gaps == sorted(gaps, reverse=True)

    def test_search_is_reproducible(self):
        """The same seed gives the same best coherence."""
        spec = cycle_spec(0.05)
        bath, layout = default_search_bath(spec)
        first = conjecture_search(spec, layout, bath, budget=60, seed=9, restarts=2)
        second = conjecture_search(spec, layout, bath, budget=60, seed=9, restarts=2)
        assert first.best_alpha == second.best_alpha
        assert first.best_restart == second.best_restart

    def test_too_much_perturbation(self):
        """Nine eps above one cannot be seated in the smallest block."""
        spec = cycle_spec(0.15)
        bath, layout = default_search_bath(spec)
        report = conjecture_search(spec, layout, bath, budget=10, restarts=1)
        assert report.status == "infeasible"
        assert report.best_alpha is None
