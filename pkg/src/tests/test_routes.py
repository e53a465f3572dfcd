"""
Integration tests for API routes.
"""
import math

from fastapi.testclient import TestClient
from src.main import app

client = TestClient(app)

LN2 = math.log(2.0)
KAPPA = math.sqrt(30.0) / 7.0


def qubit_payload(q, xi, beta=1.0, mode="to"):
    """rho = (0.9, chi = 0.29) on the ln 2 qubit."""
    return {
        "energies": [0.0, LN2],
        "beta": beta,
        "mode": mode,
        "rho": {"re": [[0.9, 0.29], [0.29, 0.1]]},
        "sigma": {"re": [[q, xi], [xi, 1 - q]]},
    }


def channel_payload(alpha):
    """The worked-example qubit channel with damping ``alpha``."""
    return {
        "energies": [0.0, LN2],
        "beta": 1.0,
        "G": [[6 / 7, 1 / 7], [2 / 7, 5 / 7]],
        "alpha": {"re": [[1.0, alpha], [alpha, 1.0]]},
    }


class TestTransitionEndpoint:
    """Tests for /transitions/check endpoint."""

    def test_check_feasible(self):
        """Coherence within the bound."""
        response = client.post("/transitions/check", json=qubit_payload(0.8, 0.2))
        assert response.status_code == 200
        data = response.json()
        assert data["verdict"] == "feasible"
        assert data["case"] == "a"
        assert abs(data["kappa"] - KAPPA) < 1e-9

    def test_check_infeasible(self):
        """Coherence beyond the bound is a verdict, not an error."""
        response = client.post("/transitions/check", json=qubit_payload(0.8, 0.25))
        assert response.status_code == 200
        assert response.json()["verdict"] == "infeasible"

    def test_check_negative_beta(self):
        """beta < 0 names the field."""
        response = client.post("/transitions/check", json=qubit_payload(0.8, 0.2, beta=-1.0))
        assert response.status_code == 422
        assert response.json()["field"] == "beta"

    def test_check_not_a_state(self):
        """Trace two is rejected with the violated invariant."""
        payload = qubit_payload(0.8, 0.2)
        payload["sigma"] = {"re": [[1.5, 0.0], [0.0, 0.5]]}
        response = client.post("/transitions/check", json=payload)
        assert response.status_code == 422
        assert "trace" in response.text

    def test_check_unknown_mode(self):
        """Only thermal and enhanced thermal operations."""
        response = client.post("/transitions/check", json=qubit_payload(0.8, 0.2, mode="gpo"))
        assert response.status_code == 422


class TestKappaEndpoint:
    """Tests for /kappa endpoint."""

    def test_kappa(self):
        """Worked example."""
        response = client.post("/kappa", json={"p": 0.9, "q": 0.8, "beta": 1.0,
                                               "energy_gap": LN2})
        assert response.status_code == 200
        assert abs(response.json()["kappa"] - KAPPA) < 1e-9

    def test_kappa_infeasible(self):
        """Thermo-majorization failure is a conflict."""
        response = client.post("/kappa", json={"p": 0.9, "q": 0.95, "beta": 1.0,
                                               "energy_gap": LN2})
        assert response.status_code == 409
        assert "thermo-majorization" in response.text

    def test_kappa_bad_gap(self):
        """The energy gap must be positive."""
        response = client.post("/kappa", json={"p": 0.9, "q": 0.8, "beta": 1.0,
                                               "energy_gap": 0.0})
        assert response.status_code == 422


class TestCurveEndpoint:
    """Tests for /curve endpoint."""

    def test_curve(self):
        """Breakpoints end at (Z, 1)."""
        response = client.post("/curve", json={"populations": [0.9, 0.1],
                                               "energies": [0.0, LN2], "beta": 1.0})
        assert response.status_code == 200
        data = response.json()
        assert abs(data["Z"] - 1.5) < 1e-12
        assert data["ys"][-1] == 1.0
        assert data["beta_order"] == [0, 1]

    def test_curve_dimension_mismatch(self):
        """Populations and energies must agree."""
        response = client.post("/curve", json={"populations": [0.5, 0.5],
                                               "energies": [0.0, 1.0, 3.0], "beta": 1.0})
        assert response.status_code == 422


class TestChannelEndpoint:
    """Tests for /channels/apply endpoint."""

    def test_apply_optimal_channel(self):
        """Three Kraus operators, covariant, Gibbs preserved."""
        response = client.post("/channels/apply", json={
            "channel": channel_payload(KAPPA),
            "rho": {"re": [[0.9, 0.29], [0.29, 0.1]]},
        })
        assert response.status_code == 200
        data = response.json()
        assert abs(data["sigma"]["re"][0][0] - 0.8) < 1e-12
        assert data["kraus_rank"] == 3
        assert data["covariant"] is True
        assert data["gibbs_fixed_point_error"] < 1e-12

    def test_apply_excess_coherence(self):
        """A non-positive damping matrix is not a channel."""
        response = client.post("/channels/apply", json={
            "channel": channel_payload(0.9),
            "rho": {"re": [[0.9, 0.29], [0.29, 0.1]]},
        })
        assert response.status_code == 422
        assert "not positive" in response.text
        data = response.json()
        assert data["eigenvalue"] < 0
        assert len(data["witness"]["re"]) == 4


class TestQuasicycleEndpoint:
    """Tests for /quasicycle endpoint."""

    def test_quasicycle(self):
        """Perturbed probabilities and admissible range."""
        response = client.post("/quasicycle", json={"e21": 1.0, "e20": 2.0, "beta": LN2,
                                                    "epsilon": 0.01})
        assert response.status_code == 200
        data = response.json()
        assert abs(data["eps_max"] - 0.2) < 1e-12
        assert abs(data["G"][1][2] - 0.475) < 1e-12
        assert data["nogo"] is None

    def test_quasicycle_wrong_gap_order(self):
        """E2 - E1 must be below E2 - E0."""
        response = client.post("/quasicycle", json={"e21": 2.0, "e20": 1.0, "beta": 1.0})
        assert response.status_code == 422

    def test_quasicycle_inadmissible_epsilon(self):
        """Epsilon beyond the admissible range."""
        response = client.post("/quasicycle", json={"e21": 1.0, "e20": 2.0, "beta": LN2,
                                                    "epsilon": 0.3})
        assert response.status_code == 422
        assert "admissible" in response.text
        data = response.json()
        assert data["epsilon"] == 0.3
        assert abs(data["eps_max"] - 0.2) < 1e-12


class TestHealthCheckEndpoint:  # pylint: disable=too-few-public-methods
    """Tests for /healthcheck endpoint."""

    def test_healthcheck_success(self):
        """Latency is reported per analysis kind."""
        client.post("/curve", json={"populations": [0.9, 0.1], "energies": [0.0, LN2],
                                    "beta": 1.0})
        response = client.get("/healthcheck")
        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "ok"
        assert "curve" in data["latency_ms"]
        assert data["latency_ms"]["curve"]["avg"] is not None


class TestRootEndpoint:  # pylint: disable=too-few-public-methods
    """Tests for root endpoint."""

    def test_root_endpoint(self):
        """Test root endpoint."""
        response = client.get("/")
        assert response.status_code == 200
        data = response.json()
        assert data["message"] == "Thermal Coherence Bounds API"
        assert "docs" in data
        assert data["tolerances"]["psd"] > 0
        assert "mode" in data["bath"]
