"""
Tests for the web API.
"""

import pytest
from fastapi.testclient import TestClient

from hyperelliptic_class_numbers.api.main import app
from hyperelliptic_class_numbers.api.services.sweep_service import sweep_service


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestService:
    """Tests for health and configuration endpoints."""

    def test_health(self, client):
        response = client.get("/api/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"

    def test_config(self, client):
        body = client.get("/api/config").json()
        assert body["maxSweepCurves"] >= 1
        assert 1 <= body["maxWorkers"] <= 8

    def test_root(self, client):
        assert client.get("/").json()["docs"] == "/docs"


class TestCurves:
    """Tests for single-curve computations."""

    def test_lpoly(self, client):
        response = client.post("/api/curves/lpoly", json={"q": 3, "coefficients": "1,2,0,1"})
        assert response.status_code == 200
        body = response.json()
        assert body["coeffs"] == [1, 3, 3]
        assert body["class_number"] == 7
        assert body["g"] == 1
        assert body["verdict"]["in_weil_interval"]

    def test_lpoly_methods_agree(self, client):
        payload = {"q": 5, "coefficients": "1,0,0,0,1"}
        results = {
            method: client.post("/api/curves/lpoly", json={**payload, "method": method}).json()
            for method in ("newton", "charsum", "pointcount")
        }
        assert len({tuple(body["coeffs"]) for body in results.values()}) == 1

    @pytest.mark.parametrize("payload", [
        {"q": 9, "coefficients": "1,2,0,1"},
        {"q": 3, "coefficients": "1,a,0,1"},
    ])
    def test_lpoly_bad_input(self, client, payload):
        assert client.post("/api/curves/lpoly", json=payload).status_code == 400

    def test_lpoly_schema_violation(self, client):
        response = client.post("/api/curves/lpoly", json={"q": 1, "coefficients": "1,1"})
        assert response.status_code == 422


class TestAnalytics:
    """Tests for moments, characteristic function and bounds."""

    def test_moments(self, client):
        response = client.get("/api/analytics/moments", params={"q": 3, "D": 1, "s": [1]})
        assert response.status_code == 200
        moments = response.json()["moments"]
        assert len(moments) == 1
        assert moments[0]["value"] == pytest.approx(0.132506, abs=1e-6)

    def test_moments_rejects_small_q(self, client):
        assert client.get("/api/analytics/moments", params={"q": 1}).status_code == 422

    def test_moments_reject_composite_q(self, client):
        response = client.get("/api/analytics/moments", params={"q": 9})
        assert response.status_code == 400

    def test_truncation_limit(self, client):
        response = client.get("/api/analytics/moments", params={"q": 3, "D": 100})
        assert response.status_code == 422

    def test_charfun(self, client):
        response = client.get("/api/analytics/charfun", params={"q": 5, "D": 4, "t": [0.0, 1.0]})
        assert response.status_code == 200
        points = response.json()["points"]
        assert points[0]["real"] == pytest.approx(1.0)
        assert points[0]["imag"] == pytest.approx(0.0)
        assert abs(complex(points[1]["real"], points[1]["imag"])) <= 1 + 1e-9

    def test_bounds(self, client):
        body = client.get("/api/analytics/bounds", params={"g": 1, "q": 3}).json()
        assert body["thm1_bound"] == pytest.approx(3.5717, abs=1e-4)
        assert body["weil_lo"] < 3 < body["weil_hi"]


class TestSweeps:
    """Tests for background sweeps."""

    def test_run_status_result(self, client):
        response = client.post("/api/sweeps/run", json={"q": 3, "d": 3})
        assert response.status_code == 200
        start = response.json()
        assert start["curves_total"] == 18
        sweep_id = start["sweep_id"]

        status = client.get(f"/api/sweeps/{sweep_id}/status").json()
        assert status["status"] == "completed"
        assert status["progress"] == pytest.approx(1.0)

        result = client.get(f"/api/sweeps/{sweep_id}/result").json()
        assert result["count"] == 18
        assert result["violations"] == 0
        assert sum(b["count"] for b in result["histogram"]) <= 18
        assert set(result["charfun"]) == {"0.5", "1", "2"}

    def test_sample_mode(self, client):
        response = client.post("/api/sweeps/run", json={
            "q": 7, "d": 6, "mode": "sample", "sample_count": 25, "rng_seed": 3,
        })
        assert response.status_code == 200
        assert response.json()["curves_total"] == 25
        result = client.get(f"/api/sweeps/{response.json()['sweep_id']}/result").json()
        assert result["count"] == 25

    def test_family_too_large(self, client):
        response = client.post("/api/sweeps/run", json={"q": 7, "d": 8})
        assert response.status_code == 422

    def test_unknown_sweep(self, client):
        assert client.get("/api/sweeps/missing/status").status_code == 404
        assert client.get("/api/sweeps/missing/result").status_code == 404
        assert client.post("/api/sweeps/missing/cancel").status_code == 404

    def test_cancel_pending(self, client):
        sweep_id = sweep_service.create_sweep({"q": 3, "d": 4})
        assert client.post(f"/api/sweeps/{sweep_id}/cancel").status_code == 200
        assert client.get(f"/api/sweeps/{sweep_id}/status").json()["status"] == "cancelled"
        assert client.post(f"/api/sweeps/{sweep_id}/cancel").status_code == 400
        assert client.get(f"/api/sweeps/{sweep_id}/result").status_code == 400
