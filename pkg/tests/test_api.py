import httpx
import pytest

from app.main import app

MIXED_QUBIT = {"dim": 2, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
KET_ZERO = {"dim": 2, "entries": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
BELL = {
    "dim": 4,
    "split": [2, 2],
    "entries": [
        [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
        [[0, 0], [0, 0], [0, 0], [0, 0]],
        [[0, 0], [0, 0], [0, 0], [0, 0]],
        [[0.5, 0], [0, 0], [0, 0], [0.5, 0]],
    ],
}


def _client():
    return httpx.AsyncClient(transport=httpx.ASGITransport(app=app), base_url="http://test")


@pytest.mark.asyncio
async def test_health():
    async with _client() as client:
        response = await client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"


@pytest.mark.asyncio
async def test_entropy_endpoint():
    async with _client() as client:
        response = await client.post("/api/entropy", json={"matrix": MIXED_QUBIT, "tsallis_q": [3]})
        assert response.status_code == 200
        body = response.json()
        assert body["logical_entropy"] == pytest.approx(0.5)
        assert body["tsallis"]["3"] == pytest.approx(0.375)
        assert body["spectrum"] == pytest.approx([0.5, 0.5])


@pytest.mark.asyncio
async def test_entropy_marginals():
    async with _client() as client:
        response = await client.post("/api/entropy", json={"matrix": BELL, "marginals": True})
        assert response.status_code == 200
        assert response.json()["marginals"] == pytest.approx({"A": 0.5, "B": 0.5})


@pytest.mark.asyncio
async def test_entropy_invalid_state_is_422():
    bad = {"dim": 2, "entries": [[[0.5, 0], [0, 0]], [[0, 0], [0.4, 0]]]}
    async with _client() as client:
        response = await client.post("/api/entropy", json={"matrix": bad})
        assert response.status_code == 422
        assert "trace" in response.json()["detail"]


@pytest.mark.asyncio
async def test_entropy_malformed_body_is_422():
    async with _client() as client:
        response = await client.post("/api/entropy", json={"matrix": {"dim": 2}})
        assert response.status_code == 422


@pytest.mark.asyncio
async def test_divergence_endpoint():
    async with _client() as client:
        response = await client.post("/api/divergence", json={"rho": KET_ZERO, "sigma": MIXED_QUBIT})
        assert response.status_code == 200
        body = response.json()
        assert body["divergence"] == pytest.approx(0.25)
        assert body["cross"] - body["half_entropy_rho"] - body["half_entropy_sigma"] == pytest.approx(0.25)


@pytest.mark.asyncio
async def test_random_endpoint_is_deterministic():
    async with _client() as client:
        first = await client.post("/api/random", json={"dim": 3, "rank": 2, "seed": 17})
        second = await client.post("/api/random", json={"dim": 3, "rank": 2, "seed": 17})
        assert first.status_code == 200
        assert first.json() == second.json()
        assert first.json()["dim"] == 3


@pytest.mark.asyncio
async def test_random_endpoint_rank_error():
    async with _client() as client:
        response = await client.post("/api/random", json={"dim": 2, "rank": 3})
        assert response.status_code == 422


@pytest.mark.asyncio
async def test_check_job_lifecycle():
    async with _client() as client:
        response = await client.post("/api/check", json={"theorem": "klein", "config": {"trials": 3, "seed": 1}})
        assert response.status_code == 200
        job_id = response.json()["job_id"]

        status = await client.get(f"/api/check/status/{job_id}")
        assert status.status_code == 200
        job = status.json()
        assert job["status"] == "completed"
        assert job["passed"] is True
        assert job["reports"][0]["theorem"] == "klein"
        assert job["steps"]["klein"]["status"] == "completed"


@pytest.mark.asyncio
async def test_check_unknown_theorem():
    async with _client() as client:
        response = await client.post("/api/check", json={"theorem": "bogus"})
        assert response.status_code == 422
        assert "klein" in response.json()["detail"]


@pytest.mark.asyncio
async def test_check_status_unknown_job():
    async with _client() as client:
        response = await client.get("/api/check/status/does-not-exist")
        assert response.status_code == 404
