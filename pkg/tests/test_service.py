"""HTTP layer: wire format, endpoints, and error mapping."""
import numpy as np
import pytest
from fastapi.testclient import TestClient
from hypothesis import given, settings
from hypothesis import strategies as st

from nlsoliton.service.app import create_app
from nlsoliton.service.models import ConfigModel, format_complex, parse_complex

SMALL_GRID = {"x0": -3.0, "x1": 3.0, "nx": 9, "t0": -1.0, "t1": 1.0, "nt": 5}


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_format_complex_canonical():
    assert format_complex(0.4 - 0.3j) == "0.40000000000000002-0.29999999999999999i"
    assert parse_complex(format_complex(0.4 - 0.3j)) == 0.4 - 0.3j


@given(st.complex_numbers(allow_nan=False, allow_infinity=False,
                          min_magnitude=0, max_magnitude=1e12))
@settings(deadline=None, max_examples=100)
def test_complex_wire_roundtrip(z):
    assert parse_complex(format_complex(z)) == z


@pytest.mark.parametrize("text,value", [
    ("1+2i", 1 + 2j), ("1-2j", 1 - 2j), ("3", 3 + 0j), ("-2.5e-3i", -2.5e-3j),
    ("i", 1j), ("-i", -1j), ("1e2+1e-2i", 100 + 0.01j), ("0.5", 0.5),
])
def test_parse_complex_forms(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects_garbage():
    with pytest.raises(ValueError):
        parse_complex("")
    with pytest.raises(ValueError):
        parse_complex("1+2")  # trailing sign block without imaginary suffix


def test_config_model_roundtrip():
    model = ConfigModel(n=1, lambdas=["0.4-0.3i"], gammas=["5.1i", "0.1i"],
                        kappa=3.0, alpha=1.2, delta=0.2)
    cfg = model.to_config()
    assert cfg.lambdas == (0.4 - 0.3j,)
    back = ConfigModel.from_config(cfg)
    assert back.to_config() == cfg


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_generate_table_shape(client):
    resp = client.post("/generate", json={"preset": "nonlocal-one",
                                          "grid": SMALL_GRID})
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"][:2] == ["x", "t"]
    assert len(body["rows"]) == 9 * 5
    row = body["rows"][0]
    # Complex cells arrive as parseable strings.
    assert abs(parse_complex(row[2])) > 0


def test_generate_deterministic(client):
    payload = {"preset": "nonlocal-two", "grid": SMALL_GRID}
    a = client.post("/generate", json=payload).json()
    b = client.post("/generate", json=payload).json()
    assert a == b


def test_verify_passes_for_preset(client):
    resp = client.post("/verify", json={"preset": "nonlocal-one",
                                        "grid": SMALL_GRID, "system": "all"})
    body = resp.json()
    assert resp.status_code == 200
    assert body["passed"] is True
    assert all(c["tolerance"] > 0 for c in body["checks"])
    names = {c["name"] for c in body["checks"]}
    assert {"ech-constraint", "hirota-residual-q",
            "zero-curvature-residual"} <= names


def test_verify_invalid_config_is_422(client):
    resp = client.post("/verify", json={
        "config": {"n": 1, "lambdas": ["0.5i"], "gammas": ["0", "0"],
                   "kappa": 1.0, "alpha": 1.0, "delta": 0.1}})
    assert resp.status_code == 422
    assert "pairing degeneracy" in resp.json()["detail"]


def test_verify_unknown_system_is_422(client):
    resp = client.post("/verify", json={"preset": "nonlocal-one",
                                        "system": "nonsense"})
    assert resp.status_code == 422


def test_unknown_preset_is_422(client):
    resp = client.post("/generate", json={"preset": "missing"})
    assert resp.status_code == 422


def test_trajectory_reference(client):
    resp = client.post("/trajectory", json={"soliton": "local-periodic"})
    body = resp.json()
    assert resp.status_code == 200
    assert body["classification"] == "recurrent"
    assert body["table"]["columns"] == ["t", "m1", "m2", "m3",
                                        "l1", "l2", "l3", "singular"]


def test_trajectory_spectral_config(client):
    resp = client.post("/trajectory", json={"preset": "nonlocal-one",
                                            "samples": 64, "t1": 5.0})
    assert resp.status_code == 200
    assert len(resp.json()["table"]["rows"]) == 64


def test_trajectory_requires_a_target(client):
    assert client.post("/trajectory", json={}).status_code == 422


def test_sweep_aggregates_and_flags_invalid_values(client):
    resp = client.post("/sweep", json={
        "preset": "nonlocal-one", "parameter": "lambda0",
        "values": ["0.5-0.2i", "0.5i"], "system": "hirota",
        "grid": SMALL_GRID})
    body = resp.json()
    assert resp.status_code == 200
    assert body["entries"][0]["passed"] is True
    assert body["entries"][1]["passed"] is False
    assert "pairing degeneracy" in body["entries"][1]["error"]
    assert body["passed"] is False


def test_sweep_unknown_parameter_is_422(client):
    resp = client.post("/sweep", json={"preset": "nonlocal-one",
                                       "parameter": "bogus", "values": ["1"]})
    assert resp.status_code == 422


def test_selftest_endpoint(client):
    resp = client.post("/selftest")
    body = resp.json()
    assert resp.status_code == 200
    assert body["passed"] is True
    assert body["n_checks"] >= 12
    assert body["elapsed_seconds"] < 60
