import numpy as np
import pytest
from fastapi.testclient import TestClient

from tfim_coherence.service import (
    GridModel,
    OracleCheckRequest,
    QuenchRequest,
    SpecModel,
    StaticScanRequest,
    SweepRequest,
    app,
    config_hash,
    handle_quench,
    handle_static_scan,
    handle_sweep,
    resolve_preset,
)

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_presets_endpoint():
    r = client.get("/v1/presets")
    assert r.status_code == 200
    data = r.json()
    assert "fig7" in data and data["fig7"]["kind"] == "quench"
    assert "fig8a" in data and data["fig8a"]["kind"] == "sweep"
    assert set(data["fig1"]["config"]) >= {"lambdas", "n_values"}


def test_quench_endpoint_roundtrip():
    payload = {
        "spec": {"n": 21, "lambda1": 1.5, "lambda2": 0.5},
        "grid": {"dt": 0.05, "t_max": 1.0},
    }
    r = client.post("/v1/quench", json=payload)
    assert r.status_code == 200
    body = r.json()
    assert len(body["columns"]["t"]) == 21
    assert body["columns"]["le"][0] == pytest.approx(1.0)
    assert set(body["columns"]) == {"t", "fq", "n_eff", "le", "r_le", "r_fq", "argmax"}
    assert body["metadata"]["config_hash"]
    # same payload, same hash
    r2 = client.post("/v1/quench", json=payload)
    assert r2.json()["metadata"]["config_hash"] == body["metadata"]["config_hash"]


def test_quench_preset_with_override():
    r = client.post("/v1/quench", json={"preset": "fig7", "grid": {"t_max": 0.3, "dt": 0.01}})
    assert r.status_code == 200
    body = r.json()
    assert body["metadata"]["config"]["spec"]["n"] == 201
    assert body["columns"]["t"][-1] == pytest.approx(0.3)


def test_quench_study_preset_schema():
    payload = {
        "study": {
            "sizes": [21, 33],
            "lambda1_values": [1.5],
            "lambda2": 1.0,
            "dt": 0.1,
        }
    }
    r = client.post("/v1/quench", json=payload)
    assert r.status_code == 200
    body = r.json()
    assert body["columns"]["n"] == [21, 33]
    assert all(k in body["fit"] for k in ("slope", "intercept"))


def test_static_scan_endpoint():
    payload = {"lambdas": {"values": [0.0, 0.5, 1.0, 1.5]}, "n_values": [9, 21], "refine": False}
    r = client.post("/v1/static-scan", json=payload)
    assert r.status_code == 200
    body = r.json()
    assert len(body["columns"]["lambda"]) == 8
    assert body["summary"]["lambda_m"].keys() == {"9", "21"}


def test_sweep_endpoint():
    payload = {
        "lambda1": 2.0,
        "lambda2": {"start": 0.5, "stop": 1.5, "step": 0.5},
        "n": 21,
        "t_ltr": 4.0,
        "dt": 0.1,
    }
    r = client.post("/v1/sweep-final", json=payload)
    assert r.status_code == 200
    body = r.json()
    assert len(body["columns"]["lambda2"]) == 3
    assert "transition_estimate" in body["summary"]


def test_unknown_preset_404():
    r = client.post("/v1/quench", json={"preset": "nope"})
    assert r.status_code == 404


def test_invalid_payload_422():
    r = client.post("/v1/quench", json={"spec": {"n": 21, "lambda1": 1.0, "lambda2": 1.0}, "bogus": 1})
    assert r.status_code == 422
    r = client.post("/v1/quench", json={"spec": {"n": -3, "lambda1": 1.0, "lambda2": 1.0}})
    assert r.status_code == 422


def test_missing_fields_400():
    r = client.post("/v1/quench", json={})
    assert r.status_code == 400


def test_sector_mismatch_rejected():
    payload = {
        "spec": {"n": 20, "lambda1": 1.0, "lambda2": 0.5, "sector": "integer"},
        "grid": {"dt": 0.1, "t_max": 1.0},
    }
    r = client.post("/v1/quench", json=payload)
    assert r.status_code == 400


def test_request_models_roundtrip():
    models = [
        QuenchRequest(spec=SpecModel(n=21, lambda1=1.0, lambda2=0.5), grid=GridModel(dt=0.1, t_max=2.0)),
        StaticScanRequest(lambdas={"values": [0.1, 0.2]}, n_values=[9]),
        SweepRequest(lambda1=1.0, lambda2={"start": 0.1, "stop": 1.0, "step": 0.1}, n=9, t_ltr=2.0),
        OracleCheckRequest(quick=True),
    ]
    for model in models:
        assert type(model).model_validate(model.model_dump()) == model


def test_config_hash_ignores_threads():
    base = {"spec": {"n": 9}, "threads": 1}
    other = {"spec": {"n": 9}, "threads": 4}
    assert config_hash(base) == config_hash(other)
    assert config_hash(base) != config_hash({"spec": {"n": 11}, "threads": 1})


def test_preset_resolution_kind_guard():
    with pytest.raises(KeyError):
        resolve_preset(StaticScanRequest(preset="fig7"), StaticScanRequest, ("static-scan",))


def test_handlers_match_endpoints():
    request = QuenchRequest.model_validate(
        {"spec": {"n": 21, "lambda1": 1.5, "lambda2": 0.5}, "grid": {"dt": 0.05, "t_max": 1.0}}
    )
    direct = handle_quench(request)
    via_http = client.post("/v1/quench", json=request.model_dump(exclude_none=True)).json()
    assert direct.columns["fq"] == via_http["columns"]["fq"]
    assert [e.model_dump() for e in direct.events] == via_http["events"]


def test_oracle_check_endpoint_corrupt():
    r = client.post("/v1/oracle-check", json={"quick": True, "corrupt_kernel": True})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is False
    failing = {c["name"] for c in body["checks"] if not c["passed"]}
    assert "kernel-vs-covariance" in failing
