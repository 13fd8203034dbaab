"""HTTP surface: every endpoint, error mapping, payload shapes."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from combcut.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


BELL = {
    "n": 2,
    "gates": [{"name": "h", "wires": [0]}, {"name": "cnot", "wires": [0, 1]}],
}


class TestHealth:
    def test_ok(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"


class TestDecompose:
    def test_named_gate(self, client):
        r = client.post("/decompose", json={"gate": "cz", "mode": "schmidt"})
        assert r.status_code == 200
        body = r.json()
        assert body["term_count"] == 2
        assert len(body["terms"]) == 2

    def test_pauli_mode(self, client):
        r = client.post("/decompose", json={"gate": "cz", "mode": "pauli"})
        assert r.json()["term_count"] == 4
        labels = {t["label"] for t in r.json()["terms"]}
        assert labels == {"II", "IZ", "ZI", "ZZ"}

    def test_matrix_input(self, client):
        cz = [[[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(4)]
              for i in range(4)]
        cz[3][3] = [-1.0, 0.0]
        r = client.post("/decompose", json={"matrix": cz, "mode": "schmidt"})
        assert r.status_code == 200
        assert r.json()["term_count"] == 2

    def test_unknown_gate_is_400(self, client):
        r = client.post("/decompose", json={"gate": "ccz", "mode": "schmidt"})
        assert r.status_code == 400

    def test_both_inputs_rejected(self, client):
        r = client.post("/decompose", json={"gate": "cz", "matrix": [], "mode": "schmidt"})
        assert r.status_code == 400


class TestGadgetize:
    def test_v1(self, client):
        r = client.post("/gadgetize", json={"circuit": BELL, "variant": "v1"})
        assert r.status_code == 200
        body = r.json()
        assert body["circuit"]["n"] == 4
        assert body["circuit"]["ancillas"] == [2, 3]
        assert body["swap_count"] == 4
        assert body["relocated_count"] == 1

    def test_v2(self, client):
        r = client.post("/gadgetize", json={"circuit": BELL, "variant": "v2"})
        assert r.json()["swap_count"] == 8

    def test_bad_variant(self, client):
        r = client.post("/gadgetize", json={"circuit": BELL, "variant": "v3"})
        assert r.status_code == 400


class TestCut:
    def test_comb_cut(self, client):
        comb = {
            "n": 2,
            "gates": [{"name": "h", "wires": [1]}],
            "gaps": [{"position": 1, "wires": [0, 1]}],
            "partition": [0],
        }
        r = client.post(
            "/cut",
            json={
                "comb": comb,
                "gap_gates": [{"name": "cz", "wires": [0, 1]}],
                "mode": "schmidt",
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["term_count"] == 2
        assert body["decomposition"]["mode"] == "schmidt"

    def test_invalid_comb_is_400(self, client):
        comb = {
            "n": 2,
            "gates": [{"name": "cz", "wires": [0, 1]}],
            "gaps": [],
            "partition": [0],
        }
        r = client.post("/cut", json={"comb": comb, "gap_gates": [], "mode": "schmidt"})
        assert r.status_code == 400


class TestSimulate:
    def test_bell_expectation(self, client):
        r = client.post(
            "/simulate",
            json={"circuit": BELL, "input": "00", "observable": "ZZ"},
        )
        assert r.status_code == 200
        assert abs(r.json()["expectation"] - 1.0) < 1e-12

    def test_parse_error_is_400(self, client):
        r = client.post(
            "/simulate",
            json={"circuit": BELL, "input": "00", "observable": "Z?"},
        )
        assert r.status_code == 400


class TestPipeline:
    def test_agreement(self, client):
        r = client.post(
            "/pipeline",
            json={
                "circuit": BELL,
                "input": "00",
                "observable": "ZZ",
                "mode": "schmidt",
            },
        )
        body = r.json()
        assert body["agrees"] is True
        assert body["term_count"] == 2
        assert abs(body["expectation"] - body["dense_expectation"]) < 1e-8

    def test_budget_exceeded_reported_in_body(self, client):
        circuit = {
            "n": 2,
            "gates": [{"name": "cz", "wires": [0, 1]} for _ in range(3)],
        }
        r = client.post(
            "/pipeline",
            json={
                "circuit": circuit,
                "input": "00",
                "observable": "ZI",
                "mode": "pauli",
                "budget": 10,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["budget_exceeded"] is True
        assert body["term_count"] == 64


class TestVerify:
    def test_scaling_suite(self, client):
        r = client.post(
            "/verify",
            json={"suite": "scaling", "params": {"kmax": 3, "mode": "schmidt"}},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["overall"] is True
        assert [row["L"] for row in body["rows"]] == [2, 4, 8]

    def test_unknown_suite_is_400(self, client):
        r = client.post("/verify", json={"suite": "nope"})
        assert r.status_code == 400

    def test_malformed_request_is_422(self, client):
        r = client.post("/verify", json={"sweet": "thm3"})
        assert r.status_code == 422
