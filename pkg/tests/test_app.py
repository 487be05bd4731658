from __future__ import annotations

import pytest

import app as app_module
from action import ActionError
from app import app


@pytest.fixture
def client():
    app.config['TESTING'] = True
    return app.test_client()


def test_health(client) -> None:
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.get_json()["status"] == "ok"


def test_types(client) -> None:
    types = [t["type"] for t in client.get("/api/types").get_json()["types"]]
    assert types[0] == 'A3'
    assert 'E8' in types


def test_info(client) -> None:
    data = client.get("/api/D5/info").get_json()
    assert data["type"] == 'D5'
    assert data["n"] == 4
    assert data["coxeter_order"] == 8
    assert data["indecomposables"] == 20


@pytest.mark.parametrize("name", ['B3', 'A4', 'nonsense'])
def test_unknown_type(client, name: str) -> None:
    response = client.get(f"/api/{name}/info")
    assert response.status_code == 404
    assert "error" in response.get_json()


def test_ar(client) -> None:
    data = client.get("/api/A3/ar").get_json()
    assert data["layer"] == 'module'
    assert len(data["objects"]) == 6
    cluster = client.get("/api/A3/ar?layer=cluster").get_json()
    assert len(cluster["objects"]) > 6


def test_ar_bad_layer(client) -> None:
    assert client.get("/api/A3/ar?layer=stable").status_code == 400


def test_svg(client) -> None:
    response = client.get("/api/A7/svg")
    assert response.status_code == 200
    assert response.mimetype == "image/svg+xml"
    assert b"<svg" in response.data


def test_mutate(client) -> None:
    data = client.get("/api/A7/mutate?word=0,1").get_json()
    assert data["word"] == [0, 1]
    assert len(data["seeds"]) == 3
    assert len(data["C"]["rows"]) == 2


def test_mutate_bad_word(client) -> None:
    assert client.get("/api/A7/mutate?word=0,2").status_code == 400


def test_act(client) -> None:
    response = client.get("/api/A7/act", query_string={"r": "w6", "object": "[0 2/1]"})
    assert response.status_code == 200
    data = response.get_json()
    assert [item["multiplicity"] for item in data["result"]] == [1]


def test_act_requires_arguments(client) -> None:
    assert client.get("/api/A7/act?r=w2").status_code == 400
    assert client.get("/api/A7/act", query_string={"object": "[0 2/1]"}).status_code == 400


def test_act_bad_element(client) -> None:
    response = client.get("/api/A7/act", query_string={"r": "w99", "object": "[0 2/1]"})
    assert response.status_code == 400


def test_act_unknown_object(client) -> None:
    response = client.get("/api/A7/act", query_string={"r": "w2", "object": "[9 9/9]"})
    assert response.status_code == 400


def test_action_error_is_unprocessable(client, monkeypatch) -> None:
    def refuse(model, r, x):
        raise ActionError("outside the column")

    monkeypatch.setattr(app_module, 'act', refuse)
    response = client.get("/api/A7/act", query_string={"r": "w2", "object": "[0 2/1]"})
    assert response.status_code == 422
    assert response.get_json()["error"] == "outside the column"


def test_generators(client) -> None:
    data = client.get("/api/A3/generators").get_json()
    sets = data["generator_sets"]
    assert [s["gamma"] for s in sets] == ['Gamma(0,1)', 'Gamma(2,1)']
    assert all(s["generates"] and s["tau_closed"] for s in sets)


def test_tilting(client) -> None:
    data = client.get("/api/A7/tilting").get_json()
    assert data["gamma"] == 'Gamma(0,1)'
    assert len(data["tilting"]) == 10
    data = client.get("/api/A7/tilting?object=S1").get_json()
    assert data["object"] == "Σ1"
    assert len(data["complements"]) == 2


def test_tilting_unknown_gamma(client) -> None:
    assert client.get("/api/A7/tilting?gamma=Gamma(9,9)").status_code == 400


def test_gvectors(client) -> None:
    rows = client.get("/api/A7/gvectors").get_json()["gvectors"]
    assert len(rows) == 10
    assert all(row["agrees"] for row in rows)


def test_verify_golden(client) -> None:
    response = client.post("/api/verify", json={"golden": "appendix"})
    assert response.status_code == 200
    data = response.get_json()
    assert len(data["checks"]) == 3
    assert all(c["passed"] for c in data["checks"])


def test_verify_rejects_empty_selection(client) -> None:
    response = client.post("/api/verify", json={})
    assert response.status_code == 400
    assert response.get_json()["error"] == "invalid input"


def test_verify_requires_json(client) -> None:
    response = client.post("/api/verify", data="golden", content_type="text/plain")
    assert response.status_code == 400
