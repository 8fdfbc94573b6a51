import json
from datetime import datetime

import pytest
from fastapi.testclient import TestClient

from selftrial import export_trial
from selftrial.api import create_app

from test_model import minimal_draft


class Clock:
    def __init__(self, text="2024-03-01T12:00"):
        self.current = datetime.strptime(text, "%Y-%m-%dT%H:%M")

    def __call__(self):
        return self.current

    def set(self, text):
        self.current = datetime.strptime(text, "%Y-%m-%dT%H:%M")


@pytest.fixture
def clock():
    return Clock()


@pytest.fixture
def client(tmp_path, clock):
    app = create_app(tmp_path / "store", clock=clock)
    return TestClient(app)


def install_running(client):
    response = client.post("/trial", content=export_trial(minimal_draft()))
    assert response.status_code == 201, response.text
    response = client.post("/trial/start", json={"startDate": "2024-03-01"})
    assert response.status_code == 200, response.text
    return response.json()


class TestLibrary:
    def test_get_library(self, client):
        doc = client.get("/library").json()
        assert len(doc["goals"]) == 4
        assert len(doc["interventions"]) == 12


class TestTasks:
    def test_sorted_tasks(self, client):
        install_running(client)
        tasks = client.get("/trial/tasks", params={"date": "2024-03-01"}).json()
        assert [t["time"] for t in tasks] == ["08:00", "20:00"]

    def test_out_of_window(self, client):
        install_running(client)
        response = client.get("/trial/tasks", params={"date": "2024-06-01"})
        assert response.status_code == 400
        assert response.json()["code"] == "DAY_OUT_OF_RANGE"

    def test_draft_only_store(self, client):
        client.post("/trial", content=export_trial(minimal_draft()))
        response = client.get("/trial/tasks")
        assert response.status_code == 404
        assert response.json()["code"] == "NOT_RUNNING"


class TestMutations:
    def test_start_returns_running(self, client):
        doc = install_running(client)
        assert doc["stage"] == "running"
        assert doc["startDate"] == "2024-03-01"

    def test_log_out_of_range_leaves_store_unchanged(self, client):
        install_running(client)
        before = client.get("/trial/export").text
        response = client.post(
            "/trial/logs",
            json={"measureId": "m1", "timestamp": "2024-03-02T08:00", "value": {"type": "scale", "value": 11}},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "OUT_OF_RANGE"
        assert client.get("/trial/export").text == before

    def test_log_and_summary(self, client):
        install_running(client)
        for day, value in [(1, 2), (2, 4), (8, 6), (9, 8)]:
            response = client.post(
                "/trial/logs",
                json={
                    "measureId": "m1",
                    "timestamp": f"2024-03-{day + 1:02d}T08:00",
                    "value": {"type": "scale", "value": value},
                },
            )
            assert response.status_code == 200, response.text
        summary = client.get("/trial/summary/m1").json()
        assert [s["count"] for s in summary["summaries"]] == [2, 2, 0, 0]
        assert summary["summaries"][0]["mean"] == 3.0
        assert summary["comparison"]["difference"] == -4.0
        assert len(summary["series"]) == 4

    def test_check_nonexistent_task(self, client):
        install_running(client)
        response = client.post(
            "/trial/checks",
            json={"componentId": "ia", "date": "2024-03-08", "time": "20:00", "completed": True},
        )
        assert response.status_code == 404
        assert response.json()["code"] == "NO_SUCH_TASK"

    def test_check_task_shows_done(self, client):
        install_running(client)
        response = client.post(
            "/trial/checks",
            json={"componentId": "ia", "date": "2024-03-01", "time": "20:00", "completed": True},
        )
        assert response.status_code == 200
        tasks = client.get("/trial/tasks", params={"date": "2024-03-01"}).json()
        assert [t["done"] for t in tasks] == [False, True]


class TestSummaryErrors:
    def test_unknown_measure(self, client):
        install_running(client)
        response = client.get("/trial/summary/bogus")
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_MEASURE"

    def test_no_data_summary(self, client):
        install_running(client)
        summary = client.get("/trial/summary/m1").json()
        assert all(s["count"] == 0 and "mean" not in s for s in summary["summaries"])
        assert "difference" not in summary["comparison"]


class TestImportExportRestart:
    def test_export_import_round_trip(self, client, tmp_path, clock):
        install_running(client)
        exported = client.get("/trial/export").text
        other = TestClient(create_app(tmp_path / "other", clock=clock))
        response = other.post("/trial/import", content=exported)
        assert response.status_code == 200, response.text
        assert other.get("/trial/export").text == exported

    def test_import_invariant_violation_reports_path(self, client):
        doc = json.loads(export_trial(minimal_draft()))
        doc["measures"][0]["input"] = {"type": "scale", "min": 5, "max": 5}
        response = client.post("/trial/import", content=json.dumps(doc))
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "INVARIANT_VIOLATION"
        assert body["path"] == "measures[0].input"

    def test_restart_after_finish(self, client, clock):
        install_running(client)
        clock.set("2024-04-15T12:00")
        response = client.post("/trial/restart")
        assert response.status_code == 200, response.text
        assert response.json()["stage"] == "draft"
