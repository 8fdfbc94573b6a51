"""Loopback HTTP service exposing the engine to the browser UI.

The service adds no domain logic: every handler loads the store, calls
engine functions, persists, and serializes through the same view helpers
the CLI uses. Mutations are serialized behind a process-wide lock. Error
bodies are ``{code, message, path?}`` with the engine's stable error names.
"""

from __future__ import annotations

import os
import threading
from datetime import date, datetime
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import store as store_mod
from .analysis import adherence
from .errors import DomainError
from .library import library_to_json
from .model import (
    ListInput,
    import_trial,
    ListValue,
    NumericInput,
    NumericValue,
    ScaleValue,
    Stage,
    Trial,
    export_trial,
    parse_timestamp,
    trial_from_json,
    trial_to_json,
)
from .tasks import progress
from .views import measure_summary_view, tasks_view

_STATUS = {
    "NO_TRIAL": 404,
    "NOT_RUNNING": 404,
    "TRIAL_NOT_RUNNING": 409,
    "UNKNOWN_MEASURE": 404,
    "NO_SUCH_TASK": 404,
    "TRIAL_EXISTS": 409,
    "ALREADY_STARTED": 409,
    "NOT_FINISHED": 409,
    "NOT_STARTED": 409,
    "STORE_LOCKED": 409,
}


def create_app(
    store_dir: Path,
    clock: Callable[[], datetime] | None = None,
    static_dir: Path | None = None,
) -> FastAPI:
    """Build the service bound to one store directory.

    ``clock`` injects a frozen time source for tests; requests may also pass
    an explicit date where it matters (e.g. /trial/tasks?date=).
    """
    now = clock or datetime.now
    lock = threading.Lock()
    app = FastAPI(title="selftrial local service")

    def load() -> store_mod.Store:
        store = store_mod.load(store_dir)
        refreshed = store_mod.refresh_store(store, now().date())
        if refreshed != store:
            store_mod.save(refreshed, store_dir)
        return refreshed

    def save(store: store_mod.Store) -> None:
        store_mod.save(store, store_dir)

    def active(store: store_mod.Store) -> Trial:
        if store.active_trial is None:
            raise DomainError("NO_TRIAL", "no active trial")
        return store.active_trial

    def running(store: store_mod.Store) -> Trial:
        trial = active(store)
        if trial.stage is not Stage.RUNNING:
            raise DomainError("NOT_RUNNING", "the active trial is not running")
        return trial

    @app.exception_handler(DomainError)
    async def on_domain_error(_request: Request, exc: DomainError):
        body = {"code": exc.code, "message": exc.message}
        if exc.path is not None:
            body["path"] = exc.path
        return JSONResponse(status_code=_STATUS.get(exc.code, 400), content=body)

    @app.get("/library")
    def get_library():
        return library_to_json()

    @app.get("/trial")
    def get_trial():
        with lock:
            store = load()
        trial = store.active_trial or (store.archive[-1] if store.archive else None)
        if trial is None:
            raise DomainError("NO_TRIAL", "no trial")
        return trial_to_json(trial)

    @app.post("/trial", status_code=201)
    async def create_trial(request: Request):
        doc = await request.json()
        trial = trial_from_json(doc)
        if trial.stage is not Stage.DRAFT:
            raise DomainError("NOT_A_DRAFT", "POST /trial only accepts drafts; use /trial/import")
        with lock:
            store = load()
            if store.active_trial is not None:
                raise DomainError("TRIAL_EXISTS", "an active trial already exists")
            save(store_mod.Store(active_trial=trial, archive=store.archive))
        return trial_to_json(trial)

    @app.patch("/trial")
    async def update_trial(request: Request):
        doc = await request.json()
        trial = trial_from_json(doc)
        if trial.stage is not Stage.DRAFT:
            raise DomainError("NOT_A_DRAFT", "only drafts can be updated")
        with lock:
            store = load()
            current = active(store)
            if current.stage is not Stage.DRAFT:
                raise DomainError("ALREADY_STARTED", "the active trial is not a draft")
            save(store_mod.Store(active_trial=trial, archive=store.archive))
        return trial_to_json(trial)

    @app.post("/trial/start")
    async def start(request: Request):
        body = await request.json() if int(request.headers.get("content-length") or 0) else {}
        start_date = date.fromisoformat(body["startDate"]) if "startDate" in body else now().date()
        with lock:
            store = load()
            trial = store_mod.start_trial(active(store), start_date)
            save(store_mod.Store(active_trial=trial, archive=store.archive))
        return trial_to_json(trial)

    @app.get("/trial/tasks")
    def get_tasks(request: Request):
        day_text = request.query_params.get("date")
        with lock:
            store = load()
        trial = running(store)
        day = date.fromisoformat(day_text) if day_text else now().date()
        return tasks_view(trial, day)

    @app.post("/trial/checks")
    async def post_check(request: Request):
        body = await request.json()
        with lock:
            store = load()
            trial = store_mod.mark_task(
                running(store),
                body["componentId"],
                date.fromisoformat(body["date"]),
                body["time"],
                bool(body.get("completed", True)),
            )
            save(store_mod.Store(active_trial=trial, archive=store.archive))
        return {"ok": True}

    @app.post("/trial/logs")
    async def post_log(request: Request):
        body = await request.json()
        with lock:
            store = load()
            trial = running(store)
            measure = trial.find_measure(body.get("measureId", ""))
            if measure is None:
                raise DomainError("UNKNOWN_MEASURE", f"no measure with id {body.get('measureId')!r}")
            raw = body.get("value", {})
            if isinstance(measure.input, NumericInput):
                value = NumericValue(value=float(raw.get("value")))
            elif isinstance(measure.input, ListInput):
                value = ListValue(index=int(raw.get("index")))
            else:
                value = ScaleValue(value=int(raw.get("value")))
            timestamp = parse_timestamp(body["timestamp"]) if "timestamp" in body else now()
            trial = store_mod.log_measurement(trial, measure.id, timestamp, value)
            save(store_mod.Store(active_trial=trial, archive=store.archive))
        entry = trial.logs.measurements[-1]
        return {
            "measureId": entry.measure_id,
            "timestamp": entry.timestamp.strftime("%Y-%m-%dT%H:%M"),
            "value": body.get("value"),
        }

    @app.get("/trial/summary/{measure_id}")
    def get_summary(measure_id: str):
        with lock:
            store = load()
        trial = store.active_trial or (store.archive[-1] if store.archive else None)
        if trial is None:
            raise DomainError("NO_TRIAL", "no trial")
        if trial.stage is Stage.DRAFT:
            raise DomainError("NOT_STARTED", "the trial has not been started")
        return measure_summary_view(trial, measure_id)

    @app.get("/trial/progress")
    def get_progress():
        with lock:
            store = load()
        trial = store.active_trial or (store.archive[-1] if store.archive else None)
        if trial is None:
            raise DomainError("NO_TRIAL", "no trial")
        today = now().date()
        return {**progress(trial, today), "adherence": adherence(trial, today)}

    @app.get("/trial/export")
    def get_export():
        with lock:
            store = load()
        trial = store.active_trial or (store.archive[-1] if store.archive else None)
        if trial is None:
            raise DomainError("NO_TRIAL", "nothing to export")
        return PlainTextResponse(export_trial(trial), media_type="application/json")

    @app.post("/trial/import")
    async def post_import(request: Request):
        text = (await request.body()).decode("utf-8")
        trial = import_trial(text)
        with lock:
            store = load()
            if trial.stage is Stage.FINISHED:
                save(store_mod.Store(active_trial=store.active_trial, archive=store.archive + (trial,)))
            else:
                if store.active_trial is not None:
                    raise DomainError("TRIAL_EXISTS", "an active trial already exists")
                save(store_mod.Store(active_trial=trial, archive=store.archive))
        return trial_to_json(trial)

    @app.post("/trial/restart")
    def post_restart():
        with lock:
            store = load()
            if store.active_trial is not None:
                raise DomainError("TRIAL_EXISTS", "finish or remove the active trial first")
            if not store.archive:
                raise DomainError("NOT_FINISHED", "no finished trial to restart from")
            draft = store_mod.restart_from(store.archive[-1])
            save(store_mod.Store(active_trial=draft, archive=store.archive))
        return trial_to_json(draft)

    if static_dir is None and os.environ.get("SELFTRIAL_STATIC"):
        static_dir = Path(os.environ["SELFTRIAL_STATIC"])
    if static_dir is not None and static_dir.is_dir():
        app.mount("/app", StaticFiles(directory=static_dir, html=True), name="app")

    return app


def serve(store_dir: Path, host: str = "127.0.0.1", port: int = 8722, static_dir: Path | None = None) -> None:
    """Run the service on loopback (the default keeps data on-device)."""
    import uvicorn

    uvicorn.run(create_app(store_dir, static_dir=static_dir), host=host, port=port)
