"""Trial lifecycle operations and on-disk persistence.

The lifecycle is one-way: draft -> running -> finished. A store holds at
most one non-finished trial (the active one) plus an archive of finished
trials. Files live in a single directory: a ``store.json`` manifest and one
interchange document per trial; writes go to a temp file then rename.
"""

from __future__ import annotations

import json
import os
import uuid
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from pathlib import Path

from .errors import DomainError, DraftInvalid, ParseError, StoreError
from .model import (
    Intervention,
    LogBook,
    Measure,
    Measurement,
    MeasurementValue,
    Stage,
    TaskCheck,
    Trial,
    export_trial,
    fresh_id,
    import_trial,
    validate_draft,
    validate_measurement,
)
from .schedule import default_schedule, total_duration
from .tasks import day_index_of, tasks_for_day

MANIFEST_NAME = "store.json"


def finalize_draft(draft: Trial) -> Trial:
    """Complete a draft, filling in the default schedule if none was set."""
    violations = validate_draft(draft)
    if violations:
        raise DraftInvalid(violations)
    if draft.schedule is None:
        return replace(draft, schedule=default_schedule())
    return draft


def start_trial(trial: Trial, start_date: date) -> Trial:
    """Transition a valid draft to the running stage."""
    if trial.stage is not Stage.DRAFT:
        raise DomainError("ALREADY_STARTED", "trial is already started")
    finalized = finalize_draft(trial)
    return replace(finalized, stage=Stage.RUNNING, start_date=start_date, logs=LogBook())


def log_measurement(trial: Trial, measure_id: str, timestamp: datetime, value: MeasurementValue) -> Trial:
    """Append a validated measurement to a running trial."""
    if trial.stage is not Stage.RUNNING:
        raise DomainError("TRIAL_NOT_RUNNING", f"trial stage is {trial.stage.value}")
    measure = trial.find_measure(measure_id)
    if measure is None:
        raise DomainError("UNKNOWN_MEASURE", f"no measure with id {measure_id!r}")
    day_index = (timestamp.date() - trial.start_date).days
    if not (0 <= day_index < total_duration(trial.schedule)):
        raise DomainError("OUT_OF_WINDOW", f"timestamp {timestamp} outside the trial window")
    validate_measurement(measure, value)
    entry = Measurement(measure_id=measure_id, timestamp=timestamp, value=value)
    return trial.with_logs(replace(trial.logs, measurements=trial.logs.measurements + (entry,)))


def mark_task(trial: Trial, component_id: str, day: date, time: str, completed: bool) -> Trial:
    """Record or update a task check-off; idempotent for identical calls."""
    if trial.stage is not Stage.RUNNING:
        raise DomainError("TRIAL_NOT_RUNNING", f"trial stage is {trial.stage.value}")
    day_index = day_index_of(trial, day)
    try:
        day_tasks = tasks_for_day(trial, day_index)
    except DomainError as e:
        raise DomainError("NO_SUCH_TASK", e.message) from e
    if not any(t.component_id == component_id and t.time == time for t in day_tasks):
        raise DomainError("NO_SUCH_TASK", f"no task for {component_id!r} at {time} on {day}")
    check = TaskCheck(component_id=component_id, date=day, time=time, completed=completed)
    kept = tuple(
        c
        for c in trial.logs.task_checks
        if not (c.component_id == component_id and c.date == day and c.time == time)
    )
    return trial.with_logs(replace(trial.logs, task_checks=kept + (check,)))


def _clone_reminders(reminders):
    return tuple(reminders)


def restart_from(previous: Trial) -> Trial:
    """New draft copying a finished trial's setup with fresh ids and no logs."""
    if previous.stage is not Stage.FINISHED:
        raise DomainError("NOT_FINISHED", "only finished trials can be restarted")

    def clone_intervention(i: Intervention | None) -> Intervention | None:
        if i is None:
            return None
        return replace(i, id=fresh_id(), reminders=_clone_reminders(i.reminders))

    return Trial(
        goal=previous.goal,
        design=previous.design,
        intervention_a=clone_intervention(previous.intervention_a),
        intervention_b=clone_intervention(previous.intervention_b),
        measures=tuple(
            replace(m, id=fresh_id(), reminders=_clone_reminders(m.reminders)) for m in previous.measures
        ),
        schedule=previous.schedule,
        start_date=None,
        stage=Stage.DRAFT,
        logs=LogBook(),
    )


def refresh_stage(trial: Trial, today: date) -> Trial:
    """Materialize the finished stage once the trial window has elapsed."""
    if trial.stage is Stage.RUNNING and day_index_of(trial, today) >= total_duration(trial.schedule):
        return replace(trial, stage=Stage.FINISHED)
    return trial


@dataclass(frozen=True)
class Store:
    """The single user's trials: one active (draft/running) plus an archive."""

    active_trial: Trial | None = None
    archive: tuple[Trial, ...] = ()
    storage_path: Path | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.active_trial is not None and self.active_trial.stage is Stage.FINISHED:
            raise DomainError("ACTIVE_FINISHED", "finished trials belong in the archive")
        for t in self.archive:
            if t.stage is not Stage.FINISHED:
                raise DomainError("ARCHIVE_NOT_FINISHED", "archive trials must be finished")


def refresh_store(store: Store, today: date) -> Store:
    """Move an elapsed active trial into the archive as finished."""
    if store.active_trial is None or store.active_trial.stage is not Stage.RUNNING:
        return store
    refreshed = refresh_stage(store.active_trial, today)
    if refreshed.stage is Stage.FINISHED:
        return replace(store, active_trial=None, archive=store.archive + (refreshed,))
    if refreshed is not store.active_trial:
        return replace(store, active_trial=refreshed)
    return store


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp-{uuid.uuid4().hex[:8]}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def save(store: Store, directory: Path | None = None) -> Store:
    """Write the manifest and one trial file per trial; crash-safe."""
    directory = Path(directory if directory is not None else store.storage_path)
    if directory is None:
        raise StoreError("IO_ERROR", "no storage path configured")
    try:
        directory.mkdir(parents=True, exist_ok=True)
        manifest: dict = {"activeTrial": None, "archive": []}
        if store.active_trial is not None:
            name = f"trial-{uuid.uuid4().hex[:12]}.json"
            _atomic_write(directory / name, export_trial(store.active_trial))
            manifest["activeTrial"] = name
        for trial in store.archive:
            name = f"trial-{uuid.uuid4().hex[:12]}.json"
            _atomic_write(directory / name, export_trial(trial))
            manifest["archive"].append(name)
        _atomic_write(directory / MANIFEST_NAME, json.dumps(manifest, sort_keys=True, indent=2))
        referenced = {manifest["activeTrial"], *manifest["archive"]}
        for stale in directory.glob("trial-*.json"):
            if stale.name not in referenced:
                stale.unlink()
    except OSError as e:
        raise StoreError("IO_ERROR", str(e)) from e
    return replace(store, storage_path=directory)


def load(directory: Path) -> Store:
    """Read a store directory; raises CORRUPT_STORE when any file is bad."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        return Store(storage_path=directory)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise StoreError("CORRUPT_STORE", f"bad manifest: {e}") from e
    if not isinstance(manifest, dict):
        raise StoreError("CORRUPT_STORE", "manifest must be an object")

    def read_trial(name: str) -> Trial:
        try:
            return import_trial((directory / name).read_text(encoding="utf-8"))
        except OSError as e:
            raise StoreError("CORRUPT_STORE", f"missing trial file {name}: {e}") from e
        except ParseError as e:
            raise StoreError("CORRUPT_STORE", f"trial file {name}: {e.message}") from e

    active_name = manifest.get("activeTrial")
    active = read_trial(active_name) if active_name else None
    archive = tuple(read_trial(name) for name in manifest.get("archive", []))
    try:
        return Store(active_trial=active, archive=archive, storage_path=directory)
    except DomainError as e:
        raise StoreError("CORRUPT_STORE", e.message) from e
