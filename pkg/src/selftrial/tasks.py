"""Expansion of reminders into dated tasks and notification events.

Measures generate tasks in every phase; interventions only on days where
their condition is active (withdrawal: intervention on A-days only,
nothing on B-days; alternating-treatment: A's intervention on A-days, B's
on B-days). Reminder firing is anchored at trial day 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta

from .errors import DomainError
from .model import ComponentKind, Design, Intervention, Reminder, Stage, Trial
from .schedule import PhaseLabel, phase_on_day, total_duration


@dataclass(frozen=True)
class Task:
    """A concrete dated, timed to-do generated from a reminder."""

    component_id: str
    component_kind: ComponentKind
    date: date
    time: str
    title: str


@dataclass(frozen=True)
class NotificationEvent:
    task: Task
    fire_at: datetime


def reminder_fires_on(reminder: Reminder, day_index: int) -> bool:
    """True on day 0 and every everyNDays thereafter."""
    if day_index < 0:
        raise DomainError("DAY_OUT_OF_RANGE", "day index must be >= 0")
    return day_index % reminder.every_n_days == 0


def _require_running(trial: Trial) -> None:
    if trial.stage is not Stage.RUNNING:
        raise DomainError("TRIAL_NOT_RUNNING", f"trial stage is {trial.stage.value}")


def active_intervention(trial: Trial, label: PhaseLabel) -> Intervention | None:
    """The intervention to perform in the given phase, if any."""
    if label is PhaseLabel.A:
        return trial.intervention_a
    if trial.design is Design.ALTERNATING_TREATMENT:
        return trial.intervention_b
    return None  # withdrawal B-phase: no intervention


def tasks_for_day(trial: Trial, day_index: int) -> list[Task]:
    """All tasks due on a trial day, sorted by time, then measures before
    interventions, then component id."""
    _require_running(trial)
    duration = total_duration(trial.schedule)
    if not (0 <= day_index < duration):
        raise DomainError("DAY_OUT_OF_RANGE", f"day {day_index} outside [0, {duration})")
    day = trial.start_date + timedelta(days=day_index)
    tasks: list[Task] = []
    for measure in trial.measures:
        for reminder in measure.reminders:
            if reminder_fires_on(reminder, day_index):
                for t in reminder.times:
                    tasks.append(Task(measure.id, ComponentKind.MEASURE, day, t, measure.name))
    phase = phase_on_day(trial.schedule, day_index)
    intervention = active_intervention(trial, phase.label)
    if intervention is not None:
        for reminder in intervention.reminders:
            if reminder_fires_on(reminder, day_index):
                for t in reminder.times:
                    tasks.append(Task(intervention.id, ComponentKind.INTERVENTION, day, t, intervention.name))
    tasks.sort(key=lambda t: (t.time, t.component_kind is ComponentKind.INTERVENTION, t.component_id))
    return tasks


def notification_schedule(trial: Trial, from_day: int, to_day: int) -> list[NotificationEvent]:
    """One event per task in the inclusive day range, ordered by fire time."""
    _require_running(trial)
    duration = total_duration(trial.schedule)
    if not (0 <= from_day <= to_day < duration):
        raise DomainError("DAY_OUT_OF_RANGE", f"range [{from_day}, {to_day}] outside [0, {duration})")
    events = []
    for day_index in range(from_day, to_day + 1):
        for task in tasks_for_day(trial, day_index):
            hour, minute = map(int, task.time.split(":"))
            events.append(NotificationEvent(task=task, fire_at=datetime.combine(task.date, datetime.min.time()).replace(hour=hour, minute=minute)))
    events.sort(key=lambda e: (e.fire_at, e.task.component_kind is ComponentKind.INTERVENTION, e.task.component_id))
    return events


def day_index_of(trial: Trial, today: date) -> int:
    """Days elapsed since the start date (may exceed the trial window)."""
    if trial.start_date is None:
        raise DomainError("NOT_STARTED", "trial has no start date")
    return (today - trial.start_date).days


def progress(trial: Trial, today: date) -> dict:
    """Completion state: day index, fraction of the trial elapsed, finished flag."""
    if trial.stage is Stage.DRAFT:
        raise DomainError("NOT_STARTED", "trial has not been started")
    day_index = day_index_of(trial, today)
    duration = total_duration(trial.schedule)
    fraction = min(max(day_index / duration, 0.0), 1.0)
    return {"dayIndex": day_index, "fraction": fraction, "finished": day_index >= duration}
