"""Descriptive per-phase and per-condition summaries of logged data.

No inferential statistics: the history view is descriptive only. Undefined
aggregates (no data) are None, never 0 or NaN.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime

from .errors import DomainError
from .model import ListInput, ListValue, Measure, Stage, Trial
from .schedule import DayPhase, PhaseLabel, phase_on_day, phase_sequence, total_duration
from .tasks import day_index_of, tasks_for_day


@dataclass(frozen=True)
class PhaseSummary:
    phase_ordinal: int
    label: PhaseLabel
    count: int
    mean: float | None = None
    min: float | None = None
    max: float | None = None
    item_counts: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ConditionComparison:
    mean_a: float | None
    mean_b: float | None
    difference: float | None
    n_a: int
    n_b: int


def assign_phase(trial: Trial, timestamp: datetime) -> DayPhase:
    """Phase of the calendar day a timestamp falls on (time-of-day ignored)."""
    if trial.start_date is None:
        raise DomainError("NOT_STARTED", "trial has no start date")
    day_index = (timestamp.date() - trial.start_date).days
    if not (0 <= day_index < total_duration(trial.schedule)):
        raise DomainError("OUT_OF_WINDOW", f"timestamp {timestamp} outside the trial window")
    return phase_on_day(trial.schedule, day_index)


def _require_measure(trial: Trial, measure_id: str) -> Measure:
    measure = trial.find_measure(measure_id)
    if measure is None:
        raise DomainError("UNKNOWN_MEASURE", f"no measure with id {measure_id!r}")
    return measure


def _in_window_values(trial: Trial, measure_id: str) -> list[tuple[DayPhase, object]]:
    out = []
    for m in trial.logs.measurements:
        if m.measure_id != measure_id:
            continue
        try:
            phase = assign_phase(trial, m.timestamp)
        except DomainError:
            continue  # out-of-window logs are excluded from summaries
        out.append((phase, m.value))
    return out


def phase_summaries(trial: Trial, measure_id: str) -> list[PhaseSummary]:
    """One summary per phase, in sequence order; empty phases have count 0."""
    measure = _require_measure(trial, measure_id)
    sequence = phase_sequence(trial.schedule.order, trial.schedule.phase_pairs)
    is_list = isinstance(measure.input, ListInput)
    per_phase: list[list] = [[] for _ in sequence]
    for phase, value in _in_window_values(trial, measure_id):
        per_phase[phase.phase_ordinal].append(value)
    summaries = []
    for ordinal, (label, values) in enumerate(zip(sequence, per_phase)):
        if is_list:
            counts: dict[int, int] = {}
            for v in values:
                counts[v.index] = counts.get(v.index, 0) + 1
            summaries.append(PhaseSummary(ordinal, label, len(values), item_counts=counts))
        else:
            numbers = [float(v.value) for v in values]
            summaries.append(
                PhaseSummary(
                    ordinal,
                    label,
                    len(numbers),
                    mean=sum(numbers) / len(numbers) if numbers else None,
                    min=min(numbers) if numbers else None,
                    max=max(numbers) if numbers else None,
                )
            )
    return summaries


def condition_comparison(trial: Trial, measure_id: str) -> ConditionComparison:
    """Pooled A-phase mean vs pooled B-phase mean for a numeric/scale measure."""
    measure = _require_measure(trial, measure_id)
    if isinstance(measure.input, ListInput):
        raise DomainError("UNSUPPORTED_FOR_LIST", "condition comparison needs numeric or scale values")
    pools: dict[PhaseLabel, list[float]] = {PhaseLabel.A: [], PhaseLabel.B: []}
    for phase, value in _in_window_values(trial, measure_id):
        pools[phase.label].append(float(value.value))
    mean_a = sum(pools[PhaseLabel.A]) / len(pools[PhaseLabel.A]) if pools[PhaseLabel.A] else None
    mean_b = sum(pools[PhaseLabel.B]) / len(pools[PhaseLabel.B]) if pools[PhaseLabel.B] else None
    difference = mean_a - mean_b if mean_a is not None and mean_b is not None else None
    return ConditionComparison(mean_a, mean_b, difference, len(pools[PhaseLabel.A]), len(pools[PhaseLabel.B]))


def adherence(trial: Trial, today: date) -> dict:
    """Fraction of generated tasks checked off over the elapsed days."""
    if trial.stage is Stage.DRAFT:
        raise DomainError("NOT_STARTED", "trial has not been started")
    duration = total_duration(trial.schedule)
    last_day = min(day_index_of(trial, today), duration - 1)
    generated = 0
    completed = 0
    done = {(c.component_id, c.date, c.time) for c in trial.logs.task_checks if c.completed}
    running = trial if trial.stage is Stage.RUNNING else _as_running(trial)
    for day_index in range(0, last_day + 1):
        for task in tasks_for_day(running, day_index):
            generated += 1
            if (task.component_id, task.date, task.time) in done:
                completed += 1
    fraction = completed / generated if generated else 0.0
    return {"completed": completed, "generated": generated, "fraction": fraction}


def _as_running(trial: Trial) -> Trial:
    # finished trials reuse the task generator by viewing the trial as running
    from dataclasses import replace

    return replace(trial, stage=Stage.RUNNING)
