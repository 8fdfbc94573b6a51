"""Machine-readable payloads shared by the CLI and the HTTP service.

Both front-ends serialize engine results through these functions so their
outputs agree field for field.
"""

from __future__ import annotations

from datetime import date

from .analysis import ConditionComparison, PhaseSummary, condition_comparison, phase_summaries
from .model import ListInput, Trial, format_timestamp, value_to_json
from .tasks import Task, day_index_of, tasks_for_day


def task_view(task: Task, trial: Trial) -> dict:
    done = any(
        c.component_id == task.component_id
        and c.date == task.date
        and c.time == task.time
        and c.completed
        for c in trial.logs.task_checks
    )
    return {
        "componentId": task.component_id,
        "kind": task.component_kind.value,
        "date": task.date.isoformat(),
        "time": task.time,
        "title": task.title,
        "done": done,
    }


def tasks_view(trial: Trial, day: date) -> list[dict]:
    day_index = day_index_of(trial, day)
    return [task_view(t, trial) for t in tasks_for_day(trial, day_index)]


def summary_view(summary: PhaseSummary) -> dict:
    doc: dict = {
        "phaseOrdinal": summary.phase_ordinal,
        "label": summary.label.value,
        "count": summary.count,
    }
    if summary.mean is not None:
        doc.update(mean=summary.mean, min=summary.min, max=summary.max)
    if summary.item_counts:
        doc["itemCounts"] = {str(k): v for k, v in sorted(summary.item_counts.items())}
    return doc


def comparison_view(comparison: ConditionComparison) -> dict:
    doc: dict = {"nA": comparison.n_a, "nB": comparison.n_b}
    if comparison.mean_a is not None:
        doc["meanA"] = comparison.mean_a
    if comparison.mean_b is not None:
        doc["meanB"] = comparison.mean_b
    if comparison.difference is not None:
        doc["difference"] = comparison.difference
    return doc


def measure_summary_view(trial: Trial, measure_id: str) -> dict:
    """Phase summaries, condition comparison (when applicable) and the raw
    dated series for one measure."""
    measure = trial.find_measure(measure_id)
    summaries = phase_summaries(trial, measure_id)
    doc: dict = {
        "measureId": measure_id,
        "measureName": measure.name,
        "summaries": [summary_view(s) for s in summaries],
        "series": [
            {"timestamp": format_timestamp(m.timestamp), "value": value_to_json(m.value)}
            for m in trial.logs.measurements
            if m.measure_id == measure_id
        ],
    }
    if not isinstance(measure.input, ListInput):
        doc["comparison"] = comparison_view(condition_comparison(trial, measure_id))
    return doc
