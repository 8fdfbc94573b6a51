"""Domain types for self-experiment trials, their invariants, draft
validation, and the canonical JSON interchange serialization.

All types are immutable values; every operation here is a pure function and
safe to call concurrently. Construction validates local invariants and
raises :class:`DomainError` on violation, so no invalid value ever exists.
"""

from __future__ import annotations

import enum
import json
import re
import uuid
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from typing import Any, Union

from .errors import DomainError, ParseError, ValidationError

SCHEMA_VERSION = 1

_TIME_RE = re.compile(r"^([01]\d|2[0-3]):[0-5]\d$")
_DATE_FMT = "%Y-%m-%d"
_TIMESTAMP_FMT = "%Y-%m-%dT%H:%M"


def _require(cond: bool, code: str, message: str) -> None:
    if not cond:
        raise DomainError(code, message)


def fresh_id() -> str:
    """Opaque unique identifier for trial components."""
    return uuid.uuid4().hex[:12]


def is_valid_time(value: str) -> bool:
    """True for zero-padded 24h wall-clock times like "07:30"."""
    return bool(_TIME_RE.match(value))


def format_timestamp(ts: datetime) -> str:
    return ts.strftime(_TIMESTAMP_FMT)


def parse_timestamp(text: str) -> datetime:
    return datetime.strptime(text, _TIMESTAMP_FMT)


class Design(enum.Enum):
    WITHDRAWAL = "withdrawal"
    ALTERNATING_TREATMENT = "alternating"


class Stage(enum.Enum):
    DRAFT = "draft"
    RUNNING = "running"
    FINISHED = "finished"


class OrderStrategy(enum.Enum):
    ALTERNATING = "alternating"
    COUNTERBALANCED = "counterbalanced"


class ComponentKind(enum.Enum):
    INTERVENTION = "intervention"
    MEASURE = "measure"


@dataclass(frozen=True)
class Goal:
    """What the user wants to achieve; a single free-text name."""

    name: str

    def __post_init__(self):
        _require(bool(self.name.strip()), "EMPTY_GOAL", "goal name must be non-empty")


@dataclass(frozen=True)
class Reminder:
    """Recurrence rule: one or more wall-clock times, firing every N days.

    Times are unique and sorted ascending; ``every_n_days`` of 1 means daily.
    """

    times: tuple[str, ...]
    every_n_days: int = 1

    def __post_init__(self):
        _require(len(self.times) >= 1, "NO_TIMES", "reminder needs at least one time")
        for t in self.times:
            _require(is_valid_time(t), "BAD_TIME", f"not a HH:MM time: {t!r}")
        _require(len(set(self.times)) == len(self.times), "DUPLICATE_TIMES", "times must be unique")
        _require(tuple(sorted(self.times)) == self.times, "UNSORTED_TIMES", "times must be sorted ascending")
        _require(self.every_n_days >= 1, "BAD_FREQUENCY", "everyNDays must be >= 1")


@dataclass(frozen=True)
class Intervention:
    """A treatment or behavior change the user tries out."""

    id: str
    name: str
    instructions: str = ""
    reminders: tuple[Reminder, ...] = ()

    def __post_init__(self):
        _require(bool(self.name.strip()), "EMPTY_NAME", "intervention name must be non-empty")
        _require(len(self.reminders) >= 1, "NO_REMINDERS", "intervention needs at least one reminder")


@dataclass(frozen=True)
class NumericInput:
    """Free decimal entry with a display unit."""

    unit: str


@dataclass(frozen=True)
class ListInput:
    """Pick-one entry from a fixed ordered list of at least two items."""

    items: tuple[str, ...]

    def __post_init__(self):
        _require(len(self.items) >= 2, "TOO_FEW_ITEMS", "list input needs at least 2 items")
        for item in self.items:
            _require(bool(item.strip()), "EMPTY_ITEM", "list items must be non-empty")
        _require(len(set(self.items)) == len(self.items), "DUPLICATE_ITEMS", "list items must be unique")


@dataclass(frozen=True)
class ScaleInput:
    """Integer slider between min and max with optional annotations."""

    min_value: int
    max_value: int
    annotations: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        _require(self.min_value < self.max_value, "BAD_RANGE", "scale min must be < max")
        for key, _text in self.annotations:
            _require(
                self.min_value <= key <= self.max_value,
                "ANNOTATION_OUT_OF_RANGE",
                f"annotation key {key} outside [{self.min_value}, {self.max_value}]",
            )


MeasureInput = Union[NumericInput, ListInput, ScaleInput]


@dataclass(frozen=True)
class Measure:
    """A named outcome with one of the three input types."""

    id: str
    name: str
    input: MeasureInput
    reminders: tuple[Reminder, ...] = ()

    def __post_init__(self):
        _require(bool(self.name.strip()), "EMPTY_NAME", "measure name must be non-empty")
        _require(len(self.reminders) >= 1, "NO_REMINDERS", "measure needs at least one reminder")


@dataclass(frozen=True)
class NumericValue:
    value: float


@dataclass(frozen=True)
class ListValue:
    index: int  # 0-based item index, stable under item renames


@dataclass(frozen=True)
class ScaleValue:
    value: int


MeasurementValue = Union[NumericValue, ListValue, ScaleValue]


@dataclass(frozen=True)
class Schedule:
    """Phase plan settings: duration per phase, number of AB pairs, ordering."""

    phase_duration_days: int
    phase_pairs: int
    order: OrderStrategy

    def __post_init__(self):
        _require(self.phase_duration_days >= 1, "BAD_DURATION", "phase duration must be >= 1 day")
        _require(self.phase_pairs >= 1, "INVALID_PAIRS", "phase pairs must be >= 1")


@dataclass(frozen=True)
class Measurement:
    measure_id: str
    timestamp: datetime
    value: MeasurementValue

    def __post_init__(self):
        # minute precision only
        object.__setattr__(self, "timestamp", self.timestamp.replace(second=0, microsecond=0))


@dataclass(frozen=True)
class TaskCheck:
    component_id: str
    date: date
    time: str
    completed: bool

    def __post_init__(self):
        _require(is_valid_time(self.time), "BAD_TIME", f"not a HH:MM time: {self.time!r}")


@dataclass(frozen=True)
class LogBook:
    """Recorded measurements and task check-offs, append-only."""

    measurements: tuple[Measurement, ...] = ()
    task_checks: tuple[TaskCheck, ...] = ()

    def __post_init__(self):
        keys = [(c.component_id, c.date, c.time) for c in self.task_checks]
        _require(len(set(keys)) == len(keys), "DUPLICATE_TASK_CHECK", "at most one check per (component, date, time)")


@dataclass(frozen=True)
class Trial:
    """Aggregate root: goal, design, components, schedule, stage and logs.

    Drafts may be partial (missing goal, interventions, measures or
    schedule); :func:`validate_draft` reports what is missing. Running and
    finished trials are always complete.
    """

    goal: Goal | None = None
    design: Design = Design.WITHDRAWAL
    intervention_a: Intervention | None = None
    intervention_b: Intervention | None = None
    measures: tuple[Measure, ...] = ()
    schedule: Schedule | None = None
    start_date: date | None = None
    stage: Stage = Stage.DRAFT
    logs: LogBook = field(default_factory=LogBook)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        _require(
            (self.stage is Stage.DRAFT) == (self.start_date is None),
            "STAGE_DATE_MISMATCH",
            "stage is draft iff startDate is absent",
        )
        if self.intervention_b is not None:
            _require(
                self.design is Design.ALTERNATING_TREATMENT,
                "UNEXPECTED_SECOND_INTERVENTION",
                "interventionB requires the alternating-treatment design",
            )
        if self.stage is not Stage.DRAFT:
            _require(not validate_draft_fields(self), "INCOMPLETE_TRIAL", "non-draft trial must be complete")
        ids = self.component_ids()
        _require(len(set(ids)) == len(ids), "DUPLICATE_ID", "component ids must be unique trial-wide")
        for m in self.logs.measurements:
            measure = self.find_measure(m.measure_id)
            _require(measure is not None, "UNKNOWN_MEASURE", f"no measure with id {m.measure_id!r}")
            validate_measurement(measure, m.value)
        for c in self.logs.task_checks:
            _require(
                self.find_component(c.component_id) is not None,
                "UNKNOWN_COMPONENT",
                f"no component with id {c.component_id!r}",
            )

    def component_ids(self) -> list[str]:
        ids = [m.id for m in self.measures]
        if self.intervention_a is not None:
            ids.append(self.intervention_a.id)
        if self.intervention_b is not None:
            ids.append(self.intervention_b.id)
        return ids

    def find_measure(self, measure_id: str) -> Measure | None:
        return next((m for m in self.measures if m.id == measure_id), None)

    def find_component(self, component_id: str) -> Measure | Intervention | None:
        for candidate in (self.intervention_a, self.intervention_b):
            if candidate is not None and candidate.id == component_id:
                return candidate
        return self.find_measure(component_id)

    def with_logs(self, logs: LogBook) -> "Trial":
        return replace(self, logs=logs)


def validate_measurement(measure: Measure, raw: MeasurementValue) -> MeasurementValue:
    """Check a raw value against the measure's input type.

    Returns the value unchanged on success; raises :class:`ValidationError`
    with code TYPE_MISMATCH, OUT_OF_RANGE or BAD_INDEX otherwise.
    """
    inp = measure.input
    if isinstance(inp, NumericInput):
        if not isinstance(raw, NumericValue):
            raise ValidationError("TYPE_MISMATCH", f"measure {measure.name!r} expects a numeric value")
        return raw
    if isinstance(inp, ListInput):
        if not isinstance(raw, ListValue):
            raise ValidationError("TYPE_MISMATCH", f"measure {measure.name!r} expects a list choice")
        if not (0 <= raw.index < len(inp.items)):
            raise ValidationError("BAD_INDEX", f"index {raw.index} out of range for {len(inp.items)} items")
        return raw
    if not isinstance(raw, ScaleValue):
        raise ValidationError("TYPE_MISMATCH", f"measure {measure.name!r} expects a scale value")
    if not (inp.min_value <= raw.value <= inp.max_value):
        raise ValidationError(
            "OUT_OF_RANGE", f"value {raw.value} outside [{inp.min_value}, {inp.max_value}]"
        )
    return raw


def validate_draft_fields(trial: Trial) -> list[str]:
    """Violation codes preventing a draft from being finalized.

    Empty list means the draft is complete: goal set, interventionA set,
    interventionB present exactly when comparing two interventions, at least
    one measure, and every component carrying a reminder. Component-level
    reminder and schedule invariants are enforced at construction, so only
    presence is checked here.
    """
    violations: list[str] = []
    if trial.goal is None:
        violations.append("NO_GOAL")
    if trial.intervention_a is None:
        violations.append("NO_INTERVENTION")
    if trial.design is Design.ALTERNATING_TREATMENT and trial.intervention_b is None:
        violations.append("MISSING_SECOND_INTERVENTION")
    if not trial.measures:
        violations.append("NO_MEASURES")
    return violations


def validate_draft(trial: Trial) -> list[str]:
    """Public draft validation; requires a draft-stage trial."""
    if trial.stage is not Stage.DRAFT:
        raise DomainError("NOT_A_DRAFT", "trial is not in the draft stage")
    return validate_draft_fields(trial)


# --- interchange serialization -------------------------------------------


def _reminder_to_json(r: Reminder) -> dict:
    return {"times": list(r.times), "everyNDays": r.every_n_days}


def _intervention_to_json(i: Intervention) -> dict:
    return {
        "id": i.id,
        "name": i.name,
        "instructions": i.instructions,
        "reminders": [_reminder_to_json(r) for r in i.reminders],
    }


def input_to_json(inp: MeasureInput) -> dict:
    if isinstance(inp, NumericInput):
        return {"type": "numeric", "unit": inp.unit}
    if isinstance(inp, ListInput):
        return {"type": "list", "items": list(inp.items)}
    return {
        "type": "scale",
        "min": inp.min_value,
        "max": inp.max_value,
        "annotations": {str(k): v for k, v in inp.annotations},
    }


def _measure_to_json(m: Measure) -> dict:
    return {
        "id": m.id,
        "name": m.name,
        "input": input_to_json(m.input),
        "reminders": [_reminder_to_json(r) for r in m.reminders],
    }


def value_to_json(v: MeasurementValue) -> dict:
    if isinstance(v, NumericValue):
        return {"type": "numeric", "value": v.value}
    if isinstance(v, ListValue):
        return {"type": "list", "index": v.index}
    return {"type": "scale", "value": v.value}


def trial_to_json(trial: Trial) -> dict:
    """Plain-dict form of a trial in the interchange vocabulary."""
    doc: dict[str, Any] = {
        "schemaVersion": trial.schema_version,
        "design": trial.design.value,
        "measures": [_measure_to_json(m) for m in trial.measures],
        "stage": trial.stage.value,
        "logs": {
            "measurements": [
                {
                    "measureId": m.measure_id,
                    "timestamp": format_timestamp(m.timestamp),
                    "value": value_to_json(m.value),
                }
                for m in trial.logs.measurements
            ],
            "taskChecks": [
                {
                    "componentId": c.component_id,
                    "date": c.date.strftime(_DATE_FMT),
                    "time": c.time,
                    "completed": c.completed,
                }
                for c in trial.logs.task_checks
            ],
        },
    }
    if trial.goal is not None:
        doc["goal"] = {"name": trial.goal.name}
    if trial.intervention_a is not None:
        doc["interventionA"] = _intervention_to_json(trial.intervention_a)
    if trial.intervention_b is not None:
        doc["interventionB"] = _intervention_to_json(trial.intervention_b)
    if trial.schedule is not None:
        doc["schedule"] = {
            "phaseDurationDays": trial.schedule.phase_duration_days,
            "phasePairs": trial.schedule.phase_pairs,
            "order": trial.schedule.order.value,
        }
    if trial.start_date is not None:
        doc["startDate"] = trial.start_date.strftime(_DATE_FMT)
    return doc


def export_trial(trial: Trial) -> str:
    """Serialize a trial to the canonical interchange document.

    Deterministic: the same trial always yields byte-identical text (keys
    sorted lexicographically, canonical float formatting).
    """
    return json.dumps(trial_to_json(trial), sort_keys=True, ensure_ascii=False, separators=(",", ": "), indent=2)


class _Reader:
    """Walks a parsed document tracking the path for error reporting."""

    def __init__(self, doc: Any):
        self.doc = doc

    @staticmethod
    def fail(path: str, message: str) -> ParseError:
        return ParseError("INVARIANT_VIOLATION", message, path=path)

    def get(self, obj: dict, path: str, key: str, kind: type, required: bool = True, default: Any = None) -> Any:
        if not isinstance(obj, dict):
            raise self.fail(path, "expected an object")
        if key not in obj:
            if required:
                raise self.fail(f"{path}.{key}" if path else key, "missing required key")
            return default
        value = obj[key]
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
            raise self.fail(f"{path}.{key}" if path else key, f"expected {kind.__name__}")
        return value


def _parse_reminder(rd: _Reader, obj: Any, path: str) -> Reminder:
    times = rd.get(obj, path, "times", list)
    every = rd.get(obj, path, "everyNDays", int)
    try:
        return Reminder(times=tuple(times), every_n_days=every)
    except DomainError as e:
        raise _Reader.fail(path, e.message) from e


def _parse_intervention(rd: _Reader, obj: Any, path: str) -> Intervention:
    try:
        return Intervention(
            id=rd.get(obj, path, "id", str),
            name=rd.get(obj, path, "name", str),
            instructions=rd.get(obj, path, "instructions", str, required=False, default=""),
            reminders=tuple(
                _parse_reminder(rd, r, f"{path}.reminders[{i}]")
                for i, r in enumerate(rd.get(obj, path, "reminders", list))
            ),
        )
    except DomainError as e:
        if isinstance(e, ParseError):
            raise
        raise _Reader.fail(path, e.message) from e


def _parse_input(rd: _Reader, obj: Any, path: str) -> MeasureInput:
    kind = rd.get(obj, path, "type", str)
    try:
        if kind == "numeric":
            return NumericInput(unit=rd.get(obj, path, "unit", str))
        if kind == "list":
            items = rd.get(obj, path, "items", list)
            return ListInput(items=tuple(items))
        if kind == "scale":
            raw_ann = rd.get(obj, path, "annotations", dict, required=False, default={})
            try:
                annotations = tuple(sorted((int(k), v) for k, v in raw_ann.items()))
            except ValueError:
                raise _Reader.fail(f"{path}.annotations", "annotation keys must be integers")
            return ScaleInput(
                min_value=rd.get(obj, path, "min", int),
                max_value=rd.get(obj, path, "max", int),
                annotations=annotations,
            )
    except DomainError as e:
        if isinstance(e, ParseError):
            raise
        raise _Reader.fail(path, e.message) from e
    raise _Reader.fail(f"{path}.type", f"unknown input type {kind!r}")


def _parse_measure(rd: _Reader, obj: Any, path: str) -> Measure:
    try:
        return Measure(
            id=rd.get(obj, path, "id", str),
            name=rd.get(obj, path, "name", str),
            input=_parse_input(rd, rd.get(obj, path, "input", dict), f"{path}.input"),
            reminders=tuple(
                _parse_reminder(rd, r, f"{path}.reminders[{i}]")
                for i, r in enumerate(rd.get(obj, path, "reminders", list))
            ),
        )
    except DomainError as e:
        if isinstance(e, ParseError):
            raise
        raise _Reader.fail(path, e.message) from e


def _parse_value(rd: _Reader, obj: Any, path: str) -> MeasurementValue:
    kind = rd.get(obj, path, "type", str)
    if kind == "numeric":
        return NumericValue(value=rd.get(obj, path, "value", float))
    if kind == "list":
        return ListValue(index=rd.get(obj, path, "index", int))
    if kind == "scale":
        return ScaleValue(value=rd.get(obj, path, "value", int))
    raise _Reader.fail(f"{path}.type", f"unknown value type {kind!r}")


def _parse_date(text: str, path: str) -> date:
    try:
        return datetime.strptime(text, _DATE_FMT).date()
    except ValueError:
        raise _Reader.fail(path, f"not a YYYY-MM-DD date: {text!r}")


def _parse_enum(enum_cls: type, text: str, path: str):
    try:
        return enum_cls(text)
    except ValueError:
        raise _Reader.fail(path, f"unknown value {text!r}")


def trial_from_json(doc: Any) -> Trial:
    """Build a Trial from a parsed interchange document, validating every
    invariant; raises :class:`ParseError` naming the first violation."""
    rd = _Reader(doc)
    if not isinstance(doc, dict):
        raise ParseError("MALFORMED", "top-level value must be an object")
    version = rd.get(doc, "", "schemaVersion", int)
    if version != SCHEMA_VERSION:
        raise ParseError("SCHEMA_VERSION_UNSUPPORTED", f"unsupported schema version {version}")

    goal_obj = rd.get(doc, "", "goal", dict, required=False)
    goal = None
    if goal_obj is not None:
        try:
            goal = Goal(name=rd.get(goal_obj, "goal", "name", str))
        except DomainError as e:
            if isinstance(e, ParseError):
                raise
            raise _Reader.fail("goal", e.message) from e

    design = _parse_enum(Design, rd.get(doc, "", "design", str), "design")
    ia_obj = rd.get(doc, "", "interventionA", dict, required=False)
    ib_obj = rd.get(doc, "", "interventionB", dict, required=False)
    intervention_a = _parse_intervention(rd, ia_obj, "interventionA") if ia_obj is not None else None
    intervention_b = _parse_intervention(rd, ib_obj, "interventionB") if ib_obj is not None else None

    measures = tuple(
        _parse_measure(rd, m, f"measures[{i}]") for i, m in enumerate(rd.get(doc, "", "measures", list))
    )

    sched_obj = rd.get(doc, "", "schedule", dict, required=False)
    schedule = None
    if sched_obj is not None:
        try:
            schedule = Schedule(
                phase_duration_days=rd.get(sched_obj, "schedule", "phaseDurationDays", int),
                phase_pairs=rd.get(sched_obj, "schedule", "phasePairs", int),
                order=_parse_enum(OrderStrategy, rd.get(sched_obj, "schedule", "order", str), "schedule.order"),
            )
        except DomainError as e:
            if isinstance(e, ParseError):
                raise
            raise _Reader.fail("schedule", e.message) from e

    start_text = rd.get(doc, "", "startDate", str, required=False)
    start_date = _parse_date(start_text, "startDate") if start_text is not None else None
    stage = _parse_enum(Stage, rd.get(doc, "", "stage", str), "stage")

    logs_obj = rd.get(doc, "", "logs", dict)
    measurements = []
    for i, m in enumerate(rd.get(logs_obj, "logs", "measurements", list)):
        path = f"logs.measurements[{i}]"
        ts_text = rd.get(m, path, "timestamp", str)
        try:
            ts = parse_timestamp(ts_text)
        except ValueError:
            raise _Reader.fail(f"{path}.timestamp", f"not a YYYY-MM-DDTHH:MM timestamp: {ts_text!r}")
        measurements.append(
            Measurement(
                measure_id=rd.get(m, path, "measureId", str),
                timestamp=ts,
                value=_parse_value(rd, rd.get(m, path, "value", dict), f"{path}.value"),
            )
        )
    checks = []
    for i, c in enumerate(rd.get(logs_obj, "logs", "taskChecks", list)):
        path = f"logs.taskChecks[{i}]"
        try:
            checks.append(
                TaskCheck(
                    component_id=rd.get(c, path, "componentId", str),
                    date=_parse_date(rd.get(c, path, "date", str), f"{path}.date"),
                    time=rd.get(c, path, "time", str),
                    completed=rd.get(c, path, "completed", bool),
                )
            )
        except DomainError as e:
            if isinstance(e, ParseError):
                raise
            raise _Reader.fail(path, e.message) from e

    try:
        return Trial(
            goal=goal,
            design=design,
            intervention_a=intervention_a,
            intervention_b=intervention_b,
            measures=measures,
            schedule=schedule,
            start_date=start_date,
            stage=stage,
            logs=LogBook(measurements=tuple(measurements), task_checks=tuple(checks)),
            schema_version=version,
        )
    except DomainError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError("INVARIANT_VIOLATION", e.message, path="") from e


def import_trial(text: str) -> Trial:
    """Parse an interchange document; inverse of :func:`export_trial`."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError) as e:
        raise ParseError("MALFORMED", f"not valid JSON: {e}") from e
    return trial_from_json(doc)
