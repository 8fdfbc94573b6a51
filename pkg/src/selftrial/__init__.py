"""Engine for personal single-case experiments: trial modeling, phase
scheduling, task generation, persistence, and per-phase analysis."""

from .errors import DomainError, DraftInvalid, ParseError, StoreError, ValidationError
from .model import (
    ComponentKind,
    Design,
    Goal,
    Intervention,
    ListInput,
    ListValue,
    LogBook,
    Measure,
    Measurement,
    NumericInput,
    NumericValue,
    OrderStrategy,
    Reminder,
    ScaleInput,
    ScaleValue,
    Schedule,
    Stage,
    TaskCheck,
    Trial,
    export_trial,
    fresh_id,
    import_trial,
    validate_draft,
    validate_measurement,
)
from .schedule import PhaseLabel, default_schedule, phase_on_day, phase_sequence, total_duration
from .tasks import NotificationEvent, Task, notification_schedule, progress, reminder_fires_on, tasks_for_day

__all__ = [
    "ComponentKind",
    "Design",
    "DomainError",
    "DraftInvalid",
    "Goal",
    "Intervention",
    "ListInput",
    "ListValue",
    "LogBook",
    "Measure",
    "Measurement",
    "NotificationEvent",
    "NumericInput",
    "NumericValue",
    "OrderStrategy",
    "ParseError",
    "PhaseLabel",
    "Reminder",
    "ScaleInput",
    "ScaleValue",
    "Schedule",
    "Stage",
    "StoreError",
    "Task",
    "TaskCheck",
    "Trial",
    "ValidationError",
    "default_schedule",
    "export_trial",
    "fresh_id",
    "import_trial",
    "notification_schedule",
    "phase_on_day",
    "phase_sequence",
    "progress",
    "reminder_fires_on",
    "tasks_for_day",
    "total_duration",
    "validate_draft",
    "validate_measurement",
]
