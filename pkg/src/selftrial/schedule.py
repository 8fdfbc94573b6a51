"""Phase sequence generation and day-to-phase mapping.

Phase A always denotes the first intervention (in a withdrawal design, B is
the no-intervention condition); sequences are deterministic, never
randomized.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError
from .model import OrderStrategy, Schedule


class PhaseLabel(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class DayPhase:
    """Where a trial day falls in the phase plan."""

    label: PhaseLabel
    phase_ordinal: int
    day_within_phase: int


def default_schedule() -> Schedule:
    """Seven-day phases, two phase pairs, alternating order (ABAB, 28 days)."""
    return Schedule(phase_duration_days=7, phase_pairs=2, order=OrderStrategy.ALTERNATING)


def phase_sequence(order: OrderStrategy, pairs: int) -> list[PhaseLabel]:
    """Balanced phase sequence of 2*pairs labels.

    ALTERNATING repeats AB; COUNTERBALANCED alternates pair orientation
    (AB, BA, AB, ...) so consecutive pairs mirror each other.
    """
    if pairs < 1:
        raise DomainError("INVALID_PAIRS", "phase pairs must be >= 1")
    sequence: list[PhaseLabel] = []
    for i in range(pairs):
        if order is OrderStrategy.COUNTERBALANCED and i % 2 == 1:
            sequence += [PhaseLabel.B, PhaseLabel.A]
        else:
            sequence += [PhaseLabel.A, PhaseLabel.B]
    return sequence


def total_duration(schedule: Schedule) -> int:
    """Total trial length in days: 2 * pairs * phase duration."""
    return 2 * schedule.phase_pairs * schedule.phase_duration_days


def phase_on_day(schedule: Schedule, day_index: int) -> DayPhase:
    """Map a 0-based trial day to its phase."""
    if not (0 <= day_index < total_duration(schedule)):
        raise DomainError("DAY_OUT_OF_RANGE", f"day {day_index} outside [0, {total_duration(schedule)})")
    ordinal = day_index // schedule.phase_duration_days
    sequence = phase_sequence(schedule.order, schedule.phase_pairs)
    return DayPhase(
        label=sequence[ordinal],
        phase_ordinal=ordinal,
        day_within_phase=day_index % schedule.phase_duration_days,
    )
