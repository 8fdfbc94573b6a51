"""Preconfigured goals, interventions and measures with goal links.

The four goals and their three suggested interventions each are fixed
content; "Warning pad" is kept as-is (see README note). Templates carry
default reminders (09:00 for measures, 18:00 for interventions) and are
instantiated with fresh ids so edits never touch the library.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Union

from .model import (
    Goal,
    Intervention,
    ListInput,
    Measure,
    NumericInput,
    Reminder,
    ScaleInput,
    fresh_id,
    input_to_json,
)


class EntryKind(enum.Enum):
    GOAL = "goal"
    INTERVENTION = "intervention"
    MEASURE = "measure"


Template = Union[Goal, Intervention, Measure]


@dataclass(frozen=True)
class LibraryEntry:
    kind: EntryKind
    template: Template
    linked_goal: str | None = None


_MEASURE_REMINDER = (Reminder(times=("09:00",), every_n_days=1),)
_INTERVENTION_REMINDER = (Reminder(times=("18:00",), every_n_days=1),)

_LINKED: dict[str, tuple[str, str, str]] = {
    "Reduce back pain": ("Willow bark tea", "Arnica gel", "Warning pad"),
    "Treat leg cramps": ("Magnesium", "Vitamin B12", "Massage"),
    "Treat rheumatoid arthritis": ("Omega-3 supplement", "Olive oil massage", "Cold patch"),
    "Treat irritable bowel syndrome": ("Gluten-free diet", "Fructose-free diet", "Low-fibre diet"),
}


def _build_entries() -> tuple[LibraryEntry, ...]:
    entries: list[LibraryEntry] = []
    for goal_name, interventions in _LINKED.items():
        entries.append(LibraryEntry(EntryKind.GOAL, Goal(name=goal_name)))
        for name in interventions:
            entries.append(
                LibraryEntry(
                    EntryKind.INTERVENTION,
                    Intervention(
                        id=f"lib-{name.lower().replace(' ', '-')}",
                        name=name,
                        reminders=_INTERVENTION_REMINDER,
                    ),
                    linked_goal=goal_name,
                )
            )
    entries += [
        LibraryEntry(
            EntryKind.MEASURE,
            Measure(
                id="lib-well-being",
                name="Well-being",
                input=ScaleInput(0, 10, annotations=((0, "very bad"), (10, "very good"))),
                reminders=_MEASURE_REMINDER,
            ),
        ),
        LibraryEntry(
            EntryKind.MEASURE,
            Measure(
                id="lib-weight",
                name="Weight",
                input=NumericInput(unit="kg"),
                reminders=_MEASURE_REMINDER,
            ),
        ),
        LibraryEntry(
            EntryKind.MEASURE,
            Measure(
                id="lib-sleep-quality",
                name="Sleep quality",
                input=ListInput(items=("poor", "ok", "good")),
                reminders=_MEASURE_REMINDER,
            ),
        ),
    ]
    return tuple(entries)


_ENTRIES = _build_entries()


def list_entries(kind: EntryKind) -> list[LibraryEntry]:
    """Library entries of one kind, in stable order."""
    return [e for e in _ENTRIES if e.kind is kind]


def suggestions_for_goal(goal_name: str) -> list[Intervention]:
    """The linked intervention templates for a known goal, in table order."""
    return [
        e.template
        for e in _ENTRIES
        if e.kind is EntryKind.INTERVENTION and e.linked_goal == goal_name
    ]


def instantiate(entry: LibraryEntry) -> Template:
    """Deep copy of a template with a fresh id, safe to edit."""
    template = entry.template
    if isinstance(template, Goal):
        return Goal(name=template.name)
    return replace(template, id=fresh_id())


def library_to_json() -> dict:
    """The full library in the interchange component vocabulary."""

    def entry_json(e: LibraryEntry) -> dict:
        doc: dict = {"kind": e.kind.value}
        if isinstance(e.template, Goal):
            doc["name"] = e.template.name
        elif isinstance(e.template, Intervention):
            doc.update(
                id=e.template.id,
                name=e.template.name,
                instructions=e.template.instructions,
                reminders=[{"times": list(r.times), "everyNDays": r.every_n_days} for r in e.template.reminders],
            )
        else:
            doc.update(
                id=e.template.id,
                name=e.template.name,
                input=input_to_json(e.template.input),
                reminders=[{"times": list(r.times), "everyNDays": r.every_n_days} for r in e.template.reminders],
            )
        if e.linked_goal is not None:
            doc["linkedGoal"] = e.linked_goal
        return doc

    return {
        "goals": [entry_json(e) for e in list_entries(EntryKind.GOAL)],
        "interventions": [entry_json(e) for e in list_entries(EntryKind.INTERVENTION)],
        "measures": [entry_json(e) for e in list_entries(EntryKind.MEASURE)],
    }
