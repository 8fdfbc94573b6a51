import random
from dataclasses import replace
from datetime import date, timedelta

import pytest

from selftrial import (
    ComponentKind,
    Design,
    Goal,
    Intervention,
    Measure,
    NumericInput,
    OrderStrategy,
    Reminder,
    Schedule,
    Stage,
    Trial,
    notification_schedule,
    phase_sequence,
    progress,
    reminder_fires_on,
    tasks_for_day,
    total_duration,
)
from selftrial.errors import DomainError

from gen import START, random_trial


def oracle_tasks(trial, day_index):
    """Independent brute-force generator: expand the phase letters day by
    day, then walk every component and reminder literally."""
    letters = []
    for label in phase_sequence(trial.schedule.order, trial.schedule.phase_pairs):
        letters += [label.value] * trial.schedule.phase_duration_days
    expected = []
    for m in trial.measures:
        for r in m.reminders:
            if day_index % r.every_n_days == 0:
                for t in r.times:
                    expected.append((t, "measure", m.id))
    letter = letters[day_index]
    if letter == "A":
        active = trial.intervention_a
    elif trial.design is Design.ALTERNATING_TREATMENT:
        active = trial.intervention_b
    else:
        active = None
    if active is not None:
        for r in active.reminders:
            if day_index % r.every_n_days == 0:
                for t in r.times:
                    expected.append((t, "intervention", active.id))
    expected.sort(key=lambda x: (x[0], x[1] == "intervention", x[2]))
    return expected


def withdrawal_fixture():
    return Trial(
        goal=Goal("Less pain"),
        design=Design.WITHDRAWAL,
        intervention_a=Intervention(id="ia", name="Tea", reminders=(Reminder(("20:00",)),)),
        measures=(
            Measure(id="m1", name="Pain", input=NumericInput("points"), reminders=(Reminder(("08:00",)),)),
        ),
        schedule=Schedule(7, 2, OrderStrategy.ALTERNATING),
        start_date=START,
        stage=Stage.RUNNING,
    )


class TestReminderFiresOn:
    def test_daily_fires_every_day(self):
        r = Reminder(("08:00",), every_n_days=1)
        assert all(reminder_fires_on(r, d) for d in range(30))

    def test_every_three_days_pattern(self):
        r = Reminder(("08:00",), every_n_days=3)
        assert [reminder_fires_on(r, d) for d in range(7)] == [True, False, False, True, False, False, True]

    def test_every_two_days_day_one(self):
        assert reminder_fires_on(Reminder(("08:00",), every_n_days=2), 1) is False


class TestTasksForDay:
    def test_withdrawal_b_day_has_only_measure(self):
        tasks = tasks_for_day(withdrawal_fixture(), 7)
        assert [(t.component_kind, t.time) for t in tasks] == [(ComponentKind.MEASURE, "08:00")]

    def test_withdrawal_a_day_has_both(self):
        tasks = tasks_for_day(withdrawal_fixture(), 0)
        assert [(t.component_kind, t.time) for t in tasks] == [
            (ComponentKind.MEASURE, "08:00"),
            (ComponentKind.INTERVENTION, "20:00"),
        ]

    def test_two_times_give_two_tasks_every_day(self):
        trial = withdrawal_fixture()
        m = Measure(id="m2", name="Mood", input=NumericInput(""), reminders=(Reminder(("06:30", "12:00")),))
        trial = replace(trial, measures=(m,))
        for day in range(total_duration(trial.schedule)):
            assert sum(1 for t in tasks_for_day(trial, day) if t.component_id == "m2") == 2

    def test_not_running(self):
        draft = Trial(goal=Goal("g"))
        with pytest.raises(DomainError) as e:
            tasks_for_day(draft, 0)
        assert e.value.code == "TRIAL_NOT_RUNNING"

    def test_day_out_of_range(self):
        with pytest.raises(DomainError) as e:
            tasks_for_day(withdrawal_fixture(), 28)
        assert e.value.code == "DAY_OUT_OF_RANGE"

    def test_task_dates_follow_start_date(self):
        tasks = tasks_for_day(withdrawal_fixture(), 9)
        assert all(t.date == START + timedelta(days=9) for t in tasks)

    def test_oracle_equivalence_randomized(self):
        for seed in range(100):
            trial = random_trial(random.Random(seed), with_logs=False)
            for day in range(total_duration(trial.schedule)):
                got = [(t.time, t.component_kind.value, t.component_id) for t in tasks_for_day(trial, day)]
                assert got == oracle_tasks(trial, day), f"seed {seed} day {day}"

    def test_phase_activity_rules(self):
        for seed in range(40):
            trial = random_trial(random.Random(1000 + seed), with_logs=False)
            for day in range(total_duration(trial.schedule)):
                ids = {t.component_id for t in tasks_for_day(trial, day) if t.component_kind is ComponentKind.INTERVENTION}
                assert not ({"ia", "ib"} <= ids)
                if trial.design is Design.WITHDRAWAL:
                    letters = []
                    for label in phase_sequence(trial.schedule.order, trial.schedule.phase_pairs):
                        letters += [label.value] * trial.schedule.phase_duration_days
                    if letters[day] == "B":
                        assert not ids

    def test_measure_times_phase_independent(self):
        trial = withdrawal_fixture()
        times_by_day = [
            sorted(t.time for t in tasks_for_day(trial, d) if t.component_kind is ComponentKind.MEASURE)
            for d in range(total_duration(trial.schedule))
        ]
        assert all(times == times_by_day[0] for times in times_by_day)


class TestNotificationSchedule:
    def test_single_day_matches_tasks(self):
        trial = withdrawal_fixture()
        for day in range(28):
            events = notification_schedule(trial, day, day)
            assert len(events) == len(tasks_for_day(trial, day))

    def test_events_ordered_and_aligned(self):
        events = notification_schedule(withdrawal_fixture(), 0, 27)
        assert events == sorted(events, key=lambda e: e.fire_at)
        for e in events:
            assert e.fire_at.date() == e.task.date
            assert e.fire_at.strftime("%H:%M") == e.task.time

    def test_full_default_trial_daily_measure(self):
        trial = withdrawal_fixture()
        events = [e for e in notification_schedule(trial, 0, 27) if e.task.component_id == "m1"]
        assert len(events) == 28


class TestProgress:
    def test_start_day(self):
        assert progress(withdrawal_fixture(), START) == {"dayIndex": 0, "fraction": 0.0, "finished": False}

    def test_midpoint(self):
        assert progress(withdrawal_fixture(), START + timedelta(days=14)) == {
            "dayIndex": 14,
            "fraction": 0.5,
            "finished": False,
        }

    def test_finished_boundary(self):
        p = progress(withdrawal_fixture(), START + timedelta(days=28))
        assert p["finished"] is True and p["fraction"] == 1.0

    def test_draft_not_started(self):
        with pytest.raises(DomainError) as e:
            progress(Trial(goal=Goal("g")), START)
        assert e.value.code == "NOT_STARTED"
