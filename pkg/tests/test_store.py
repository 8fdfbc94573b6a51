import random
from dataclasses import replace
from datetime import date, datetime, timedelta

import pytest

from selftrial import (
    Design,
    DraftInvalid,
    Goal,
    Intervention,
    Measure,
    NumericValue,
    OrderStrategy,
    Reminder,
    ScaleInput,
    ScaleValue,
    Schedule,
    Stage,
    StoreError,
    Trial,
)
from selftrial.errors import DomainError
from selftrial.store import (
    Store,
    finalize_draft,
    load,
    log_measurement,
    mark_task,
    refresh_stage,
    refresh_store,
    restart_from,
    save,
    start_trial,
)

from gen import START, random_trial


def make_draft(**overrides):
    fields = dict(
        goal=Goal("Sleep better"),
        intervention_a=Intervention(id="ia", name="Tea", reminders=(Reminder(("20:00",)),)),
        measures=(
            Measure(id="m1", name="Well-being", input=ScaleInput(0, 10), reminders=(Reminder(("08:00",)),)),
        ),
    )
    fields.update(overrides)
    return Trial(**fields)


class TestFinalizeDraft:
    def test_default_schedule_filled_in(self):
        trial = finalize_draft(make_draft())
        assert trial.schedule == Schedule(7, 2, OrderStrategy.ALTERNATING)

    def test_user_schedule_preserved(self):
        edited = Schedule(28, 2, OrderStrategy.ALTERNATING)
        assert finalize_draft(make_draft(schedule=edited)).schedule == edited

    def test_invalid_draft_carries_violations(self):
        with pytest.raises(DraftInvalid) as e:
            finalize_draft(make_draft(measures=()))
        assert "NO_MEASURES" in e.value.violations


class TestStartTrial:
    def test_start_sets_stage_and_date(self):
        running = start_trial(make_draft(), date(2024, 1, 1))
        assert running.stage is Stage.RUNNING
        assert running.start_date == date(2024, 1, 1)
        assert running.logs.measurements == ()

    def test_starting_twice(self):
        running = start_trial(make_draft(), date(2024, 1, 1))
        with pytest.raises(DomainError) as e:
            start_trial(running, date(2024, 1, 2))
        assert e.value.code == "ALREADY_STARTED"

    def test_finishes_after_window(self):
        running = start_trial(make_draft(), date(2024, 1, 1))
        assert refresh_stage(running, date(2024, 1, 28)).stage is Stage.RUNNING
        assert refresh_stage(running, date(2024, 1, 29)).stage is Stage.FINISHED


class TestLogMeasurement:
    def setup_method(self):
        self.trial = start_trial(make_draft(), START)

    def test_append(self):
        t = log_measurement(self.trial, "m1", datetime(2024, 3, 4, 8, 0), ScaleValue(7))
        assert len(t.logs.measurements) == 1

    def test_out_of_range_value(self):
        with pytest.raises(DomainError) as e:
            log_measurement(self.trial, "m1", datetime(2024, 3, 4, 8, 0), ScaleValue(11))
        assert e.value.code == "OUT_OF_RANGE"

    def test_unknown_measure(self):
        with pytest.raises(DomainError) as e:
            log_measurement(self.trial, "nope", datetime(2024, 3, 4, 8, 0), ScaleValue(7))
        assert e.value.code == "UNKNOWN_MEASURE"

    def test_out_of_window(self):
        with pytest.raises(DomainError) as e:
            log_measurement(self.trial, "m1", datetime(2024, 5, 1, 8, 0), ScaleValue(7))
        assert e.value.code == "OUT_OF_WINDOW"

    def test_prior_logs_untouched(self):
        t = log_measurement(self.trial, "m1", datetime(2024, 3, 4, 8, 0), ScaleValue(7))
        t2 = log_measurement(t, "m1", datetime(2024, 3, 5, 8, 0), ScaleValue(6))
        assert t2.logs.measurements[0] == t.logs.measurements[0]


class TestMarkTask:
    def setup_method(self):
        self.trial = start_trial(make_draft(), START)

    def test_check_existing_task(self):
        t = mark_task(self.trial, "ia", START, "20:00", True)
        assert t.logs.task_checks[0].completed is True

    def test_idempotent(self):
        t = mark_task(self.trial, "ia", START, "20:00", True)
        t = mark_task(t, "ia", START, "20:00", True)
        assert len(t.logs.task_checks) == 1

    def test_no_intervention_task_on_b_day(self):
        b_day = START + timedelta(days=7)
        with pytest.raises(DomainError) as e:
            mark_task(self.trial, "ia", b_day, "20:00", True)
        assert e.value.code == "NO_SUCH_TASK"


class TestRestartFrom:
    def make_finished(self):
        running = start_trial(make_draft(), START)
        return replace(running, stage=Stage.FINISHED)

    def test_clone_keeps_names_drops_logs(self):
        finished = self.make_finished()
        draft = restart_from(finished)
        assert draft.stage is Stage.DRAFT
        assert draft.start_date is None
        assert draft.goal == finished.goal
        assert draft.intervention_a.name == "Tea"
        assert [m.name for m in draft.measures] == ["Well-being"]
        assert draft.logs.measurements == ()

    def test_fresh_ids(self):
        finished = self.make_finished()
        draft = restart_from(finished)
        assert draft.intervention_a.id != finished.intervention_a.id
        assert draft.measures[0].id != finished.measures[0].id

    def test_running_trial_rejected(self):
        with pytest.raises(DomainError) as e:
            restart_from(start_trial(make_draft(), START))
        assert e.value.code == "NOT_FINISHED"


class TestPersistence:
    def test_empty_store_round_trip(self, tmp_path):
        store = Store(storage_path=tmp_path)
        save(store)
        assert load(tmp_path) == store

    def test_mixed_store_round_trip(self, tmp_path):
        rng = random.Random(3)
        archived = tuple(replace(random_trial(rng), stage=Stage.FINISHED) for _ in range(2))
        store = Store(active_trial=random_trial(rng), archive=archived)
        save(store, tmp_path)
        assert load(tmp_path) == store

    def test_randomized_round_trips(self, tmp_path):
        for seed in range(20):
            rng = random.Random(seed)
            store = Store(active_trial=random_trial(rng))
            save(store, tmp_path / str(seed))
            assert load(tmp_path / str(seed)) == store

    def test_truncated_trial_file(self, tmp_path):
        store = Store(active_trial=start_trial(make_draft(), START))
        save(store, tmp_path)
        for f in tmp_path.glob("trial-*.json"):
            f.write_text(f.read_text()[:40])
        with pytest.raises(StoreError) as e:
            load(tmp_path)
        assert e.value.code == "CORRUPT_STORE"

    def test_bad_manifest(self, tmp_path):
        (tmp_path / "store.json").write_text("{not json")
        with pytest.raises(StoreError) as e:
            load(tmp_path)
        assert e.value.code == "CORRUPT_STORE"

    def test_missing_directory_is_empty_store(self, tmp_path):
        assert load(tmp_path / "fresh") == Store()


class TestStoreInvariants:
    def test_active_must_not_be_finished(self):
        finished = replace(start_trial(make_draft(), START), stage=Stage.FINISHED)
        with pytest.raises(DomainError):
            Store(active_trial=finished)

    def test_archive_must_be_finished(self):
        with pytest.raises(DomainError):
            Store(archive=(start_trial(make_draft(), START),))

    def test_refresh_moves_elapsed_trial_to_archive(self):
        store = Store(active_trial=start_trial(make_draft(), START))
        refreshed = refresh_store(store, START + timedelta(days=28))
        assert refreshed.active_trial is None
        assert len(refreshed.archive) == 1
        assert refreshed.archive[0].stage is Stage.FINISHED
