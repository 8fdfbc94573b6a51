"""Terminal front-end over the engine.

Exit codes: 0 success, 1 domain error (stable error name printed), 2 usage
error. ``--now`` freezes the clock for reproducible runs; the store
directory comes from ``--store`` or the SELFTRIAL_STORE environment
variable. A lock file guards against concurrent invocations.
"""

from __future__ import annotations

import fcntl
import json
import sys
from datetime import date, datetime
from pathlib import Path

import click

from . import library as lib_mod
from . import store as store_mod
from .analysis import adherence
from .errors import DomainError
from .model import (
    Design,
    Goal,
    Intervention,
    ListInput,
    ListValue,
    Measure,
    NumericInput,
    NumericValue,
    OrderStrategy,
    Reminder,
    ScaleInput,
    ScaleValue,
    Schedule,
    Stage,
    Trial,
    export_trial,
    fresh_id,
    import_trial,
    parse_timestamp,
    validate_draft,
)
from .schedule import phase_sequence, total_duration
from .tasks import progress
from .views import measure_summary_view, tasks_view

DEFAULT_STORE = Path.home() / ".selftrial"


class Context:
    def __init__(self, store_dir: Path, now: datetime, fmt: str):
        self.store_dir = store_dir
        self.now = now
        self.fmt = fmt
        self._lock_file = None

    def lock(self):
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self._lock_file = open(self.store_dir / ".lock", "w")
        try:
            fcntl.flock(self._lock_file, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            self._lock_file.close()
            self._lock_file = None
            raise DomainError("STORE_LOCKED", "another invocation is using this store")

    def unlock(self):
        if self._lock_file is not None:
            fcntl.flock(self._lock_file, fcntl.LOCK_UN)
            self._lock_file.close()
            self._lock_file = None

    def load(self) -> store_mod.Store:
        store = store_mod.load(self.store_dir)
        refreshed = store_mod.refresh_store(store, self.now.date())
        if refreshed != store:
            store_mod.save(refreshed, self.store_dir)
        return refreshed

    def save(self, store: store_mod.Store) -> None:
        store_mod.save(store, self.store_dir)

    def emit(self, payload, text_lines) -> None:
        if self.fmt == "json":
            click.echo(json.dumps(payload, sort_keys=True, indent=2))
        else:
            for line in text_lines:
                click.echo(line)


def _parse_now(value: str | None) -> datetime:
    if value is None:
        return datetime.now()
    try:
        return parse_timestamp(value)
    except ValueError:
        try:
            return datetime.strptime(value, "%Y-%m-%d")
        except ValueError:
            raise click.BadParameter("expected YYYY-MM-DD or YYYY-MM-DDTHH:MM", param_hint="--now")


def _parse_reminder(spec: str) -> Reminder:
    """"HH:MM,HH:MM/N" -> reminder at those times every N days (default daily)."""
    times_part, _, every_part = spec.partition("/")
    times = tuple(sorted(t.strip() for t in times_part.split(",") if t.strip()))
    every = int(every_part) if every_part else 1
    return Reminder(times=times, every_n_days=every)


def _parse_measure(spec: str) -> Measure:
    """Measure spec: "name=scale:0..10", "name=numeric:kg", "name=list:a,b,c",
    each optionally followed by "@HH:MM,HH:MM/N" for the reminder."""
    body, _, reminder_part = spec.partition("@")
    reminder = _parse_reminder(reminder_part) if reminder_part else Reminder(times=("09:00",))
    name, sep, type_part = body.partition("=")
    if not sep:
        raise click.BadParameter(f"measure spec needs name=type:params, got {spec!r}")
    kind, _, params = type_part.partition(":")
    if kind == "numeric":
        inp = NumericInput(unit=params)
    elif kind == "list":
        inp = ListInput(items=tuple(i.strip() for i in params.split(",")))
    elif kind == "scale":
        lo, _, hi = params.partition("..")
        inp = ScaleInput(min_value=int(lo), max_value=int(hi))
    else:
        raise click.BadParameter(f"unknown measure type {kind!r}")
    return Measure(id=fresh_id(), name=name, input=inp, reminders=(reminder,))


@click.group()
@click.option("--store", "store_dir", envvar="SELFTRIAL_STORE", type=click.Path(path_type=Path), default=DEFAULT_STORE, help="Store directory.")
@click.option("--now", "now_text", default=None, help="Frozen clock override (YYYY-MM-DD[THH:MM]).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def main(ctx, store_dir: Path, now_text: str | None, fmt: str):
    """Create and run personal single-case experiments from the terminal."""
    ctx.obj = Context(store_dir, _parse_now(now_text), fmt)


def command(fn):
    """Wrap a command so engine errors print their code and exit 1."""

    @click.pass_obj
    def wrapper(obj: Context, *args, **kwargs):
        try:
            obj.lock()
            fn(obj, *args, **kwargs)
        except DomainError as e:
            click.echo(f"{e.code}: {e.message}" + (f" (at {e.path})" if e.path else ""), err=True)
            sys.exit(1)
        finally:
            obj.unlock()

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _require_active(store: store_mod.Store) -> Trial:
    if store.active_trial is None:
        raise DomainError("NO_TRIAL", "no active trial; create one with 'new'")
    return store.active_trial


def _require_running(store: store_mod.Store) -> Trial:
    trial = _require_active(store)
    if trial.stage is not Stage.RUNNING:
        raise DomainError("NOT_RUNNING", "the active trial is not running")
    return trial


@main.command("new")
@click.option("--goal", "goal_name", default=None)
@click.option("--intervention-a", "name_a", default=None)
@click.option("--instructions-a", default="")
@click.option("--remind-a", multiple=True, help='Reminder spec "HH:MM,HH:MM/N".')
@click.option("--compare/--no-compare", default=False, help="Compare two interventions (alternating-treatment design).")
@click.option("--intervention-b", "name_b", default=None)
@click.option("--instructions-b", default="")
@click.option("--remind-b", multiple=True)
@click.option("--measure", "measure_specs", multiple=True, help='Measure spec "name=scale:0..10@HH:MM".')
@command
def cmd_new(obj: Context, goal_name, name_a, instructions_a, remind_a, compare, name_b, instructions_b, remind_b, measure_specs):
    """Create a draft trial (interactive when no flags are given on a TTY)."""
    store = obj.load()
    if store.active_trial is not None:
        raise DomainError("TRIAL_EXISTS", "an active trial already exists")
    interactive = goal_name is None and sys.stdin.isatty()
    if interactive:
        goal_name = click.prompt("Your goal")
        name_a = click.prompt("What is one thing you want to try out to achieve your goal?")
        instructions_a = click.prompt("Instructions for yourself", default="")
        remind_a = (click.prompt("Reminder times (HH:MM,HH:MM/N)", default="18:00"),)
        compare = click.confirm("Do you want to compare it against a second intervention?", default=False)
        if compare:
            name_b = click.prompt("Second intervention")
            instructions_b = click.prompt("Instructions", default="")
            remind_b = (click.prompt("Reminder times", default="18:00"),)
        specs = click.prompt("Measures (name=type:params, semicolon-separated)", default="Well-being=scale:0..10")
        measure_specs = tuple(s.strip() for s in specs.split(";") if s.strip())
    reminders_a = tuple(_parse_reminder(s) for s in remind_a) or (Reminder(times=("18:00",)),)
    reminders_b = tuple(_parse_reminder(s) for s in remind_b) or (Reminder(times=("18:00",)),)
    draft = Trial(
        goal=Goal(name=goal_name) if goal_name else None,
        design=Design.ALTERNATING_TREATMENT if compare else Design.WITHDRAWAL,
        intervention_a=Intervention(id=fresh_id(), name=name_a, instructions=instructions_a, reminders=reminders_a)
        if name_a
        else None,
        intervention_b=Intervention(id=fresh_id(), name=name_b, instructions=instructions_b, reminders=reminders_b)
        if compare and name_b
        else None,
        measures=tuple(_parse_measure(s) for s in measure_specs),
    )
    violations = validate_draft(draft)
    obj.save(store_mod.Store(active_trial=draft, archive=store.archive))
    if violations:
        click.echo("draft saved with open sections: " + ", ".join(violations))
    else:
        click.echo("draft saved and complete; run 'start' to begin")


@main.group("lib")
def cmd_lib():
    """Browse the preconfigured component library."""


def _lib_list(obj: Context, kind: lib_mod.EntryKind, key: str):
    doc = lib_mod.library_to_json()[key]
    obj.emit(doc, [e["name"] + (f"  (for: {e['linkedGoal']})" if "linkedGoal" in e else "") for e in doc])


@cmd_lib.command("goals")
@command
def lib_goals(obj: Context):
    """List preconfigured goals."""
    _lib_list(obj, lib_mod.EntryKind.GOAL, "goals")


@cmd_lib.command("interventions")
@command
def lib_interventions(obj: Context):
    """List preconfigured interventions with their linked goals."""
    _lib_list(obj, lib_mod.EntryKind.INTERVENTION, "interventions")


@cmd_lib.command("measures")
@command
def lib_measures(obj: Context):
    """List preconfigured measures."""
    _lib_list(obj, lib_mod.EntryKind.MEASURE, "measures")


@cmd_lib.command("suggest")
@click.argument("goal_name")
@command
def lib_suggest(obj: Context, goal_name: str):
    """Suggested interventions for a goal."""
    names = [i.name for i in lib_mod.suggestions_for_goal(goal_name)]
    obj.emit(names, names)


@main.group("schedule")
def cmd_schedule():
    """Show or edit the active trial's schedule."""


def _schedule_doc(schedule: Schedule) -> dict:
    return {
        "phaseDurationDays": schedule.phase_duration_days,
        "phasePairs": schedule.phase_pairs,
        "order": schedule.order.value,
        "sequence": "".join(p.value for p in phase_sequence(schedule.order, schedule.phase_pairs)),
        "totalDays": total_duration(schedule),
    }


@cmd_schedule.command("show")
@command
def schedule_show(obj: Context):
    """Print the schedule, its phase sequence and total duration."""
    store = obj.load()
    trial = _require_active(store)
    schedule = trial.schedule if trial.schedule is not None else store_mod.default_schedule()
    doc = _schedule_doc(schedule)
    obj.emit(doc, [f"{doc['sequence']}  {doc['phaseDurationDays']} days/phase, {doc['phasePairs']} pairs, {doc['order']}, total {doc['totalDays']} days"])


@cmd_schedule.command("edit")
@click.option("--duration", type=int, default=None, help="Phase duration in days.")
@click.option("--pairs", type=int, default=None, help="Number of phase pairs.")
@click.option("--order", type=click.Choice(["alternating", "counterbalanced"]), default=None)
@command
def schedule_edit(obj: Context, duration, pairs, order):
    """Change schedule settings on the active draft."""
    from dataclasses import replace

    store = obj.load()
    trial = _require_active(store)
    if trial.stage is not Stage.DRAFT:
        raise DomainError("ALREADY_STARTED", "the schedule can only be edited on a draft")
    base = trial.schedule if trial.schedule is not None else store_mod.default_schedule()
    schedule = Schedule(
        phase_duration_days=duration if duration is not None else base.phase_duration_days,
        phase_pairs=pairs if pairs is not None else base.phase_pairs,
        order=OrderStrategy(order) if order is not None else base.order,
    )
    obj.save(store_mod.Store(active_trial=replace(trial, schedule=schedule), archive=store.archive))
    doc = _schedule_doc(schedule)
    obj.emit(doc, [f"schedule set: {doc['sequence']}, total {doc['totalDays']} days"])


@main.command("start")
@click.option("--date", "date_text", default=None, help="Start date (default: today).")
@command
def cmd_start(obj: Context, date_text):
    """Finalize the draft and start running it."""
    store = obj.load()
    trial = _require_active(store)
    start = date.fromisoformat(date_text) if date_text else obj.now.date()
    running = store_mod.start_trial(trial, start)
    obj.save(store_mod.Store(active_trial=running, archive=store.archive))
    click.echo(f"trial running; day 0 is {start.isoformat()}")


@main.command("tasks")
@click.option("--date", "date_text", default=None, help="Day to list (default: today).")
@command
def cmd_tasks(obj: Context, date_text):
    """List the tasks due on a day, with completion marks."""
    store = obj.load()
    trial = _require_running(store)
    day = date.fromisoformat(date_text) if date_text else obj.now.date()
    views = tasks_view(trial, day)
    obj.emit(
        views,
        [f"[{'x' if v['done'] else ' '}] {v['time']}  {v['title']}  ({v['kind']}, id {v['componentId']})" for v in views]
        or ["no tasks today"],
    )


@main.command("check")
@click.argument("task_ref")
@click.option("--date", "date_text", default=None, help="Task day (default: today).")
@click.option("--undo", is_flag=True, help="Mark as not completed.")
@command
def cmd_check(obj: Context, task_ref, date_text, undo):
    """Check off a task, referenced as componentId@HH:MM."""
    store = obj.load()
    trial = _require_running(store)
    component_id, sep, time = task_ref.partition("@")
    if not sep:
        raise click.BadParameter("task reference must look like componentId@HH:MM")
    day = date.fromisoformat(date_text) if date_text else obj.now.date()
    updated = store_mod.mark_task(trial, component_id, day, time, not undo)
    obj.save(store_mod.Store(active_trial=updated, archive=store.archive))
    click.echo(("unchecked" if undo else "checked") + f" {component_id} at {time} on {day.isoformat()}")


@main.command("log")
@click.argument("measure_id")
@click.argument("value")
@click.option("--at", "at_text", default=None, help="Timestamp YYYY-MM-DDTHH:MM (default: now).")
@command
def cmd_log(obj: Context, measure_id, value, at_text):
    """Record a measurement for a measure."""
    store = obj.load()
    trial = _require_running(store)
    measure = trial.find_measure(measure_id)
    if measure is None:
        raise DomainError("UNKNOWN_MEASURE", f"no measure with id {measure_id!r}")
    if isinstance(measure.input, NumericInput):
        parsed = NumericValue(value=float(value))
    elif isinstance(measure.input, ListInput):
        parsed = ListValue(index=int(value))
    else:
        parsed = ScaleValue(value=int(value))
    timestamp = parse_timestamp(at_text) if at_text else obj.now
    updated = store_mod.log_measurement(trial, measure_id, timestamp, parsed)
    obj.save(store_mod.Store(active_trial=updated, archive=store.archive))
    stored = updated.logs.measurements[-1]
    click.echo(f"logged {measure.name} = {value} at {stored.timestamp.strftime('%Y-%m-%dT%H:%M')}")


@main.command("history")
@click.argument("measure_id", required=False)
@command
def cmd_history(obj: Context, measure_id):
    """Per-phase summaries and condition comparison for one or all measures."""
    store = obj.load()
    trial = store.active_trial if store.active_trial is not None else (store.archive[-1] if store.archive else None)
    if trial is None:
        raise DomainError("NO_TRIAL", "no trial to summarize")
    if trial.stage is Stage.DRAFT:
        raise DomainError("NOT_STARTED", "the trial has not been started")
    ids = [measure_id] if measure_id else [m.id for m in trial.measures]
    payload = [measure_summary_view(trial, mid) for mid in ids]
    lines = []
    for doc in payload:
        lines.append(f"{doc['measureName']} ({doc['measureId']}):")
        for s in doc["summaries"]:
            stats = f"mean {s['mean']:.2f} range [{s['min']}, {s['max']}]" if "mean" in s else (
                "items " + ", ".join(f"{k}:{v}" for k, v in s.get("itemCounts", {}).items()) if s.get("itemCounts") else "no data"
            )
            lines.append(f"  phase {s['phaseOrdinal']} ({s['label']}): n={s['count']} {stats}")
        comparison = doc.get("comparison")
        if comparison and "difference" in comparison:
            lines.append(f"  A vs B: {comparison['meanA']:.2f} vs {comparison['meanB']:.2f} (diff {comparison['difference']:+.2f})")
    prog = progress(trial, obj.now.date())
    adh = adherence(trial, obj.now.date())
    payload = {"measures": payload, "progress": prog, "adherence": adh}
    lines.append(f"day {prog['dayIndex']}, {prog['fraction']:.0%} elapsed; adherence {adh['completed']}/{adh['generated']}")
    obj.emit(payload, lines)


@main.command("export")
@command
def cmd_export(obj: Context):
    """Print the active (or latest archived) trial as an interchange document."""
    store = obj.load()
    trial = store.active_trial if store.active_trial is not None else (store.archive[-1] if store.archive else None)
    if trial is None:
        raise DomainError("NO_TRIAL", "nothing to export")
    click.echo(export_trial(trial))


@main.command("import")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@command
def cmd_import(obj: Context, file: Path):
    """Validate and install a trial from an interchange document."""
    store = obj.load()
    trial = import_trial(file.read_text(encoding="utf-8"))
    if trial.stage is Stage.FINISHED:
        obj.save(store_mod.Store(active_trial=store.active_trial, archive=store.archive + (trial,)))
        click.echo("imported into the archive")
    else:
        if store.active_trial is not None:
            raise DomainError("TRIAL_EXISTS", "an active trial already exists")
        obj.save(store_mod.Store(active_trial=trial, archive=store.archive))
        click.echo(f"imported as the active trial ({trial.stage.value})")


@main.command("restart")
@command
def cmd_restart(obj: Context):
    """Draft a new trial based on the most recent finished one."""
    store = obj.load()
    if store.active_trial is not None:
        raise DomainError("TRIAL_EXISTS", "finish or remove the active trial first")
    if not store.archive:
        raise DomainError("NOT_FINISHED", "no finished trial to restart from")
    draft = store_mod.restart_from(store.archive[-1])
    obj.save(store_mod.Store(active_trial=draft, archive=store.archive))
    click.echo("new draft created from the previous trial")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8722, show_default=True, type=int)
@click.option("--static", "static_dir", type=click.Path(path_type=Path), default=None, help="Directory with the built browser UI, served at /app.")
@click.pass_obj
def cmd_serve(obj: Context, host, port, static_dir):
    """Run the local HTTP service (loopback only by default)."""
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(obj.store_dir, static_dir=static_dir), host=host, port=port)


if __name__ == "__main__":
    main()
