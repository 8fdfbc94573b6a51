/**
 * Single-page app wiring the three stages: creation wizard, run-trial home
 * screen, and history. All state changes round-trip through the service.
 */

import { api, scheduleOrDefault, ServiceError } from "./api.js";
import { historyModel } from "./history.js";
import { schedulePreview } from "./schedule.js";
import {
  advance,
  initialWizardState,
  nextSection,
  SECTION_TITLES,
  toDraftDoc,
  visibleSections,
  WizardState,
  wizardDone,
} from "./wizard.js";
import { InterventionDoc, MeasureDoc, TaskDoc, TrialDoc } from "./types.js";

const root = document.getElementById("app")!;

function el(tag: string, attrs: Record<string, string> = {}, ...children: (Node | string)[]): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function freshId(): string {
  return Math.random().toString(36).slice(2, 14);
}

function todayIso(): string {
  const now = new Date();
  return `${now.getFullYear()}-${String(now.getMonth() + 1).padStart(2, "0")}-${String(now.getDate()).padStart(2, "0")}`;
}

async function main(): Promise<void> {
  let trial: TrialDoc | null = null;
  try {
    trial = await api.trial();
  } catch (error) {
    if (!(error instanceof ServiceError && error.error.code === "NO_TRIAL")) throw error;
  }
  if (trial === null || trial.stage === "finished") {
    renderWizard(trial);
  } else if (trial.stage === "draft") {
    renderScheduleAndStart(trial);
  } else {
    renderHome(trial);
  }
}

// --- creation wizard ------------------------------------------------------

function renderWizard(previous: TrialDoc | null): void {
  let state: WizardState = initialWizardState();

  const render = (): void => {
    root.replaceChildren();
    root.append(el("h1", {}, "Your experiment"));
    if (previous !== null) {
      const restart = el("button", { class: "secondary" }, "Start from your previous experiment") as HTMLButtonElement;
      restart.onclick = async () => {
        const draft = await api.restart();
        renderScheduleAndStart(draft);
      };
      root.append(restart);
    }
    for (const section of visibleSections(state)) {
      const done = section < state.currentSection;
      const active = section === state.currentSection;
      const card = el("section", { class: "card" + (active ? " active" : done ? " done" : " pending") });
      card.append(el("h2", {}, `${section}. ${SECTION_TITLES[section]}`));
      if (active) card.append(sectionBody(section));
      else if (done) card.append(el("p", { class: "muted" }, sectionSummary(section)));
      root.append(card);
    }
    if (wizardDone(state)) {
      const submit = el("button", {}, "Review schedule") as HTMLButtonElement;
      submit.onclick = async () => {
        const draft = await api.createDraft(toDraftDoc(state));
        renderScheduleAndStart(draft);
      };
      root.append(submit);
    }
  };

  const sectionSummary = (section: number): string => {
    switch (section) {
      case 1:
        return state.goalName;
      case 2:
        return state.interventionA?.name ?? "";
      case 3:
        return state.compareAnswer === "yes" ? "Comparing two interventions" : "Trying one intervention";
      case 4:
        return state.interventionB?.name ?? "";
      default:
        return state.measures.map((m) => m.name).join(", ");
    }
  };

  const continueButton = (): HTMLElement => {
    const button = el("button", {}, "Continue") as HTMLButtonElement;
    button.onclick = () => {
      const result = nextSection(state);
      if (result.kind === "incomplete") return;
      state = advance(state);
      render();
    };
    return button;
  };

  const sectionBody = (section: number): HTMLElement => {
    const body = el("div", {});
    if (section === 1) {
      const input = el("input", { placeholder: "What do you want to achieve?", value: state.goalName }) as HTMLInputElement;
      input.oninput = () => (state.goalName = input.value);
      body.append(input, continueButton());
    } else if (section === 2 || section === 4) {
      body.append(interventionForm(section));
    } else if (section === 3) {
      body.append(el("p", {}, "Do you want to compare it against a second intervention?"));
      for (const answer of ["yes", "no"] as const) {
        const button = el("button", { class: state.compareAnswer === answer ? "" : "secondary" }, answer) as HTMLButtonElement;
        button.onclick = () => {
          state.compareAnswer = answer;
          state = advance(state);
          render();
        };
        body.append(button);
      }
    } else {
      body.append(measureForm());
    }
    return body;
  };

  const interventionForm = (section: number): HTMLElement => {
    const body = el("div", {});
    const label =
      section === 2 ? "What is one thing you want to try out to achieve your goal?" : "And the second intervention?";
    body.append(el("p", {}, label));
    const name = el("input", { placeholder: "Intervention name" }) as HTMLInputElement;
    const instructions = el("input", { placeholder: "Instructions for yourself (optional)" }) as HTMLInputElement;
    const time = el("input", { value: "18:00" }) as HTMLInputElement;
    body.append(name, instructions, el("label", {}, "Reminder time ", time));
    const save = el("button", {}, "Continue") as HTMLButtonElement;
    save.onclick = () => {
      if (!name.value.trim()) return;
      const doc: InterventionDoc = {
        id: freshId(),
        name: name.value,
        instructions: instructions.value,
        reminders: [{ times: [time.value], everyNDays: 1 }],
      };
      if (section === 2) state.interventionA = doc;
      else state.interventionB = doc;
      state = advance(state);
      render();
    };
    body.append(save);
    return body;
  };

  const measureForm = (): HTMLElement => {
    const body = el("div", {});
    body.append(el("p", {}, "What will you measure to see if it works?"));
    const name = el("input", { placeholder: "Measure name" }) as HTMLInputElement;
    const type = el("select", {}) as HTMLSelectElement;
    for (const option of ["scale", "numeric", "list"]) type.append(el("option", { value: option }, option));
    const detail = el("input", { placeholder: "0..10 | unit | item,item" }) as HTMLInputElement;
    detail.value = "0..10";
    const time = el("input", { value: "09:00" }) as HTMLInputElement;
    const add = el("button", { class: "secondary" }, "Add measure") as HTMLButtonElement;
    add.onclick = () => {
      if (!name.value.trim()) return;
      let input: MeasureDoc["input"];
      if (type.value === "numeric") input = { type: "numeric", unit: detail.value };
      else if (type.value === "list") input = { type: "list", items: detail.value.split(",").map((s) => s.trim()) };
      else {
        const [lo, hi] = detail.value.split("..").map(Number);
        input = { type: "scale", min: lo, max: hi, annotations: {} };
      }
      state.measures.push({ id: freshId(), name: name.value, input, reminders: [{ times: [time.value], everyNDays: 1 }] });
      render();
    };
    body.append(name, type, detail, el("label", {}, "Reminder time ", time), add);
    if (state.measures.length > 0) {
      body.append(el("p", {}, "Added: " + state.measures.map((m) => m.name).join(", ")), continueButton());
    }
    return body;
  };

  render();
}

// --- schedule review + start ---------------------------------------------

function renderScheduleAndStart(trial: TrialDoc): void {
  let schedule = scheduleOrDefault(trial);

  const render = (): void => {
    root.replaceChildren();
    root.append(el("h1", {}, "Experiment schedule"));
    const preview = schedulePreview(schedule);
    const strip = el("div", { class: "phase-strip" });
    for (const block of preview.blocks) {
      strip.append(
        el(
          "div",
          { class: "phase-block phase-" + block.label, style: `flex:${block.days}` },
          `${block.label} (${block.days}d)`
        )
      );
    }
    root.append(strip, el("p", {}, `Total duration: ${preview.totalDays} days (${preview.sequence})`));

    const duration = el("input", { type: "number", min: "1", value: String(schedule.phaseDurationDays) }) as HTMLInputElement;
    const pairs = el("input", { type: "number", min: "1", value: String(schedule.phasePairs) }) as HTMLInputElement;
    const order = el("select", {}) as HTMLSelectElement;
    for (const option of ["alternating", "counterbalanced"]) {
      const node = el("option", { value: option }, option) as HTMLOptionElement;
      node.selected = option === schedule.order;
      order.append(node);
    }
    const onEdit = () => {
      schedule = {
        phaseDurationDays: Math.max(1, Number(duration.value) || 1),
        phasePairs: Math.max(1, Number(pairs.value) || 1),
        order: order.value as typeof schedule.order,
      };
      render();
    };
    duration.onchange = pairs.onchange = order.onchange = onEdit;
    root.append(
      el("div", { class: "card" },
        el("label", {}, "Phase duration (days) ", duration),
        el("label", {}, "Phase pairs ", pairs),
        el("label", {}, "Phase order ", order)
      )
    );

    const start = el("button", {}, "Start experiment") as HTMLButtonElement;
    start.onclick = async () => {
      await api.updateDraft({ ...trial, schedule });
      const running = await api.start(todayIso());
      renderHome(running);
    };
    root.append(start);
  };

  render();
}

// --- run-trial home screen ------------------------------------------------

function renderHome(trial: TrialDoc): void {
  const render = async (): Promise<void> => {
    root.replaceChildren();
    root.append(el("h1", {}, trial.goal?.name ?? "Your experiment"));
    const progress = await api.progress();
    const bar = el("div", { class: "progress" }, el("div", { class: "progress-fill", style: `width:${progress.fraction * 100}%` }));
    root.append(
      bar,
      el("p", { class: "muted" }, `Day ${progress.dayIndex + 1} — adherence ${progress.adherence.completed}/${progress.adherence.generated}`)
    );

    let tasks: TaskDoc[] = [];
    try {
      tasks = await api.tasks();
    } catch (error) {
      if (!(error instanceof ServiceError)) throw error;
    }
    const list = el("ul", { class: "tasks" });
    for (const task of tasks) {
      const checkbox = el("input", { type: "checkbox" }) as HTMLInputElement;
      checkbox.checked = task.done;
      checkbox.onchange = async () => {
        await api.check(task.componentId, task.date, task.time, checkbox.checked);
        void render();
      };
      const item = el("li", {}, checkbox, ` ${task.time} ${task.title}`);
      if (task.kind === "measure") {
        const value = el("input", { class: "value", placeholder: "value" }) as HTMLInputElement;
        const log = el("button", { class: "secondary" }, "log") as HTMLButtonElement;
        log.onclick = async () => {
          const measure = trial.measures.find((m) => m.id === task.componentId)!;
          const raw = value.value;
          const doc =
            measure.input.type === "numeric"
              ? ({ type: "numeric", value: Number(raw) } as const)
              : measure.input.type === "list"
                ? ({ type: "list", index: Number(raw) } as const)
                : ({ type: "scale", value: Number(raw) } as const);
          try {
            await api.log(task.componentId, doc, `${task.date}T${task.time}`);
          } catch (error) {
            if (error instanceof ServiceError) alert(error.message);
            else throw error;
          }
        };
        item.append(" ", value, log);
      }
      list.append(item);
    }
    root.append(el("h2", {}, "Today's tasks"), tasks.length ? list : el("p", { class: "muted" }, "Nothing due today."));

    const historyButton = el("button", { class: "secondary" }, "History") as HTMLButtonElement;
    historyButton.onclick = () => renderHistory(trial);
    root.append(historyButton);
    requestNotifications(tasks);
  };

  void render();
}

function requestNotifications(tasks: TaskDoc[]): void {
  if (!("Notification" in window)) return;
  if (Notification.permission === "default") void Notification.requestPermission();
  if (Notification.permission !== "granted") return;
  const now = new Date();
  for (const task of tasks.filter((t) => !t.done)) {
    const at = new Date(`${task.date}T${task.time}`);
    const delay = at.getTime() - now.getTime();
    if (delay > 0 && delay < 12 * 3600 * 1000) {
      setTimeout(() => new Notification(task.title, { body: `Due at ${task.time}` }), delay);
    }
  }
}

// --- history --------------------------------------------------------------

function renderHistory(trial: TrialDoc): void {
  const render = async (): Promise<void> => {
    root.replaceChildren();
    root.append(el("h1", {}, "History"));
    for (const measure of trial.measures) {
      const summary = await api.summary(measure.id);
      const model = historyModel(trial, summary);
      const card = el("section", { class: "card" }, el("h2", {}, measure.name));
      if (model.kind === "empty") {
        card.append(el("p", { class: "muted" }, model.message));
      } else {
        card.append(drawChart(model));
        if (summary.comparison?.difference !== undefined) {
          card.append(
            el(
              "p",
              {},
              `A mean ${summary.comparison.meanA!.toFixed(2)} vs B mean ${summary.comparison.meanB!.toFixed(2)} ` +
                `(difference ${summary.comparison.difference.toFixed(2)})`
            )
          );
        }
      }
      root.append(card);
    }
    const back = el("button", { class: "secondary" }, "Back") as HTMLButtonElement;
    back.onclick = () => renderHome(trial);
    root.append(back);
  };
  void render();
}

function drawChart(model: Exclude<ReturnType<typeof historyModel>, { kind: "empty" }>): SVGSVGElement {
  const width = 640;
  const height = 200;
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  const x = (day: number) => (day / model.totalDays) * width;

  for (const band of model.bands) {
    const rect = document.createElementNS("http://www.w3.org/2000/svg", "rect");
    rect.setAttribute("x", String(x(band.startDay)));
    rect.setAttribute("width", String(x(band.endDay) - x(band.startDay)));
    rect.setAttribute("y", "0");
    rect.setAttribute("height", String(height));
    rect.setAttribute("class", "band band-" + band.label);
    svg.append(rect);
  }

  if (model.kind === "numeric") {
    const values = model.points.map((p) => p.value).concat(model.means.map((m) => m.mean));
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const y = (v: number) => (hi === lo ? height / 2 : height - 20 - ((v - lo) / (hi - lo)) * (height - 40));
    for (const mean of model.means) {
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", String(x(mean.startDay)));
      line.setAttribute("x2", String(x(mean.endDay)));
      line.setAttribute("y1", String(y(mean.mean)));
      line.setAttribute("y2", String(y(mean.mean)));
      line.setAttribute("class", "mean-line");
      svg.append(line);
    }
    for (const point of model.points) {
      const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      circle.setAttribute("cx", String(x(point.day + 0.5)));
      circle.setAttribute("cy", String(y(point.value)));
      circle.setAttribute("r", "4");
      circle.setAttribute("class", "point");
      svg.append(circle);
    }
  } else {
    const maxCount = Math.max(1, ...model.groups.flatMap((g) => g.bars.map((b) => b.count)));
    for (const group of model.groups) {
      const band = model.bands[group.ordinal];
      const bandWidth = x(band.endDay) - x(band.startDay);
      const barWidth = bandWidth / (group.bars.length + 1);
      group.bars.forEach((bar, index) => {
        const rect = document.createElementNS("http://www.w3.org/2000/svg", "rect");
        const barHeight = (bar.count / maxCount) * (height - 40);
        rect.setAttribute("x", String(x(band.startDay) + barWidth * (index + 0.5)));
        rect.setAttribute("width", String(barWidth * 0.8));
        rect.setAttribute("y", String(height - 20 - barHeight));
        rect.setAttribute("height", String(barHeight));
        rect.setAttribute("class", "bar");
        svg.append(rect);
      });
    }
  }
  return svg;
}

void main();
