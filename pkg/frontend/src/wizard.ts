/**
 * Creation wizard state machine: five sections that appear one after
 * another. Section 4 (second intervention) exists only when the user wants
 * to compare two interventions; answering "no" skips straight to measures.
 *
 * Client-side gating mirrors the engine's draft validation; the service
 * stays authoritative on finalize.
 */

import { InterventionDoc, MeasureDoc } from "./types.js";

export type CompareAnswer = "yes" | "no" | "unanswered";

export interface WizardState {
  currentSection: number; // 1..5
  goalName: string;
  interventionA: InterventionDoc | null;
  compareAnswer: CompareAnswer;
  interventionB: InterventionDoc | null;
  measures: MeasureDoc[];
}

export const SECTION_TITLES: Record<number, string> = {
  1: "Your goal",
  2: "Your first intervention",
  3: "Compare against a second intervention?",
  4: "Your second intervention",
  5: "Your measures",
};

export function initialWizardState(): WizardState {
  return {
    currentSection: 1,
    goalName: "",
    interventionA: null,
    compareAnswer: "unanswered",
    interventionB: null,
    measures: [],
  };
}

export function sectionComplete(state: WizardState, section: number): boolean {
  switch (section) {
    case 1:
      return state.goalName.trim().length > 0;
    case 2:
      return state.interventionA !== null;
    case 3:
      return state.compareAnswer !== "unanswered";
    case 4:
      return state.compareAnswer === "no" || state.interventionB !== null;
    case 5:
      return state.measures.length > 0;
    default:
      return false;
  }
}

export type NextResult = { kind: "section"; section: number } | { kind: "done" } | { kind: "incomplete" };

/** Advance past the current section, skipping section 4 when not comparing. */
export function nextSection(state: WizardState): NextResult {
  if (!sectionComplete(state, state.currentSection)) {
    return { kind: "incomplete" };
  }
  let next = state.currentSection + 1;
  if (next === 4 && state.compareAnswer === "no") {
    next = 5;
  }
  if (next > 5) {
    return { kind: "done" };
  }
  return { kind: "section", section: next };
}

export function advance(state: WizardState): WizardState {
  const result = nextSection(state);
  if (result.kind !== "section") {
    return state;
  }
  return { ...state, currentSection: result.section };
}

/** Sections shown for the current answers, in order. */
export function visibleSections(state: WizardState): number[] {
  return state.compareAnswer === "no" ? [1, 2, 3, 5] : [1, 2, 3, 4, 5];
}

export function wizardDone(state: WizardState): boolean {
  return visibleSections(state).every((s) => sectionComplete(state, s));
}

/** Draft document for the service, shaped like the trial interchange. */
export function toDraftDoc(state: WizardState): object {
  const doc: Record<string, unknown> = {
    schemaVersion: 1,
    goal: { name: state.goalName },
    design: state.compareAnswer === "yes" ? "alternating" : "withdrawal",
    measures: state.measures,
    stage: "draft",
    logs: { measurements: [], taskChecks: [] },
  };
  if (state.interventionA) doc.interventionA = state.interventionA;
  if (state.compareAnswer === "yes" && state.interventionB) doc.interventionB = state.interventionB;
  return doc;
}
