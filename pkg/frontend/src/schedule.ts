/**
 * Schedule editor preview model. Mirrors the engine's sequence rules so
 * edits update the preview instantly; the engine remains the source of
 * truth once the draft is submitted.
 */

import { OrderStrategy, ScheduleDoc } from "./types.js";

export type PhaseLetter = "A" | "B";

export interface PhaseBlock {
  ordinal: number;
  label: PhaseLetter;
  days: number;
  startDay: number; // 0-based trial day the block begins on
}

export interface SchedulePreview {
  blocks: PhaseBlock[];
  totalDays: number;
  sequence: string;
}

export function phaseSequence(order: OrderStrategy, pairs: number): PhaseLetter[] {
  const sequence: PhaseLetter[] = [];
  for (let i = 0; i < pairs; i++) {
    if (order === "counterbalanced" && i % 2 === 1) {
      sequence.push("B", "A");
    } else {
      sequence.push("A", "B");
    }
  }
  return sequence;
}

export function schedulePreview(schedule: ScheduleDoc): SchedulePreview {
  const letters = phaseSequence(schedule.order, schedule.phasePairs);
  const blocks = letters.map((label, ordinal) => ({
    ordinal,
    label,
    days: schedule.phaseDurationDays,
    startDay: ordinal * schedule.phaseDurationDays,
  }));
  return {
    blocks,
    totalDays: 2 * schedule.phasePairs * schedule.phaseDurationDays,
    sequence: letters.join(""),
  };
}
