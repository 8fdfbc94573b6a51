/**
 * History screen chart model: raw points on a day axis with shaded A/B
 * phase bands and per-phase mean markers; list measures become per-item
 * frequency bars grouped by phase. Pure data transforms, rendering is in
 * app.ts.
 */

import { MeasureSummaryDoc, ScheduleDoc, TrialDoc } from "./types.js";
import { phaseSequence } from "./schedule.js";

export interface PhaseBand {
  ordinal: number;
  label: "A" | "B";
  startDay: number; // inclusive
  endDay: number; // exclusive
}

export interface PointModel {
  day: number;
  timestamp: string;
  value: number;
}

export interface MeanMarker {
  ordinal: number;
  label: "A" | "B";
  startDay: number;
  endDay: number;
  mean: number;
}

export interface ItemBarGroup {
  ordinal: number;
  label: "A" | "B";
  bars: { item: string; count: number }[];
}

export type HistoryModel =
  | { kind: "empty"; message: string }
  | { kind: "numeric"; bands: PhaseBand[]; points: PointModel[]; means: MeanMarker[]; totalDays: number }
  | { kind: "list"; bands: PhaseBand[]; groups: ItemBarGroup[]; totalDays: number };

export function phaseBands(schedule: ScheduleDoc): PhaseBand[] {
  return phaseSequence(schedule.order, schedule.phasePairs).map((label, ordinal) => ({
    ordinal,
    label,
    startDay: ordinal * schedule.phaseDurationDays,
    endDay: (ordinal + 1) * schedule.phaseDurationDays,
  }));
}

function dayIndex(startDate: string, timestamp: string): number {
  const start = new Date(startDate + "T00:00");
  const day = new Date(timestamp.slice(0, 10) + "T00:00");
  return Math.round((day.getTime() - start.getTime()) / 86400000);
}

export function historyModel(trial: TrialDoc, summary: MeasureSummaryDoc): HistoryModel {
  if (!trial.schedule || !trial.startDate) {
    return { kind: "empty", message: "The experiment has not started yet." };
  }
  if (summary.series.length === 0) {
    return { kind: "empty", message: "No data yet — check in after your first measurement." };
  }
  const bands = phaseBands(trial.schedule);
  const totalDays = 2 * trial.schedule.phasePairs * trial.schedule.phaseDurationDays;
  const measure = trial.measures.find((m) => m.id === summary.measureId);
  const isList = measure?.input.type === "list";
  if (isList) {
    const items = measure!.input.type === "list" ? measure!.input.items : [];
    const groups = summary.summaries.map((s) => ({
      ordinal: s.phaseOrdinal,
      label: s.label,
      bars: items.map((item, index) => ({
        item,
        count: s.itemCounts?.[String(index)] ?? 0,
      })),
    }));
    return { kind: "list", bands, groups, totalDays };
  }
  const points = summary.series
    .map((entry) => ({
      day: dayIndex(trial.startDate!, entry.timestamp),
      timestamp: entry.timestamp,
      value: entry.value.type === "list" ? entry.value.index : entry.value.value,
    }))
    .filter((p) => p.day >= 0 && p.day < totalDays);
  const means = summary.summaries
    .filter((s) => s.mean !== undefined)
    .map((s) => ({
      ordinal: s.phaseOrdinal,
      label: s.label,
      startDay: bands[s.phaseOrdinal].startDay,
      endDay: bands[s.phaseOrdinal].endDay,
      mean: s.mean!,
    }));
  return { kind: "numeric", bands, points, means, totalDays };
}
