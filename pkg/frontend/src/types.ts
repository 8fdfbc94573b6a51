/** Wire types mirroring the local service's JSON vocabulary. */

export type Design = "withdrawal" | "alternating";
export type OrderStrategy = "alternating" | "counterbalanced";
export type StageName = "draft" | "running" | "finished";

export interface ReminderDoc {
  times: string[];
  everyNDays: number;
}

export type MeasureInputDoc =
  | { type: "numeric"; unit: string }
  | { type: "list"; items: string[] }
  | { type: "scale"; min: number; max: number; annotations?: Record<string, string> };

export interface InterventionDoc {
  id: string;
  name: string;
  instructions: string;
  reminders: ReminderDoc[];
}

export interface MeasureDoc {
  id: string;
  name: string;
  input: MeasureInputDoc;
  reminders: ReminderDoc[];
}

export interface ScheduleDoc {
  phaseDurationDays: number;
  phasePairs: number;
  order: OrderStrategy;
}

export interface TrialDoc {
  schemaVersion: number;
  goal?: { name: string };
  design: Design;
  interventionA?: InterventionDoc;
  interventionB?: InterventionDoc;
  measures: MeasureDoc[];
  schedule?: ScheduleDoc;
  startDate?: string;
  stage: StageName;
  logs: {
    measurements: { measureId: string; timestamp: string; value: ValueDoc }[];
    taskChecks: { componentId: string; date: string; time: string; completed: boolean }[];
  };
}

export type ValueDoc =
  | { type: "numeric"; value: number }
  | { type: "list"; index: number }
  | { type: "scale"; value: number };

export interface TaskDoc {
  componentId: string;
  kind: "measure" | "intervention";
  date: string;
  time: string;
  title: string;
  done: boolean;
}

export interface PhaseSummaryDoc {
  phaseOrdinal: number;
  label: "A" | "B";
  count: number;
  mean?: number;
  min?: number;
  max?: number;
  itemCounts?: Record<string, number>;
}

export interface MeasureSummaryDoc {
  measureId: string;
  measureName: string;
  summaries: PhaseSummaryDoc[];
  series: { timestamp: string; value: ValueDoc }[];
  comparison?: { nA: number; nB: number; meanA?: number; meanB?: number; difference?: number };
}

export interface ApiError {
  code: string;
  message: string;
  path?: string;
}
