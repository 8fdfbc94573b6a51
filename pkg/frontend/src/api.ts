/** Typed fetch client for the local service; all state flows through it. */

import { ApiError, MeasureSummaryDoc, ScheduleDoc, TaskDoc, TrialDoc, ValueDoc } from "./types.js";

const BASE = "";

export class ServiceError extends Error {
  constructor(public readonly error: ApiError) {
    super(`${error.code}: ${error.message}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(BASE + path, init);
  if (!response.ok) {
    const body = (await response.json().catch(() => null)) as ApiError | null;
    throw new ServiceError(body ?? { code: "HTTP_" + response.status, message: response.statusText });
  }
  return (await response.json()) as T;
}

export const api = {
  library: () => request<{ goals: any[]; interventions: any[]; measures: any[] }>("/library"),
  trial: () => request<TrialDoc>("/trial"),
  createDraft: (doc: object) =>
    request<TrialDoc>("/trial", { method: "POST", headers: { "Content-Type": "application/json" }, body: JSON.stringify(doc) }),
  updateDraft: (doc: object) =>
    request<TrialDoc>("/trial", { method: "PATCH", headers: { "Content-Type": "application/json" }, body: JSON.stringify(doc) }),
  start: (startDate?: string) =>
    request<TrialDoc>("/trial/start", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(startDate ? { startDate } : {}),
    }),
  tasks: (date?: string) => request<TaskDoc[]>("/trial/tasks" + (date ? `?date=${date}` : "")),
  check: (componentId: string, date: string, time: string, completed: boolean) =>
    request<{ ok: boolean }>("/trial/checks", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ componentId, date, time, completed }),
    }),
  log: (measureId: string, value: ValueDoc, timestamp?: string) =>
    request<object>("/trial/logs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(timestamp ? { measureId, value, timestamp } : { measureId, value }),
    }),
  summary: (measureId: string) => request<MeasureSummaryDoc>(`/trial/summary/${measureId}`),
  progress: () => request<{ dayIndex: number; fraction: number; finished: boolean; adherence: { completed: number; generated: number; fraction: number } }>("/trial/progress"),
  restart: () => request<TrialDoc>("/trial/restart", { method: "POST" }),
};

export function scheduleOrDefault(trial: TrialDoc): ScheduleDoc {
  return trial.schedule ?? { phaseDurationDays: 7, phasePairs: 2, order: "alternating" };
}
