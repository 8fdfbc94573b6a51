import { describe, expect, it } from "vitest";

import { phaseSequence, schedulePreview } from "../src/schedule.js";

describe("schedule preview", () => {
  it("default schedule shows four blocks ABAB totalling 28 days", () => {
    const preview = schedulePreview({ phaseDurationDays: 7, phasePairs: 2, order: "alternating" });
    expect(preview.blocks).toHaveLength(4);
    expect(preview.sequence).toBe("ABAB");
    expect(preview.totalDays).toBe(28);
  });

  it("editing {7,2} to {1,3} grows the preview from 4 to 6 blocks with recomputed totals", () => {
    const before = schedulePreview({ phaseDurationDays: 7, phasePairs: 2, order: "alternating" });
    const after = schedulePreview({ phaseDurationDays: 1, phasePairs: 3, order: "alternating" });
    expect(before.blocks).toHaveLength(4);
    expect(after.blocks).toHaveLength(6);
    expect(after.totalDays).toBe(6);
    expect(after.sequence).toBe("ABABAB");
  });

  it("counterbalanced at 3 pairs shows ABBAAB", () => {
    const preview = schedulePreview({ phaseDurationDays: 1, phasePairs: 3, order: "counterbalanced" });
    expect(preview.sequence).toBe("ABBAAB");
  });

  it("blocks carry their start day for layout", () => {
    const preview = schedulePreview({ phaseDurationDays: 3, phasePairs: 2, order: "alternating" });
    expect(preview.blocks.map((b) => b.startDay)).toEqual([0, 3, 6, 9]);
  });

  it("sequences stay balanced for 1..10 pairs under both orders", () => {
    for (let pairs = 1; pairs <= 10; pairs++) {
      for (const order of ["alternating", "counterbalanced"] as const) {
        const letters = phaseSequence(order, pairs);
        expect(letters.filter((l) => l === "A")).toHaveLength(pairs);
        expect(letters.filter((l) => l === "B")).toHaveLength(pairs);
      }
    }
  });
});
