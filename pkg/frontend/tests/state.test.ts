import { describe, expect, it } from "vitest";

import { decodeJudgment, encodeJudgment } from "../src/format.js";
import { pairKey, prefillPairs, sessionView, wizardPairs } from "../src/state.js";
import type { SessionEnvelope } from "../src/types.js";
import { fixture } from "./helpers.js";

const envelope = fixture<SessionEnvelope>("session-create.json");

describe("sessionView", () => {
  it("flattens the worked example into a synthetic-rooted tree", () => {
    const view = sessionView(envelope);
    expect(view.nodes[0].id).toBe("goal");
    expect(view.nodes[0].depth).toBe(0);
    expect(view.nodes[0].childIds).toHaveLength(4);
    expect(view.leafIds).toHaveLength(24);
    expect(view.alternatives.map((a) => a.id)).toEqual(["A", "B", "C", "D", "E"]);
    expect(view.unjudgedNodes).toEqual([]);
    expect(view.unratedAlternatives).toEqual([]);
  });

  it("joins per-node analysis only onto judged nodes", () => {
    const view = sessionView(envelope);
    const judged = view.nodes.filter((n) => n.analysis !== null);
    expect(judged.map((n) => n.id).sort()).toEqual(
      Object.keys(envelope.analysis.nodes).sort(),
    );
    const goal = view.byId.get("goal")!;
    expect(goal.analysis!.consistency.consistent).toBe(true);
    const leaf = view.byId.get(view.leafIds[0])!;
    expect(leaf.analysis).toBeNull();
    expect(leaf.judgeable).toBe(false);
  });

  it("reads names back for every leaf", () => {
    const view = sessionView(envelope);
    for (const leaf of view.leafIds) {
      expect(view.leafNames.get(leaf)).toBeTruthy();
    }
  });

  it("carries unjudged and unrated lists through from the analysis block", () => {
    const bare = sessionView(fixture<SessionEnvelope>("session-unjudged.json"));
    expect(bare.unjudgedNodes).toEqual(["goal"]);
    expect(bare.unratedAlternatives).toEqual(["L1", "L2"]);
    expect(bare.leafIds).toEqual(["price", "battery"]);
  });
});

describe("wizardPairs", () => {
  it("covers the full upper triangle once", () => {
    const view = sessionView(envelope);
    const goal = view.byId.get("goal")!;
    const pairs = wizardPairs(goal);
    expect(pairs).toHaveLength(6); // 4 children -> 4*3/2 pairs
    const keys = pairs.map((p) => pairKey(p.i, p.j));
    expect(new Set(keys).size).toBe(6);
    for (const p of pairs) expect(p.i).toBeLessThan(p.j);
  });

  it("covers n(n-1)/2 for every judgeable node in the model", () => {
    const view = sessionView(envelope);
    for (const node of view.nodes.filter((n) => n.judgeable)) {
      const n = node.childIds.length;
      expect(wizardPairs(node)).toHaveLength((n * (n - 1)) / 2);
    }
  });
});

describe("judgment control encoding", () => {
  it("round-trips every control position", () => {
    for (const direction of ["row", "col"] as const) {
      for (let intensity = 1; intensity <= 9; intensity++) {
        const wire = encodeJudgment({ direction, intensity });
        const back = decodeJudgment(wire)!;
        expect(back.intensity).toBe(intensity);
        if (intensity > 1) expect(back.direction).toBe(direction);
      }
    }
  });

  it("emits reciprocals as exact fraction strings", () => {
    expect(encodeJudgment({ direction: "col", intensity: 4 })).toBe("1/4");
    expect(encodeJudgment({ direction: "row", intensity: 4 })).toBe(4);
    expect(encodeJudgment({ direction: "col", intensity: 1 })).toBe(1);
  });

  it("rejects wire values outside the nine-point control", () => {
    expect(decodeJudgment(11)).toBeNull();
    expect(decodeJudgment(0)).toBeNull();
    expect(decodeJudgment("2/3")).toBeNull();
    expect(decodeJudgment(2.5)).toBeNull();
  });
});

describe("prefillPairs", () => {
  it("reads the stored goal matrix back into control values", () => {
    const view = sessionView(envelope);
    const goal = view.byId.get("goal")!;
    const values = prefillPairs(goal.matrix);
    expect(values.size).toBe(6);
    // published judgments: quality over cost at 9, cost under delivery at 1/4
    expect(values.get(pairKey(0, 1))).toEqual({ direction: "row", intensity: 9 });
    expect(values.get(pairKey(1, 2))).toEqual({ direction: "col", intensity: 4 });
  });

  it("normalizes lower-triangle judgment entries", () => {
    const values = prefillPairs({
      judgments: [
        [1, 0, "1/9"],
        { row: 2, col: 0, value: 5 },
      ],
    });
    expect(values.get(pairKey(0, 1))).toEqual({ direction: "row", intensity: 9 });
    expect(values.get(pairKey(0, 2))).toEqual({ direction: "col", intensity: 5 });
  });

  it("is empty for a node without a matrix", () => {
    expect(prefillPairs(null).size).toBe(0);
  });
});
