/** Screening quality: how often suggested vertices are truly reducible,
 * how many reducible vertices are suggested, and how much work the model
 * proposes overall. */

import { predict } from "./forward";
import { Model } from "./model";
import { Instance } from "./train";

export const SUGGESTION_THRESHOLD = 0.5; // suggest strictly above

export interface ScreeningMetrics {
  accuracy: number; // P(reducible | suggested)
  coverage: number; // fraction of reducible vertices suggested
  screening: number; // fraction of all vertices suggested
  degenerate: boolean; // no suggestions at all; accuracy reported as 0
}

export function evaluate(model: Model, instances: Instance[]): ScreeningMetrics {
  let suggestedLabeled = 0; // suggested vertices with a definite 0/1 label
  let suggestedAll = 0;
  let suggestedReducible = 0;
  let reducible = 0;
  let total = 0;
  for (const inst of instances) {
    const scores = predict(model, inst.graph, inst.feats);
    for (let v = 0; v < inst.graph.n; v++) {
      total += 1;
      const hit = scores[v] > SUGGESTION_THRESHOLD;
      if (hit) suggestedAll += 1;
      if (inst.labels[v] === 2) continue; // timeouts have no ground truth
      if (hit) suggestedLabeled += 1;
      if (inst.labels[v] === 1) {
        reducible += 1;
        if (hit) suggestedReducible += 1;
      }
    }
  }
  const degenerate = suggestedLabeled === 0;
  return {
    accuracy: degenerate ? 0 : suggestedReducible / suggestedLabeled,
    coverage: reducible === 0 ? 0 : suggestedReducible / reducible,
    screening: total === 0 ? 0 : suggestedAll / total,
    degenerate,
  };
}

export function formatMetrics(m: ScreeningMetrics): string {
  return [
    `accuracy,${m.accuracy}`,
    `coverage,${m.coverage}`,
    `screening,${m.screening}`,
    `degenerate,${m.degenerate ? 1 : 0}`,
  ].join("\n");
}
