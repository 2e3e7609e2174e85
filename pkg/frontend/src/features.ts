/** Per-vertex input features, bit-identical to the solver's extractor:
 * every value is rounded through 32-bit float precision. */

import { Graph, degree } from "./graph";

export const FEATURE_COUNT = 8;

export function extractFeatures(g: Graph): number[][] {
  const feats: number[][] = [];
  for (let v = 0; v < g.n; v++) {
    const nbrs = g.adjacency[v];
    const row = new Array(FEATURE_COUNT).fill(0);
    row[0] = g.weights[v];
    row[4] = nbrs.length;
    if (nbrs.length > 0) {
      const ws = nbrs.map((u) => g.weights[u]);
      const ds = nbrs.map((u) => degree(g, u));
      row[1] = ws.reduce((a, b) => a + b, 0);
      row[2] = Math.min(...ws);
      row[3] = Math.max(...ws);
      row[5] = ds.reduce((a, b) => a + b, 0) / ds.length;
      row[6] = Math.min(...ds);
      row[7] = Math.max(...ds);
    }
    feats.push(row.map(Math.fround));
  }
  return feats;
}
