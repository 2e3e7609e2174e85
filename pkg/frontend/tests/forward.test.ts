import { describe, expect, it } from "vitest";

import { extractFeatures } from "../src/features";
import { predict } from "../src/forward";
import { Graph, parseGraph, writeGraph } from "../src/graph";
import { Layer, Model, exportModel, initModel, parseModel } from "../src/model";
import { Rng } from "../src/rng";

export function makeGraph(weights: number[], edges: [number, number][]): Graph {
  const adjacency: number[][] = weights.map(() => []);
  for (const [u, v] of edges) {
    adjacency[u].push(v);
    adjacency[v].push(u);
  }
  return { n: weights.length, weights, adjacency };
}

export function randomGraph(rng: Rng, n: number, p: number, maxWeight = 20): Graph {
  const weights = Array.from({ length: n }, () => 1 + rng.int(maxWeight));
  const edges: [number, number][] = [];
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      if (rng.next() < p) edges.push([i, j]);
    }
  }
  return makeGraph(weights, edges);
}

function zeroModel(architecture: "gcn" | "sage" | "lr"): Model {
  const model = initModel(architecture, new Rng(0), 4);
  for (const layer of model.layers) {
    layer.bias.fill(0);
    for (const row of layer.weights) row.fill(0);
  }
  return model;
}

describe("features", () => {
  it("gives an isolated vertex zero neighborhood statistics", () => {
    expect(extractFeatures(makeGraph([4], []))).toEqual([[4, 0, 0, 0, 0, 0, 0, 0]]);
  });

  it("summarizes the neighborhood of a path center", () => {
    const g = makeGraph([2, 3, 4], [[0, 1], [1, 2]]);
    expect(extractFeatures(g)[1]).toEqual([3, 6, 2, 4, 2, 1, 1, 1]);
  });

  it("rounds through single precision", () => {
    const g = makeGraph([3, 10_000_001], [[0, 1]]);
    expect(extractFeatures(g)[0][1]).toBe(Math.fround(10_000_001));
  });
});

describe("graph files", () => {
  it("round-trips through the text format", () => {
    const g = randomGraph(new Rng(1), 12, 0.4);
    expect(parseGraph(writeGraph(g))).toEqual(g);
  });

  it("rejects an edge-count mismatch", () => {
    expect(() => parseGraph("1 3 10\n5\n")).toThrow(/edges/);
  });

  it("rejects a truncated file", () => {
    expect(() => parseGraph("2 0 10\n5\n")).toThrow(/vertex lines/);
  });
});

describe("forward", () => {
  for (const arch of ["gcn", "sage", "lr"] as const) {
    it(`${arch}: all-zero weights score exactly 0.5 everywhere`, () => {
      const g = randomGraph(new Rng(3), 9, 0.4);
      const scores = predict(zeroModel(arch), g, extractFeatures(g));
      expect(scores).toEqual(new Array(9).fill(0.5));
    });
  }

  it("rejects a feature width mismatch", () => {
    const g = makeGraph([1, 1], [[0, 1]]);
    const model = initModel("gcn", new Rng(0), 4);
    expect(() => predict(model, g, [[1, 2], [3, 4]])).toThrow(/feature matrix/);
  });
});

describe("model files", () => {
  for (const arch of ["gcn", "sage", "lr"] as const) {
    it(`${arch}: export/parse round trip preserves every parameter`, () => {
      const model = initModel(arch, new Rng(7), 5, 8, arch === "sage");
      const back = parseModel(exportModel(model));
      expect(back).toEqual(model);
    });
  }

  it("rejects a foreign header", () => {
    expect(() => parseModel("other-format 1\n")).toThrow(/header/);
  });

  it("rejects a parameter count mismatch", () => {
    const text = exportModel(initModel("gcn", new Rng(1), 3));
    const lines = text.split("\n");
    const wIdx = lines.findIndex((l) => l.startsWith("W "));
    lines[wIdx] = lines[wIdx].split(" ").slice(0, -1).join(" ");
    expect(() => parseModel(lines.join("\n"))).toThrow(/mismatch/);
  });
});
