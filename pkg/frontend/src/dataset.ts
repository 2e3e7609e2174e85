/** Assembling training instances from label CSVs and graph files, and
 * the deterministic per-graph train/val/test split. */

import * as fs from "node:fs";
import * as path from "node:path";

import { Graph, LabelRecord, parseGraph, parseLabels } from "./graph";
import { Instance, makeInstance } from "./train";
import { Rng } from "./rng";

export type SplitTag = "train" | "val" | "test";

export interface Dataset {
  train: Instance[];
  val: Instance[];
  test: Instance[];
}

/** 60/20/20 split over whole graphs, rounding toward train. */
export function splitNames(names: string[], seed: number): Map<string, SplitTag> {
  const order = names.slice().sort();
  new Rng(seed).shuffle(order);
  const nVal = Math.floor(order.length / 5);
  const nTest = Math.floor(order.length / 5);
  const tags = new Map<string, SplitTag>();
  order.forEach((name, i) => {
    if (i >= order.length - nTest) tags.set(name, "test");
    else if (i >= order.length - nTest - nVal) tags.set(name, "val");
    else tags.set(name, "train");
  });
  return tags;
}

/** Group label rows by graph name into per-vertex label arrays. */
export function labelsByGraph(
  records: LabelRecord[],
  graphs: Map<string, Graph>,
): Map<string, number[]> {
  const out = new Map<string, number[]>();
  for (const r of records) {
    const g = graphs.get(r.graph);
    if (!g) throw new Error(`labels reference unknown graph ${r.graph}`);
    let labels = out.get(r.graph);
    if (!labels) {
      labels = new Array(g.n).fill(0);
      out.set(r.graph, labels);
    }
    if (r.vertex < 1 || r.vertex > g.n) {
      throw new Error(`label vertex ${r.vertex} out of range for ${r.graph}`);
    }
    labels[r.vertex - 1] = r.label;
  }
  return out;
}

/** Load labels plus one `<name>.graph` file per labeled instance. */
export function loadDataset(
  labelsPath: string,
  graphDir: string,
  seed: number,
): Dataset {
  const records = parseLabels(fs.readFileSync(labelsPath, "utf-8"));
  const names = [...new Set(records.map((r) => r.graph))];
  const graphs = new Map<string, Graph>();
  for (const name of names) {
    const file = path.join(graphDir, `${name}.graph`);
    graphs.set(name, parseGraph(fs.readFileSync(file, "utf-8")));
  }
  return assembleDataset(graphs, records, seed);
}

export function assembleDataset(
  graphs: Map<string, Graph>,
  records: LabelRecord[],
  seed: number,
): Dataset {
  const labels = labelsByGraph(records, graphs);
  const tags = splitNames([...labels.keys()], seed);
  const dataset: Dataset = { train: [], val: [], test: [] };
  for (const [name, graphLabels] of labels) {
    const inst = makeInstance(graphs.get(name)!, graphLabels);
    dataset[tags.get(name)!].push(inst);
  }
  return dataset;
}
