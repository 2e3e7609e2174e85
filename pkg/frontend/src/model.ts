/** Screening-model parameters and the versioned text interchange format
 * read by the solver package ("mwiskit-gnn 1"). */

import { Rng } from "./rng";

export const ARCHITECTURES = ["gcn", "sage", "lr"] as const;
export type Architecture = (typeof ARCHITECTURES)[number];

export type Activation = "relu" | "sigmoid" | "none";
export type LayerKind = "mp" | "dense";

export interface Layer {
  kind: LayerKind;
  activation: Activation;
  weights: number[][]; // out x in
  bias: number[]; // out
}

export interface Model {
  architecture: Architecture;
  layers: [Layer, Layer, Layer, Layer]; // mp, mp, dense, dense
  outputConcat: boolean;
}

const FORMAT_HEADER = "mwiskit-gnn";
const FORMAT_VERSION = 1;

export function layerDims(layer: Layer): { out: number; in: number } {
  return { out: layer.weights.length, in: layer.weights[0]?.length ?? 0 };
}

function makeLayer(
  kind: LayerKind,
  activation: Activation,
  outDim: number,
  inDim: number,
  init: (i: number, j: number) => number,
): Layer {
  const weights: number[][] = [];
  for (let i = 0; i < outDim; i++) {
    const row: number[] = [];
    for (let j = 0; j < inDim; j++) row.push(init(i, j));
    weights.push(row);
  }
  return { kind, activation, weights, bias: new Array(outDim).fill(0) };
}

/** Glorot-uniform initialized model with the standard four-layer plan. */
export function initModel(
  architecture: Architecture,
  rng: Rng,
  hidden = 16,
  featureDim = 8,
  outputConcat = false,
): Model {
  const double = architecture === "sage" || architecture === "lr" ? 2 : 1;
  const glorot = (outDim: number, inDim: number) => {
    const bound = Math.sqrt(6 / (inDim + outDim));
    return () => rng.uniform(-bound, bound);
  };
  const concat = featureDim + 2 * hidden;
  const d4In = hidden + (outputConcat ? concat : 0);
  const layers: [Layer, Layer, Layer, Layer] = [
    makeLayer("mp", "relu", hidden, featureDim * double, glorot(hidden, featureDim * double)),
    makeLayer("mp", "relu", hidden, hidden * double, glorot(hidden, hidden * double)),
    makeLayer("dense", "relu", hidden, concat, glorot(hidden, concat)),
    makeLayer("dense", "sigmoid", 1, d4In, glorot(1, d4In)),
  ];
  return { architecture, layers, outputConcat };
}

export function featureDimOf(model: Model): number {
  const inDim = layerDims(model.layers[0]).in;
  return model.architecture === "gcn" ? inDim : inDim / 2;
}

/** Shortest round-trip decimal; Number.prototype.toString already emits
 * the minimal digits that reparse to the same float64. */
function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite parameter ${x}`);
  return String(x);
}

export function exportModel(model: Model): string {
  const lines = [
    `${FORMAT_HEADER} ${FORMAT_VERSION}`,
    `architecture ${model.architecture}`,
    `output_concat ${model.outputConcat ? 1 : 0}`,
    `layers ${model.layers.length}`,
  ];
  model.layers.forEach((layer, i) => {
    const { out, in: inDim } = layerDims(layer);
    lines.push(
      `layer ${i} kind=${layer.kind} activation=${layer.activation} out=${out} in=${inDim}`,
    );
    lines.push("W " + layer.weights.flat().map(fmt).join(" "));
    lines.push("b " + layer.bias.map(fmt).join(" "));
  });
  return lines.join("\n") + "\n";
}

export function parseModel(text: string): Model {
  const raw = text
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (raw.length === 0) throw new Error("empty model file");
  const head = raw[0].split(/\s+/);
  if (head.length !== 2 || head[0] !== FORMAT_HEADER) {
    throw new Error(`unrecognized model header: ${raw[0]}`);
  }
  if (Number(head[1]) !== FORMAT_VERSION) {
    throw new Error(`unsupported model format version ${head[1]}`);
  }
  const expect = (idx: number, key: string): string => {
    const line = raw[idx];
    if (line === undefined) throw new Error(`truncated model file, expected ${key}`);
    const space = line.indexOf(" ");
    if (space < 0 || line.slice(0, space) !== key) {
      throw new Error(`expected ${key} line, got: ${line}`);
    }
    return line.slice(space + 1);
  };
  const architecture = expect(1, "architecture") as Architecture;
  if (!ARCHITECTURES.includes(architecture)) {
    throw new Error(`unknown architecture ${architecture}`);
  }
  const outputConcat = expect(2, "output_concat") === "1";
  const layerCount = Number(expect(3, "layers"));
  if (layerCount !== 4) throw new Error(`expected 4 layers, got ${layerCount}`);
  const layers: Layer[] = [];
  let idx = 4;
  for (let i = 0; i < layerCount; i++) {
    const header = expect(idx, "layer");
    const fields = new Map(
      header
        .split(/\s+/)
        .slice(1)
        .filter((p) => p.includes("="))
        .map((p) => p.split("=", 2) as [string, string]),
    );
    const out = Number(fields.get("out"));
    const inDim = Number(fields.get("in"));
    const kind = fields.get("kind") as LayerKind;
    const activation = fields.get("activation") as Activation;
    const wVals = expect(idx + 1, "W").split(/\s+/).map(Number);
    const bias = expect(idx + 2, "b").split(/\s+/).map(Number);
    if (wVals.length !== out * inDim || bias.length !== out) {
      throw new Error(`layer ${i}: parameter count mismatch`);
    }
    const weights: number[][] = [];
    for (let r = 0; r < out; r++) weights.push(wVals.slice(r * inDim, (r + 1) * inDim));
    layers.push({ kind, activation, weights, bias });
    idx += 3;
  }
  return {
    architecture,
    layers: layers as [Layer, Layer, Layer, Layer],
    outputConcat,
  };
}

/** Deep copy used by the optimizer and by finite-difference probes. */
export function cloneModel(model: Model): Model {
  return {
    architecture: model.architecture,
    outputConcat: model.outputConcat,
    layers: model.layers.map((l) => ({
      kind: l.kind,
      activation: l.activation,
      weights: l.weights.map((row) => row.slice()),
      bias: l.bias.slice(),
    })) as [Layer, Layer, Layer, Layer],
  };
}
