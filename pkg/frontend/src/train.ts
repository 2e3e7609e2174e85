/** Full-batch Adam training of a screening model on labeled graphs. */

import { DropoutMasks, Grads, addGrads, backward, forward, zeroGrads } from "./forward";
import { Graph } from "./graph";
import { extractFeatures } from "./features";
import { Architecture, Model, initModel, layerDims } from "./model";
import { Rng } from "./rng";

export const DEFAULT_EPOCHS = 300;
export const DEFAULT_LEARNING_RATE = 0.001;
export const DEFAULT_DROPOUT = 0.2;

export interface TrainConfig {
  architecture: Architecture;
  epochs: number;
  learningRate: number;
  dropout: number; // applied after each message-passing layer only
  hidden: number;
  seed: number;
}

export function defaultConfig(architecture: Architecture): TrainConfig {
  return {
    architecture,
    epochs: DEFAULT_EPOCHS,
    learningRate: DEFAULT_LEARNING_RATE,
    dropout: DEFAULT_DROPOUT,
    hidden: 16,
    seed: 0,
  };
}

/** One labeled graph: labels[v] in {0, 1, 2}; 2 marks an oracle timeout
 * and is excluded from the loss and from accuracy denominators. */
export interface Instance {
  graph: Graph;
  labels: number[];
  feats: number[][];
}

export function makeInstance(graph: Graph, labels: number[]): Instance {
  if (labels.length !== graph.n) {
    throw new Error(`expected ${graph.n} labels, got ${labels.length}`);
  }
  return { graph, labels, feats: extractFeatures(graph) };
}

/** Positive-class weight: #label-0 / #label-1 over the training set, so
 * both classes contribute equal total mass to the loss. */
export function positiveClassWeight(instances: Instance[]): number {
  let zeros = 0;
  let ones = 0;
  for (const inst of instances) {
    for (const label of inst.labels) {
      if (label === 0) zeros += 1;
      else if (label === 1) ones += 1;
    }
  }
  if (ones === 0) return 1;
  return zeros / ones;
}

interface LossResult {
  loss: number;
  grads: Grads;
}

function dropoutMasks(model: Model, n: number, p: number, rng: Rng): DropoutMasks {
  if (p <= 0) return null;
  const make = (width: number) =>
    Array.from({ length: n }, () =>
      Array.from({ length: width }, () => (rng.next() < p ? 0 : 1 / (1 - p))),
    );
  return [
    make(layerDims(model.layers[0]).out),
    make(layerDims(model.layers[1]).out),
  ];
}

/** Weighted binary cross entropy over every labeled (0/1) vertex of the
 * batch, averaged; returns the loss and full parameter gradients. */
export function batchLoss(
  model: Model,
  instances: Instance[],
  posWeight: number,
  dropout = 0,
  rng?: Rng,
): LossResult {
  const grads = zeroGrads(model);
  let loss = 0;
  let count = 0;
  for (const inst of instances) {
    for (const label of inst.labels) if (label !== 2) count += 1;
  }
  if (count === 0) return { loss: 0, grads };
  const eps = 1e-12;
  for (const inst of instances) {
    const masks =
      dropout > 0 && rng ? dropoutMasks(model, inst.graph.n, dropout, rng) : null;
    const cache = forward(model, inst.graph, inst.feats, masks);
    const dOutPre = new Array(inst.graph.n).fill(0);
    for (let v = 0; v < inst.graph.n; v++) {
      const y = inst.labels[v];
      if (y === 2) continue;
      const p = cache.scores[v];
      if (y === 1) {
        loss += (-posWeight * Math.log(p + eps)) / count;
        dOutPre[v] = (posWeight * (p - 1)) / count;
      } else {
        loss += -Math.log(1 - p + eps) / count;
        dOutPre[v] = p / count;
      }
    }
    addGrads(grads, backward(model, inst.graph, cache, dOutPre, masks));
  }
  return { loss, grads };
}

interface AdamState {
  m: Grads;
  v: Grads;
  t: number;
}

function adamStep(model: Model, grads: Grads, state: AdamState, lr: number): void {
  const b1 = 0.9;
  const b2 = 0.999;
  const eps = 1e-8;
  state.t += 1;
  const c1 = 1 - Math.pow(b1, state.t);
  const c2 = 1 - Math.pow(b2, state.t);
  for (let l = 0; l < model.layers.length; l++) {
    const layer = model.layers[l];
    const g = grads[l];
    const m = state.m[l];
    const v = state.v[l];
    for (let i = 0; i < layer.bias.length; i++) {
      m.bias[i] = b1 * m.bias[i] + (1 - b1) * g.bias[i];
      v.bias[i] = b2 * v.bias[i] + (1 - b2) * g.bias[i] * g.bias[i];
      layer.bias[i] -= (lr * (m.bias[i] / c1)) / (Math.sqrt(v.bias[i] / c2) + eps);
      for (let j = 0; j < layer.weights[i].length; j++) {
        m.weights[i][j] = b1 * m.weights[i][j] + (1 - b1) * g.weights[i][j];
        v.weights[i][j] =
          b2 * v.weights[i][j] + (1 - b2) * g.weights[i][j] * g.weights[i][j];
        layer.weights[i][j] -=
          (lr * (m.weights[i][j] / c1)) / (Math.sqrt(v.weights[i][j] / c2) + eps);
      }
    }
  }
}

export interface TrainResult {
  model: Model;
  losses: number[]; // one entry per epoch
  posWeight: number;
}

export function train(
  instances: Instance[],
  cfg: TrainConfig,
  onEpoch?: (epoch: number, loss: number) => void,
): TrainResult {
  const rng = new Rng(cfg.seed);
  const model = initModel(cfg.architecture, rng, cfg.hidden);
  const posWeight = positiveClassWeight(instances);
  const adam: AdamState = { m: zeroGrads(model), v: zeroGrads(model), t: 0 };
  const losses: number[] = [];
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    const { loss, grads } = batchLoss(model, instances, posWeight, cfg.dropout, rng);
    adamStep(model, grads, adam, cfg.learningRate);
    losses.push(loss);
    onEpoch?.(epoch, loss);
  }
  return { model, losses, posWeight };
}
