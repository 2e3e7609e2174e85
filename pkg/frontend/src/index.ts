export { Graph, LabelRecord, parseGraph, writeGraph, parseLabels } from "./graph";
export { FEATURE_COUNT, extractFeatures } from "./features";
export {
  ARCHITECTURES,
  Architecture,
  Layer,
  Model,
  cloneModel,
  exportModel,
  initModel,
  parseModel,
} from "./model";
export { backward, forward, predict, zeroGrads, addGrads } from "./forward";
export {
  DEFAULT_DROPOUT,
  DEFAULT_EPOCHS,
  DEFAULT_LEARNING_RATE,
  Instance,
  TrainConfig,
  TrainResult,
  batchLoss,
  defaultConfig,
  makeInstance,
  positiveClassWeight,
  train,
} from "./train";
export { ScreeningMetrics, SUGGESTION_THRESHOLD, evaluate, formatMetrics } from "./metrics";
export { Dataset, assembleDataset, loadDataset, splitNames } from "./dataset";
export { Rng } from "./rng";
