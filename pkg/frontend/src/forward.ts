/** Forward pass with cached intermediates and the matching analytic
 * backward pass for all three message-passing architectures. */

import { Graph } from "./graph";
import { Layer, Model, featureDimOf, layerDims } from "./model";

export interface LayerGrad {
  weights: number[][];
  bias: number[];
}

export type Grads = LayerGrad[];

/** Per-vertex dropout scale: 0 for dropped units, 1/(1-p) otherwise
 * (inverted dropout, so inference applies no correction). */
export type DropoutMasks = [number[][], number[][]] | null;

interface MpCache {
  input: number[][]; // n x din
  agg: number[][]; // aggregated affine input rows (gcn/sage) or [] (lr)
  pre: number[][]; // n x dout pre-activations (gcn/sage)
  pairPre: number[][][]; // lr: per vertex, per neighbor pre-activations
  out: number[][]; // post-activation
  dropped: number[][]; // post-dropout (=== out when not training)
}

export interface ForwardCache {
  feats: number[][];
  mp: [MpCache, MpCache];
  concat: number[][];
  densePre: number[][]; // z3
  denseOut: number[][]; // h3
  outPre: number[]; // z4, pre-sigmoid
  scores: number[];
}

function zerosLike(layer: Layer): LayerGrad {
  const { out, in: inDim } = layerDims(layer);
  return {
    weights: Array.from({ length: out }, () => new Array(inDim).fill(0)),
    bias: new Array(out).fill(0),
  };
}

export function zeroGrads(model: Model): Grads {
  return model.layers.map(zerosLike);
}

export function addGrads(into: Grads, from: Grads): void {
  for (let l = 0; l < into.length; l++) {
    for (let i = 0; i < into[l].bias.length; i++) {
      into[l].bias[i] += from[l].bias[i];
      for (let j = 0; j < into[l].weights[i].length; j++) {
        into[l].weights[i][j] += from[l].weights[i][j];
      }
    }
  }
}

function affine(layer: Layer, x: number[]): number[] {
  const out: number[] = [];
  for (let i = 0; i < layer.bias.length; i++) {
    let acc = layer.bias[i];
    const row = layer.weights[i];
    for (let j = 0; j < row.length; j++) acc += row[j] * x[j];
    out.push(acc);
  }
  return out;
}

function relu(x: number[]): number[] {
  return x.map((v) => (v > 0 ? v : 0));
}

function gcnNorms(g: Graph): number[] {
  return g.adjacency.map((nbrs) => 1 / Math.sqrt(nbrs.length + 1));
}

function mpForward(
  model: Model,
  layer: Layer,
  g: Graph,
  h: number[][],
  mask: number[][] | null,
): MpCache {
  const n = g.n;
  const din = h[0]?.length ?? 0;
  const dout = layer.bias.length;
  const cache: MpCache = {
    input: h,
    agg: [],
    pre: [],
    pairPre: [],
    out: [],
    dropped: [],
  };
  if (model.architecture === "gcn") {
    const norm = gcnNorms(g);
    for (let u = 0; u < n; u++) {
      const agg = h[u].map((x) => x * norm[u]);
      for (const v of g.adjacency[u]) {
        for (let k = 0; k < din; k++) agg[k] += h[v][k] * norm[v];
      }
      const pre = affine(layer, agg);
      cache.agg.push(agg);
      cache.pre.push(pre);
      cache.out.push(relu(pre));
    }
  } else if (model.architecture === "sage") {
    for (let u = 0; u < n; u++) {
      const nbrs = g.adjacency[u];
      const agg = new Array(din).fill(0);
      for (const v of nbrs) {
        for (let k = 0; k < din; k++) agg[k] += h[v][k] / nbrs.length;
      }
      const x = h[u].concat(agg);
      const pre = affine(layer, x);
      cache.agg.push(x);
      cache.pre.push(pre);
      cache.out.push(relu(pre));
    }
  } else {
    for (let u = 0; u < n; u++) {
      const nbrs = g.adjacency[u];
      const pres: number[][] = [];
      const out = new Array(dout).fill(0);
      for (const v of nbrs) {
        const pre = affine(layer, h[u].concat(h[v]));
        pres.push(pre);
        for (let k = 0; k < dout; k++) out[k] += Math.max(pre[k], 0) / nbrs.length;
      }
      cache.pairPre.push(pres);
      cache.out.push(out);
    }
  }
  cache.dropped = mask
    ? cache.out.map((row, u) => row.map((x, k) => x * mask[u][k]))
    : cache.out;
  return cache;
}

function mpBackward(
  model: Model,
  layer: Layer,
  g: Graph,
  cache: MpCache,
  dOut: number[][],
  grad: LayerGrad,
): number[][] {
  const n = g.n;
  const din = cache.input[0]?.length ?? 0;
  const dout = layer.bias.length;
  const dIn: number[][] = Array.from({ length: n }, () => new Array(din).fill(0));
  if (model.architecture === "gcn") {
    const norm = gcnNorms(g);
    const dAgg: number[][] = [];
    for (let u = 0; u < n; u++) {
      const dz = dOut[u].map((x, k) => (cache.pre[u][k] > 0 ? x : 0));
      const da = new Array(din).fill(0);
      for (let i = 0; i < dout; i++) {
        grad.bias[i] += dz[i];
        for (let j = 0; j < din; j++) {
          grad.weights[i][j] += dz[i] * cache.agg[u][j];
          da[j] += layer.weights[i][j] * dz[i];
        }
      }
      dAgg.push(da);
    }
    for (let v = 0; v < n; v++) {
      for (let k = 0; k < din; k++) {
        let acc = dAgg[v][k];
        for (const u of g.adjacency[v]) acc += dAgg[u][k];
        dIn[v][k] = acc * norm[v];
      }
    }
  } else if (model.architecture === "sage") {
    for (let u = 0; u < n; u++) {
      const dz = dOut[u].map((x, k) => (cache.pre[u][k] > 0 ? x : 0));
      const dx = new Array(2 * din).fill(0);
      for (let i = 0; i < dout; i++) {
        grad.bias[i] += dz[i];
        for (let j = 0; j < 2 * din; j++) {
          grad.weights[i][j] += dz[i] * cache.agg[u][j];
          dx[j] += layer.weights[i][j] * dz[i];
        }
      }
      for (let k = 0; k < din; k++) dIn[u][k] += dx[k];
      const nbrs = g.adjacency[u];
      for (const v of nbrs) {
        for (let k = 0; k < din; k++) dIn[v][k] += dx[din + k] / nbrs.length;
      }
    }
  } else {
    for (let u = 0; u < n; u++) {
      const nbrs = g.adjacency[u];
      for (let idx = 0; idx < nbrs.length; idx++) {
        const v = nbrs[idx];
        const pre = cache.pairPre[u][idx];
        const pair = cache.input[u].concat(cache.input[v]);
        const dPair = new Array(2 * din).fill(0);
        for (let i = 0; i < dout; i++) {
          if (pre[i] <= 0) continue;
          const dz = dOut[u][i] / nbrs.length;
          grad.bias[i] += dz;
          for (let j = 0; j < 2 * din; j++) {
            grad.weights[i][j] += dz * pair[j];
            dPair[j] += layer.weights[i][j] * dz;
          }
        }
        for (let k = 0; k < din; k++) {
          dIn[u][k] += dPair[k];
          dIn[v][k] += dPair[din + k];
        }
      }
    }
  }
  return dIn;
}

export function forward(
  model: Model,
  g: Graph,
  feats: number[][],
  masks: DropoutMasks = null,
): ForwardCache {
  const f = featureDimOf(model);
  if (feats.length !== g.n || (g.n > 0 && feats[0].length !== f)) {
    throw new Error(
      `feature matrix is ${feats.length}x${feats[0]?.length ?? 0}, expected ${g.n}x${f}`,
    );
  }
  const [mp1, mp2, d3, d4] = model.layers;
  const c1 = mpForward(model, mp1, g, feats, masks ? masks[0] : null);
  const c2 = mpForward(model, mp2, g, c1.dropped, masks ? masks[1] : null);
  const concat = feats.map((row, u) => row.concat(c1.dropped[u], c2.dropped[u]));
  const densePre = concat.map((row) => affine(d3, row));
  const denseOut = densePre.map(relu);
  const outPre = concat.map((row, u) => {
    const x4 = model.outputConcat ? row.concat(denseOut[u]) : denseOut[u];
    return affine(d4, x4)[0];
  });
  const scores = outPre.map((z) => 1 / (1 + Math.exp(-z)));
  return { feats, mp: [c1, c2], concat, densePre, denseOut, outPre, scores };
}

export function predict(model: Model, g: Graph, feats: number[][]): number[] {
  return forward(model, g, feats).scores;
}

/** Backward pass from dLoss/dOutPre (the fused sigmoid + cross-entropy
 * gradient); masks must be the ones used in the forward pass. */
export function backward(
  model: Model,
  g: Graph,
  cache: ForwardCache,
  dOutPre: number[],
  masks: DropoutMasks = null,
): Grads {
  const grads = zeroGrads(model);
  const [mp1, mp2, d3, d4] = model.layers;
  const n = g.n;
  const f = featureDimOf(model);
  const h1w = layerDims(mp1).out;
  const h2w = layerDims(mp2).out;
  const concatW = f + h1w + h2w;

  const dConcat: number[][] = Array.from({ length: n }, () =>
    new Array(concatW).fill(0),
  );
  const dDenseOut: number[][] = [];
  for (let u = 0; u < n; u++) {
    const x4 = model.outputConcat
      ? cache.concat[u].concat(cache.denseOut[u])
      : cache.denseOut[u];
    const dz = dOutPre[u];
    grads[3].bias[0] += dz;
    for (let j = 0; j < x4.length; j++) grads[3].weights[0][j] += dz * x4[j];
    const dx4 = d4.weights[0].map((w) => w * dz);
    if (model.outputConcat) {
      for (let j = 0; j < concatW; j++) dConcat[u][j] += dx4[j];
      dDenseOut.push(dx4.slice(concatW));
    } else {
      dDenseOut.push(dx4);
    }
  }

  for (let u = 0; u < n; u++) {
    const dz3 = dDenseOut[u].map((x, k) => (cache.densePre[u][k] > 0 ? x : 0));
    for (let i = 0; i < dz3.length; i++) {
      grads[2].bias[i] += dz3[i];
      for (let j = 0; j < concatW; j++) {
        grads[2].weights[i][j] += dz3[i] * cache.concat[u][j];
        dConcat[u][j] += d3.weights[i][j] * dz3[i];
      }
    }
  }

  const dH1dFromConcat = dConcat.map((row) => row.slice(f, f + h1w));
  const dH2d = dConcat.map((row) => row.slice(f + h1w));

  const dOut2 = masks
    ? dH2d.map((row, u) => row.map((x, k) => x * masks[1][u][k]))
    : dH2d;
  const dH1d = mpBackward(model, mp2, g, cache.mp[1], dOut2, grads[1]);
  for (let u = 0; u < n; u++) {
    for (let k = 0; k < h1w; k++) dH1d[u][k] += dH1dFromConcat[u][k];
  }
  const dOut1 = masks
    ? dH1d.map((row, u) => row.map((x, k) => x * masks[0][u][k]))
    : dH1d;
  mpBackward(model, mp1, g, cache.mp[0], dOut1, grads[0]);
  return grads;
}
