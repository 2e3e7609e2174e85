"""Native inference for the vertex-screening networks.

Three small graph-network architectures (GCN, GraphSAGE, and an edge-wise
variant called LR here) score each vertex with a value in (0, 1); the
scheduler treats scores above 0.5 as a suggestion to try an expensive
reduction rule at that vertex. Inference only — training lives in the
companion trainer package and ships its weights through the model file
format defined at the bottom of this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graphs import StaticGraph

HIDDEN_SIZE = 16
FEATURE_COUNT = 8

ARCHITECTURES = ("gcn", "sage", "lr")
_FORMAT_HEADER = "mwiskit-gnn"
_FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Raised for malformed or inconsistent model files."""


def extract_features(g: StaticGraph) -> np.ndarray:
    """Per-vertex feature rows: weight, neighborhood weight, min/max
    neighborhood weight, degree, average/min/max neighborhood degree.

    Isolated vertices get zeros for all neighborhood statistics. Values
    are rounded through 32-bit precision so independent implementations
    agree bit-for-bit.
    """
    n = g.n
    feats = np.zeros((n, FEATURE_COUNT), dtype=np.float64)
    for v in range(n):
        nbrs = g.adjacency[v]
        feats[v, 0] = g.weight[v]
        feats[v, 4] = len(nbrs)
        if nbrs:
            ws = [g.weight[u] for u in nbrs]
            ds = [g.degree(u) for u in nbrs]
            feats[v, 1] = sum(ws)
            feats[v, 2] = min(ws)
            feats[v, 3] = max(ws)
            feats[v, 5] = sum(ds) / len(ds)
            feats[v, 6] = min(ds)
            feats[v, 7] = max(ds)
    return feats.astype(np.float32).astype(np.float64)


def _activate(x: np.ndarray, activation: str) -> np.ndarray:
    if activation == "relu":
        return np.maximum(x, 0.0)
    if activation == "sigmoid":
        return 1.0 / (1.0 + np.exp(-x))
    if activation == "none":
        return x
    raise ModelFormatError(f"unknown activation {activation!r}")


@dataclass
class Layer:
    kind: str  # "mp" or "dense"
    activation: str  # "relu", "sigmoid", or "none"
    weights: np.ndarray  # out x in
    bias: np.ndarray  # out

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.kind not in ("mp", "dense"):
            raise ModelFormatError(f"unknown layer kind {self.kind!r}")
        if self.weights.ndim != 2:
            raise ModelFormatError("layer weights must be a matrix")
        if self.bias.shape != (self.weights.shape[0],):
            raise ModelFormatError("bias length must match output dimension")

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    def affine(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weights.T + self.bias


@dataclass
class GnnModel:
    """Two message-passing layers plus two dense layers.

    The first dense layer consumes the concatenation of the raw features
    and both message-passing outputs. With ``output_concat`` the final
    dense layer additionally receives that concatenation alongside the
    first dense layer's output.
    """

    architecture: str
    layers: list[Layer] = field(default_factory=list)
    output_concat: bool = False

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ModelFormatError(
                f"unknown architecture {self.architecture!r}; "
                f"expected one of {ARCHITECTURES}"
            )
        if len(self.layers) != 4:
            raise ModelFormatError(
                f"architecture {self.architecture} expects 4 layers "
                f"(2 message-passing + 2 dense), got {len(self.layers)}"
            )
        kinds = [layer.kind for layer in self.layers]
        if kinds != ["mp", "mp", "dense", "dense"]:
            raise ModelFormatError(
                f"layer kinds must be [mp, mp, dense, dense], got {kinds}"
            )
        self._check_dims()

    def _check_dims(self) -> None:
        mp1, mp2, d3, d4 = self.layers
        double = self.architecture in ("sage", "lr")
        feat = mp1.in_dim // 2 if double else mp1.in_dim
        if self.architecture in ("sage", "lr"):
            for mp in (mp1, mp2):
                if mp.in_dim % 2 != 0:
                    raise ModelFormatError(
                        f"{self.architecture} message-passing input dim "
                        f"must be even, got {mp.in_dim}"
                    )
        mp1_in = feat * 2 if self.architecture in ("sage", "lr") else feat
        if mp1.in_dim != mp1_in:
            raise ModelFormatError("layer 1 input dimension inconsistent")
        mp2_in = (
            mp1.out_dim * 2 if self.architecture in ("sage", "lr") else mp1.out_dim
        )
        if mp2.in_dim != mp2_in:
            raise ModelFormatError(
                f"layer 2 input dim {mp2.in_dim}, expected {mp2_in}"
            )
        concat = feat + mp1.out_dim + mp2.out_dim
        if d3.in_dim != concat:
            raise ModelFormatError(
                f"dense layer 3 input dim {d3.in_dim}, expected the "
                f"concatenation width {concat}"
            )
        d4_in = d3.out_dim + (concat if self.output_concat else 0)
        if d4.in_dim != d4_in:
            raise ModelFormatError(
                f"dense layer 4 input dim {d4.in_dim}, expected {d4_in}"
            )
        if d4.out_dim != 1:
            raise ModelFormatError("output layer must have dimension 1")
        if d4.activation != "sigmoid":
            raise ModelFormatError("output activation must be sigmoid")

    @property
    def feature_dim(self) -> int:
        mp1 = self.layers[0]
        return mp1.in_dim // 2 if self.architecture in ("sage", "lr") else mp1.in_dim

    def predict(self, g: StaticGraph) -> np.ndarray:
        return forward(self, g, extract_features(g))


def _propagate(
    arch: str, layer: Layer, g: StaticGraph, h: np.ndarray
) -> np.ndarray:
    """One message-passing step, returning the activated layer output."""
    n = g.n
    if arch == "gcn":
        # self-edges added; each contributor normalized by the square
        # root of its own augmented degree
        agg = np.zeros_like(h)
        norm = np.array([1.0 / np.sqrt(g.degree(v) + 1.0) for v in range(n)])
        scaled = h * norm[:, None]
        for u in range(n):
            agg[u] = scaled[u]
            for v in g.adjacency[u]:
                agg[u] += scaled[v]
        return _activate(layer.affine(agg), layer.activation)
    if arch == "sage":
        agg = np.zeros_like(h)
        for u in range(n):
            nbrs = g.adjacency[u]
            if nbrs:
                agg[u] = h[nbrs].mean(axis=0)
        return _activate(layer.affine(np.hstack([h, agg])), layer.activation)
    if arch == "lr":
        out = np.zeros((n, layer.out_dim), dtype=np.float64)
        for u in range(n):
            nbrs = g.adjacency[u]
            if not nbrs:
                continue
            pairs = np.hstack([np.repeat(h[u][None, :], len(nbrs), axis=0), h[nbrs]])
            out[u] = _activate(layer.affine(pairs), layer.activation).mean(axis=0)
        return out
    raise ModelFormatError(f"unknown architecture {arch!r}")


def forward(model: GnnModel, g: StaticGraph, feats: np.ndarray) -> np.ndarray:
    """Per-vertex scores in (0, 1)."""
    feats = np.asarray(feats, dtype=np.float64)
    if feats.ndim != 2 or feats.shape != (g.n, model.feature_dim):
        raise ModelFormatError(
            f"feature matrix shape {feats.shape}, expected "
            f"({g.n}, {model.feature_dim})"
        )
    mp1, mp2, d3, d4 = model.layers
    h1 = _propagate(model.architecture, mp1, g, feats)
    h2 = _propagate(model.architecture, mp2, g, h1)
    concat = np.hstack([feats, h1, h2])
    h3 = _activate(d3.affine(concat), d3.activation)
    x4 = np.hstack([concat, h3]) if model.output_concat else h3
    out = _activate(d4.affine(x4), d4.activation)
    return out[:, 0]


def default_model(architecture: str, feature_dim: int = FEATURE_COUNT) -> GnnModel:
    """Zero-initialized model with the standard layer plan (every score 0.5)."""
    double = architecture in ("sage", "lr")

    def layer(kind: str, act: str, out: int, inp: int) -> Layer:
        return Layer(kind, act, np.zeros((out, inp)), np.zeros(out))

    k = 2 if double else 1
    h = HIDDEN_SIZE
    return GnnModel(
        architecture,
        [
            layer("mp", "relu", h, feature_dim * k),
            layer("mp", "relu", h, h * k),
            layer("dense", "relu", h, feature_dim + 2 * h),
            layer("dense", "sigmoid", 1, h),
        ],
    )


# ---------------------------------------------------------------------------
# Model file I/O: versioned structured text, full-precision decimals
# ---------------------------------------------------------------------------


def save_model(model: GnnModel, path: str) -> None:
    lines = [
        f"{_FORMAT_HEADER} {_FORMAT_VERSION}",
        f"architecture {model.architecture}",
        f"output_concat {int(model.output_concat)}",
        f"layers {len(model.layers)}",
    ]
    for i, layer in enumerate(model.layers):
        lines.append(
            f"layer {i} kind={layer.kind} activation={layer.activation} "
            f"out={layer.out_dim} in={layer.in_dim}"
        )
        lines.append("W " + " ".join(repr(float(x)) for x in layer.weights.ravel()))
        lines.append("b " + " ".join(repr(float(x)) for x in layer.bias))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def load_model(path: str) -> GnnModel:
    with open(path, encoding="utf-8") as f:
        raw = [line.strip() for line in f if line.strip()]
    if not raw:
        raise ModelFormatError("empty model file")
    head = raw[0].split()
    if len(head) != 2 or head[0] != _FORMAT_HEADER:
        raise ModelFormatError(f"unrecognized model header: {raw[0]!r}")
    if int(head[1]) != _FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {head[1]}")

    def expect(idx: int, key: str) -> str:
        if idx >= len(raw):
            raise ModelFormatError(f"truncated model file, expected {key}")
        parts = raw[idx].split(maxsplit=1)
        if parts[0] != key or len(parts) != 2:
            raise ModelFormatError(f"expected {key!r} line, got {raw[idx]!r}")
        return parts[1]

    architecture = expect(1, "architecture")
    output_concat = bool(int(expect(2, "output_concat")))
    layer_count = int(expect(3, "layers"))
    if layer_count != 4:
        raise ModelFormatError(
            f"expected a 4-layer model (2 message-passing + 2 dense) for "
            f"architecture {architecture}, got {layer_count} layers"
        )
    layers: list[Layer] = []
    idx = 4
    for i in range(layer_count):
        header = expect(idx, "layer")
        fields = dict(
            part.split("=", 1) for part in header.split()[1:] if "=" in part
        )
        try:
            out_dim = int(fields["out"])
            in_dim = int(fields["in"])
            kind = fields["kind"]
            activation = fields["activation"]
        except KeyError as e:
            raise ModelFormatError(f"layer {i} header missing field {e}")
        w_vals = [float(x) for x in expect(idx + 1, "W").split()]
        b_vals = [float(x) for x in expect(idx + 2, "b").split()]
        if len(w_vals) != out_dim * in_dim:
            raise ModelFormatError(
                f"layer {i}: expected {out_dim * in_dim} weights, "
                f"got {len(w_vals)}"
            )
        if len(b_vals) != out_dim:
            raise ModelFormatError(
                f"layer {i}: expected {out_dim} biases, got {len(b_vals)}"
            )
        layers.append(
            Layer(
                kind,
                activation,
                np.array(w_vals).reshape(out_dim, in_dim),
                np.array(b_vals),
            )
        )
        idx += 3
    return GnnModel(architecture, layers, output_concat)
