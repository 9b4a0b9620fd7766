"""Data model for time-indexed, weighted, directed multiplex networks.

A multiplex is stored as a dense T x K x N x N tensor of nonnegative flows
(time, layer, source, target) together with node and layer registries.
All diagonals are zero: every quantity in this package sums over i != j.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError


class LayerKind(str, Enum):
    financial = "financial"
    environmental = "environmental"
    other = "other"


@dataclass(frozen=True)
class LayerSpec:
    layer_id: str
    name: str = ""
    kind: LayerKind = LayerKind.other
    units: str = ""


@dataclass(frozen=True)
class NodeEntry:
    node_id: str
    name: str = ""
    financialisation: float = 0.0


class NodeTable:
    """Registry of nodes with the score used for canonical ordering.

    Canonical order is ascending financialisation, ties broken by node_id.
    """

    def __init__(self, entries):
        entries = list(entries)
        ids = [e.node_id for e in entries]
        if any(not i for i in ids):
            raise ValidationError("node ids must be nonempty")
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate node ids in node table")
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, NodeTable) and self.entries == other.entries

    @property
    def ids(self):
        return [e.node_id for e in self.entries]

    def index(self, node_id):
        try:
            return self.ids.index(node_id)
        except ValueError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def canonical_permutation(self):
        """Indices that sort entries by (financialisation, node_id)."""
        order = sorted(
            range(len(self.entries)),
            key=lambda i: (self.entries[i].financialisation, self.entries[i].node_id),
        )
        return np.asarray(order, dtype=int)

    def reorder(self, perm):
        return NodeTable([self.entries[i] for i in perm])


@dataclass
class LayerSummary:
    """Aggregate quantities of a single weighted directed layer."""

    total_weight: float
    link_count: int
    mutual_link_count: int
    connectance: float
    mean_weight: float
    out_strength: np.ndarray
    in_strength: np.ndarray
    mutual_strength: np.ndarray
    imbalance: np.ndarray


def check_layer(w):
    """Validate a single layer matrix; returns it as a float array."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValidationError(f"layer matrix must be square, got shape {w.shape}")
    if np.any(w < 0):
        raise ValidationError("layer matrix has negative weights")
    if np.any(np.diagonal(w) != 0):
        raise ValidationError("layer matrix has nonzero diagonal entries")
    if not np.all(np.isfinite(w)):
        raise ValidationError("layer matrix has non-finite entries")
    return w


def decompose_dyads(w):
    """Split a layer into non-reciprocated and reciprocated parts.

    Returns (w_right, w_left, w_mutual) with
    w_mutual[i, j] = min(w[i, j], w[j, i]),
    w_right[i, j] = w[i, j] - w_mutual[i, j],
    w_left[i, j] = w[j, i] - w_mutual[i, j].
    Reconstruction w = w_right + w_mutual holds exactly and at most one of
    w_right[i, j], w_right[j, i] is nonzero.
    """
    w = check_layer(w)
    w_mutual = np.minimum(w, w.T)
    w_right = w - w_mutual
    w_left = w.T - w_mutual
    return w_right, w_left, w_mutual


def layer_summary(w):
    """Compute the aggregate summary of one layer."""
    w = check_layer(w)
    n = w.shape[0]
    if n < 2:
        raise ValidationError("layer summary needs at least 2 nodes")
    a = w > 0
    link_count = int(a.sum())
    mutual_link_count = int((a & a.T).sum())
    possible = n * (n - 1)
    total_weight = float(w.sum())
    _, _, w_mutual = decompose_dyads(w)
    out_strength = w.sum(axis=1)
    in_strength = w.sum(axis=0)
    return LayerSummary(
        total_weight=total_weight,
        link_count=link_count,
        mutual_link_count=mutual_link_count,
        connectance=link_count / possible,
        mean_weight=total_weight / possible,
        out_strength=out_strength,
        in_strength=in_strength,
        mutual_strength=w_mutual.sum(axis=1),
        imbalance=out_strength - in_strength,
    )


class MultiplexTensor:
    """Immutable T x K x N x N weight tensor with registries.

    Parameters
    ----------
    weights : array_like, shape (T, K, N, N)
        Nonnegative flows, zero diagonal per layer and time.
    times : sequence of str
        Ordered period labels, length T.
    layers : sequence of LayerSpec, length K.
    nodes : NodeTable with N entries.
    """

    def __init__(self, weights, times, layers, nodes):
        w = np.array(weights, dtype=float)
        if w.ndim != 4:
            raise ValidationError(f"weights must be 4-dimensional, got {w.ndim}")
        t, k, n, n2 = w.shape
        if n != n2:
            raise ValidationError("weight tensor is not square in node axes")
        if len(times) != t:
            raise ValidationError(f"{len(times)} period labels for {t} time slices")
        if len(layers) != k:
            raise ValidationError(f"{len(layers)} layer specs for {k} layers")
        if len(nodes) != n:
            raise ValidationError(f"{len(nodes)} node entries for {n} nodes")
        layer_ids = [s.layer_id for s in layers]
        if len(set(layer_ids)) != len(layer_ids):
            raise ValidationError("duplicate layer ids")
        if np.any(w < 0):
            raise ValidationError("weight tensor has negative entries")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weight tensor has non-finite entries")
        diag = np.einsum("tkii->tki", w)
        if np.any(diag != 0):
            raise ValidationError("weight tensor has nonzero diagonal entries")
        w.setflags(write=False)
        self.weights = w
        self.times = list(times)
        self.layers = list(layers)
        self.nodes = nodes

    @property
    def shape(self):
        return self.weights.shape

    @property
    def layer_ids(self):
        return [s.layer_id for s in self.layers]

    def layer_index(self, layer_id):
        try:
            return self.layer_ids.index(layer_id)
        except ValueError:
            raise KeyError(f"unknown layer id {layer_id!r}") from None

    def time_index(self, label):
        try:
            return self.times.index(label)
        except ValueError:
            raise KeyError(f"unknown period {label!r}") from None

    def matrix(self, time, layer):
        """One N x N layer slice; time and layer given by label or index."""
        t = time if isinstance(time, int) else self.time_index(time)
        k = layer if isinstance(layer, int) else self.layer_index(layer)
        return self.weights[t, k]

    def layer_mean(self, layer):
        """Time-averaged N x N matrix of one layer."""
        k = layer if isinstance(layer, int) else self.layer_index(layer)
        return self.weights[:, k].mean(axis=0)

    def binary(self):
        return self.weights > 0

    def drop_period(self, label):
        """New tensor without one period (leave-one-out resampling)."""
        t = label if isinstance(label, int) else self.time_index(label)
        keep = [i for i in range(len(self.times)) if i != t]
        return MultiplexTensor(
            self.weights[keep],
            [self.times[i] for i in keep],
            self.layers,
            self.nodes,
        )

    def reorder_nodes(self, perm):
        perm = np.asarray(perm, dtype=int)
        if sorted(perm.tolist()) != list(range(len(self.nodes))):
            raise ValidationError("node reordering is not a permutation")
        w = self.weights[:, :, perm][:, :, :, perm]
        return MultiplexTensor(w, self.times, self.layers, self.nodes.reorder(perm))

    def canonical(self):
        """Tensor with nodes in canonical (financialisation) order."""
        return self.reorder_nodes(self.nodes.canonical_permutation())


def imbalance_series(tensor, layer_id):
    """Per-period, per-node export minus import for one layer.

    Returns an array of shape (T, N); each row sums to zero exactly.
    """
    k = tensor.layer_index(layer_id)
    w = tensor.weights[:, k]
    return w.sum(axis=2) - w.sum(axis=1)
