"""Backbone extraction, link-count series and jackknife error estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSampleError, ValidationError


@dataclass
class BackboneGraph:
    """Mutualized positive-significance graph and its largest component.

    mutual_adj is the elementwise AND of the directed mask with its
    transpose: only reciprocated positive correlations survive.
    """

    directed_adj: np.ndarray
    mutual_adj: np.ndarray
    component_members: list
    directed_edges: list
    node_ids: list
    empty: bool = False


@dataclass
class JackknifeEstimate:
    statistic_name: str
    point: float
    leave_one_out: np.ndarray
    variance: float
    std_error: float
    periods: list


def extract_backbone(mask, node_ids=None):
    """Backbone of a positive-significance mask.

    The directed mask is mutualized (elementwise AND with its transpose,
    so one-way entries never survive) and the largest connected component
    of the resulting undirected graph is extracted. Ties between equal
    size components are broken by the smallest contained node index.
    Isolated nodes are excluded; an all-false mask yields an empty,
    flagged backbone.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise ValidationError(f"mask must be square, got shape {mask.shape}")
    n = mask.shape[0]
    if node_ids is None:
        node_ids = [str(i) for i in range(n)]
    if len(node_ids) != n:
        raise ValidationError("node_ids length does not match mask")
    directed = mask.copy()
    np.fill_diagonal(directed, False)
    mutual = directed & directed.T

    best = []
    seen = np.zeros(n, dtype=bool)
    for start in range(n):
        if seen[start] or not mutual[start].any():
            continue
        # BFS over the undirected mutual graph
        comp = []
        queue = [start]
        seen[start] = True
        while queue:
            i = queue.pop()
            comp.append(i)
            for j in np.flatnonzero(mutual[i]):
                if not seen[j]:
                    seen[j] = True
                    queue.append(j)
        if len(comp) > len(best):
            best = sorted(comp)
    edges = [(node_ids[i], node_ids[j]) for i, j in zip(*np.nonzero(directed))]
    return BackboneGraph(
        directed_adj=directed,
        mutual_adj=mutual,
        component_members=[node_ids[i] for i in best],
        directed_edges=edges,
        node_ids=list(node_ids),
        empty=not mutual.any(),
    )


def link_counts(masks):
    """Per-node, per-period link counts over a stack of significance masks.

    Parameters
    ----------
    masks : array_like, shape (P, T, N, N) or (T, N, N)
        Boolean masks per layer pair and period.

    Returns
    -------
    (in_counts, out_counts) : arrays of shape (T, N)
        out_counts[t, i] sums mask[.., t, i, :]; in_counts the transpose.
    """
    m = np.asarray(masks, dtype=bool)
    if m.ndim == 3:
        m = m[None]
    if m.ndim != 4 or m.shape[-1] != m.shape[-2]:
        raise ValidationError(f"masks must have shape (P, T, N, N), got {m.shape}")
    out_counts = m.sum(axis=(0, 3))
    in_counts = m.sum(axis=(0, 2))
    return in_counts, out_counts


def jackknife_variance(leave_one_out):
    """Jackknife variance ((n-1)/n) * sum (theta_t - mean)^2."""
    values = np.asarray(leave_one_out, dtype=float)
    n = len(values)
    return float((n - 1) / n * ((values - values.mean()) ** 2).sum())


def jackknife(statistic, tensor, name="statistic"):
    """Leave-one-period-out jackknife of a scalar statistic of the tensor.

    `statistic` is any callable MultiplexTensor -> float; it is evaluated
    on the full sample and on each sub-tensor with one period removed.
    """
    periods = list(tensor.times)
    if len(periods) < 3:
        raise InsufficientSampleError(
            f"jackknife needs at least 3 periods, got {len(periods)}")
    point = float(statistic(tensor))
    loo = np.array([float(statistic(tensor.drop_period(t))) for t in periods])
    variance = jackknife_variance(loo)
    return JackknifeEstimate(
        statistic_name=name,
        point=point,
        leave_one_out=loo,
        variance=variance,
        std_error=float(np.sqrt(variance)),
        periods=periods,
    )
