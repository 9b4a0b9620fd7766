"""Raw correlation and reciprocity measures for single layers and layer pairs.

Conventions: "syn" compares flows i->j against i->j, "rev" compares i->j
against j->i. All sums run over the N(N-1) off-diagonal cells. Statistics
that are mathematically undefined raise UndefinedStatisticError (global
scalars) or come back as NaN entries (local matrices); they are never
silently coerced to 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import check_layer
from .errors import UndefinedStatisticError, ValidationError

DIRECTIONS = ("syn", "rev")
LOCAL_KINDS = ("local_reciprocity", "local_multiplexity")


@dataclass
class PearsonMatrix:
    """K x K matrix of pairwise layer correlations."""

    values: np.ndarray
    direction: str
    representation: str  # "weighted" or "binary"
    time: str = "averaged"


@dataclass
class CrossLayerStats:
    """Cross-product reciprocity r and multiplexity m for a layer pair."""

    r: float
    m: float
    layer_a: str
    layer_b: str
    w_tot_a: float
    w_tot_b: float


@dataclass
class LocalStats:
    """N x N dyad-level reciprocity or multiplexity.

    Entries are in [0, 1] where defined; NaN marks dyads whose normalizing
    strength is zero (undefined, distinct from an observed 0).
    """

    values: np.ndarray
    kind: str
    layer_a: str
    layer_b: str


def _offdiag(w):
    n = w.shape[0]
    mask = ~np.eye(n, dtype=bool)
    return w[mask]


def _check_pair(a, b):
    a = check_layer(a)
    b = check_layer(b)
    if a.shape != b.shape:
        raise ValidationError(f"layer shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] < 2:
        raise ValidationError("need at least 2 nodes")
    return a, b


def _check_direction(direction):
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def pearson_pair(layer_a, layer_b, direction="syn"):
    """Pearson correlation of two layers over off-diagonal cells.

    Synergic pairs w_ij with w_ij; reverse pairs w_ij with w_ji, so
    rev(A, B) == syn(A, B.T) and the reverse self-correlation measures the
    symmetry of a single layer.
    """
    a, b = _check_pair(layer_a, layer_b)
    _check_direction(direction)
    if direction == "rev":
        b = b.T
    va = _offdiag(a)
    vb = _offdiag(b)
    da = va - va.mean()
    db = vb - vb.mean()
    sa = np.sqrt((da**2).sum())
    sb = np.sqrt((db**2).sum())
    if sa == 0 or sb == 0:
        raise UndefinedStatisticError(
            "Pearson correlation undefined: zero variance in "
            + ("both layers" if sa == 0 and sb == 0 else "one layer")
        )
    return float((da * db).sum() / (sa * sb))


def pearson_binary_pair(layer_a, layer_b, direction="syn"):
    """Pearson correlation of the binary projections a_ij = 1[w_ij > 0].

    Raises for complete or empty layers (zero variance).
    """
    a, b = _check_pair(layer_a, layer_b)
    ba = (a > 0).astype(float)
    bb = (b > 0).astype(float)
    for name, m in (("first", ba), ("second", bb)):
        v = _offdiag(m)
        if v.min() == v.max():
            state = "complete" if v.min() == 1 else "empty"
            raise UndefinedStatisticError(
                f"binary Pearson undefined: {name} layer is {state} (zero variance)"
            )
    return pearson_pair(ba, bb, direction)


def binary_reciprocity(layer):
    """Binary reciprocity r_b = L_mutual / L, connectance c, and
    density-corrected rho_b = (r_b - c) / (1 - c).

    rho_b is NaN for a complete graph (c == 1), where the correction is
    undefined.
    """
    w = check_layer(layer)
    n = w.shape[0]
    a = w > 0
    links = int(a.sum())
    if links == 0:
        raise UndefinedStatisticError("binary reciprocity undefined on an empty graph")
    mutual = int((a & a.T).sum())
    r_b = mutual / links
    c = links / (n * (n - 1))
    rho_b = (r_b - c) / (1 - c) if c < 1 else float("nan")
    return r_b, c, rho_b


def weighted_reciprocity_pearson(layer):
    """Weighted reciprocity in Pearson form.

    r = sum w_ij w_ji / sum w_ij^2, c_w = mean(w)^2 * N(N-1) / sum w_ij^2,
    rho = (r - c_w) / (1 - c_w). rho is NaN when c_w == 1 (all off-diagonal
    weights equal).
    """
    w = check_layer(layer)
    n = w.shape[0]
    sq = float((w**2).sum())
    if sq == 0:
        raise UndefinedStatisticError("weighted reciprocity undefined on an all-zero layer")
    r = float((w * w.T).sum() / sq)
    wbar = w.sum() / (n * (n - 1))
    c_w = float(wbar**2 * n * (n - 1) / sq)
    rho = (r - c_w) / (1 - c_w) if c_w < 1 else float("nan")
    return r, c_w, rho


def weighted_reciprocity_min(layer):
    """Min-based weighted reciprocity: sum_ij min(w_ij, w_ji) / sum_ij w_ij."""
    w = check_layer(layer)
    tot = float(w.sum())
    if tot == 0:
        raise UndefinedStatisticError("weighted reciprocity undefined on an all-zero layer")
    return float(np.minimum(w, w.T).sum() / tot)


def cross_product_stats(layer_a, layer_b, layer_a_id="A", layer_b_id="B"):
    """Cross-product reciprocity r and multiplexity m between two layers.

    r = sum_ij w^A_ij w^B_ji / (W_A W_B) pairs opposing flows;
    m = sum_ij w^A_ij w^B_ij / (W_A W_B) pairs aligned flows.
    Both are invariant under independent positive rescaling of each layer.
    """
    a, b = _check_pair(layer_a, layer_b)
    w_a = float(a.sum())
    w_b = float(b.sum())
    if w_a == 0 or w_b == 0:
        raise UndefinedStatisticError("cross-product stats undefined: zero total weight")
    r = float((a * b.T).sum() / (w_a * w_b))
    m = float((a * b).sum() / (w_a * w_b))
    return CrossLayerStats(r=r, m=m, layer_a=layer_a_id, layer_b=layer_b_id,
                           w_tot_a=w_a, w_tot_b=w_b)


def local_stats(layer_a, layer_b, kind="local_reciprocity",
                layer_a_id="A", layer_b_id="B"):
    """Dyad-level reciprocity or multiplexity, normalized on node i's flows.

    local_reciprocity[i, j] = w^A_ij w^B_ji / (s_out^A_i * s_in^B_i)
    local_multiplexity[i, j] = w^A_ij w^B_ij / (s_out^A_i * s_out^B_i)

    An entry scores 1 exactly when all of node i's relevant flow in both
    layers concentrates on node j. Rows with a zero normalizing strength
    are NaN (undefined), never 0.
    """
    a, b = _check_pair(layer_a, layer_b)
    if kind not in LOCAL_KINDS:
        raise ValidationError(f"kind must be one of {LOCAL_KINDS}, got {kind!r}")
    s_out_a = a.sum(axis=1)
    if kind == "local_reciprocity":
        num = a * b.T
        s_b = b.sum(axis=0)  # in-strength of i in B
    else:
        num = a * b
        s_b = b.sum(axis=1)  # out-strength of i in B
    denom = s_out_a * s_b
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denom[:, None] > 0, num / denom[:, None], np.nan)
    np.fill_diagonal(values, 0.0)
    return LocalStats(values=values, kind=kind, layer_a=layer_a_id, layer_b=layer_b_id)
