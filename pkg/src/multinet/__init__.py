"""Correlation, reciprocity and null-model analysis of weighted directed
multiplex networks."""

from .analysis import (
    BackboneGraph,
    JackknifeEstimate,
    extract_backbone,
    jackknife,
    jackknife_variance,
    link_counts,
)
from .core import (
    LayerKind,
    LayerSpec,
    LayerSummary,
    MultiplexTensor,
    NodeEntry,
    NodeTable,
    decompose_dyads,
    imbalance_series,
    layer_summary,
)
from .errors import (
    ConvergenceError,
    IngestError,
    InsufficientSampleError,
    MultinetError,
    UndefinedStatisticError,
    ValidationError,
)
from .manifest import ManifestConfig, ingest, load_manifest
from .metrics import (
    CrossLayerStats,
    LocalStats,
    PearsonMatrix,
    binary_reciprocity,
    cross_product_stats,
    local_stats,
    pearson_binary_pair,
    pearson_pair,
    weighted_reciprocity_min,
    weighted_reciprocity_pearson,
)
from .nullmodel import (
    NullEnhanced,
    SolverConfig,
    WrcmFit,
    drg_expectation,
    expected_cross_stats,
    expected_min_reciprocity,
    fit_wrcm,
    null_enhanced_global,
    null_enhanced_local,
    wrcm_self_rho,
)

__version__ = "0.1.0"

__all__ = [
    "BackboneGraph",
    "ConvergenceError",
    "CrossLayerStats",
    "IngestError",
    "InsufficientSampleError",
    "JackknifeEstimate",
    "LayerKind",
    "LayerSpec",
    "LayerSummary",
    "LocalStats",
    "ManifestConfig",
    "MultinetError",
    "MultiplexTensor",
    "NodeEntry",
    "NodeTable",
    "NullEnhanced",
    "PearsonMatrix",
    "SolverConfig",
    "UndefinedStatisticError",
    "ValidationError",
    "WrcmFit",
    "binary_reciprocity",
    "cross_product_stats",
    "decompose_dyads",
    "drg_expectation",
    "expected_cross_stats",
    "expected_min_reciprocity",
    "extract_backbone",
    "fit_wrcm",
    "imbalance_series",
    "ingest",
    "jackknife",
    "jackknife_variance",
    "layer_summary",
    "link_counts",
    "load_manifest",
    "local_stats",
    "null_enhanced_global",
    "null_enhanced_local",
    "pearson_binary_pair",
    "pearson_pair",
    "weighted_reciprocity_min",
    "weighted_reciprocity_pearson",
    "wrcm_self_rho",
]
