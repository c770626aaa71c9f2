"""Ricci-flow-like analysis of feedforward binary classifiers.

Thin re-export of the compiled ``_riccinet`` extension.
"""

from ._riccinet import (
    DisconnectedGraph,
    InvalidArgument,
    LayerGeometry,
    Network,
    RicciError,
    UndefinedCoefficient,
    aggregate_coefficient,
    fisher_adjust,
    forman_weighted,
    generate_synthetic,
    is_connected,
    knn_edges,
    layer_geometry,
    make_architecture,
    network_from_json,
    ols_fit,
    pearson,
    ricci_coefficient,
    run_experiment,
    total_curvature,
    total_pairwise_distance,
    train,
)

__all__ = [
    "DisconnectedGraph",
    "InvalidArgument",
    "LayerGeometry",
    "Network",
    "RicciError",
    "UndefinedCoefficient",
    "aggregate_coefficient",
    "fisher_adjust",
    "forman_weighted",
    "generate_synthetic",
    "is_connected",
    "knn_edges",
    "layer_geometry",
    "make_architecture",
    "network_from_json",
    "ols_fit",
    "pearson",
    "ricci_coefficient",
    "run_experiment",
    "total_curvature",
    "total_pairwise_distance",
    "train",
]
