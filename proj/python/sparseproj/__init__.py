"""Grouped sparse projections and sparse NMF."""

from ._core import (
    ProjectionResult,
    NmfResult,
    spar,
    spar_weighted,
    average_sparsity,
    project,
    project_weighted,
    nmf,
    synthetic_nmf,
    radial_weights,
)

__all__ = [
    "ProjectionResult",
    "NmfResult",
    "spar",
    "spar_weighted",
    "average_sparsity",
    "project",
    "project_weighted",
    "nmf",
    "synthetic_nmf",
    "radial_weights",
]
