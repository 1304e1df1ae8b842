"""Discrete weighted Helmholtz decompositions outside a ball."""

from .correction import (
    build_correction_basis,
    correction_field,
    correction_gram,
    correction_indices,
    cutoff_tower_laplacian,
    decompose_with_correction,
    extract_correction_coefficients,
    flux_pairing,
    growing_dirichlet_field,
    growing_dirichlet_trace,
    growing_dirichlet_indices,
    witness_fields,
)
from .decomposition import (
    DecompositionResult,
    compute_dirichlet_field,
    project_off_dirichlet,
    weight_operator,
    weighted_decompose,
)
from .fieldio import format_grid_field, read_grid_field, write_grid_field
from .grid import GridField, Medium, ShellGrid
from .operators import (
    Cutoff,
    CutoffSpec,
    discrete_curl,
    discrete_div,
    discrete_grad,
    gradient_matrix,
    make_cutoff,
)
from .solver import pcg

__all__ = [
    "ShellGrid", "GridField", "Medium", "Cutoff", "CutoffSpec", "make_cutoff",
    "gradient_matrix", "discrete_grad", "discrete_div", "discrete_curl", "pcg",
    "DecompositionResult", "weighted_decompose", "compute_dirichlet_field",
    "project_off_dirichlet", "weight_operator",
    "correction_field", "correction_indices", "build_correction_basis",
    "cutoff_tower_laplacian", "growing_dirichlet_field", "growing_dirichlet_trace",
    "growing_dirichlet_indices",
    "witness_fields", "correction_gram", "extract_correction_coefficients",
    "decompose_with_correction", "flux_pairing",
    "read_grid_field", "write_grid_field", "format_grid_field",
]
