"""High-precision variational solver for two coupled anharmonic oscillators."""

from .basis1d import Basis1DSpec, BasisKind, kinetic_matrix, x2_matrix, x4_matrix
from .bench import (
    PAPER_REFERENCES,
    ConvergenceRecord,
    StudyConfig,
    emit_figure_script,
    emit_table,
    run_study,
)
from .collocation import CollocationGrid, collocation_grid, collocation_ground_energy
from .hamiltonian2d import HamiltonianForm, HamiltonianSpec, assemble, dump_matrix, trace_form
from .numerics import (
    PrecisionContext,
    SymmetricMatrix,
    TraceForm,
    eigenvalues_symmetric,
    make_precision_context,
    smallest_eigenvalue,
    stationary_points_signed_power_form,
)
from .optimizer import OptimizedBasisResult, optimize_parameter

__all__ = [
    "Basis1DSpec",
    "BasisKind",
    "CollocationGrid",
    "ConvergenceRecord",
    "HamiltonianForm",
    "HamiltonianSpec",
    "OptimizedBasisResult",
    "PAPER_REFERENCES",
    "PrecisionContext",
    "StudyConfig",
    "SymmetricMatrix",
    "TraceForm",
    "assemble",
    "collocation_grid",
    "collocation_ground_energy",
    "dump_matrix",
    "eigenvalues_symmetric",
    "emit_figure_script",
    "emit_table",
    "kinetic_matrix",
    "make_precision_context",
    "optimize_parameter",
    "run_study",
    "smallest_eigenvalue",
    "stationary_points_signed_power_form",
    "trace_form",
    "x2_matrix",
    "x4_matrix",
]

__version__ = "0.1.0"
