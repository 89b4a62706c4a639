"""Cascadic multigrid Fiedler-vector solver for sparse graph Laplacians."""

import os as _os

# FIEDCMG_THREADS caps internal parallelism (default 1, for bit-reproducible
# results). It seeds the BLAS pool-size variables, but never overrides ones
# the user already set, and has no effect if numpy was imported first.
_threads = _os.environ.get("FIEDCMG_THREADS", "1")
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
             "NUMEXPR_NUM_THREADS"):
    _os.environ.setdefault(_var, _threads)
del _os, _threads, _var

from .coarsen import (AggregateMap, CoarseningError, Hierarchy, LevelStats,
                      build_hierarchy, galerkin_coarsen, hec_coarsen,
                      level_seed, prolongate, restrict)
from .gcmg import (GcmgConfig, GcmgLevelRow, GcmgReport, GridLevel, RateTable,
                   bilinear_prolongate, gcmg_solve, grid_eigenvalue,
                   grid_laplacian, lambda2_exact, rate_experiment,
                   richardson_smooth)
from .laplacian import (EdgeList, GraphFormatError, SparseLaplacian,
                        build_laplacian, is_connected, load_graph,
                        project_out_ones, spmv)
from .oracle import (EigenDecomposition, fiedler_oracle, jacobi_eigen,
                     subspace_angle)
from .smoother import (SmootherConfig, SmoothResult, coarsest_solve,
                       gershgorin_bound, power_iterate)
from .solver import (FiedlerResult, LevelSolve, SolverConfig, residual_norm,
                     solve_fiedler, spectral_bisect)

__version__ = "0.1.0"

__all__ = [
    "AggregateMap", "CoarseningError", "EdgeList", "EigenDecomposition",
    "FiedlerResult", "GcmgConfig", "GcmgLevelRow", "GcmgReport",
    "GraphFormatError", "GridLevel", "Hierarchy", "LevelSolve", "LevelStats",
    "RateTable", "SmoothResult", "SmootherConfig", "SolverConfig",
    "SparseLaplacian", "bilinear_prolongate", "build_hierarchy",
    "build_laplacian", "coarsest_solve", "fiedler_oracle", "galerkin_coarsen",
    "gcmg_solve", "gershgorin_bound", "grid_eigenvalue", "grid_laplacian",
    "hec_coarsen", "is_connected", "jacobi_eigen", "lambda2_exact",
    "level_seed", "load_graph", "power_iterate", "project_out_ones",
    "prolongate", "rate_experiment", "residual_norm", "restrict",
    "richardson_smooth", "solve_fiedler", "spectral_bisect", "spmv",
    "subspace_angle",
]
