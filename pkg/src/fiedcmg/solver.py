"""The three-phase cascadic Fiedler-vector solver.

Setup coarsens the graph level by level, the coarsest level is solved by
power iteration from a random start, and the refinement phase walks back up
the hierarchy: prolongate the current approximation to the next finer level
and smooth it there with power iteration. Coarse levels are never revisited.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coarsen import Hierarchy, build_hierarchy, level_seed, prolongate
from .laplacian import SparseLaplacian, spmv
from .smoother import SmootherConfig, coarsest_solve, power_iterate


@dataclass(frozen=True)
class SolverConfig:
    coarsest_size: int = 25
    smoother: SmootherConfig = field(default_factory=SmootherConfig)
    seed: int = 0

    def __post_init__(self):
        if self.coarsest_size < 2:
            raise ValueError("coarsest_size must be at least 2")


@dataclass(frozen=True)
class LevelSolve:
    """Smoothing record for one level of a solve."""

    level: int
    n: int
    nnz: int
    iterations: int
    converged: bool


@dataclass(frozen=True)
class FiedlerResult:
    vector: np.ndarray  # unit norm, orthogonal to the constant vector
    lambda2: float      # Rayleigh quotient of `vector`
    residual: float     # ||L v - lambda2 v||
    per_level: list[LevelSolve]
    wall_time: float    # setup + solve seconds
    setup_time: float   # hierarchy construction seconds
    seed: int

    @property
    def converged(self) -> bool:
        """Convergence flag of the finest level."""
        return self.per_level[0].converged


def residual_norm(lap: SparseLaplacian, y: np.ndarray) -> tuple[float, float]:
    """(Rayleigh quotient, eigen-residual norm) of y against `lap`.

    y is normalized internally; the residual is ||L y - r y|| for the unit
    vector y and r = yᵀLy.
    """
    y = np.asarray(y, dtype=np.float64)
    nrm = np.linalg.norm(y)
    if nrm == 0.0:
        raise ValueError("zero vector has no Rayleigh quotient")
    y = y / nrm
    ly = spmv(lap, y)
    lam = float(y @ ly)
    res = float(np.linalg.norm(ly - lam * y))
    return lam, res


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip so the first entry of clearly nonzero magnitude is positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if len(idx) and v[idx[0]] < 0:
        return -v
    return v


def solve_fiedler(lap: SparseLaplacian,
                  cfg: SolverConfig = SolverConfig()) -> FiedlerResult:
    """Approximate Fiedler pair of a connected Laplacian.

    Raises CoarseningError on disconnected input. Non-convergence on the
    finest level is reported through the per-level records rather than an
    exception; intermediate levels always hand their current iterate up.
    """
    t0 = time.perf_counter()
    hierarchy = build_hierarchy(lap, coarsest_size=cfg.coarsest_size,
                                seed=cfg.seed)
    t1 = time.perf_counter()

    # deepest level that still has a Fiedler pair to solve for
    j_solve = max(i for i, lv in enumerate(hierarchy.levels) if lv.n >= 2)
    records: dict[int, LevelSolve] = {}

    level = hierarchy.levels[j_solve]
    result = coarsest_solve(level, cfg.smoother, level_seed(cfg.seed, j_solve))
    records[j_solve] = LevelSolve(level=j_solve, n=level.n, nnz=level.nnz,
                                  iterations=result.iterations,
                                  converged=result.converged)
    y = result.vector
    for j in range(j_solve - 1, -1, -1):
        level = hierarchy.levels[j]
        y = prolongate(hierarchy.maps[j], y)
        result = power_iterate(level, y, cfg.smoother)
        records[j] = LevelSolve(level=j, n=level.n, nnz=level.nnz,
                                iterations=result.iterations,
                                converged=result.converged)
        y = result.vector

    y = _fix_sign(y)
    lam, res = residual_norm(lap, y)
    t2 = time.perf_counter()
    per_level = [records[j] for j in sorted(records)]
    return FiedlerResult(vector=y, lambda2=lam, residual=res,
                         per_level=per_level, wall_time=t2 - t0,
                         setup_time=t1 - t0, seed=cfg.seed)


def spectral_bisect(lap: SparseLaplacian,
                    cfg: SolverConfig = SolverConfig()
                    ) -> tuple[np.ndarray, float, FiedlerResult]:
    """Split the vertices at the median of the Fiedler vector.

    Returns (labels, cut_weight, fiedler_result): labels is a 0/1 array
    whose parts differ in size by at most one (vertex 0 is in part 0), and
    cut_weight is the total weight of edges crossing the partition.
    """
    fr = solve_fiedler(lap, cfg)
    order = np.argsort(fr.vector, kind="stable")
    labels = np.zeros(lap.n, dtype=np.int64)
    labels[order[(lap.n + 1) // 2:]] = 1
    if labels[0] == 1:
        labels = 1 - labels

    rows = np.repeat(np.arange(lap.n), np.diff(lap.row_offsets))
    off = rows < lap.col_indices
    crossing = labels[rows[off]] != labels[lap.col_indices[off]]
    cut = float(-np.sum(lap.values[off][crossing]))
    return labels, cut, fr
