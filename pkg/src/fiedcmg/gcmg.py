"""Geometric cascadic multigrid for the grid Neumann eigenproblem.

The model operator on each level is the Laplacian of the N×N grid graph
(the Cartesian product of two paths with unit weights), whose eigenvalues
are (2 - 2cos(p·pi/N)) + (2 - 2cos(q·pi/N)) in closed form; the second
smallest has multiplicity two. Levels nest vertex-centered: a fine side of
2(N-1)+1 points overlays the coarse side exactly, with bilinear
interpolation filling edge midpoints and cell centers. Refinement uses the
Richardson smoother u <- (I - omega·A)u with omega = 1/||A||_inf and a
geometric smoothing schedule k_j = beta^j·k0 (more steps on the cheaper,
coarser levels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .laplacian import SparseLaplacian, laplacian_from_edge_arrays, project_out_ones, spmv
from .oracle import SIZE_GUARD, fiedler_oracle
from .smoother import SmootherConfig, coarsest_solve

DEFAULT_COARSEST_SIDE = 65
EXACT_SOLVE_LIMIT = 1024  # densify below this size; power iterate above


def grid_laplacian(n_side: int) -> SparseLaplacian:
    """Laplacian of the n_side × n_side grid graph, unit weights."""
    if n_side < 2:
        raise ValueError("grid needs at least 2 points per side")
    idx = np.arange(n_side * n_side, dtype=np.int64).reshape(n_side, n_side)
    ei = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    ej = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return laplacian_from_edge_arrays(n_side * n_side, ei, ej,
                                      np.ones(len(ei)))


def grid_eigenvalue(p: int, q: int, n_side: int) -> float:
    """Closed-form grid-graph eigenvalue for mode numbers (p, q)."""
    return (2.0 - 2.0 * math.cos(math.pi * p / n_side)
            + 2.0 - 2.0 * math.cos(math.pi * q / n_side))


def lambda2_exact(n_side: int) -> float:
    """Second-smallest grid eigenvalue, 2 - 2cos(pi/N); multiplicity two."""
    return grid_eigenvalue(0, 1, n_side)


@dataclass(frozen=True)
class GridLevel:
    n_side: int
    operator: SparseLaplacian
    omega: float    # 1 / ||A||_inf
    k_steps: int    # smoothing steps scheduled on this level (0 = coarsest)


@dataclass(frozen=True)
class GcmgConfig:
    """Run parameters; n_side_finest must be m·2^J + 1 for J = levels - 1."""

    n_side_finest: int
    levels: int | None = None  # None: halve until the side is <= 65
    beta: float = 4.0
    k0: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n_side_finest < 2:
            raise ValueError("finest grid needs at least 2 points per side")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.k0 < 1:
            raise ValueError("k0 must be at least 1")
        if self.levels is not None and self.levels < 1:
            raise ValueError("need at least one level")
        self.sides()  # validates nesting

    def sides(self) -> list[int]:
        """Grid sides per level, finest first."""
        sides = [self.n_side_finest]
        if self.levels is None:
            while sides[-1] > DEFAULT_COARSEST_SIDE and (sides[-1] - 1) % 2 == 0:
                sides.append((sides[-1] - 1) // 2 + 1)
            return sides
        for _ in range(self.levels - 1):
            if (sides[-1] - 1) % 2 != 0 or sides[-1] <= 2:
                raise ValueError(
                    f"side {self.n_side_finest} does not nest over "
                    f"{self.levels} levels")
            sides.append((sides[-1] - 1) // 2 + 1)
        return sides

    def schedule(self, level: int) -> int:
        return max(1, int(round(self.beta ** level * self.k0)))


@dataclass(frozen=True)
class GcmgLevelRow:
    index: int          # 0 = finest
    n_side: int
    k_steps: int        # 0 on the coarsest (direct solve, no smoothing)
    lambda2_ref: float  # closed-form second eigenvalue of this level's grid
    err_pre: float      # |lambda2_ref - Rayleigh quotient after prolongation|
    err_post: float     # |lambda2_ref - Rayleigh quotient after smoothing|


@dataclass(frozen=True)
class GcmgReport:
    rows: list[GcmgLevelRow]  # finest first
    lambda2: float            # final Rayleigh quotient on the finest level
    vector: np.ndarray
    work: int                 # sum of k_j · n_j over smoothing levels

    def refined_rows(self) -> list[GcmgLevelRow]:
        return [r for r in self.rows if r.k_steps > 0]


def bilinear_prolongate(coarse: np.ndarray, n_side_coarse: int) -> np.ndarray:
    """Interpolate a coarse grid vector onto the 2(N-1)+1 fine grid.

    Coincident points copy, edge midpoints average their two neighbours,
    cell centers average their four corners.
    """
    coarse = np.asarray(coarse, dtype=np.float64)
    if coarse.shape != (n_side_coarse * n_side_coarse,):
        raise ValueError("coarse vector does not match its grid size")
    nc = n_side_coarse
    nf = 2 * (nc - 1) + 1
    c = coarse.reshape(nc, nc)
    f = np.empty((nf, nf))
    f[0::2, 0::2] = c
    f[0::2, 1::2] = 0.5 * (c[:, :-1] + c[:, 1:])
    f[1::2, 0::2] = 0.5 * (c[:-1, :] + c[1:, :])
    f[1::2, 1::2] = 0.25 * (c[:-1, :-1] + c[1:, :-1] + c[:-1, 1:] + c[1:, 1:])
    return f.ravel()


def _build_level(n_side: int, k_steps: int) -> GridLevel:
    op = grid_laplacian(n_side)
    rows = np.repeat(np.arange(op.n), np.diff(op.row_offsets))
    norm_inf = np.bincount(rows, weights=np.abs(op.values), minlength=op.n).max()
    return GridLevel(n_side=n_side, operator=op, omega=1.0 / norm_inf,
                     k_steps=k_steps)


def richardson_smooth(level: GridLevel, u: np.ndarray, k: int) -> np.ndarray:
    """Apply u <- u - omega·A·u exactly k times, then mean-project and
    normalize."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (level.operator.n,):
        raise ValueError("vector does not match the level's grid")
    nrm0 = np.linalg.norm(u)
    if np.linalg.norm(project_out_ones(u)) <= 1e-14 * nrm0:
        raise ValueError("iterate is numerically parallel to the constant vector")
    for _ in range(k):
        u = u - level.omega * spmv(level.operator, u)
    u = project_out_ones(u)
    return u / np.linalg.norm(u)


def _solve_coarsest(level: GridLevel, seed: int) -> np.ndarray:
    """Near-exact second eigenvector of the coarsest operator: dense
    decomposition when small enough, otherwise machine-tolerance power
    iteration from a seeded random start."""
    n = level.operator.n
    if n <= min(EXACT_SOLVE_LIMIT, SIZE_GUARD):
        _, basis = fiedler_oracle(level.operator)
        u = basis[0]
    else:
        cfg = SmootherConfig(tol=1e-14, max_iters=500_000)
        u = coarsest_solve(level.operator, cfg, seed).vector
    u = project_out_ones(u)
    return u / np.linalg.norm(u)


def gcmg_solve(cfg: GcmgConfig) -> GcmgReport:
    """Run the cascadic pipeline and report per-level eigenvalue errors.

    The Rayleigh quotient is recorded right after prolongation (plus mean
    projection and normalization) and again after the scheduled smoothing
    steps; both are compared against the level's closed-form second
    eigenvalue. The coarsest row reports its direct-solve error in both
    columns.
    """
    sides = cfg.sides()
    j_last = len(sides) - 1
    levels = [_build_level(s, cfg.schedule(j) if j < j_last else 0)
              for j, s in enumerate(sides)]

    u = _solve_coarsest(levels[j_last], cfg.seed)
    rq = float(u @ spmv(levels[j_last].operator, u))
    ref = lambda2_exact(sides[j_last])
    rows = [GcmgLevelRow(index=j_last, n_side=sides[j_last], k_steps=0,
                         lambda2_ref=ref, err_pre=abs(ref - rq),
                         err_post=abs(ref - rq))]

    for j in range(j_last - 1, -1, -1):
        level = levels[j]
        u = bilinear_prolongate(u, sides[j + 1])
        u = project_out_ones(u)
        u = u / np.linalg.norm(u)
        ref = lambda2_exact(sides[j])
        rq_pre = float(u @ spmv(level.operator, u))
        u = richardson_smooth(level, u, level.k_steps)
        rq_post = float(u @ spmv(level.operator, u))
        rows.append(GcmgLevelRow(index=j, n_side=sides[j],
                                 k_steps=level.k_steps, lambda2_ref=ref,
                                 err_pre=abs(ref - rq_pre),
                                 err_post=abs(ref - rq_post)))

    rows.sort(key=lambda r: r.index)
    work = sum(r.k_steps * r.n_side * r.n_side for r in rows)
    final_rq = float(u @ spmv(levels[0].operator, u))
    return GcmgReport(rows=rows, lambda2=final_rq, vector=u, work=work)


def levels_to_common_coarsest(n_side: int, coarsest_side: int) -> int:
    """Number of levels that takes n_side down to exactly coarsest_side."""
    ratio = (n_side - 1) / (coarsest_side - 1)
    j = round(math.log2(ratio))
    if 2 ** j != ratio:
        raise ValueError(f"{n_side} does not nest onto coarsest side "
                         f"{coarsest_side}")
    return j + 1


@dataclass(frozen=True)
class RatePoint:
    n_side: int
    h0: float
    error: float


@dataclass(frozen=True)
class RateTable:
    points: list[RatePoint]
    fitted_order: float
    reports: list[GcmgReport]


def rate_experiment(n_sides: list[int], beta: float, k0: int,
                    coarsest_side: int = 17, seed: int = 0) -> RateTable:
    """Final eigenvalue error versus finest mesh size, with a least-squares
    log-log fit of the observed order in h0 = 1/(N-1)."""
    if len(n_sides) < 3:
        raise ValueError("need at least 3 grid sizes to fit an order")
    points = []
    reports = []
    for n in n_sides:
        levels = levels_to_common_coarsest(n, coarsest_side)
        rep = gcmg_solve(GcmgConfig(n_side_finest=n, levels=levels,
                                    beta=beta, k0=k0, seed=seed))
        err = abs(lambda2_exact(n) - rep.lambda2)
        points.append(RatePoint(n_side=n, h0=1.0 / (n - 1), error=err))
        reports.append(rep)
    logh = np.log([p.h0 for p in points])
    loge = np.log([max(p.error, 1e-300) for p in points])
    slope = float(np.polyfit(logh, loge, 1)[0])
    return RateTable(points=points, fitted_order=slope, reports=reports)
