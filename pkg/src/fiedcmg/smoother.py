"""Gershgorin-shifted power iteration.

The Fiedler pair of a Laplacian L is the dominant pair of g·I − L on the
complement of the constant vector, where g is the largest absolute row sum
(a Gershgorin bound on the spectrum, equal to twice the largest weighted
degree). Power iteration on the shifted operator with one initial
Gram-Schmidt step against the constant vector therefore refines an
approximate Fiedler vector; the complement stays invariant so the
orthogonality only needs occasional (optional) repair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laplacian import SparseLaplacian, project_out_ones, spmv


@dataclass(frozen=True)
class SmootherConfig:
    """Stopping control for power iteration.

    Convergence is declared when successive unit iterates satisfy
    uᵀv > 1 − tol (equivalently ‖u − v‖² < 2·tol). reproject_every = 0
    projects against the constant vector once at entry only.
    """

    tol: float = 1e-8
    max_iters: int = 1000
    reproject_every: int = 0

    def __post_init__(self):
        if not (0.0 < self.tol < 1.0):
            raise ValueError("tol must lie in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.reproject_every < 0:
            raise ValueError("reproject_every must be non-negative")


@dataclass(frozen=True)
class SmoothResult:
    vector: np.ndarray  # unit norm, orthogonal to the constant vector
    iterations: int
    converged: bool
    final_dot: float


def gershgorin_bound(lap: SparseLaplacian) -> float:
    """Largest absolute row sum; every eigenvalue of g·I − L lies in [0, g]."""
    rows = np.repeat(np.arange(lap.n), np.diff(lap.row_offsets))
    return float(np.bincount(rows, weights=np.abs(lap.values),
                             minlength=lap.n).max())


def power_iterate(lap: SparseLaplacian, y0: np.ndarray,
                  cfg: SmootherConfig = SmootherConfig(),
                  iterate_log: list | None = None) -> SmoothResult:
    """Refine y0 toward the Fiedler vector of `lap`.

    The start vector is mean-projected and normalized, then u ← (gI − L)u
    with renormalization until the successive-dot criterion or the
    iteration cap fires. If the shifted operator annihilates the iterate
    (possible only when the iterate is already an exact eigenvector whose
    shifted eigenvalue is zero, e.g. the two-vertex graph) the iterate is
    returned as converged. When `iterate_log` is given every normalized
    iterate, including the projected start, is appended to it.
    """
    y0 = np.asarray(y0, dtype=np.float64)
    if y0.shape != (lap.n,):
        raise ValueError(f"vector length {y0.shape} does not match n={lap.n}")
    if not np.all(np.isfinite(y0)):
        raise ValueError("start vector has non-finite entries")

    u = project_out_ones(y0)
    norm = np.linalg.norm(u)
    if norm <= 1e-14 * np.linalg.norm(y0):
        raise ValueError("start vector is numerically parallel to the "
                         "constant vector")
    u = u / norm
    if iterate_log is not None:
        iterate_log.append(u.copy())

    g = gershgorin_bound(lap)
    iterations = 0
    converged = False
    final_dot = 0.0
    while iterations < cfg.max_iters:
        v = u
        w = g * v - spmv(lap, v)
        iterations += 1
        wnorm = np.linalg.norm(w)
        if wnorm <= 1e-14 * g:
            # v spans an exact null direction of gI - L: already an eigenvector
            u = v
            final_dot = 1.0
            converged = True
            break
        u = w / wnorm
        if cfg.reproject_every and iterations % cfg.reproject_every == 0:
            u = project_out_ones(u)
            u /= np.linalg.norm(u)
        if iterate_log is not None:
            iterate_log.append(u.copy())
        final_dot = float(u @ v)
        if final_dot > 1.0 - cfg.tol:
            converged = True
            break

    u = project_out_ones(u)
    u = u / np.linalg.norm(u)
    if not np.all(np.isfinite(u)):
        raise FloatingPointError("power iteration produced non-finite values")
    return SmoothResult(vector=u, iterations=iterations, converged=converged,
                        final_dot=final_dot)


def coarsest_solve(lap: SparseLaplacian, cfg: SmootherConfig,
                   seed: int) -> SmoothResult:
    """Power iteration from a seeded standard-Gaussian start vector."""
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))
    y0 = rng.standard_normal(lap.n)
    return power_iterate(lap, y0, cfg)
