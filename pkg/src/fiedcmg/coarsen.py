"""Heavy edge coarsening and the multilevel hierarchy.

One coarsening pass visits the vertices in a seeded random order; every
vertex that is still unassigned is merged with its heaviest-edge neighbour
(opening a new aggregate if that neighbour is also free, joining its
aggregate otherwise). For a connected graph every aggregate therefore holds
at least two vertices and the coarse graph has at most half the vertices.
The coarse operator is the Galerkin triple product R·L·Rᵀ of the 0/1
aggregation matrix, which is again a graph Laplacian: inter-aggregate
weights add up and intra-aggregate edges vanish into the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import hec_pass
from .laplacian import (SparseLaplacian, laplacian_from_edge_arrays,
                        laplacian_is_connected)


class CoarseningError(RuntimeError):
    """Raised for inputs the aggregation pass cannot handle."""


@dataclass(frozen=True)
class AggregateMap:
    """Assignment of fine vertices to coarse aggregate ids."""

    fine_n: int
    coarse_n: int
    assign: np.ndarray

    def __post_init__(self):
        if self.assign.shape != (self.fine_n,):
            raise ValueError("assign length must equal fine_n")

    def sizes(self) -> np.ndarray:
        """Number of fine vertices in each aggregate."""
        return np.bincount(self.assign, minlength=self.coarse_n)


@dataclass(frozen=True)
class LevelStats:
    level: int
    n: int
    nnz: int
    rate: float | None  # n_{i+1}/n_i; None on the coarsest level


@dataclass(frozen=True)
class Hierarchy:
    """Fine-to-coarse ladder of Laplacians with the maps between them."""

    levels: list[SparseLaplacian]
    maps: list[AggregateMap]
    stats: list[LevelStats]

    @property
    def depth(self) -> int:
        return len(self.levels)


def level_seed(master_seed: int, level: int) -> int:
    """Deterministic per-level seed: SeedSequence([master, level]).

    One master seed reproduces the whole hierarchy; level J (one past the
    last coarsening pass) seeds the coarsest-level random start vector.
    """
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(level)])
    return int(ss.generate_state(1, np.uint64)[0])


def hec_coarsen(lap: SparseLaplacian, seed: int) -> AggregateMap:
    """One heavy-edge aggregation pass over a connected Laplacian.

    The visit order is a Fisher-Yates shuffle drawn from the seed; ties in
    edge weight break toward the lowest vertex index. Deterministic for a
    fixed (lap, seed).
    """
    if lap.n < 2:
        raise CoarseningError("cannot coarsen a single-vertex graph")
    if not laplacian_is_connected(lap):
        raise CoarseningError("input graph is disconnected")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))
    perm = rng.permutation(lap.n)
    assign, count = hec_pass(lap.row_offsets, lap.col_indices, lap.values, perm)
    return AggregateMap(fine_n=lap.n, coarse_n=int(count), assign=assign)


def galerkin_coarsen(lap: SparseLaplacian, m: AggregateMap) -> SparseLaplacian:
    """Coarse Laplacian R·L·Rᵀ for the 0/1 restriction R of the map."""
    if m.fine_n != lap.n:
        raise ValueError("aggregate map does not match matrix size")
    rows = np.repeat(np.arange(lap.n), np.diff(lap.row_offsets))
    a = m.assign[rows]
    b = m.assign[lap.col_indices]
    keep = a < b  # one copy of each symmetric inter-aggregate pair
    return laplacian_from_edge_arrays(m.coarse_n, a[keep], b[keep],
                                      -lap.values[keep])


def restrict(m: AggregateMap, x: np.ndarray) -> np.ndarray:
    """Coarse vector of per-aggregate sums (R·x)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (m.fine_n,):
        raise ValueError(f"vector length {x.shape} does not match fine_n={m.fine_n}")
    return np.bincount(m.assign, weights=x, minlength=m.coarse_n)


def prolongate(m: AggregateMap, y: np.ndarray) -> np.ndarray:
    """Piecewise-constant injection (Rᵀ·y): each fine vertex copies its
    aggregate's value."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (m.coarse_n,):
        raise ValueError(f"vector length {y.shape} does not match coarse_n={m.coarse_n}")
    return y[m.assign]


def build_hierarchy(lap: SparseLaplacian, coarsest_size: int = 25,
                    seed: int = 0) -> Hierarchy:
    """Coarsen repeatedly while the current level has more than
    `coarsest_size` vertices.

    Level i draws its seed from level_seed(seed, i). A pass that fails to
    shrink the graph (impossible for connected input) aborts rather than
    looping; coarsening also stops once a level cannot be meaningfully
    reduced further (a single vertex).
    """
    levels = [lap]
    maps: list[AggregateMap] = []
    while levels[-1].n > coarsest_size and levels[-1].n >= 2:
        cur = levels[-1]
        m = hec_coarsen(cur, level_seed(seed, len(maps)))
        if m.coarse_n >= cur.n:
            raise CoarseningError(
                f"coarsening stalled at n={cur.n}: no reduction achieved")
        maps.append(m)
        levels.append(galerkin_coarsen(cur, m))

    stats = []
    for i, lv in enumerate(levels):
        rate = levels[i + 1].n / lv.n if i + 1 < len(levels) else None
        stats.append(LevelStats(level=i, n=lv.n, nnz=lv.nnz, rate=rate))
    return Hierarchy(levels=levels, maps=maps, stats=stats)
