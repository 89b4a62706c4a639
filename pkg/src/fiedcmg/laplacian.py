"""Sparse graph Laplacians: ingestion, construction, and vector kernels.

The Laplacian of a weighted undirected graph carries the weighted degree of
each vertex on the diagonal and the negated edge weight off the diagonal, so
every row sums to zero and the constant vector is always in the nullspace.
All matrices here are stored in compressed sparse row form with an explicit
diagonal entry in every row (zero for isolated vertices).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kernels import bfs_reach_count, csr_matvec


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed into a valid graph."""


@dataclass(frozen=True)
class EdgeList:
    """Undirected weighted edge set over vertices 0..n-1.

    Edges are canonical: i < j, sorted lexicographically, no duplicates, no
    self loops, strictly positive weights. `i`, `j`, `w` are parallel arrays.
    """

    n: int
    i: np.ndarray
    j: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError("graph has zero vertices")
        if not (len(self.i) == len(self.j) == len(self.w)):
            raise ValueError("edge arrays must have equal length")
        if len(self.i) and (self.i.min() < 0 or self.j.max() >= self.n):
            raise ValueError("vertex id out of range")
        if np.any(self.i >= self.j):
            raise ValueError("edges must be canonical (i < j)")
        if np.any(self.w <= 0):
            raise ValueError("edge weights must be positive")

    @property
    def edge_count(self) -> int:
        return len(self.w)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        """Edge triples as plain tuples (convenience for small graphs)."""
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.i, self.j, self.w)]

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "EdgeList":
        """Build from an iterable of (i, j, w) with merging and stripping.

        Self loops are dropped with a warning, parallel edges merge by
        weight summation, and orientation is normalized to i < j.
        """
        ii, jj, ww = [], [], []
        loops = 0
        for a, b, c in pairs:
            if a == b:
                loops += 1
                continue
            if a > b:
                a, b = b, a
            ii.append(a)
            jj.append(b)
            ww.append(c)
        if loops:
            warnings.warn(f"dropped {loops} self-loop(s)")
        i = np.asarray(ii, dtype=np.int64)
        j = np.asarray(jj, dtype=np.int64)
        w = np.asarray(ww, dtype=np.float64)
        i, j, w = _coalesce(i, j, w)
        return cls(n=n, i=i, j=j, w=w)


@dataclass(frozen=True)
class SparseLaplacian:
    """Symmetric graph Laplacian in CSR form.

    Invariants (construction-enforced): exact symmetry, diagonal equal to
    the negated off-diagonal row sum, non-positive off-diagonals, column
    indices ascending within each row, explicit diagonal in every row.
    """

    n: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray
    _dense_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def nnz(self) -> int:
        return len(self.values)

    def diagonal(self) -> np.ndarray:
        rows = np.repeat(np.arange(self.n), np.diff(self.row_offsets))
        on_diag = rows == self.col_indices
        d = np.zeros(self.n)
        d[rows[on_diag]] = self.values[on_diag]
        return d

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), np.diff(self.row_offsets))
        a[rows, self.col_indices] = self.values
        return a


def _coalesce(i: np.ndarray, j: np.ndarray, w: np.ndarray):
    """Sum weights of duplicate (i, j) pairs; output lexsorted by (i, j)."""
    if len(w) == 0:
        return i, j, w
    order = np.lexsort((j, i))
    i, j, w = i[order], j[order], w[order]
    new_group = np.empty(len(i), dtype=bool)
    new_group[0] = True
    new_group[1:] = (i[1:] != i[:-1]) | (j[1:] != j[:-1])
    starts = np.flatnonzero(new_group)
    return i[starts], j[starts], np.add.reduceat(w, starts)


def laplacian_from_edge_arrays(n: int, ei: np.ndarray, ej: np.ndarray,
                               w: np.ndarray) -> SparseLaplacian:
    """Assemble a Laplacian from canonical (i < j) edge arrays.

    The diagonal is accumulated as the per-row sum of incident weights, so
    row sums vanish to within rounding by construction. Shared by the graph
    builder and the Galerkin coarsener so both produce bit-identical output
    for identical edge sets.
    """
    ei = np.asarray(ei, dtype=np.int64)
    ej = np.asarray(ej, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    ei, ej, w = _coalesce(ei, ej, w)

    deg = np.zeros(n)
    np.add.at(deg, ei, w)
    np.add.at(deg, ej, w)

    rows = np.concatenate([ei, ej, np.arange(n, dtype=np.int64)])
    cols = np.concatenate([ej, ei, np.arange(n, dtype=np.int64)])
    vals = np.concatenate([-w, -w, deg])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]

    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.add.at(row_offsets, rows + 1, 1)
    np.cumsum(row_offsets, out=row_offsets)
    return SparseLaplacian(n=n, row_offsets=row_offsets,
                           col_indices=cols, values=vals)


def build_laplacian(g: EdgeList) -> SparseLaplacian:
    """Laplacian of an edge list: weighted degrees on the diagonal, negated
    weights off the diagonal."""
    return laplacian_from_edge_arrays(g.n, g.i, g.j, g.w)


def is_connected(g: EdgeList) -> bool:
    """True iff the graph is a single connected component (BFS)."""
    if g.n == 1:
        return True
    if g.edge_count == 0:
        return False
    lap = build_laplacian(g)
    return laplacian_is_connected(lap)


def laplacian_is_connected(lap: SparseLaplacian) -> bool:
    if lap.n == 1:
        return True
    return bfs_reach_count(lap.row_offsets, lap.col_indices, 0) == lap.n


def spmv(lap: SparseLaplacian, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product L·x."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (lap.n,):
        raise ValueError(f"vector length {x.shape} does not match n={lap.n}")
    out = np.empty(lap.n)
    csr_matvec(lap.row_offsets, lap.col_indices, lap.values, x, out)
    return out


def project_out_ones(x: np.ndarray) -> np.ndarray:
    """Subtract the mean: one Gram-Schmidt step against the constant vector."""
    x = np.asarray(x, dtype=np.float64)
    return x - x.mean()


# ---------------------------------------------------------------------------
# file ingestion
# ---------------------------------------------------------------------------

def load_graph(path, fmt: str | None = None) -> EdgeList:
    """Read a graph file into a canonical EdgeList.

    fmt is "matrix-market" or "edge-list"; None infers from the extension
    (.mtx means Matrix Market). Vertex ids in files are 1-based. Matrix
    Market input may be an adjacency matrix or a Laplacian; a Laplacian is
    detected by negative off-diagonals and converted back to adjacency by
    negation (its diagonal holds degrees and is ignored). Adjacency
    diagonal entries are self loops and are stripped with a warning.
    """
    path = str(path)
    if fmt is None:
        fmt = "matrix-market" if path.endswith(".mtx") else "edge-list"
    if fmt == "matrix-market":
        return _load_matrix_market(path)
    if fmt == "edge-list":
        return _load_edge_list(path)
    raise ValueError(f"unknown graph format: {fmt!r}")


def _parse_error(path, lineno, msg):
    return GraphFormatError(f"{path}:{lineno}: {msg}")


def _load_matrix_market(path: str) -> EdgeList:
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        header = fh.readline()
        parts = header.strip().lower().split()
        if len(parts) != 5 or parts[0] != "%%matrixmarket" or parts[1] != "matrix":
            raise _parse_error(path, 1, "not a Matrix Market coordinate header")
        layout, kind, symmetry = parts[2], parts[3], parts[4]
        if layout != "coordinate":
            raise _parse_error(path, 1, f"unsupported layout {layout!r}")
        if kind not in ("real", "integer", "pattern"):
            raise _parse_error(path, 1, f"unsupported field type {kind!r}")
        if symmetry not in ("symmetric", "general"):
            raise _parse_error(path, 1, f"unsupported symmetry {symmetry!r}")
        pattern = kind == "pattern"

        lineno = 1
        size_line = None
        for line in fh:
            lineno += 1
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            size_line = s
            break
        if size_line is None:
            raise _parse_error(path, lineno, "missing size line")
        toks = size_line.split()
        if len(toks) != 3:
            raise _parse_error(path, lineno, "size line must be 'rows cols nnz'")
        try:
            nrows, ncols, nnz = int(toks[0]), int(toks[1]), int(toks[2])
        except ValueError:
            raise _parse_error(path, lineno, "size line must be integers") from None
        if nrows != ncols:
            raise _parse_error(path, lineno, f"matrix is not square ({nrows}x{ncols})")
        if nrows < 1:
            raise _parse_error(path, lineno, "matrix has zero vertices")

        ri = np.empty(nnz, dtype=np.int64)
        rj = np.empty(nnz, dtype=np.int64)
        rv = np.empty(nnz, dtype=np.float64)
        seen = 0
        for line in fh:
            lineno += 1
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            if seen >= nnz:
                raise _parse_error(path, lineno, "more entries than declared")
            toks = s.split()
            want = 2 if pattern else 3
            if len(toks) < want:
                raise _parse_error(path, lineno, f"expected {want} fields")
            try:
                a, b = int(toks[0]), int(toks[1])
                v = 1.0 if pattern else float(toks[2])
            except ValueError:
                raise _parse_error(path, lineno, "malformed entry") from None
            if not (1 <= a <= nrows and 1 <= b <= nrows):
                raise _parse_error(path, lineno, "index out of range")
            if not np.isfinite(v):
                raise _parse_error(path, lineno, "non-finite value")
            ri[seen], rj[seen], rv[seen] = a - 1, b - 1, v
            seen += 1
        if seen != nnz:
            raise _parse_error(path, lineno, f"declared {nnz} entries, found {seen}")

    off = ri != rj
    laplacian_input = bool(np.any(rv[off] < 0))
    if laplacian_input:
        if np.any(rv[off] > 0):
            raise GraphFormatError(
                f"{path}: mixed off-diagonal signs; neither adjacency nor Laplacian")
        ri, rj, rv = ri[off], rj[off], -rv[off]
    else:
        dropped = int(np.count_nonzero(~off))
        if dropped:
            warnings.warn(f"{path}: dropped {dropped} self-loop entr"
                          f"{'y' if dropped == 1 else 'ies'}")
        ri, rj, rv = ri[off], rj[off], rv[off]
    if np.any(rv <= 0):
        raise GraphFormatError(f"{path}: zero or negative edge weight")

    if symmetry == "symmetric":
        lo = np.minimum(ri, rj)
        hi = np.maximum(ri, rj)
        i, j, w = _coalesce(lo, hi, rv)
        return EdgeList(n=nrows, i=i, j=j, w=w)
    return _collapse_general(path, nrows, ri, rj, rv)


def _collapse_general(path, n, ri, rj, rv) -> EdgeList:
    """Merge the two triangles of a general-symmetry file.

    Entries stored on the same side of the diagonal are parallel edges and
    sum; when both (i,j) and (j,i) are stored they must agree (1e-9
    relative) and collapse to a single undirected edge.
    """
    lower = ri > rj
    li, lj, lv = _coalesce(rj[lower], ri[lower], rv[lower])
    ui, uj, uv = _coalesce(ri[~lower], rj[~lower], rv[~lower])

    lo = {(a, b): v for a, b, v in zip(li.tolist(), lj.tolist(), lv.tolist())}
    out_i, out_j, out_v = [], [], []
    for a, b, v in zip(ui.tolist(), uj.tolist(), uv.tolist()):
        mate = lo.pop((a, b), None)
        if mate is not None:
            if abs(mate - v) > 1e-9 * max(abs(mate), abs(v)):
                raise GraphFormatError(
                    f"{path}: entries ({a + 1},{b + 1}) and ({b + 1},{a + 1}) "
                    f"disagree: {v} vs {mate}")
        out_i.append(a)
        out_j.append(b)
        out_v.append(v)
    for (a, b), v in lo.items():
        out_i.append(a)
        out_j.append(b)
        out_v.append(v)
    i = np.asarray(out_i, dtype=np.int64)
    j = np.asarray(out_j, dtype=np.int64)
    w = np.asarray(out_v, dtype=np.float64)
    i, j, w = _coalesce(i, j, w)
    return EdgeList(n=n, i=i, j=j, w=w)


def _load_edge_list(path: str) -> EdgeList:
    """Whitespace-separated `i j [w]` lines, 1-based ids, '#' comments.

    An optional `# n=<count>` header pins the vertex count; otherwise it is
    the largest id seen. Duplicate oriented pairs across the diagonal
    collapse (equal-weight check); same-side duplicates sum.
    """
    n_declared = None
    ri, rj, rv = [], [], []
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                body = s[1:].strip().replace(" ", "")
                if body.startswith("n="):
                    try:
                        n_declared = int(body[2:])
                    except ValueError:
                        raise _parse_error(path, lineno, "bad n= header") from None
                continue
            toks = s.split()
            if len(toks) not in (2, 3):
                raise _parse_error(path, lineno, "expected 'i j [w]'")
            try:
                a, b = int(toks[0]), int(toks[1])
                v = float(toks[2]) if len(toks) == 3 else 1.0
            except ValueError:
                raise _parse_error(path, lineno, "malformed entry") from None
            if a < 1 or b < 1:
                raise _parse_error(path, lineno, "vertex ids are 1-based")
            if not np.isfinite(v):
                raise _parse_error(path, lineno, "non-finite weight")
            ri.append(a - 1)
            rj.append(b - 1)
            rv.append(v)
    if n_declared is not None:
        n = n_declared
    elif ri:
        n = int(max(max(ri), max(rj)) + 1)
    else:
        n = 0
    if n < 1:
        raise GraphFormatError(f"{path}: graph has zero vertices")
    ri = np.asarray(ri, dtype=np.int64)
    rj = np.asarray(rj, dtype=np.int64)
    rv = np.asarray(rv, dtype=np.float64)
    if len(ri) and (ri.max() >= n or rj.max() >= n):
        raise GraphFormatError(f"{path}: vertex id exceeds declared n={n}")

    off = ri != rj
    dropped = int(np.count_nonzero(~off))
    if dropped:
        warnings.warn(f"{path}: dropped {dropped} self-loop entr"
                      f"{'y' if dropped == 1 else 'ies'}")
    ri, rj, rv = ri[off], rj[off], rv[off]
    if np.any(rv <= 0):
        raise GraphFormatError(f"{path}: zero or negative edge weight")
    return _collapse_general(path, n, ri, rj, rv)
