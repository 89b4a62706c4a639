"""Brute-force dense eigensolver used as ground truth in tests.

Cyclic-by-row Jacobi rotations with threshold skipping; O(n^3) per sweep
and deliberately independent of the sparse iterative code paths. A size
guard keeps accidental large calls from stalling a test run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_sweeps
from .laplacian import SparseLaplacian

SIZE_GUARD = 2048


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # orthonormal columns, same order


def jacobi_eigen(a: np.ndarray) -> EigenDecomposition:
    """Full spectrum of a dense symmetric matrix via Jacobi rotations."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n > SIZE_GUARD:
        raise ValueError(f"matrix size {n} exceeds oracle guard {SIZE_GUARD}")
    scale = np.abs(a).max()
    if not np.allclose(a, a.T, atol=1e-12 * max(scale, 1.0)):
        raise ValueError("matrix is not symmetric")

    work = 0.5 * (a + a.T)
    vecs = np.eye(n)
    fro = np.linalg.norm(work, "fro")
    tol_off = 1e-14 * fro if fro > 0 else 0.0
    jacobi_sweeps(work, vecs, tol_off)

    off = work - np.diag(np.diag(work))
    if np.linalg.norm(off, "fro") > max(tol_off, 1e-300) * 4:
        raise FloatingPointError("Jacobi sweeps failed to converge")

    lam = np.diag(work).copy()
    order = np.argsort(lam, kind="stable")
    return EigenDecomposition(eigenvalues=lam[order],
                              eigenvectors=vecs[:, order])


def fiedler_oracle(lap: SparseLaplacian) -> tuple[float, list[np.ndarray]]:
    """Exact second-smallest eigenvalue of a Laplacian and a basis for its
    eigenspace (multiplicity handled by a relative closeness window).

    Raises on disconnected input, which shows up as a second eigenvalue
    indistinguishable from zero.
    """
    if lap.n > SIZE_GUARD:
        raise ValueError(f"graph size {lap.n} exceeds oracle guard {SIZE_GUARD}")
    dense = lap.to_dense()
    dec = jacobi_eigen(dense)
    norm_inf = np.abs(dense).sum(axis=1).max()
    lam2 = float(dec.eigenvalues[1])
    if lam2 <= 1e-8 * max(norm_inf, 1.0):
        raise ValueError("graph is disconnected (second eigenvalue is zero)")
    close = np.abs(dec.eigenvalues - lam2) <= 1e-8 * norm_inf
    close[0] = False
    basis = [dec.eigenvectors[:, k].copy() for k in np.flatnonzero(close)]
    return lam2, basis


def subspace_angle(u: np.ndarray, basis: list[np.ndarray] | np.ndarray) -> float:
    """Angle between a unit vector and the span of orthonormal basis vectors:
    asin of the norm of the projection residual."""
    u = np.asarray(u, dtype=np.float64)
    b = np.column_stack(basis) if isinstance(basis, list) else np.asarray(basis)
    if b.ndim == 1:
        b = b[:, None]
    resid = u - b @ (b.T @ u)
    return float(np.arcsin(min(1.0, np.linalg.norm(resid))))
