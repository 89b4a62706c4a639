"""Compiled inner loops shared by the sparse modules.

Everything here is a plain function of numpy arrays so numba can compile it
once and the callers stay free of object-mode overhead. All kernels are
single-threaded and deterministic for fixed inputs.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def csr_matvec(row_offsets, col_indices, values, x, out):
    n = row_offsets.shape[0] - 1
    for i in range(n):
        acc = 0.0
        for k in range(row_offsets[i], row_offsets[i + 1]):
            acc += values[k] * x[col_indices[k]]
        out[i] = acc


@njit(cache=True)
def bfs_reach_count(row_offsets, col_indices, start):
    """Number of vertices reachable from `start` along stored entries.

    Diagonal entries are harmless (self visits); rows are walked in CSR
    order so the result is deterministic.
    """
    n = row_offsets.shape[0] - 1
    seen = np.zeros(n, dtype=np.uint8)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 1
    queue[0] = start
    seen[start] = 1
    count = 1
    while head < tail:
        v = queue[head]
        head += 1
        for k in range(row_offsets[v], row_offsets[v + 1]):
            u = col_indices[k]
            if seen[u] == 0:
                seen[u] = 1
                queue[tail] = u
                tail += 1
                count += 1
    return count


@njit(cache=True)
def hec_pass(row_offsets, col_indices, values, perm):
    """One heavy-edge aggregation sweep over the vertices in `perm` order.

    Returns (assign, n_aggregates). assign[v] is the 0-based aggregate id.
    Each unassigned vertex is mapped together with (or into the aggregate
    of) its heaviest-edge neighbour, i.e. the most negative off-diagonal of
    its Laplacian column; ties break toward the lowest vertex index, which
    the ascending CSR column order gives for free.
    """
    n = row_offsets.shape[0] - 1
    assign = np.full(n, -1, dtype=np.int64)
    count = 0
    for idx in range(n):
        v = perm[idx]
        if assign[v] >= 0:
            continue
        best = -1
        best_val = 0.0
        for k in range(row_offsets[v], row_offsets[v + 1]):
            u = col_indices[k]
            if u == v:
                continue
            w = values[k]
            if best == -1 or w < best_val:
                best = u
                best_val = w
        if best == -1:
            # isolated vertex; callers reject disconnected input first
            assign[v] = count
            count += 1
            continue
        if assign[best] < 0:
            assign[best] = count
            assign[v] = count
            count += 1
        else:
            assign[v] = assign[best]
    return assign, count


@njit(cache=True)
def jacobi_sweeps(a, v, tol_off):
    """Cyclic-by-row Jacobi rotations until the off-diagonal Frobenius
    mass drops below `tol_off`. Rotates `a` toward diagonal form in place
    and accumulates the rotations into `v`. Returns the sweep count.
    """
    n = a.shape[0]
    sweeps = 0
    max_sweeps = 60
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        off = np.sqrt(2.0 * off)
        if off <= tol_off:
            break
        # rotations below this threshold are deferred to later sweeps
        skip = off / (n * 4.0)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                # symmetrize the rotated pair to stop drift
                a[p, q] = 0.5 * (a[p, q] + a[q, p])
                a[q, p] = a[p, q]
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
        sweeps += 1
    return sweeps
