"""Highest-value transversal via the Hungarian method (shortest augmenting paths
with row/column potentials, O(n^3)).

Absent cells are simply not edges. A row that cannot be augmented means no
perfect matching exists, which is reported as ``StructurallySingular``; no
"very negative weight" is ever used to stand in for -inf.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, StructurallySingular
from .sigma import SigmaSlice, Transversal


def hungarian(sigma: SigmaSlice) -> tuple[Transversal, int]:
    """Return ``(T, ops)`` where T maximises the sum of sigma over T.

    ``ops`` counts column scans (one per column examined in each Dijkstra
    step). It is deterministic for a given input and is what the benchmark
    reports.

    Rows are inserted in increasing order, and among equally short
    augmenting paths the lowest column index wins.
    """
    n, m = sigma.shape
    if n != m:
        raise DimensionMismatch(f"assignment needs a square matrix, got {sigma.shape}")
    if n == 0:
        return Transversal(()), 0
    if sigma.nnz and n * int(np.max(np.abs(sigma.values))) >= 2**62:
        raise OverflowError("signature values too large for exact potentials")

    # 1-based with a virtual column 0, as in the classical formulation.
    cost = np.zeros((n + 1, n + 1), dtype=np.int64)
    edge = np.zeros((n + 1, n + 1), dtype=bool)
    cost[sigma.rows + 1, sigma.cols + 1] = -sigma.values
    edge[sigma.rows + 1, sigma.cols + 1] = True

    u = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(n + 1, dtype=np.int64)
    owner = np.zeros(n + 1, dtype=np.int64)  # owner[j] = row matched to column j
    way = np.zeros(n + 1, dtype=np.int64)
    ops = 0

    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = np.zeros(n + 1, dtype=np.int64)
        reached = np.zeros(n + 1, dtype=bool)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            open_edges = edge[i0] & ~used
            open_edges[0] = False
            cur = cost[i0] - u[i0] - v
            better = open_edges & (~reached | (cur < minv))
            minv[better] = cur[better]
            way[better] = j0
            reached |= open_edges
            ops += n
            frontier = reached & ~used
            if not frontier.any():
                raise StructurallySingular()
            cand = np.flatnonzero(frontier)
            j1 = int(cand[np.argmin(minv[cand])])
            delta = minv[j1]
            u[owner[used]] += delta
            v[used] -= delta
            minv[frontier] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1

    match = [0] * n
    for j in range(1, n + 1):
        match[owner[j] - 1] = j - 1
    return Transversal(tuple(match)), ops


def find_hvt(sigma: SigmaSlice) -> Transversal:
    """Highest-value transversal of ``sigma``; raises ``StructurallySingular``."""
    return hungarian(sigma)[0]


def transversal_value(sigma: SigmaSlice, t: Transversal) -> int:
    return sum(sigma[cell] for cell in t.cells())
