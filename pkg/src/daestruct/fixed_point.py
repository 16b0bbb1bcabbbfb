"""Smallest offsets by fixed-point iteration on ``phi_T = map_c . map_d``.

Starting from a vector below the answer, repeated application of the monotone
map ``phi_T`` climbs to its least nonnegative fixed point ``c*``; each
non-final step raises ``sum(c)`` by at least one, which gives the iteration
bound recorded in ``SolveStats.bound``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import hungarian, transversal_value
from .errors import DimensionMismatch
from .sigma import (
    Offsets,
    SignatureMatrix,
    Transversal,
    check_param,
    is_dual_feasible,
    is_tight_on,
    map_d,
)


@dataclass(frozen=True)
class SolveStats:
    """Counters from one fixed-point solve.

    ``phi_applications`` counts every ``map_d`` then ``map_c`` pass, including
    the final one that confirms the fixed point. ``bound`` is
    ``|c*|_1 - |start|_1 + 1``, which ``phi_applications`` never exceeds.
    """

    phi_applications: int
    converged: bool
    bound: int
    matching_ops: int = 0
    start: tuple[int, ...] = ()
    transversal: Transversal | None = field(default=None, repr=False)
    iterates: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "phi_applications": self.phi_applications,
            "converged": self.converged,
            "bound": self.bound,
            "matching_ops": self.matching_ops,
        }


def _resolve_transversal(sigma, transversal):
    """Return ``(T, ops)``; a caller-supplied T must be a highest-value one."""
    best, ops = hungarian(sigma)
    if transversal is None:
        return best, ops
    t = transversal if isinstance(transversal, Transversal) else Transversal(tuple(transversal))
    if not t.is_transversal_of(sigma):
        raise ValueError("supplied transversal does not lie in the sparsity pattern")
    if transversal_value(sigma, t) != transversal_value(sigma, best):
        raise ValueError("supplied transversal is not a highest-value transversal")
    return t, ops


def _iteration_cap(sigma: SignatureMatrix, start: np.ndarray) -> int:
    # Safety net only: for a highest-value T every component of c* is at most
    # max(start) + (n - 1) * spread, so the loop cannot legitimately run longer.
    n = sigma.n
    if sigma.nnz == 0:
        return 2
    spread = int(sigma.values.max() - min(int(sigma.values.min()), 0))
    top = int(start.max()) if n else 0
    return n * (top + n * spread + 1) + 2


def _climb(sigma: SignatureMatrix, t: Transversal, start: np.ndarray, ops: int, keep_trace: bool):
    match = np.asarray(t.match, dtype=np.int64)
    on_t = np.fromiter((sigma[c] for c in t.cells()), dtype=np.int64, count=t.n)
    cap = _iteration_cap(sigma, start)
    trace = []

    c_prev = start
    c = map_d(sigma, c_prev)[match] - on_t
    applications = 1
    if keep_trace:
        trace.append(tuple(int(x) for x in c))
    while not np.array_equal(c, c_prev):
        assert np.all(c >= c_prev), "phi iterates must be nondecreasing"
        if applications >= cap:
            raise RuntimeError("fixed-point iteration failed to converge")
        c_prev = c
        c = map_d(sigma, c_prev)[match] - on_t
        applications += 1
        if keep_trace:
            trace.append(tuple(int(x) for x in c))
    assert np.all(c >= 0)

    d = map_d(sigma, c)
    stats = SolveStats(
        phi_applications=applications,
        converged=True,
        bound=int(c.sum() - start.sum()) + 1,
        matching_ops=ops,
        start=tuple(int(x) for x in start),
        transversal=t,
        iterates=tuple(trace),
    )
    return Offsets(tuple(c.tolist()), tuple(d.tolist())), stats


def smallest_offsets(sigma: SignatureMatrix, transversal=None, *, trace: bool = False):
    """Componentwise-smallest dual-optimal ``(c, d)`` for ``sigma``.

    Parameters
    ----------
    sigma : SignatureMatrix
    transversal : Transversal or sequence of int, optional
        Highest-value transversal to iterate with. By default one is found with
        the Hungarian method. The result does not depend on this choice.
    trace : bool
        Keep every iterate in ``stats.iterates``.

    Returns
    -------
    (Offsets, SolveStats)
    """
    t, ops = _resolve_transversal(sigma, transversal)
    return _climb(sigma, t, np.zeros(sigma.n, dtype=np.int64), ops, trace)


def smallest_offsets_with_param(sigma: SignatureMatrix, p, transversal=None, *, trace: bool = False):
    """Smallest dual-optimal ``(c, d)`` subject to the extra bound ``d >= p``.

    The iteration starts from ``max(map_c(p), 0)``, clamped once; later
    iterates stay nonnegative on their own.
    """
    p = check_param(p, sigma.n)
    t, ops = _resolve_transversal(sigma, transversal)
    on_t = np.fromiter((sigma[c] for c in t.cells()), dtype=np.int64, count=t.n)
    start = np.maximum(p[np.asarray(t.match, dtype=np.int64)] - on_t, 0)
    return _climb(sigma, t, start, ops, trace)


def verify_smallest(sigma: SignatureMatrix, off: Offsets) -> bool:
    """True iff ``off`` is the smallest dual-optimal pair of ``sigma``."""
    if off.n != sigma.n:
        return False
    try:
        t, _ = hungarian(sigma)
    except (DimensionMismatch, ValueError):
        return False
    if not is_dual_feasible(sigma, off) or not is_tight_on(sigma, t, off):
        return False
    c = np.asarray(off.c, dtype=np.int64)
    d = map_d(sigma, c)
    if not np.array_equal(d, off.d):
        return False
    if not np.array_equal(d[np.asarray(t.match)] - [sigma[x] for x in t.cells()], c):
        return False
    best, _ = smallest_offsets(sigma, t)
    return best == off
