"""Brute-force references and seeded random instance generators.

Nothing here calls into ``assignment`` or ``fixed_point``: the checks compare
two independent routes.

Random numbers
--------------
All generators draw from ``SplitMix64`` (Steele, Lea and Flood), so instances
can be rebuilt from ``(spec, seed)`` in any language:

* state advances by ``0x9E3779B97F4A7C15`` (mod 2**64); output is
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64);
* ``below(k)`` rejects draws ``>= 2**64 - (2**64 % k)`` and returns ``x % k``;
* ``uniform()`` is ``(x >> 11) * 2**-53``;
* ``integers(lo, hi)`` is ``lo + below(hi - lo + 1)``;
* ``permutation(n)`` is Fisher-Yates on ``[0..n)``: for ``i = n-1 .. 1``,
  swap ``a[i]`` with ``a[below(i + 1)]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .btf import BlockStructure
from .errors import StructurallySingular, TooLarge
from .sigma import Offsets, SignatureMatrix, Transversal

MASK64 = (1 << 64) - 1
HVT_LIMIT = 8
DUAL_LIMIT = 5


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def integers(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def permutation(self, n: int) -> list[int]:
        a = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            a[i], a[j] = a[j], a[i]
        return a


@dataclass(frozen=True)
class GenSpec:
    """Size and distribution of a random signature matrix.

    Give either ``n`` (unstructured) or ``blocks`` and ``block_size``.
    ``density`` is the chance that a cell off the planted transversal is
    finite; ``coupling_density`` (defaults to ``density``) does the same for
    cells above the diagonal blocks.
    """

    n: int | None = None
    blocks: int | None = None
    block_size: int | None = None
    density: float = 0.3
    sigma_range: tuple[int, int] = (0, 3)
    seed: int = 0
    coupling_density: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        if self.coupling_density is not None and not 0.0 <= self.coupling_density <= 1.0:
            raise ValueError("coupling_density must lie in [0, 1]")
        lo, hi = self.sigma_range
        if lo > hi:
            raise ValueError("sigma_range must satisfy lo <= hi")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be >= 1")
        if self.blocks is not None and self.blocks < 1:
            raise ValueError("blocks must be >= 1")
        if self.block_size is not None and self.block_size < 1:
            raise ValueError("block_size must be >= 1")


def gen_sigma(spec: GenSpec) -> SignatureMatrix:
    """Random n x n matrix with a planted transversal (so never singular)."""
    if spec.n is None:
        raise ValueError("gen_sigma needs spec.n")
    rng = SplitMix64(spec.seed)
    lo, hi = spec.sigma_range
    n = spec.n
    perm = rng.permutation(n)
    entries = {(i, perm[i]): rng.integers(lo, hi) for i in range(n)}
    for i in range(n):
        for j in range(n):
            if (i, j) not in entries and rng.uniform() < spec.density:
                entries[(i, j)] = rng.integers(lo, hi)
    return SignatureMatrix(n, entries)


def gen_block_sigma(spec: GenSpec) -> tuple[SignatureMatrix, BlockStructure]:
    """Random matrix already in block upper-triangular order.

    Each diagonal block gets a planted transversal plus a planted cycle
    through it, which makes the block irreducible. Extra entries go only
    inside diagonal blocks or above them. The returned structure uses
    identity permutations.
    """
    if spec.blocks is None or spec.block_size is None:
        raise ValueError("gen_block_sigma needs spec.blocks and spec.block_size")
    rng = SplitMix64(spec.seed)
    lo, hi = spec.sigma_range
    nb, r = spec.blocks, spec.block_size
    n = nb * r
    coupling = spec.density if spec.coupling_density is None else spec.coupling_density
    entries: dict[tuple[int, int], int] = {}
    for b in range(nb):
        base = b * r
        perm = rng.permutation(r)
        for i in range(r):
            entries[(base + i, base + perm[i])] = rng.integers(lo, hi)
        if r > 1:
            for i in range(r):
                entries.setdefault((base + i, base + perm[(i + 1) % r]), rng.integers(lo, hi))
        for i in range(r):
            for j in range(r):
                cell = (base + i, base + j)
                if cell not in entries and rng.uniform() < spec.density:
                    entries[cell] = rng.integers(lo, hi)
        for i in range(base, base + r):
            for j in range(base + r, n):
                if rng.uniform() < coupling:
                    entries[(i, j)] = rng.integers(lo, hi)
    return SignatureMatrix(n, entries), BlockStructure.trivial(n, [r] * nb)


def shuffle_sigma(sigma: SignatureMatrix, seed: int) -> tuple[SignatureMatrix, list[int], list[int]]:
    """Randomly permute rows and columns.

    Returns ``(shuffled, row_perm, col_perm)`` with
    ``shuffled[k, l] == sigma[row_perm[k], col_perm[l]]``.
    """
    rng = SplitMix64(seed)
    row_perm = rng.permutation(sigma.n)
    col_perm = rng.permutation(sigma.n)
    return sigma.permute(row_perm, col_perm), row_perm, col_perm


def _dense_orders(sigma: SignatureMatrix):
    n = sigma.n
    finite = np.zeros((n, n), dtype=bool)
    vals = np.zeros((n, n), dtype=np.int64)
    finite[sigma.rows, sigma.cols] = True
    vals[sigma.rows, sigma.cols] = sigma.values
    return finite, vals


def brute_hvt(sigma: SignatureMatrix) -> tuple[Transversal, int]:
    """Enumerate all n! permutations; return the first best one and its value."""
    n = sigma.n
    if n > HVT_LIMIT:
        raise TooLarge(n, HVT_LIMIT)
    best = None
    for perm in itertools.permutations(range(n)):
        if all((i, j) in sigma for i, j in enumerate(perm)):
            value = sum(sigma[(i, j)] for i, j in enumerate(perm))
            if best is None or value > best[1]:
                best = (perm, value)
    if best is None:
        raise StructurallySingular()
    return Transversal(best[0]), best[1]


def all_hvts(sigma: SignatureMatrix) -> list[Transversal]:
    """Every highest-value transversal, by enumeration."""
    n = sigma.n
    if n > HVT_LIMIT:
        raise TooLarge(n, HVT_LIMIT)
    scored = []
    for perm in itertools.permutations(range(n)):
        if all((i, j) in sigma for i, j in enumerate(perm)):
            scored.append((sum(sigma[(i, j)] for i, j in enumerate(perm)), perm))
    if not scored:
        raise StructurallySingular()
    top = max(v for v, _ in scored)
    return [Transversal(p) for v, p in scored if v == top]


def dual_box_bound(sigma: SignatureMatrix) -> int:
    """Upper bound B on every component of c*.

    Following the matching from a row with c_i > 0 back to a row with c = 0
    never repeats a row (an HVT admits no positive cycle). Each step raises c
    by at most ``max(sigma) - min(sigma)``, so c* <= (n - 1) * spread. The box
    uses ``n * (max(sigma) - min(min(sigma), 0))``, which is never smaller.
    For nonnegative orders that is ``n * max(sigma)``.
    """
    if sigma.nnz == 0:
        return 0
    hi = int(sigma.values.max())
    lo = min(int(sigma.values.min()), 0)
    return sigma.n * (hi - lo)


def brute_smallest_dual(sigma: SignatureMatrix) -> Offsets:
    """Exhaustive search of the box ``[0, B]^n`` for the smallest optimal dual.

    For each c in the box, d = max over rows of (sigma + c) is the least d
    making (c, d) feasible. The pair is optimal when sum(d) - sum(c) equals
    the value of a highest-value transversal, taken from ``brute_hvt``. The
    componentwise minimum over all optimal c is returned, after checking that
    it is itself optimal.

    The box is evaluated as one n-dimensional grid (axis i holds c_i), so
    every objective value is formed by broadcasting.
    """
    n = sigma.n
    if n > DUAL_LIMIT:
        raise TooLarge(n, DUAL_LIMIT)
    _, target = brute_hvt(sigma)
    finite, vals = _dense_orders(sigma)
    if not finite.any(axis=0).all():
        raise StructurallySingular()
    side = dual_box_bound(sigma) + 1

    axes = []
    for i in range(n):
        shape = [1] * n
        shape[i] = side
        axes.append(np.arange(side, dtype=np.int64).reshape(shape))
    objective = np.zeros((side,) * n, dtype=np.int64)
    for i in range(n):
        objective -= axes[i]
    for j in range(n):
        col = None
        for i in np.flatnonzero(finite[:, j]):
            term = axes[i] + vals[i, j]
            col = term if col is None else np.maximum(col, term)
        objective += col

    hits = np.nonzero(objective == target)
    if not hits[0].size:
        raise AssertionError("no optimal dual found inside the box")
    best = np.array([h.min() for h in hits], dtype=np.int64)
    masked = np.where(finite, vals + best[:, None], np.iinfo(np.int64).min)
    d_best = masked.max(axis=0)
    assert d_best.sum() - best.sum() == target, "componentwise minimum is not optimal"
    return Offsets(tuple(best.tolist()), tuple(d_best.tolist()))


def lp_smallest_dual(sigma: SignatureMatrix) -> Offsets:
    """Smallest optimal dual from two linear programs (HiGHS).

    First solve ``min sum(d) - sum(c)`` subject to ``d_j - c_i >= sigma_ij``
    and ``c >= 0``. Then fix that optimum and minimise ``sum(c)``. The
    componentwise-smallest optimal pair is the unique minimiser of that
    second objective. For sizes beyond the enumeration oracle.
    """
    n = sigma.n
    if n == 0:
        return Offsets((), ())
    nnz = sigma.nnz
    a_ub = np.zeros((nnz, 2 * n))
    a_ub[np.arange(nnz), sigma.rows] = 1.0  # c_i - d_j <= -sigma_ij
    a_ub[np.arange(nnz), n + sigma.cols] = -1.0
    b_ub = -sigma.values.astype(float)
    bounds = [(0, None)] * n + [(None, None)] * n
    first = np.concatenate([-np.ones(n), np.ones(n)])
    res = linprog(first, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise StructurallySingular()
    z = round(res.fun)
    second = np.concatenate([np.ones(n), np.zeros(n)])
    res2 = linprog(second, A_ub=a_ub, b_ub=b_ub, A_eq=first[None, :], b_eq=[z],
                   bounds=bounds, method="highs")
    if res2.status != 0:
        raise AssertionError(f"second LP failed: {res2.message}")
    c = np.rint(res2.x[:n]).astype(np.int64)
    d = np.full(n, np.iinfo(np.int64).min)
    np.maximum.at(d, sigma.cols, sigma.values + c[sigma.rows])
    return Offsets(tuple(c.tolist()), tuple(d.tolist()))
