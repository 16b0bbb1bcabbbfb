"""Block-wise smallest offsets for a block upper-triangular signature matrix.

Blocks are solved top to bottom. Once block k has its ``c_k``, each coupling
slice in block row k is shifted row-wise by ``c_k`` (``row_add``). Block i then
takes the column maxima of all shifted couplings above it (``col_max``),
floored at zero (``e_max``), as the lower bound ``p_i`` on its ``d_i``. The
parameterised fixed-point solve on block i finishes the step. The assembled
pair equals the global smallest offsets exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .btf import BlockStructure, partition
from .errors import DimensionMismatch
from .fixed_point import SolveStats, smallest_offsets_with_param
from .sigma import Offsets, SigmaSlice, SignatureMatrix

NEG_INF = -math.inf


@dataclass(frozen=True)
class BlockStats:
    block: int
    size: int
    param: tuple[int, ...]
    stats: SolveStats

    def to_dict(self) -> dict:
        return {"block": self.block, "size": self.size, "param": list(self.param),
                **self.stats.to_dict()}


def row_add(block: SigmaSlice, q: Sequence[int]) -> SigmaSlice:
    """Add ``q[i]`` to every finite entry of row i."""
    q = list(q)
    if len(q) != block.shape[0]:
        raise DimensionMismatch(f"q has length {len(q)}, slice has {block.shape[0]} rows")
    return SigmaSlice(*block.shape, {(i, j): v + int(q[i]) for (i, j), v in block.entries.items()})


def col_max(*blocks: SigmaSlice) -> list:
    """Column-wise maximum over one slice or several stacked slices.

    Columns with no finite entry give ``-inf``.
    """
    if not blocks:
        raise ValueError("col_max needs at least one slice")
    ncols = blocks[0].shape[1]
    if any(b.shape[1] != ncols for b in blocks):
        raise DimensionMismatch("stacked slices must have the same column count")
    out = [NEG_INF] * ncols
    for b in blocks:
        for (_, j), v in b.entries.items():
            if v > out[j]:
                out[j] = v
    return out


def e_max(a: Iterable, b: Iterable[int]) -> list[int]:
    """Componentwise maximum; ``-inf`` loses to any integer in ``b``."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise DimensionMismatch(f"lengths differ: {len(a)} vs {len(b)}")
    return [int(max(x, y)) for x, y in zip(a, b)]


def block_smallest_offsets(sigma: SignatureMatrix, bs: BlockStructure):
    """Smallest offsets of ``sigma`` computed block by block along ``bs``.

    Returns ``(Offsets, [BlockStats, ...])``. Offsets are in the original
    (unpermuted) row and column order. Raises ``InvalidBlockStructure`` if
    ``bs`` is not block upper-triangular for ``sigma``.
    """
    parts = partition(sigma, bs)
    nb = bs.nblocks
    # Working copies: each coupling row-block is shifted once, when its c is known.
    couplings = {key: s for key, s in parts.items() if key[0] != key[1]}
    c_perm = np.zeros(bs.n, dtype=np.int64)
    d_perm = np.zeros(bs.n, dtype=np.int64)
    per_block: list[BlockStats] = []

    for i, (start, stop) in enumerate(bs.bounds):
        size = stop - start
        above = [couplings[(k, i)] for k in range(i) if (k, i) in couplings]
        p = e_max(col_max(*above), [0] * size) if above else [0] * size
        off, stats = smallest_offsets_with_param(parts[(i, i)], p)
        c_perm[start:stop] = off.c
        d_perm[start:stop] = off.d
        per_block.append(BlockStats(i, size, tuple(p), stats))
        for j in range(i + 1, nb):
            if (i, j) in couplings:
                couplings[(i, j)] = row_add(couplings[(i, j)], off.c)

    c = np.empty(bs.n, dtype=np.int64)
    d = np.empty(bs.n, dtype=np.int64)
    c[np.asarray(bs.row_perm, dtype=np.int64)] = c_perm
    d[np.asarray(bs.col_perm, dtype=np.int64)] = d_perm
    return Offsets(tuple(c.tolist()), tuple(d.tolist())), per_block
