"""Block upper-triangular form of a signature matrix.

After permutation, every finite entry sits in a diagonal block or in a block
to its right:

    M = [ M11 M12 ... M1l ]
        [     M22 ... M2l ]
        [          .   :  ]
        [             Mll ]

Construction: take any perfect matching, build the digraph on columns with
an edge ``j -> j'`` whenever the row matched to ``j`` has a finite entry in
column ``j'``, and condense its strongly connected components. The
components are the irreducible diagonal blocks. A topological order of the
condensation puts every edge above the diagonal.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import FormatError, IndexOutOfRange, InvalidBlockStructure, StructurallySingular
from .sigma import SigmaSlice, SignatureMatrix


@dataclass(frozen=True)
class BlockStructure:
    """Permutations and diagonal block sizes.

    Position ``k`` of the permuted matrix holds original row ``row_perm[k]``
    and original column ``col_perm[k]``.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        for name in ("row_perm", "col_perm", "block_sizes"):
            object.__setattr__(self, name, tuple(int(x) for x in getattr(self, name)))
        n = len(self.row_perm)
        if sorted(self.row_perm) != list(range(n)) or sorted(self.col_perm) != list(range(n)):
            raise InvalidBlockStructure("row_perm and col_perm must be permutations of the same size")
        if any(b <= 0 for b in self.block_sizes) or sum(self.block_sizes) != n:
            raise InvalidBlockStructure(
                f"block sizes {list(self.block_sizes)} must be positive and sum to {n}"
            )

    @classmethod
    def trivial(cls, n: int, block_sizes: Sequence[int] | None = None) -> "BlockStructure":
        ident = tuple(range(n))
        return cls(ident, ident, tuple(block_sizes) if block_sizes is not None else (n,))

    @property
    def n(self) -> int:
        return len(self.row_perm)

    @property
    def nblocks(self) -> int:
        return len(self.block_sizes)

    @property
    def bounds(self) -> list[tuple[int, int]]:
        """``[start, stop)`` positions of each diagonal block."""
        out, start = [], 0
        for size in self.block_sizes:
            out.append((start, start + size))
            start += size
        return out

    def block_index(self) -> np.ndarray:
        """Block number of every permuted position."""
        return np.repeat(np.arange(self.nblocks), self.block_sizes)

    def to_dict(self) -> dict:
        return {
            "row_perm": list(self.row_perm),
            "col_perm": list(self.col_perm),
            "block_sizes": list(self.block_sizes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "BlockStructure":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, f"line {exc.lineno}, col {exc.colno}") from None
        if not isinstance(doc, dict) or set(doc) != {"row_perm", "col_perm", "block_sizes"}:
            raise FormatError("expected exactly the keys row_perm, col_perm, block_sizes", "$")
        for key in ("row_perm", "col_perm", "block_sizes"):
            val = doc[key]
            if not isinstance(val, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in val
            ):
                raise FormatError("expected a list of integers", f"$.{key}")
        try:
            return cls(doc["row_perm"], doc["col_perm"], doc["block_sizes"])
        except InvalidBlockStructure as exc:
            raise FormatError(str(exc), "$") from None


def _perfect_matching(sigma: SigmaSlice) -> np.ndarray:
    """Column matched to each row (cardinality only, weights ignored)."""
    n = sigma.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    graph = csr_matrix(
        (np.ones(sigma.nnz, dtype=np.int8), (sigma.rows, sigma.cols)), shape=sigma.shape
    )
    match = maximum_bipartite_matching(graph, perm_type="column")
    if np.any(match < 0):
        raise StructurallySingular()
    return match.astype(np.int64)


def _column_digraph(sigma: SigmaSlice, match: np.ndarray) -> list[list[int]]:
    n = sigma.shape[0]
    row_of = np.empty(n, dtype=np.int64)
    row_of[match] = np.arange(n)
    by_row: list[list[int]] = [[] for _ in range(n)]
    for i, j in zip(sigma.rows.tolist(), sigma.cols.tolist()):
        by_row[i].append(j)
    return [[k for k in by_row[row_of[j]] if k != j] for j in range(n)]


def strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative. Components come out sinks first."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(adj[v]):
                work[-1] = (v, pos + 1)
                w = adj[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def fine_btf(sigma: SignatureMatrix) -> BlockStructure:
    """Finest block upper-triangular form of ``sigma``.

    Within a block rows and columns keep their original relative order.
    Incomparable blocks are ordered by their smallest column index.
    """
    n = sigma.n
    if n == 0:
        return BlockStructure((), (), ())
    match = _perfect_matching(sigma)
    adj = _column_digraph(sigma, match)
    comps = strongly_connected_components(adj)

    comp_of = [0] * n
    for k, comp in enumerate(comps):
        for j in comp:
            comp_of[j] = k
    succ: list[set[int]] = [set() for _ in comps]
    indeg = [0] * len(comps)
    for j in range(n):
        for k in adj[j]:
            a, b = comp_of[j], comp_of[k]
            if a != b and b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1

    heap = [(comps[k][0], k) for k in range(len(comps)) if indeg[k] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, k = heapq.heappop(heap)
        order.append(k)
        for b in succ[k]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, (comps[b][0], b))

    row_of = np.empty(n, dtype=np.int64)
    row_of[match] = np.arange(n)
    row_perm, col_perm, sizes = [], [], []
    for k in order:
        cols = comps[k]
        col_perm.extend(cols)
        row_perm.extend(sorted(int(row_of[j]) for j in cols))
        sizes.append(len(cols))
    return BlockStructure(tuple(row_perm), tuple(col_perm), tuple(sizes))


def _positions(perm: Sequence[int]) -> np.ndarray:
    pos = np.empty(len(perm), dtype=np.int64)
    pos[np.asarray(perm, dtype=np.int64)] = np.arange(len(perm))
    return pos


def partition(sigma: SignatureMatrix, bs: BlockStructure) -> dict[tuple[int, int], SigmaSlice]:
    """Split the permuted matrix into its nonempty ``(block_row, block_col)`` slices.

    Slices use local 0-based coordinates. Diagonal slices are always present,
    as ``SignatureMatrix``. Raises ``InvalidBlockStructure`` when an entry
    falls below the block diagonal.
    """
    if bs.n != sigma.n:
        raise InvalidBlockStructure(f"structure for n={bs.n} applied to n={sigma.n}")
    rpos = _positions(bs.row_perm)[sigma.rows]
    cpos = _positions(bs.col_perm)[sigma.cols]
    blk = bs.block_index()
    starts = np.asarray([s for s, _ in bs.bounds] or [0], dtype=np.int64)
    rb, cb = blk[rpos], blk[cpos]
    if np.any(rb > cb):
        raise InvalidBlockStructure("finite entry below the block diagonal")
    buckets: dict[tuple[int, int], dict] = {}
    for r, c, bi, bj, v in zip(rpos.tolist(), cpos.tolist(), rb.tolist(), cb.tolist(),
                               sigma.values.tolist()):
        buckets.setdefault((bi, bj), {})[(r - starts[bi], c - starts[bj])] = v
    sizes = bs.block_sizes
    out: dict[tuple[int, int], SigmaSlice] = {}
    for b in range(bs.nblocks):
        out[(b, b)] = SignatureMatrix(sizes[b], buckets.pop((b, b), {}))
    for (bi, bj), entries in sorted(buckets.items()):
        out[(bi, bj)] = SigmaSlice(sizes[bi], sizes[bj], entries)
    return out


def extract_block(sigma: SignatureMatrix, bs: BlockStructure, i: int) -> SignatureMatrix:
    if not 0 <= i < bs.nblocks:
        raise IndexOutOfRange(f"block {i} out of range for {bs.nblocks} blocks")
    return _slice(sigma, bs, i, i)


def extract_coupling(sigma: SignatureMatrix, bs: BlockStructure, k: int, i: int) -> SigmaSlice:
    """Coupling slice ``M[k, i]`` (block row k above block column i)."""
    if not 0 <= k < i < bs.nblocks:
        raise IndexOutOfRange(f"coupling ({k}, {i}) needs 0 <= k < i < {bs.nblocks}")
    return _slice(sigma, bs, k, i)


def _slice(sigma, bs, k, i):
    if bs.n != sigma.n:
        raise InvalidBlockStructure(f"structure for n={bs.n} applied to n={sigma.n}")
    (r0, r1), (c0, c1) = bs.bounds[k], bs.bounds[i]
    rows = {orig: pos - r0 for pos, orig in enumerate(bs.row_perm[r0:r1], start=r0)}
    cols = {orig: pos - c0 for pos, orig in enumerate(bs.col_perm[c0:c1], start=c0)}
    entries = {
        (rows[a], cols[b]): v
        for (a, b), v in sigma.entries.items()
        if a in rows and b in cols
    }
    if k == i:
        return SignatureMatrix(r1 - r0, entries)
    return SigmaSlice(r1 - r0, c1 - c0, entries)


def validate_btf(sigma: SignatureMatrix, bs: BlockStructure, fine: bool = True) -> bool:
    """Check the block-triangular shape, square nonsingular diagonal blocks and,
    when ``fine`` is set, irreducibility of every diagonal block."""
    try:
        parts = partition(sigma, bs)
    except InvalidBlockStructure:
        return False
    for b in range(bs.nblocks):
        block = parts[(b, b)]
        try:
            match = _perfect_matching(block)
        except StructurallySingular:
            return False
        if fine and len(strongly_connected_components(_column_digraph(block, match))) != 1:
            return False
    return True
