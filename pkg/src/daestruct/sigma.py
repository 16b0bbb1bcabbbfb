"""Signature matrices, transversals, offsets and the elementary offset maps.

A signature matrix stores only its finite cells; a cell that is missing is
-inf. Nothing here ever writes a sentinel integer for -inf, so ``sigma + c``
cannot silently wrap.

Vectors are int64 numpy arrays. Magnitudes are capped (see ``SIGMA_LIMIT`` and
``VALUE_LIMIT``) so that every sum formed below fits in 64 bits; inputs past
the caps raise ``OverflowError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyColumn

SIGMA_LIMIT = 2**60
VALUE_LIMIT = 2**62

Cell = tuple[int, int]


def _as_int_vector(values, n: int, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise DimensionMismatch(f"{name} must have length {n}, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError(f"{name} must be integer valued")
        if np.any(np.abs(arr) >= VALUE_LIMIT):
            raise OverflowError(f"{name} exceeds the supported integer range")
    arr = arr.astype(np.int64)
    if arr.size and np.max(np.abs(arr)) >= VALUE_LIMIT:
        raise OverflowError(f"{name} exceeds the supported integer range")
    return arr


class SigmaSlice:
    """Immutable sparse integer matrix of shape ``(nrows, ncols)``.

    Used directly for rectangular coupling blocks; ``SignatureMatrix`` is the
    square specialisation.
    """

    __slots__ = ("_nrows", "_ncols", "_entries", "_rows", "_cols", "_vals")

    def __init__(self, nrows: int, ncols: int, entries: Mapping[Cell, int] | Iterable = ()):
        if int(nrows) != nrows or int(ncols) != ncols or nrows < 0 or ncols < 0:
            raise ValueError("dimensions must be nonnegative integers")
        nrows, ncols = int(nrows), int(ncols)
        items = entries.items() if isinstance(entries, Mapping) else (
            ((i, j), v) for i, j, v in entries
        )
        table: dict[Cell, int] = {}
        for (i, j), v in items:
            if isinstance(v, bool) or int(v) != v:
                raise ValueError(f"order at ({i}, {j}) must be an integer, got {v!r}")
            i, j, v = int(i), int(j), int(v)
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"cell ({i}, {j}) outside a {nrows}x{ncols} matrix")
            if abs(v) >= SIGMA_LIMIT:
                raise OverflowError(f"order {v} at ({i}, {j}) is out of range")
            if (i, j) in table:
                raise ValueError(f"duplicate cell ({i}, {j})")
            table[(i, j)] = v
        keys = sorted(table)
        self._nrows = nrows
        self._ncols = ncols
        self._entries = MappingProxyType({k: table[k] for k in keys})
        self._rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        self._cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        self._vals = np.fromiter((table[k] for k in keys), dtype=np.int64, count=len(keys))
        for arr in (self._rows, self._cols, self._vals):
            arr.flags.writeable = False

    @property
    def shape(self) -> tuple[int, int]:
        return (self._nrows, self._ncols)

    @property
    def entries(self) -> Mapping[Cell, int]:
        """Finite cells in row-major order."""
        return self._entries

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def cols(self) -> np.ndarray:
        return self._cols

    @property
    def values(self) -> np.ndarray:
        return self._vals

    @property
    def pattern(self) -> frozenset[Cell]:
        return frozenset(self._entries)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def get(self, i: int, j: int, default=None):
        return self._entries.get((i, j), default)

    def __contains__(self, cell) -> bool:
        return cell in self._entries

    def __getitem__(self, cell: Cell) -> int:
        return self._entries[cell]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SigmaSlice):
            return NotImplemented
        return self.shape == other.shape and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((self.shape, tuple(self._entries.items())))

    def triples(self) -> list[tuple[int, int, int]]:
        return [(i, j, v) for (i, j), v in self._entries.items()]

    def to_dense(self) -> np.ndarray:
        """Float array with ``-inf`` in the absent cells (for display and interop)."""
        out = np.full(self.shape, -np.inf)
        out[self._rows, self._cols] = self._vals
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self._nrows}x{self._ncols}, {self.triples()})"


class SignatureMatrix(SigmaSlice):
    """Square signature matrix; ``sigma[i, j]`` is the highest derivative
    order of variable j in equation i."""

    __slots__ = ()

    def __init__(self, n: int, entries: Mapping[Cell, int] | Iterable = ()):
        super().__init__(n, n, entries)

    @property
    def n(self) -> int:
        return self._nrows

    @classmethod
    def from_dense(cls, array) -> "SignatureMatrix":
        """Build from a square array; ``-inf``, ``nan`` and ``None`` mark absent cells."""
        arr = np.asarray(array, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"expected a square 2-d array, got shape {arr.shape}")
        entries = {}
        for (i, j), v in np.ndenumerate(arr):
            if v is None:
                continue
            fv = float(v)
            if np.isnan(fv) or fv == -np.inf:
                continue
            if fv == np.inf:
                raise ValueError(f"+inf at ({i}, {j}) is not a derivative order")
            entries[(i, j)] = v
        return cls(arr.shape[0], entries)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SignatureMatrix":
        """Return M with ``M[k, l] = self[row_perm[k], col_perm[l]]``."""
        rinv = _inverse_perm(row_perm, self.n)
        cinv = _inverse_perm(col_perm, self.n)
        return SignatureMatrix(
            self.n, {(rinv[i], cinv[j]): v for (i, j), v in self._entries.items()}
        )

    def column_max(self) -> np.ndarray:
        """Per-column maximum; raises ``EmptyColumn`` on a column with no entry."""
        return map_d(self, np.zeros(self.n, dtype=np.int64))


def _inverse_perm(perm: Sequence[int], n: int) -> list[int]:
    perm = [int(x) for x in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of range({n}): {perm}")
    inv = [0] * n
    for k, x in enumerate(perm):
        inv[x] = k
    return inv


@dataclass(frozen=True)
class Transversal:
    """A perfect matching: row ``i`` is matched to column ``match[i]``."""

    match: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(j) for j in self.match)
        if sorted(m) != list(range(len(m))):
            raise ValueError(f"transversal is not a permutation: {m}")
        object.__setattr__(self, "match", m)

    @property
    def n(self) -> int:
        return len(self.match)

    def cells(self) -> list[Cell]:
        return [(i, j) for i, j in enumerate(self.match)]

    def row_of(self) -> tuple[int, ...]:
        """Inverse view: ``row_of()[j]`` is the row matched to column j."""
        inv = [0] * self.n
        for i, j in enumerate(self.match):
            inv[j] = i
        return tuple(inv)

    def is_transversal_of(self, sigma: SigmaSlice) -> bool:
        return sigma.shape == (self.n, self.n) and all(c in sigma for c in self.cells())

    @classmethod
    def from_cells(cls, cells: Iterable[Cell], n: int) -> "Transversal":
        match = [-1] * n
        for i, j in cells:
            if match[i] != -1:
                raise ValueError(f"row {i} appears twice")
            match[i] = j
        return cls(tuple(match))


@dataclass(frozen=True)
class Offsets:
    """Equation offsets ``c`` (differentiation counts) and variable offsets ``d``."""

    c: tuple[int, ...]
    d: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.c)
        d = tuple(int(x) for x in self.d)
        if len(c) != len(d):
            raise DimensionMismatch(f"len(c)={len(c)} differs from len(d)={len(d)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.c)

    def shifted(self, theta: int) -> "Offsets":
        return Offsets(tuple(x + theta for x in self.c), tuple(x + theta for x in self.d))

    def to_dict(self) -> dict:
        return {"c": list(self.c), "d": list(self.d)}


def check_param(p, n: int) -> np.ndarray:
    """Validate a lower-bound vector for ``d``; every component must be >= 0."""
    from .errors import NegativeParameter

    arr = _as_int_vector(p, n, "p")
    if np.any(arr < 0):
        raise NegativeParameter(f"parameter vector has negative components: {arr.tolist()}")
    return arr


def map_d(sigma: SigmaSlice, c) -> np.ndarray:
    """``d_j = max_i (sigma_ij + c_i)`` over the finite cells of column j."""
    nrows, ncols = sigma.shape
    c = _as_int_vector(c, nrows, "c")
    d = np.empty(ncols, dtype=np.int64)
    seen = np.zeros(ncols, dtype=bool)
    seen[sigma.cols] = True
    if not seen.all():
        raise EmptyColumn(int(np.flatnonzero(~seen)[0]))
    d.fill(np.iinfo(np.int64).min)  # scratch only; every slot is overwritten
    np.maximum.at(d, sigma.cols, sigma.values + c[sigma.rows])
    return d


def map_c(sigma: SigmaSlice, t: Transversal, d) -> np.ndarray:
    """``c_i = d_{T(i)} - sigma_{i,T(i)}``. Negative components are kept."""
    n = t.n
    d = _as_int_vector(d, n, "d")
    if sigma.shape != (n, n):
        raise DimensionMismatch(f"transversal of size {n} on a {sigma.shape} matrix")
    on_t = np.fromiter((sigma[cell] for cell in t.cells()), dtype=np.int64, count=n)
    return d[np.asarray(t.match, dtype=np.int64)] - on_t


def phi(sigma: SigmaSlice, t: Transversal, c) -> np.ndarray:
    """The composition ``map_c(map_d(c))``."""
    return map_c(sigma, t, map_d(sigma, c))


def is_dual_feasible(sigma: SigmaSlice, off: Offsets) -> bool:
    n = sigma.shape[0]
    if off.n != n or sigma.shape != (n, n):
        return False
    c = np.asarray(off.c, dtype=np.int64)
    d = np.asarray(off.d, dtype=np.int64)
    if np.any(c < 0):
        return False
    return bool(np.all(d[sigma.cols] - c[sigma.rows] >= sigma.values))


def is_tight_on(sigma: SigmaSlice, t: Transversal, off: Offsets) -> bool:
    if off.n != t.n:
        return False
    return all(off.d[j] - off.c[i] == sigma.get(i, j) for i, j in t.cells())
