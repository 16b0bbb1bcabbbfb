"""Input coercion for the estimator API."""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from .btf import BlockStructure
from .dae_text import DaeSystem, signature_of
from .errors import DimensionMismatch
from .sigma import SignatureMatrix


def check_signature(X) -> SignatureMatrix:
    """Coerce ``X`` to a ``SignatureMatrix``.

    Accepts a ``SignatureMatrix``, a parsed ``DaeSystem``, a mapping
    ``{(i, j): order}`` (size taken from the largest index), or a square
    array-like in which ``-inf``, ``nan`` or ``None`` mark absent cells.
    """
    if isinstance(X, SignatureMatrix):
        return X
    if isinstance(X, DaeSystem):
        return signature_of(X)
    if isinstance(X, Mapping):
        n = 1 + max((max(i, j) for i, j in X), default=-1)
        return SignatureMatrix(n, X)
    if isinstance(X, (str, bytes)):
        raise TypeError("pass parsed input (parse_dae / read_sigfile), not raw text")
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square 2-d array, got shape {arr.shape}")
    return SignatureMatrix.from_dense(arr)


def check_block_structure(bs, n: int) -> BlockStructure:
    if isinstance(bs, Mapping):
        bs = BlockStructure(bs["row_perm"], bs["col_perm"], bs["block_sizes"])
    if not isinstance(bs, BlockStructure):
        raise TypeError(f"expected a BlockStructure, got {type(bs).__name__}")
    if bs.n != n:
        raise DimensionMismatch(f"block structure has n={bs.n}, matrix has n={n}")
    return bs
