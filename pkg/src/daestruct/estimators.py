"""scikit-learn style front end.

``BlockTriangularizer`` is a transformer: ``fit`` finds the fine block
triangular form and ``transform`` returns the permuted matrix.
``StructuralAnalyzer`` fits the offsets and exposes everything as fitted
attributes with a trailing underscore. Both chain in a ``Pipeline``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import METHODS, analyze
from .btf import fine_btf
from .validation import check_block_structure, check_signature


class BlockTriangularizer(TransformerMixin, BaseEstimator):
    """Permute a signature matrix into fine block upper-triangular form."""

    def fit(self, X, y=None):
        sigma = check_signature(X)
        self.block_structure_ = fine_btf(sigma)
        self.n_blocks_ = self.block_structure_.nblocks
        self.n_ = sigma.n
        return self

    def transform(self, X):
        check_is_fitted(self, "block_structure_")
        sigma = check_signature(X)
        bs = check_block_structure(self.block_structure_, sigma.n)
        return sigma.permute(bs.row_perm, bs.col_perm)


class StructuralAnalyzer(BaseEstimator):
    """Offsets, structural index and Jacobian pattern of a signature matrix.

    Parameters
    ----------
    method : {"auto", "global", "block"}, default="auto"
        ``auto`` solves block-wise when the fine block form has more than one
        block.
    block_structure : BlockStructure or dict, optional
        Block structure for ``method="block"``. Coarse (reducible) blocks are
        allowed. Computed when omitted.

    Attributes
    ----------
    c_, d_ : tuple of int
        Smallest offsets.
    structural_index_ : int
    hvt_ : Transversal
    jacobian_pattern_ : tuple of (row, col, order)
    report_ : AnalysisReport
    """

    def __init__(self, method="auto", block_structure=None):
        self.method = method
        self.block_structure = block_structure

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        sigma = check_signature(X)
        bs = None
        if self.block_structure is not None:
            bs = check_block_structure(self.block_structure, sigma.n)
        report = analyze(sigma, self.method, bs)
        self.report_ = report
        self.offsets_ = report.offsets
        self.c_ = report.offsets.c
        self.d_ = report.offsets.d
        self.structural_index_ = report.structural_index
        self.hvt_ = report.hvt
        self.hvt_value_ = report.hvt_value
        self.jacobian_pattern_ = report.jacobian_pattern
        self.n_ = sigma.n
        return self
