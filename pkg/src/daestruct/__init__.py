"""Structural analysis of differential-algebraic equation systems.

Build the signature matrix, find a highest-value transversal, compute the
smallest offsets by fixed-point iteration (globally or block by block over a
block triangular form), and derive the structural index and Jacobian pattern.
"""

from .analysis import AnalysisReport, analyze, jacobian_pattern, structural_index
from .assignment import find_hvt, hungarian, transversal_value
from .block_solver import BlockStats, block_smallest_offsets, col_max, e_max, row_add
from .btf import BlockStructure, extract_block, extract_coupling, fine_btf, validate_btf
from .dae_text import DaeSystem, parse_dae, read_sigfile, signature_of, write_sigfile
from .errors import (
    DaeStructError,
    DaeSyntaxError,
    DimensionMismatch,
    DuplicateEntry,
    EmptyColumn,
    FormatError,
    IndexOutOfRange,
    InvalidBlockStructure,
    NegativeParameter,
    NonSquare,
    StructurallySingular,
    TooLarge,
    UndeclaredVariable,
)
from .estimators import BlockTriangularizer, StructuralAnalyzer
from .fixed_point import (
    SolveStats,
    smallest_offsets,
    smallest_offsets_with_param,
    verify_smallest,
)
from .sigma import (
    Offsets,
    SigmaSlice,
    SignatureMatrix,
    Transversal,
    is_dual_feasible,
    is_tight_on,
    map_c,
    map_d,
    phi,
)

__version__ = "0.1.0"
