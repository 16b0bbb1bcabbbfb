"""Structural results derived from the offsets, and the combined report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .assignment import transversal_value
from .block_solver import BlockStats, block_smallest_offsets
from .btf import BlockStructure, fine_btf
from .fixed_point import SolveStats, smallest_offsets
from .sigma import Offsets, SignatureMatrix, Transversal

METHODS = ("global", "block", "auto")

NUMERIC_JACOBIAN_NOTE = (
    "not checked: the pattern is structurally nonsingular, but the Jacobian may "
    "still be identically singular for some systems (see README, Limitations)"
)


def structural_index(off: Offsets) -> int:
    """``max(c) + 1`` if some ``d_j == 0``, else ``max(c)``."""
    if off.n == 0:
        return 0
    return max(off.c) + (1 if any(x == 0 for x in off.d) else 0)


def jacobian_pattern(sigma: SignatureMatrix, off: Offsets) -> list[tuple[int, int, int]]:
    """Cells ``(i, j, order)`` where ``d_j - c_i == sigma_ij``; ``order`` is
    that common value, i.e. which derivative of x_j the entry refers to."""
    return [
        (i, j, v)
        for (i, j), v in sigma.entries.items()
        if off.d[j] - off.c[i] == v
    ]


@dataclass(frozen=True)
class AnalysisReport:
    offsets: Offsets
    structural_index: int
    hvt: Transversal
    hvt_value: int
    jacobian_pattern: tuple[tuple[int, int, int], ...]
    method: str
    stats: SolveStats | tuple[BlockStats, ...]
    block_structure: BlockStructure | None = None
    equation_names: tuple[str, ...] | None = field(default=None)
    variable_names: tuple[str, ...] | None = field(default=None)

    @property
    def schedule(self) -> dict:
        """Differentiation count per equation and highest derivative per variable."""
        return {"equations": list(self.offsets.c), "variables": list(self.offsets.d)}

    def to_dict(self) -> dict:
        if isinstance(self.stats, SolveStats):
            stats = self.stats.to_dict()
        else:
            stats = [b.to_dict() for b in self.stats]
        doc = {
            "n": self.offsets.n,
            "method": self.method,
            "offsets": self.offsets.to_dict(),
            "structural_index": self.structural_index,
            "hvt": list(self.hvt.match),
            "hvt_value": self.hvt_value,
            "jacobian_pattern": [list(cell) for cell in self.jacobian_pattern],
            "schedule": self.schedule,
            "stats": stats,
            "block_structure": self.block_structure.to_dict() if self.block_structure else None,
            "numeric_jacobian": NUMERIC_JACOBIAN_NOTE,
        }
        if self.equation_names is not None:
            doc["equation_names"] = list(self.equation_names)
        if self.variable_names is not None:
            doc["variable_names"] = list(self.variable_names)
        return doc


def analyze(
    sigma: SignatureMatrix,
    method: str = "auto",
    block_structure: BlockStructure | None = None,
    equation_names: Sequence[str] | None = None,
    variable_names: Sequence[str] | None = None,
) -> AnalysisReport:
    """Run the full structural analysis of ``sigma``.

    ``method="auto"`` computes the fine block triangular form and solves block
    by block when it has more than one block. ``"block"`` uses
    ``block_structure`` if given, else the fine form. Every method returns
    the same offsets.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")

    bs = block_structure
    if method == "global":
        chosen = "global"
    else:
        if bs is None:
            bs = fine_btf(sigma)
        chosen = "block" if method == "block" or bs.nblocks > 1 else "global"

    if chosen == "global":
        off, stats = smallest_offsets(sigma)
        hvt = stats.transversal
    else:
        off, stats = block_smallest_offsets(sigma, bs)
        hvt = _lift_transversal(bs, [b.stats.transversal for b in stats])
        stats = tuple(stats)

    pattern = tuple(jacobian_pattern(sigma, off))
    assert set(hvt.cells()) <= {(i, j) for i, j, _ in pattern}
    return AnalysisReport(
        offsets=off,
        structural_index=structural_index(off),
        hvt=hvt,
        hvt_value=transversal_value(sigma, hvt),
        jacobian_pattern=pattern,
        method=chosen,
        stats=stats,
        block_structure=bs,
        equation_names=tuple(equation_names) if equation_names is not None else None,
        variable_names=tuple(variable_names) if variable_names is not None else None,
    )


def _lift_transversal(bs: BlockStructure, local: Sequence[Transversal]) -> Transversal:
    match = [0] * bs.n
    for (start, _), t in zip(bs.bounds, local):
        for li, lj in t.cells():
            match[bs.row_perm[start + li]] = bs.col_perm[start + lj]
    return Transversal(tuple(match))
