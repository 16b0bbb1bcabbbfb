"""Benchmark and cross-check drivers behind ``daestruct bench`` / ``verify``."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .assignment import find_hvt, transversal_value
from .block_solver import block_smallest_offsets
from .btf import fine_btf
from .fixed_point import smallest_offsets, verify_smallest
from .oracle import (
    DUAL_LIMIT,
    HVT_LIMIT,
    GenSpec,
    SplitMix64,
    brute_hvt,
    brute_smallest_dual,
    gen_block_sigma,
    gen_sigma,
    lp_smallest_dual,
)
from .errors import TooLarge
from .sigma import SignatureMatrix

BENCH_FIELDS = ("n", "blocks", "block_size", "seed", "method",
                "phi_applications", "matching_ops", "wall_ns", "equal")


def run_bench(blocks, block_size, reps=1, seed=0, density=0.3, sigma_range=(0, 3),
              coupling_density=None):
    """One global row and one block row per repetition.

    Repetition k uses instance seed ``seed + k``. Counters are deterministic;
    ``wall_ns`` is informational.
    """
    rows = []
    for rep in range(reps):
        inst_seed = seed + rep
        spec = GenSpec(blocks=blocks, block_size=block_size, density=density,
                       sigma_range=tuple(sigma_range), seed=inst_seed,
                       coupling_density=coupling_density)
        sigma, bs = gen_block_sigma(spec)

        t0 = time.perf_counter_ns()
        off_g, st = smallest_offsets(sigma)
        t1 = time.perf_counter_ns()
        off_b, per_block = block_smallest_offsets(sigma, bs)
        t2 = time.perf_counter_ns()

        equal = off_g == off_b
        common = {"n": sigma.n, "blocks": blocks, "block_size": block_size, "seed": inst_seed}
        rows.append({**common, "method": "global",
                     "phi_applications": st.phi_applications,
                     "matching_ops": st.matching_ops,
                     "wall_ns": t1 - t0, "equal": equal})
        rows.append({**common, "method": "block",
                     "phi_applications": sum(b.stats.phi_applications for b in per_block),
                     "matching_ops": sum(b.stats.matching_ops for b in per_block),
                     "wall_ns": t2 - t1, "equal": equal})
    return rows


@dataclass
class VerifyResult:
    cases: int
    agreed: int
    mismatch: dict | None = None

    @property
    def ok(self) -> bool:
        return self.agreed == self.cases


def _reference_dual(sigma: SignatureMatrix):
    if sigma.n <= DUAL_LIMIT:
        return brute_smallest_dual(sigma), "enumeration"
    return lp_smallest_dual(sigma), "lp"


def _check_instance(sigma: SignatureMatrix, bs=None) -> str | None:
    """Return a description of the first disagreement, or None."""
    t = find_hvt(sigma)
    if sigma.n <= HVT_LIMIT:
        _, best = brute_hvt(sigma)
        if transversal_value(sigma, t) != best:
            return f"hvt value {transversal_value(sigma, t)} != brute force {best}"
    off, stats = smallest_offsets(sigma)
    if stats.phi_applications > sum(off.c) + 1:
        return f"phi applications {stats.phi_applications} exceed |c*|_1 + 1"
    ref, how = _reference_dual(sigma)
    if off != ref:
        return f"offsets {off.to_dict()} != {how} oracle {ref.to_dict()}"
    if not verify_smallest(sigma, off):
        return "verify_smallest rejected the computed offsets"
    if bs is not None:
        for structure in (bs, fine_btf(sigma)):
            off_b, _ = block_smallest_offsets(sigma, structure)
            if off_b != off:
                return f"block offsets {off_b.to_dict()} != global {off.to_dict()}"
    return None


def run_verify(cases, seed=0, n=None, blocks=None, block_size=None, density=0.4,
               sigma_range=(0, 3)) -> VerifyResult:
    """Cross-check generated instances against the oracles.

    Give ``n`` for unstructured instances (``n <= 8``) or ``blocks`` and
    ``block_size`` for block-structured ones. Offsets are checked against
    enumeration when ``n <= 5`` and against the LP oracle otherwise.
    """
    if n is not None and n > HVT_LIMIT:
        raise TooLarge(n, HVT_LIMIT)
    rng = SplitMix64(seed)
    result = VerifyResult(cases=cases, agreed=0)
    for _ in range(cases):
        case_seed = rng.next_u64()
        if n is not None:
            spec = GenSpec(n=n, density=density, sigma_range=tuple(sigma_range), seed=case_seed)
            sigma, bs = gen_sigma(spec), None
        else:
            spec = GenSpec(blocks=blocks, block_size=block_size, density=density,
                           sigma_range=tuple(sigma_range), seed=case_seed)
            sigma, bs = gen_block_sigma(spec)
        problem = _check_instance(sigma, bs)
        if problem is None:
            result.agreed += 1
        elif result.mismatch is None:
            result.mismatch = {"seed": case_seed, "problem": problem, "sigma": sigma}
    return result
