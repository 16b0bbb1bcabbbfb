import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daestruct import (
    BlockStructure,
    DimensionMismatch,
    InvalidBlockStructure,
    Offsets,
    SigmaSlice,
    block_smallest_offsets,
    col_max,
    e_max,
    fine_btf,
    row_add,
    smallest_offsets,
)
from daestruct.oracle import GenSpec, gen_block_sigma, shuffle_sigma


class TestPrimitives:
    def test_row_add(self):
        s = SigmaSlice(2, 3, [(0, 1, 2), (1, 0, 0)])
        assert row_add(s, [5, 1]) == SigmaSlice(2, 3, [(0, 1, 7), (1, 0, 1)])
        with pytest.raises(DimensionMismatch):
            row_add(s, [1])

    def test_col_max(self):
        a = SigmaSlice(2, 3, [(0, 1, 2), (1, 1, 4)])
        b = SigmaSlice(1, 3, [(0, 0, -1)])
        assert col_max(a) == [-math.inf, 4, -math.inf]
        assert col_max(a, b) == [-1, 4, -math.inf]
        with pytest.raises(DimensionMismatch):
            col_max(a, SigmaSlice(1, 2, []))

    def test_e_max(self):
        assert e_max([-math.inf, 3, -2], [0, 0, 0]) == [0, 3, 0]
        with pytest.raises(DimensionMismatch):
            e_max([1], [1, 2])


def test_e6_block(e6):
    off, per_block = block_smallest_offsets(e6, BlockStructure.trivial(6, [3, 3]))
    assert off == Offsets((0, 0, 1, 1, 2, 3), (2, 1, 0, 3, 3, 2))
    assert per_block[0].param == (0, 0, 0)
    assert per_block[1].param == (0, 0, 2)
    assert off == smallest_offsets(e6)[0]


def test_rejects_lower_structure(e6):
    with pytest.raises(InvalidBlockStructure):
        block_smallest_offsets(e6, BlockStructure((3, 4, 5, 0, 1, 2), (3, 4, 5, 0, 1, 2), (3, 3)))


def test_coarse_structure_is_fine_too(e6):
    assert block_smallest_offsets(e6, BlockStructure.trivial(6))[0] == smallest_offsets(e6)[0]


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0.0, 0.8), st.integers(0, 2**40))
def test_block_equals_global(blocks, size, density, seed):
    spec = GenSpec(blocks=blocks, block_size=size, density=density, seed=seed)
    sigma, bs = gen_block_sigma(spec)
    want, _ = smallest_offsets(sigma)
    assert block_smallest_offsets(sigma, bs)[0] == want
    shuffled, rp, cp = shuffle_sigma(sigma, seed ^ 0x5A5A)
    got, per_block = block_smallest_offsets(shuffled, fine_btf(shuffled))
    assert got.c == tuple(want.c[r] for r in rp)
    assert got.d == tuple(want.d[c] for c in cp)
    for b in per_block:
        assert b.stats.phi_applications <= b.stats.bound
