import itertools

import pytest
from hypothesis import given, settings

from daestruct import (
    DimensionMismatch,
    SignatureMatrix,
    StructurallySingular,
    Transversal,
    find_hvt,
    hungarian,
    smallest_offsets,
    transversal_value,
)
from daestruct.sigma import SigmaSlice

from .test_sigma import sigma_with_hvt


def enumerate_values(sigma):
    out = []
    for perm in itertools.permutations(range(sigma.n)):
        if all((i, j) in sigma for i, j in enumerate(perm)):
            out.append(sum(sigma[(i, j)] for i, j in enumerate(perm)))
    return out


def test_e1(e1):
    t = find_hvt(e1)
    assert t.match == (0, 2, 1)
    assert transversal_value(e1, t) == 2
    # every transversal of E1, by enumeration: the best scores 2, the other 1
    assert sorted(enumerate_values(e1)) == [1, 2]


def test_e6(e6):
    t = find_hvt(e6)
    assert set(t.cells()) == {(0, 0), (1, 2), (2, 1), (3, 3), (4, 5), (5, 4)}
    assert transversal_value(e6, t) == 4


def test_transversal_value_direct(e1):
    assert transversal_value(e1, Transversal((2, 1, 0))) == 1
    zeros = SignatureMatrix(2, [(0, 0, 0), (1, 1, 0)])
    assert transversal_value(zeros, Transversal((0, 1))) == 0


def test_singular():
    with pytest.raises(StructurallySingular):
        find_hvt(SignatureMatrix(2, [(0, 0, 0), (1, 0, 0)]))
    with pytest.raises(StructurallySingular):
        find_hvt(SignatureMatrix(1, []))


def test_singular_despite_full_rows():
    # rows 0 and 1 both reach only column 0; row 2 is dense
    sigma = SignatureMatrix(3, [(0, 0, 5), (1, 0, 5), (2, 0, 0), (2, 1, 0), (2, 2, 0)])
    with pytest.raises(StructurallySingular):
        find_hvt(sigma)


def test_rectangular_rejected():
    with pytest.raises(DimensionMismatch):
        hungarian(SigmaSlice(2, 3, [(0, 0, 1)]))


def test_tie_break_is_deterministic():
    full = SignatureMatrix(3, {(i, j): 0 for i in range(3) for j in range(3)})
    assert find_hvt(full).match == (0, 1, 2)
    assert hungarian(full) == hungarian(full)


def test_negative_orders():
    sigma = SignatureMatrix(2, [(0, 0, -3), (0, 1, -1), (1, 0, -1), (1, 1, -3)])
    t = find_hvt(sigma)
    assert t.match == (1, 0) and transversal_value(sigma, t) == -2


@settings(max_examples=150)
@given(sigma_with_hvt(max_n=6))
def test_matches_enumeration(case):
    sigma, t = case
    assert t.is_transversal_of(sigma)
    assert transversal_value(sigma, t) == max(enumerate_values(sigma))


@settings(max_examples=60)
@given(sigma_with_hvt(max_n=6, lo=0, hi=4))
def test_common_optimum(case):
    sigma, t = case
    off, _ = smallest_offsets(sigma)
    assert sum(off.d) - sum(off.c) == transversal_value(sigma, t)
