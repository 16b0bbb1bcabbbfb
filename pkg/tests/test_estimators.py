import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from daestruct import (
    BlockStructure,
    BlockTriangularizer,
    DimensionMismatch,
    SignatureMatrix,
    StructuralAnalyzer,
)
from daestruct.oracle import shuffle_sigma

from .conftest import example_system

NEG = -np.inf
E1_DENSE = [[2, NEG, 0], [NEG, 1, 0], [0, 0, NEG]]


def test_params_and_clone():
    est = StructuralAnalyzer(method="block")
    assert est.get_params() == {"method": "block", "block_structure": None}
    est.set_params(method="global")
    assert clone(est).method == "global"


@pytest.mark.parametrize("X", [
    E1_DENSE,
    np.array(E1_DENSE),
    {(0, 0): 2, (0, 2): 0, (1, 1): 1, (1, 2): 0, (2, 0): 0, (2, 1): 0},
])
def test_accepts_inputs(X):
    est = StructuralAnalyzer().fit(X)
    assert est.c_ == (0, 0, 1) and est.d_ == (2, 1, 0)
    assert est.structural_index_ == 2 and est.hvt_value_ == 2
    assert est.n_ == 3


def test_accepts_parsed_system():
    est = StructuralAnalyzer().fit(example_system("ex3.dae"))
    assert est.c_ == (0, 0, 1, 1, 2, 3)
    assert len(est.jacobian_pattern_) == 11


def test_block_structure_param(e6):
    bs = BlockStructure.trivial(6, [3, 3])
    est = StructuralAnalyzer(method="block", block_structure=bs.to_dict()).fit(e6)
    assert est.report_.method == "block"
    with pytest.raises(DimensionMismatch):
        StructuralAnalyzer(block_structure=BlockStructure.trivial(2)).fit(e6)


def test_bad_inputs():
    with pytest.raises(ValueError):
        StructuralAnalyzer(method="nope").fit(E1_DENSE)
    with pytest.raises(DimensionMismatch):
        StructuralAnalyzer().fit([[1, 2, 3]])
    with pytest.raises(TypeError):
        StructuralAnalyzer().fit("vars: x\nf = x")


def test_triangularizer(e6):
    shuffled, _, _ = shuffle_sigma(e6, 11)
    tri = BlockTriangularizer().fit(shuffled)
    assert tri.n_blocks_ == 2
    out = tri.transform(shuffled)
    assert isinstance(out, SignatureMatrix)
    assert BlockTriangularizer().fit_transform(shuffled) == out
    with pytest.raises(NotFittedError):
        BlockTriangularizer().transform(e6)


def test_pipeline(e6):
    shuffled, _, _ = shuffle_sigma(e6, 4)
    pipe = Pipeline([("btf", BlockTriangularizer()), ("sa", StructuralAnalyzer())]).fit(shuffled)
    sa = pipe.named_steps["sa"]
    assert sorted(sa.c_) == sorted((0, 0, 1, 1, 2, 3))
    assert sa.structural_index_ == 4
    assert sa.report_.block_structure.block_sizes == (3, 3)
