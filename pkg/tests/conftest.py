from importlib.resources import files

import pytest

from daestruct import SignatureMatrix, Transversal, parse_dae

# Reference signature tables, 0-based (row, col, order).
E1_TRIPLES = [(0, 0, 2), (0, 2, 0), (1, 1, 1), (1, 2, 0), (2, 0, 0), (2, 1, 0)]
E6_TRIPLES = E1_TRIPLES + [(2, 5, 1), (3, 3, 2), (3, 5, 0), (4, 4, 1), (4, 5, 0),
                           (5, 3, 0), (5, 4, 0)]
E1_HVT = (0, 2, 1)


def example_text(name):
    return files("daestruct.data").joinpath(name).read_text()


def example_system(name):
    return parse_dae(example_text(name))


@pytest.fixture
def e1():
    return SignatureMatrix(3, E1_TRIPLES)


@pytest.fixture
def e6():
    return SignatureMatrix(6, E6_TRIPLES)


@pytest.fixture
def e1_hvt():
    return Transversal(E1_HVT)
