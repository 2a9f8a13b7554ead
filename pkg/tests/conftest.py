import numpy as np
import pytest

from tpagerank import Graph, WeightFunction


@pytest.fixture
def identity_w():
    return WeightFunction.identity()


@pytest.fixture
def intro_graph():
    # the 3-node self-validation graph
    return Graph.from_dense([[0, 1, 1], [1, 1, 0], [1, 0, 1]])


@pytest.fixture
def two_cycle():
    return Graph.from_dense([[0, 1], [1, 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
