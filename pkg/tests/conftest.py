import numpy as np
import pytest

from pachner.cochain import random_generic_cocycle


@pytest.fixture(scope="session")
def cocycles():
    """Generic cocycles for seeds 1..20, built once."""
    return {s: random_generic_cocycle(s) for s in range(1, 21)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
