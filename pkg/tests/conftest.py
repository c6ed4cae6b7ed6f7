import numpy as np
import pytest

from prodgeo.example import ExampleParams, build_example


@pytest.fixture
def inst_1234():
    return build_example(ExampleParams((1.0, 2.0, 3.0, 4.0)))


@pytest.fixture
def inst_1000():
    return build_example(ExampleParams((1.0, 0.0, 0.0, 0.0)))


@pytest.fixture
def inst_zero():
    return build_example(ExampleParams((0.0, 0.0, 0.0, 0.0)))


def random_lambdas(seed: int, count: int, low: float = -3.0, high: float = 3.0):
    rng = np.random.default_rng(seed)
    return [tuple(rng.uniform(low, high, 4)) for _ in range(count)]
