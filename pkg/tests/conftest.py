import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")


class CountingProblem:
    """Wraps a problem and counts fitness evaluations."""

    def __init__(self, inner):
        self.inner = inner
        self.count = 0

    @property
    def length(self):
        return self.inner.length

    @property
    def optimum(self):
        return self.inner.optimum

    def evaluate(self, genome):
        self.count += 1
        return self.inner.evaluate(genome)

    def describe(self):
        return self.inner.describe()


class ConstantProblem:
    """Every genome has the same fitness; the optimum is unreachable."""

    def __init__(self, length=6, value=0.5):
        self.length = length
        self.value = value
        self.optimum = value + 1.0

    def evaluate(self, genome):
        return self.value

    def describe(self):
        return f"const({self.value})"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def counting():
    return CountingProblem
