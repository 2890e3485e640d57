import numpy as np
import pytest

from rsmax import CoverageFunction, Instance, ModularFunction, gen_random_coverage


def random_modular(rng, n, lo=0, hi=9):
    return ModularFunction(rng.integers(lo, hi + 1, size=n).tolist())


def random_coverage_fn(rng, n, universe, density=0.4):
    hits = rng.random((n, universe)) < density
    sets = [tuple(np.flatnonzero(hits[i]).tolist()) for i in range(n)]
    return CoverageFunction(sets, universe=universe)


def coverage_corpus(count, seed, n, universe, density, k, tau):
    return [
        gen_random_coverage(n, universe, density, seed + i, k, tau)
        for i in range(count)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(0)
