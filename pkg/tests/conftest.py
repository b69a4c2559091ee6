import numpy as np
import pytest

import softcover as sc


@pytest.fixture
def uniform2():
    return sc.uniform(2)


@pytest.fixture
def bsc02():
    return sc.bsc(0.2)


@pytest.fixture
def bsc011():
    return sc.bsc(0.11)


def random_pair(rng, max_size=4, floor=0.05):
    """A random (input distribution, channel) pair with full support."""
    k_in = int(rng.integers(2, max_size + 1))
    k_out = int(rng.integers(2, max_size + 1))
    qx = sc.make_distribution(rng.random(k_in) + floor)
    ch = sc.make_channel(rng.random((k_in, k_out)) + floor)
    return qx, ch


def assert_close(a, b, tol, label=""):
    assert abs(a - b) <= tol, f"{label}: {a!r} vs {b!r} (tol {tol})"
