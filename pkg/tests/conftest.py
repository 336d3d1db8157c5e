import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_matrix(rng, dim, norm=3.0):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    current = np.linalg.norm(m)
    if current > norm:
        m *= norm / current
    return m


def rel_residual(lhs, rhs):
    scale = max(1.0, np.linalg.norm(lhs), np.linalg.norm(rhs))
    return np.linalg.norm(lhs - rhs) / scale
