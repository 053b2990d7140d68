import numpy as np
import pytest

from rkls import Polynomial, ThetaOperator, one_hot_targets


def unit_rows(n, m, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, m))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def make_system(n=30, m=40, k=3, gamma=1e4, degree=4, seed=0, dtype=np.float64):
    """Small synthetic kernel system: operator, random targets, full Theta."""
    x = unit_rows(n, m, seed)
    labels = np.random.default_rng(seed + 1).integers(0, k, n)
    op = ThetaOperator(x, Polynomial(degree), gamma, dtype=dtype)
    z = one_hot_targets(labels, k)
    return op, z


def materialize(op):
    idx = np.arange(op.dim)
    return op.block(idx, idx)


def theta_entrywise(x, gamma, degree):
    """Independent entry-by-entry construction of the bordered matrix."""
    n = x.shape[0]
    theta = np.zeros((n + 1, n + 1))
    theta[0, 1:] = 1.0
    theta[1:, 0] = 1.0
    for i in range(n):
        for j in range(n):
            theta[i + 1, j + 1] = float(np.dot(x[i], x[j])) ** degree
            if i == j:
                theta[i + 1, j + 1] += 1.0 / gamma
    return theta


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
