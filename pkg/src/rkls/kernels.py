"""Implicit bordered kernel system.

The (N+1) x (N+1) matrix never exists in memory: `theta_block` materializes
only the requested row/column block from the training samples, with the
all-ones bias border at index 0 and the ridge term 1/gamma on the data
diagonal. A shuffled-partition sampler supplies the random index blocks.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BlockTooLarge, IndexOutOfRange, ShapeMismatch

DEFAULT_GAMMA = 1e4


@dataclass(frozen=True)
class Polynomial:
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")

    def gram(self, x1, x2):
        return (x1 @ x2.T) ** self.degree


@dataclass(frozen=True)
class Gaussian:
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def gram(self, x1, x2):
        sq = (
            (x1 * x1).sum(axis=1)[:, None]
            + (x2 * x2).sum(axis=1)[None, :]
            - 2.0 * (x1 @ x2.T)
        )
        np.maximum(sq, 0.0, out=sq)
        return np.exp(-sq / (2.0 * self.sigma**2))


def kernel_eval(x, x2, spec):
    """Kernel value for a single pair of feature vectors."""
    x = np.atleast_2d(np.asarray(x))
    x2 = np.atleast_2d(np.asarray(x2))
    if x.shape[1] != x2.shape[1]:
        raise ShapeMismatch(f"feature lengths differ: {x.shape[1]} vs {x2.shape[1]}")
    return float(spec.gram(x, x2)[0, 0])


class ThetaOperator:
    """Implicit bordered regularized kernel matrix over a training sample set.

    Logical entries: (0,0) = 0; (0,i) = (i,0) = 1 for i >= 1;
    (i,n) = Omega(x_i, x_n) + delta_in / gamma for i,n >= 1.
    """

    def __init__(self, train_samples, kernel, gamma=DEFAULT_GAMMA, dtype=np.float64):
        if gamma <= 0:
            raise ValueError("gamma must be positive")
        self.samples = np.ascontiguousarray(train_samples, dtype=dtype)
        self.kernel = kernel
        self.gamma = float(gamma)
        self.dtype = np.dtype(dtype)

    @property
    def n(self):
        """Number of training samples N."""
        return self.samples.shape[0]

    @property
    def dim(self):
        """System size N+1 (border included)."""
        return self.samples.shape[0] + 1

    def _check(self, idx):
        idx = np.asarray(idx, dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() > self.n):
            raise IndexOutOfRange(f"indices must lie in 0..{self.n}")
        return idx

    def block(self, row_idx, col_idx):
        """Materialize the |rows| x |cols| block of the bordered system.

        The kernel sub-block is always computed with a canonical gemm
        orientation so that block(r, c) == block(c, r).T bitwise.
        """
        rows = self._check(row_idx)
        cols = self._check(col_idx)
        out = np.empty((rows.size, cols.size), dtype=self.dtype)
        rmask = rows > 0
        cmask = cols > 0
        out[~rmask, :] = 1.0
        out[:, ~cmask] = 1.0
        out[np.ix_(~rmask, ~cmask)] = 0.0
        ri = rows[rmask] - 1
        ci = cols[cmask] - 1
        if ri.size and ci.size:
            if np.array_equal(ri, ci):
                g = self.kernel.gram(self.samples[ri], self.samples[ci])
                # gemm output is not bitwise symmetric; take the lower
                # triangle as the truth so block(r, r) == block(r, r).T.
                g = np.tril(g) + np.tril(g, -1).T
            elif (ri.size, ri.tobytes()) <= (ci.size, ci.tobytes()):
                g = self.kernel.gram(self.samples[ri], self.samples[ci])
            else:
                g = self.kernel.gram(self.samples[ci], self.samples[ri]).T
            g = g + (1.0 / self.gamma) * (ri[:, None] == ci[None, :])
            out[np.ix_(rmask, cmask)] = g
        return out

    def standardized_rows(self, row_idx, z):
        """Selected full rows and matching targets, each scaled to unit row norm."""
        rows = self._check(row_idx)
        block = self.block(rows, np.arange(self.dim))
        norms = np.linalg.norm(block, axis=1, keepdims=True)
        zb = np.asarray(z, dtype=self.dtype)[rows]
        return block / norms, zb / norms

    def test_block(self, x_test):
        """Plain kernel block Omega(x_test_i, x_n); no border, no ridge."""
        x_test = np.ascontiguousarray(x_test, dtype=self.dtype)
        if x_test.ndim != 2 or x_test.shape[1] != self.samples.shape[1]:
            raise ShapeMismatch(
                f"test features must be (*, {self.samples.shape[1]})"
            )
        return self.kernel.gram(x_test, self.samples)

    def matmul(self, w, chunk=2048):
        """Theta @ W computed in bounded row chunks; never materializes Theta."""
        w = np.asarray(w, dtype=self.dtype)
        out = np.empty((self.dim, w.shape[1]), dtype=self.dtype)
        for start in range(0, self.dim, chunk):
            idx = np.arange(start, min(start + chunk, self.dim))
            out[idx] = self.block(idx, np.arange(self.dim)) @ w
        return out


@dataclass
class BlockSampler:
    """Shuffled-partition block sampler over the indices 0..n_indices-1.

    Successive blocks are contiguous slices of one random permutation; when
    fewer than block_size indices remain the pool is reshuffled, so within an
    epoch no index repeats. PCG64 keeps the sequence portable across
    platforms for a fixed seed.
    """

    n_indices: int
    block_size: int
    seed: int = 0
    _rng: np.random.Generator = field(init=False, repr=False)
    permutation: np.ndarray = field(init=False, repr=False)
    cursor: int = field(init=False, default=0)

    def __post_init__(self):
        if self.block_size < 1 or self.block_size > self.n_indices:
            raise BlockTooLarge(
                f"block size {self.block_size} outside 1..{self.n_indices}"
            )
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        self.permutation = self._rng.permutation(self.n_indices)
        self.cursor = 0

    def next_block(self):
        if self.cursor + self.block_size > self.n_indices:
            self.permutation = self._rng.permutation(self.n_indices)
            self.cursor = 0
        block = self.permutation[self.cursor : self.cursor + self.block_size]
        self.cursor += self.block_size
        return block.copy()
