"""Randomized block solvers for the bordered kernel system Theta W = Z.

Four methods: a summed committee of low-rank block solutions, projection
onto standardized random row blocks, greedy residual reduction over random
column blocks, and the row-then-column hybrid of the last two. `solve`
dispatches on the configured method; `solve_direct` in linalg is the
desk-scale oracle.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonFinite
from .kernels import BlockSampler
from .linalg import pseudo_inverse, solve_direct

METHODS = ("direct", "nystrom", "kaczmarz", "mp", "hybrid")


@dataclass(frozen=True)
class SolverConfig:
    method: str = "kaczmarz"
    block_size: int = 100
    max_iters: int = 100
    seed: int = 0
    stop_tol: float = 0.0
    committee_size: int | None = None  # nystrom only; default one epoch
    eval_every: int = 1
    dtype: str = "float64"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.block_size < 1 or self.max_iters < 1 or self.stop_tol < 0:
            raise ValueError("block_size, max_iters >= 1 and stop_tol >= 0 required")
        if self.eval_every < 1:
            raise ValueError("eval_every must be >= 1")

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)


@dataclass
class ConvergenceTrace:
    """Per-iteration (t, residual-or-update norm, optional test error)."""

    steps: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # None where not evaluated

    def record(self, t, residual, eta=None):
        if self.steps and t <= self.steps[-1]:
            raise ValueError("iteration indices must be strictly increasing")
        self.steps.append(int(t))
        self.residuals.append(float(residual))
        self.errors.append(None if eta is None else float(eta))

    def last_error(self):
        known = [e for e in self.errors if e is not None]
        return known[-1] if known else None


def _check_finite(w):
    if not np.all(np.isfinite(w)):
        raise NonFinite("weights diverged to NaN/Inf")


def solve_nystrom(op, z, cfg, eval_hook=None):
    """Committee of low-rank block solutions, aggregated by summation.

    Each member solves the system through one random column block s:
    W(t) = pinv(C.T) @ Theta_ss @ pinv(C) @ Z with C the (N+1) x J block of
    the sampled columns; the returned weights are the plain sum over members.
    """
    z = np.asarray(z, dtype=cfg.np_dtype)
    sampler = BlockSampler(op.dim, cfg.block_size, cfg.seed)
    t_total = cfg.committee_size
    if t_total is None:
        t_total = math.ceil(op.dim / cfg.block_size)
    w = np.zeros((op.dim, z.shape[1]), dtype=cfg.np_dtype)
    trace = ConvergenceTrace()
    all_idx = np.arange(op.dim)
    for t in range(1, t_total + 1):
        s = sampler.next_block()
        c = op.block(all_idx, s)
        theta_ss = op.block(s, s)
        pc = pseudo_inverse(c)
        w_t = pc.T @ (theta_ss @ (pc @ z))
        w += w_t
        _check_finite(w)
        eta = None
        if eval_hook is not None and t % cfg.eval_every == 0:
            eta = eval_hook(t, w)
        trace.record(t, np.linalg.norm(w_t), eta)
    return w, trace


def kaczmarz_step(op, w, z, s):
    """Project the estimate onto the standardized equations of row block s."""
    block, zb = op.standardized_rows(s, z)
    return w + pseudo_inverse(block) @ (zb - block @ w)


def mp_step(op, w, r, s):
    """Least-squares fit of the residual over column block s; updates (W, R)."""
    all_idx = np.arange(op.dim)
    c = op.block(all_idx, s)
    q = pseudo_inverse(c) @ r
    w = w.copy()
    w[s] += q
    return w, r - c @ q


def hybrid_step(op, w, z, r, s):
    """One column step and one row-projection step on the same index block.

    R is the running residual of the column (matching-pursuit) half and is
    touched only by it; the row half then projects the combined estimate onto
    the standardized equations of the block. As R shrinks the iteration turns
    into pure row projection, so the two halves converge jointly. Refreshing
    R across the row half instead (R <- Z - Theta W) is unstable: the column
    half keeps re-fitting the row half's updates and the pair amplifies each
    other on clustered kernel systems.
    """
    w, r = mp_step(op, w, r, s)
    return kaczmarz_step(op, w, z, s), r


def run_iterative(op, z, cfg, eval_hook=None):
    """Sampler-driven iteration for the kaczmarz, mp and hybrid methods.

    Starts from W = 0 (and R = Z for the residual-based methods); stops at
    max_iters or when the update norm drops below stop_tol. Deterministic for
    a fixed seed in single-threaded mode.
    """
    if cfg.method not in ("kaczmarz", "mp", "hybrid"):
        raise ValueError(f"run_iterative does not handle method {cfg.method!r}")
    z = np.asarray(z, dtype=cfg.np_dtype)
    sampler = BlockSampler(op.dim, cfg.block_size, cfg.seed)
    w = np.zeros((op.dim, z.shape[1]), dtype=cfg.np_dtype)
    r = z.copy()
    trace = ConvergenceTrace()
    for t in range(1, cfg.max_iters + 1):
        s = sampler.next_block()
        if cfg.method == "kaczmarz":
            w_new = kaczmarz_step(op, w, z, s)
            update = np.linalg.norm(w_new - w)
            progress = update
        elif cfg.method == "mp":
            w_new, r = mp_step(op, w, r, s)
            update = np.linalg.norm(w_new - w)
            progress = np.linalg.norm(r)
        else:
            w_new, r = hybrid_step(op, w, z, r, s)
            update = np.linalg.norm(w_new - w)
            progress = np.linalg.norm(r)
        _check_finite(w_new)
        w = w_new
        eta = None
        if eval_hook is not None and t % cfg.eval_every == 0:
            eta = eval_hook(t, w)
        trace.record(t, progress, eta)
        if update < cfg.stop_tol:
            break
    return w, trace


def solve(op, z, cfg, eval_hook=None):
    """Dispatch on cfg.method; `direct` materializes Theta and is oracle-scale only."""
    if cfg.method == "direct":
        z64 = np.asarray(z, dtype=np.float64)
        all_idx = np.arange(op.dim)
        theta = op.block(all_idx, all_idx).astype(np.float64)
        w = solve_direct(theta, z64).astype(cfg.np_dtype)
        trace = ConvergenceTrace()
        eta = eval_hook(1, w) if eval_hook is not None else None
        trace.record(1, np.linalg.norm(theta @ w - z64), eta)
        return w, trace
    if cfg.method == "nystrom":
        return solve_nystrom(op, z, cfg, eval_hook)
    return run_iterative(op, z, cfg, eval_hook)
