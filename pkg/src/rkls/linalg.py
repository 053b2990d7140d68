"""Dense matrix utilities: pseudo-inverse and the direct-solve oracle."""

import numpy as np

from .errors import NonFinite, ShapeMismatch, Singular


def default_rcond(shape):
    return 1e-7 * max(shape)


def pseudo_inverse(a, rel_tol=None):
    """Moore-Penrose pseudo-inverse via SVD.

    Singular values below rel_tol * sigma_max are treated as zero; defaults to
    1e-7 * max(m, n) so rank-deficient blocks (duplicate training rows) stay
    well behaved.
    """
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise NonFinite("pseudo_inverse input contains NaN/Inf")
    if rel_tol is None:
        rel_tol = default_rcond(a.shape)
    return np.linalg.pinv(a, rcond=rel_tol)


def solve_direct(theta, z):
    """Solve Theta W = Z by a pivoted factorization; small-N oracle only."""
    theta = np.asarray(theta)
    z = np.asarray(z)
    if theta.ndim != 2 or theta.shape[0] != theta.shape[1]:
        raise ShapeMismatch("Theta must be square")
    if z.shape[0] != theta.shape[0]:
        raise ShapeMismatch("Z row count must match Theta")
    try:
        w = np.linalg.solve(theta, z)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise Singular("solution not finite")
    # solve() only raises on exact pivot collapse; catch numerical singularity
    # (e.g. duplicated rows) explicitly. Oracle scale only, so the extra SVD
    # is acceptable.
    cond = np.linalg.cond(theta)
    if not np.isfinite(cond) or cond > 1e12:
        raise Singular(f"condition number {cond:.3e}")
    return w
