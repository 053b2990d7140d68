"""Per-sample feature transforms: two-step normalization, spectral
concatenation and the centered Gaussian attenuation filter.

All transforms are pure functions of a single feature vector; `apply_steps`
maps them over the rows of a sample matrix.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, ZeroNorm

_EPS = 1e-12


@dataclass(frozen=True)
class GaussianFilter:
    """Element-wise attenuation centered in the middle of an L x L image."""

    c: float
    side: int

    name = "gaussian_filter"


@dataclass(frozen=True)
class TwoStepNormalize:
    name = "two_step_normalize"


@dataclass(frozen=True)
class SpectralConcat:
    name = "spectral_concat"


@dataclass(frozen=True)
class PreprocessSpec:
    """Ordered list of preprocessing steps.

    At most one SpectralConcat is allowed and it must be the last step (it
    performs its own centering and normalization).
    """

    steps: tuple

    def __post_init__(self):
        concat_at = [i for i, s in enumerate(self.steps) if isinstance(s, SpectralConcat)]
        if len(concat_at) > 1:
            raise ValueError("at most one spectral_concat step")
        if concat_at and concat_at[0] != len(self.steps) - 1:
            raise ValueError("spectral_concat must be the last step")


def two_step_normalize(x):
    """Subtract the mean then scale to unit Euclidean norm."""
    x = np.asarray(x, dtype=np.float64)
    centered = x - x.mean()
    norm = np.linalg.norm(centered)
    if norm < _EPS * (1.0 + np.abs(x).max(initial=0.0)):
        raise ZeroNorm("constant input: centering yields the zero vector")
    return centered / norm


def dft_magnitude_half(x):
    """Magnitudes of the first ceil(n/2) DFT bins of a real vector."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise ShapeMismatch("need at least 2 samples for a spectrum")
    half = (n + 1) // 2
    return np.abs(np.fft.rfft(x)[:half])


def spectral_concat(x):
    """Concatenate the centered image with the square root of its half spectrum.

    Both parts are independently centered (the spatial part once, the spectral
    part after the square root), scaled to unit norm, and stacked with a
    1/sqrt(2) factor so the result is again a unit vector.
    """
    x = np.asarray(x, dtype=np.float64)
    xi = x - x.mean()
    phi = np.sqrt(dft_magnitude_half(xi))
    phi = phi - phi.mean()
    xi_norm = np.linalg.norm(xi)
    phi_norm = np.linalg.norm(phi)
    scale = _EPS * (1.0 + np.abs(x).max(initial=0.0))
    if xi_norm < scale or phi_norm < scale:
        raise ZeroNorm("constant part after centering")
    return np.concatenate([xi / xi_norm, phi / phi_norm]) / np.sqrt(2.0)


def gaussian_filter_plane(side, c):
    """The L x L attenuation plane exp(-c[(i-L/2)^2 + (j-L/2)^2]), i,j = 1..L."""
    idx = np.arange(1, side + 1, dtype=np.float64)
    d2 = (idx - side / 2.0) ** 2
    return np.exp(-c * (d2[:, None] + d2[None, :]))


def gaussian_center_filter(x, side, c):
    """Multiply each channel plane of an image-shaped vector by the Gaussian plane.

    Accepts single-channel (L*L) or three-channel (3*L*L, channel-major)
    vectors. The plane is symmetric in (i, j), so the result does not depend
    on whether the image was vectorized row- or column-wise.
    """
    x = np.asarray(x, dtype=np.float64)
    plane = gaussian_filter_plane(side, c).ravel()
    if x.shape[0] == side * side:
        return x * plane
    if x.shape[0] == 3 * side * side:
        return (x.reshape(3, side * side) * plane).ravel()
    raise ShapeMismatch(f"length {x.shape[0]} is not L^2 or 3L^2 for L={side}")


def apply_step(step, x):
    if isinstance(step, GaussianFilter):
        return gaussian_center_filter(x, step.side, step.c)
    if isinstance(step, TwoStepNormalize):
        return two_step_normalize(x)
    if isinstance(step, SpectralConcat):
        return spectral_concat(x)
    raise TypeError(f"unknown preprocessing step {step!r}")


def _two_step_normalize_rows(x):
    centered = x - x.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(centered, axis=1, keepdims=True)
    bad = norms[:, 0] < _EPS * (1.0 + np.abs(x).max(axis=1, initial=0.0))
    if bad.any():
        raise ZeroNorm(f"constant input row(s) {np.flatnonzero(bad).tolist()}")
    return centered / norms


def _spectral_concat_rows(x):
    n = x.shape[1]
    half = (n + 1) // 2
    xi = x - x.mean(axis=1, keepdims=True)
    phi = np.sqrt(np.abs(np.fft.rfft(xi, axis=1)[:, :half]))
    phi = phi - phi.mean(axis=1, keepdims=True)
    xi_norms = np.linalg.norm(xi, axis=1, keepdims=True)
    phi_norms = np.linalg.norm(phi, axis=1, keepdims=True)
    scale = _EPS * (1.0 + np.abs(x).max(axis=1, initial=0.0))
    bad = (xi_norms[:, 0] < scale) | (phi_norms[:, 0] < scale)
    if bad.any():
        raise ZeroNorm(f"constant part after centering in row(s) {np.flatnonzero(bad).tolist()}")
    return np.hstack([xi / xi_norms, phi / phi_norms]) / np.sqrt(2.0)


def apply_steps(spec, samples):
    """Apply an ordered PreprocessSpec to every row of a sample matrix."""
    x = np.asarray(samples, dtype=np.float64)
    for step in spec.steps:
        if isinstance(step, TwoStepNormalize):
            x = _two_step_normalize_rows(x)
        elif isinstance(step, SpectralConcat):
            x = _spectral_concat_rows(x)
        elif isinstance(step, GaussianFilter):
            plane = gaussian_filter_plane(step.side, step.c).ravel()
            if x.shape[1] == plane.shape[0]:
                x = x * plane
            elif x.shape[1] == 3 * plane.shape[0]:
                x = x * np.tile(plane, 3)
            else:
                raise ShapeMismatch(
                    f"length {x.shape[1]} is not L^2 or 3L^2 for L={step.side}"
                )
        else:
            raise TypeError(f"unknown preprocessing step {step!r}")
    return x
