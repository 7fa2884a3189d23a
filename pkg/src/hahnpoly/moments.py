"""Separable 2-D Hahn moment transform and reconstruction error."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BasisMatrix, DimensionError, HahnParams


class DegenerateInputError(ValueError):
    """Raised when a normalising quantity is zero."""


@dataclass(frozen=True)
class MomentMatrix:
    coefficients: np.ndarray
    params_x: Optional[HahnParams] = None
    params_y: Optional[HahnParams] = None

    @property
    def shape(self):
        return self.coefficients.shape


def _matrix(basis) -> np.ndarray:
    return basis.values if isinstance(basis, BasisMatrix) else np.asarray(basis, dtype=np.float64)


def _params(basis):
    return basis.params if isinstance(basis, BasisMatrix) else None


def as_image(image) -> np.ndarray:
    f = np.asarray(image, dtype=np.float64)
    if f.ndim != 2 or min(f.shape) < 1:
        raise DimensionError(f"expected a 2-D image, got shape {f.shape}")
    if not np.isfinite(f).all():
        raise ValueError("image contains non-finite pixels")
    return f


def forward_moments(image, basis_x, basis_y=None) -> MomentMatrix:
    """Moments ``eta = R1 f R2^T``.

    ``basis_y`` defaults to ``basis_x`` for square images.
    """
    f = as_image(image)
    basis_y = basis_x if basis_y is None else basis_y
    R1, R2 = _matrix(basis_x), _matrix(basis_y)
    if R1.shape[1] != f.shape[0] or R2.shape[1] != f.shape[1]:
        raise DimensionError(
            f"image {f.shape} does not match bases {R1.shape} and {R2.shape}")
    return MomentMatrix(R1 @ f @ R2.T, _params(basis_x), _params(basis_y))


def inverse_moments(moments, basis_x, basis_y=None, keep_n=None, keep_m=None) -> np.ndarray:
    """Reconstruct ``R1^T eta' R2`` from the leading ``keep_n x keep_m`` moments."""
    eta = moments.coefficients if isinstance(moments, MomentMatrix) else np.asarray(moments, float)
    basis_y = basis_x if basis_y is None else basis_y
    R1, R2 = _matrix(basis_x), _matrix(basis_y)
    if eta.shape != (R1.shape[0], R2.shape[0]):
        raise DimensionError(f"moments {eta.shape} do not match the bases")
    kn = eta.shape[0] if keep_n is None else int(keep_n)
    km = eta.shape[1] if keep_m is None else int(keep_m)
    if not (0 <= kn <= eta.shape[0] and 0 <= km <= eta.shape[1]):
        raise DimensionError(f"keep ({kn}, {km}) exceeds moment shape {eta.shape}")
    # only the retained block contributes, so multiply the sub-blocks directly
    return R1[:kn].T @ eta[:kn, :km] @ R2[:km]


def nmse(original, reconstructed) -> float:
    """Normalized mean square error ``sum((I - Ir)^2) / sum(I^2)``.

    >>> nmse([[1, 0], [0, 1]], [[1, 0], [0, 0]])
    0.5
    """
    a = np.asarray(original, dtype=np.float64)
    b = np.asarray(reconstructed, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"shapes differ: {a.shape} vs {b.shape}")
    den = np.sum(a * a)
    if den == 0:
        raise DegenerateInputError("original image is all zero")
    return float(np.sum((a - b) ** 2) / den)
