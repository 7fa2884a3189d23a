"""Orthonormal discrete Hahn polynomial bases for large sizes and high orders."""

import os as _os

# HAHNPOLY_THREADS caps BLAS threads; it must be applied before numpy loads.
if "HAHNPOLY_THREADS" in _os.environ:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ[_var] = _os.environ["HAHNPOLY_THREADS"]

from .core import (BasisMatrix, DegenerateRowError, DimensionError, DomainError,  # noqa: E402
                   GenerationError, GenerationTimeout, Generator, HahnParams, SizeError,
                   StabilityReport, Status, UnderflowError, orthogonality_error,
                   validate_params)
from .baselines import generate_rrgsop, generate_ttrrnd, generate_ttrrxd  # noqa: E402
from .proposed import generate_proposed  # noqa: E402
from .moments import forward_moments, inverse_moments, nmse  # noqa: E402
from .analysis import (covariance_matrix, max_size_sweep, reconstruction_curve,  # noqa: E402
                       synthetic_image, transform_variances)

__version__ = "0.1.0"
