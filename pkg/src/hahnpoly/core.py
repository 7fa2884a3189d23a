"""Domain types, parameter validation and orthogonality diagnostics.

A basis matrix stores the weighted (orthonormal) discrete Hahn polynomials
with the degree ``n`` along rows and the coordinate ``x`` along columns, so
``R @ R.T`` is the identity for an exact basis.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np


class DomainError(ValueError):
    """Parameters fall outside both admissible regions."""


class SizeError(ValueError):
    """Polynomial size is too small."""


class DimensionError(ValueError):
    """Array shapes do not agree."""


class GenerationError(ArithmeticError):
    """A generator produced non-finite values or could not proceed."""


class UnderflowError(GenerationError):
    """Whole rows of a basis underflowed to zero."""


class DegenerateRowError(GenerationError):
    """A row vanished during re-orthonormalization."""


class GenerationTimeout(GenerationError):
    """Generation exceeded its deadline."""


class Generator(str, enum.Enum):
    TTRRND = "TTRRnd"
    TTRRXD = "TTRRxd"
    RRGSOP = "RRGSOP"
    PROPOSED = "Proposed"

    @classmethod
    def parse(cls, value: "str | Generator") -> "Generator":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for g in cls:
            if g.value.lower() == key or g.name.lower() == key:
                return g
        raise ValueError(f"unknown generator {value!r}")


class Status(str, enum.Enum):
    OK = "Ok"
    FAILED = "Failed"


@dataclass(frozen=True)
class HahnParams:
    """Parameter triple ``(alpha, beta, size)`` of a Hahn polynomial family.

    Admissible when both parameters exceed -1 (positive branch) or both are
    below ``-size`` (negative branch). Construction validates the domain.
    """

    alpha: float
    beta: float
    size: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if int(self.size) != self.size:
            raise SizeError(f"size must be an integer, got {self.size!r}")
        object.__setattr__(self, "size", int(self.size))
        if self.size < 2:
            raise SizeError(f"size must be at least 2, got {self.size}")
        a, b, N = self.alpha, self.beta, self.size
        if not (np.isfinite(a) and np.isfinite(b)):
            raise DomainError("parameters must be finite")
        if not ((a > -1 and b > -1) or (a < -N and b < -N)):
            raise DomainError(
                f"(alpha, beta) = ({a:g}, {b:g}) is neither > -1 nor < -{N}")

    @property
    def branch(self) -> str:
        return "positive" if self.alpha > -1 else "negative"

    @property
    def negative(self) -> bool:
        return self.alpha < -1

    @property
    def symmetric(self) -> bool:
        return self.alpha == self.beta

    def __iter__(self):
        return iter((self.alpha, self.beta, self.size))


def validate_params(alpha: float, beta: float, size: int) -> HahnParams:
    """Return validated :class:`HahnParams`.

    Raises
    ------
    DomainError
        If ``(alpha, beta)`` lies between the two admissible regions.
    SizeError
        If ``size < 2``.
    """
    return HahnParams(alpha, beta, size)


def as_params(params) -> HahnParams:
    if isinstance(params, HahnParams):
        return params
    return HahnParams(*params)


@dataclass(frozen=True, eq=False)
class BasisMatrix:
    """An ``N x N`` matrix of weighted Hahn polynomial values.

    ``values[n, x]`` holds the orthonormal polynomial of degree ``n`` at
    coordinate ``x``. ``reliable`` is the generator's own quality flag and
    ``info`` carries generator-specific diagnostics.
    """

    params: HahnParams
    values: np.ndarray
    generator: Generator
    reliable: bool = True
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        N = self.params.size
        if v.shape != (N, N):
            raise DimensionError(f"expected shape {(N, N)}, got {v.shape}")
        if not np.isfinite(v).all():
            raise GenerationError(f"{self.generator.value}: non-finite entries")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.params.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass
class StabilityReport:
    params: HahnParams
    generator: Generator
    max_stable_size: Optional[int]
    orthogonality_error: float
    elapsed_seconds: float
    status: Status
    probes: list = field(default_factory=list)

    def __post_init__(self):
        if (self.status is Status.FAILED) != (self.max_stable_size is None):
            raise ValueError("Failed status iff max_stable_size is None")

    def as_row(self) -> dict[str, Any]:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "generator": self.generator.value,
            "status": self.status.value,
            "max_stable_size": (float("nan") if self.max_stable_size is None
                                else self.max_stable_size),
            "orthogonality_error": self.orthogonality_error,
            "elapsed_seconds": self.elapsed_seconds,
        }


def orthogonality_error(basis, block: int = 2048) -> float:
    """Mean absolute deviation of ``R @ R.T`` from the identity.

    Parameters
    ----------
    basis : BasisMatrix or array_like
        Square (or rectangular, rows are polynomials) matrix ``R``.
    block : int
        Row block size; bounds the temporary memory at ``block * N`` floats.

    Examples
    --------
    >>> orthogonality_error(np.array([[1.0, 0.0], [1.0, 0.0]]))
    0.5
    """
    R = np.asarray(basis, dtype=np.float64)
    n = R.shape[0]
    total = 0.0
    for start in range(0, n, block):
        G = R[start:start + block] @ R.T
        idx = np.arange(G.shape[0])
        G[idx, start + idx] -= 1.0
        total += np.abs(G).sum()
    return float(total / (n * n))


class Deadline:
    """Cooperative time limit checked inside generator loops."""

    def __init__(self, seconds: Optional[float] = None):
        self.limit = None if seconds is None else time.perf_counter() + seconds

    def check(self):
        if self.limit is not None and time.perf_counter() > self.limit:
            raise GenerationTimeout("time budget exceeded")


def _deadline(deadline) -> Deadline:
    if isinstance(deadline, Deadline):
        return deadline
    return Deadline(deadline)
