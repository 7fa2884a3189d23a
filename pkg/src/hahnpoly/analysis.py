"""Experiments: maximum stable size, energy compaction, reconstruction curves."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from scipy.linalg import toeplitz
from scipy.ndimage import gaussian_filter

from .baselines import generate_rrgsop, generate_ttrrnd, generate_ttrrxd
from .core import (BasisMatrix, DimensionError, GenerationError, Generator, HahnParams,
                   StabilityReport, Status, as_params, orthogonality_error)
from .moments import forward_moments, inverse_moments, nmse
from .proposed import generate_proposed

GENERATORS: dict[Generator, Callable[..., BasisMatrix]] = {
    Generator.TTRRND: generate_ttrrnd,
    Generator.TTRRXD: generate_ttrrxd,
    Generator.RRGSOP: generate_rrgsop,
    Generator.PROPOSED: generate_proposed,
}

# failures that count as "could not generate" rather than programming errors
GENERATION_FAILURES = (GenerationError, OverflowError, ZeroDivisionError,
                       FloatingPointError, MemoryError)


def generate(generator, params, **kwargs) -> BasisMatrix:
    return GENERATORS[Generator.parse(generator)](as_params(params), **kwargs)


def covariance_matrix(rho: float, size: int) -> np.ndarray:
    """First-order Markov covariance, entry ``(i, j) = rho**|i-j|``."""
    if not abs(rho) < 1:
        raise ValueError("|rho| must be < 1")
    return toeplitz(rho ** np.arange(size, dtype=np.float64))


@dataclass(frozen=True)
class CompactionTable:
    rho: float
    variances: np.ndarray
    restriction: np.ndarray

    @property
    def sorted_variances(self) -> np.ndarray:
        return np.sort(self.variances)[::-1]


def restriction_error(variances) -> np.ndarray:
    """``J_m``: share of the total variance outside the ``m`` largest terms."""
    s = np.sort(np.asarray(variances, dtype=np.float64))[::-1]
    tail = np.cumsum(s[::-1])[::-1]
    return tail / tail[0]


def transform_variances(basis, rho: float) -> CompactionTable:
    """Diagonal of ``R CM R^T`` (in degree order) and its restriction error."""
    R = basis.values if isinstance(basis, BasisMatrix) else np.asarray(basis, float)
    CM = covariance_matrix(rho, R.shape[1])
    var = np.einsum("ij,jk,ik->i", R, CM, R)
    return CompactionTable(rho, var, restriction_error(var))


@dataclass
class Probe:
    size: int
    ok: bool
    orthogonality_error: float
    elapsed_seconds: float
    reason: str = ""


def _probe(gen: Generator, alpha, beta, N, time_budget_s, error_budget) -> Probe:
    params = HahnParams(alpha, beta, N)
    t0 = time.perf_counter()
    try:
        basis = GENERATORS[gen](params, deadline=time_budget_s)
    except GENERATION_FAILURES as exc:
        return Probe(N, False, math.nan, time.perf_counter() - t0, type(exc).__name__)
    elapsed = time.perf_counter() - t0
    if elapsed > time_budget_s:
        return Probe(N, False, math.nan, elapsed, "time budget exceeded")
    if not basis.reliable:
        return Probe(N, False, math.nan, elapsed, "flagged unreliable")
    err = orthogonality_error(basis)
    del basis
    if not err < error_budget:
        return Probe(N, False, err, elapsed, "orthogonality error")
    return Probe(N, True, err, elapsed)


def max_size_sweep(alpha: float, beta: float, generator, time_budget_s: float = 60.0,
                   error_budget: float = 1e-5, max_size: Optional[int] = None,
                   rel_tol: float = 0.0, start: int = 2, log=None) -> StabilityReport:
    """Largest size whose basis meets the error budget within the time budget.

    Sizes are doubled from ``start`` until one fails (or ``max_size`` is
    reached), then the bracket is bisected until its width is at most
    ``max(1, rel_tol * lower)``. Only generation is timed.
    """
    if time_budget_s <= 0 or error_budget <= 0:
        raise ValueError("budgets must be positive")
    gen = Generator.parse(generator)
    params = HahnParams(alpha, beta, max(start, 2))
    probes: list[Probe] = []

    def run(N):
        pr = _probe(gen, alpha, beta, N, time_budget_s, error_budget)
        probes.append(pr)
        if log:
            log(pr)
        return pr

    first = run(start)
    if not first.ok:
        return StabilityReport(params, gen, None, math.nan, first.elapsed_seconds,
                               Status.FAILED, probes)
    best, hi = first, None
    while max_size is None or best.size < max_size:
        N = 2 * best.size if max_size is None else min(2 * best.size, max_size)
        pr = run(N)
        if not pr.ok:
            hi = N
            break
        best = pr
    if hi is not None:
        while hi - best.size > max(1, rel_tol * best.size):
            pr = run((best.size + hi) // 2)
            if pr.ok:
                best = pr
            else:
                hi = pr.size
    return StabilityReport(HahnParams(alpha, beta, best.size), gen, best.size,
                           best.orthogonality_error, best.elapsed_seconds, Status.OK, probes)


def synthetic_image(size: int, seed: int = 0) -> np.ndarray:
    """Deterministic smooth texture in ``[0, 1]``: filtered noise at three scales."""
    rng = np.random.default_rng(seed)
    f = sum(s * gaussian_filter(rng.standard_normal((size, size)), s, mode="wrap")
            for s in (size / 256, size / 64, size / 16))
    return (f - f.min()) / (f.max() - f.min())


def reconstruction_curve(image, params_list: Iterable, generator,
                         keep_fractions: Iterable[float]) -> list[dict]:
    """NMSE after truncating to the leading ``keep * N`` moments per axis.

    A configuration that cannot be generated yields ``Failed`` rows with NaN
    error.
    """
    f = np.asarray(image, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise DimensionError("reconstruction curves need a square image")
    gen = Generator.parse(generator)
    keeps = list(keep_fractions)
    rows = []
    for p in params_list:
        p = as_params(p)
        base = {"alpha": p.alpha, "beta": p.beta, "size": p.size, "generator": gen.value}
        try:
            basis = GENERATORS[gen](p)
        except GENERATION_FAILURES as exc:
            rows += [dict(base, keep=k, nmse=math.nan, status=Status.FAILED.value,
                          detail=type(exc).__name__) for k in keeps]
            continue
        eta = forward_moments(f, basis)
        for k in keeps:
            m = int(round(k * p.size))
            rec = inverse_moments(eta, basis, keep_n=m, keep_m=m)
            rows.append(dict(base, keep=k, nmse=nmse(f, rec), status=Status.OK.value, detail=""))
    return rows
