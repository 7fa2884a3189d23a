"""Reference generators: n-direction, x-direction and Gram-Schmidt variants.

These are the classical recurrences the composed algorithm in
:mod:`hahnpoly.proposed` is measured against. They are kept deliberately
plain so their failure modes stay visible: TTRRnd overflows through its
linear-space gamma initialisation, TTRRxd loses rows to underflow, and
RRGSOP is only correct when ``alpha == beta``.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .core import (BasisMatrix, DegenerateRowError, DomainError, Generator,
                   UnderflowError, _deadline, as_params)
from .special import log_norm, log_weight, norm, weight


class TtrrndCoeffs(NamedTuple):
    A: np.ndarray
    B: float
    C: float
    D: float
    E: float


class TtrrxdCoeffs(NamedTuple):
    """x-direction coefficients with the weight factors folded into ratios.

    ``H(x) = eta1 * (eta2 * H(x-1) + eta3 * H(x-2))`` where
    ``eta1 = sqrt(w(x)/w(x-1)) / (sigma + tau)``,
    ``eta2 = 2 sigma + tau - lambda`` and
    ``eta3 = -sigma sqrt(w(x-1)/w(x-2))``, with sigma and tau at ``x-1``.
    """

    eta1: float
    eta2: np.ndarray
    eta3: float
    sigma_of_x: float
    tau_of_x: float
    lambda_of_n: np.ndarray


def _positive_only(p):
    if p.negative:
        raise DomainError("baseline generators support the positive branch only")


def ttrrnd_coeffs(params, n: int, x) -> TtrrndCoeffs:
    a, b, N = as_params(params)
    x = np.asarray(x, dtype=np.float64)
    A = (x - (a - b + 2 * N - 2) / 4
         - (b * b - a * a) * (b + a + 2 * N) / (4 * (a + b + 2 * n - 2) * (a + b + 2 * n)))
    B = math.sqrt(n * (a + b + n) * (a + b + 2 * n + 1)
                  / ((N - n) * (a + n) * (b + n) * (a + b + 2 * n - 1) * (a + b + N + n)))
    C = -(a + n - 1) * (b + n - 1) * (a + b + N + n - 1) * (N - n + 1) / (
        (a + b + 2 * n - 2) * (a + b + 2 * n - 1))
    D = math.sqrt(n * (n - 1) * (a + b + n) * (a + b + n - 1) * (a + b + 2 * n + 1)
                  / ((a + n) * (a + n - 1) * (b + n) * (b + n - 1) * (N - n + 1) * (N - n))
                  / ((a + b + 2 * n - 3) * (a + b + N + n) * (a + b + N + n - 1)))
    E = n * (a + b + n) / ((a + b + 2 * n - 1) * (a + b + 2 * n))
    return TtrrndCoeffs(A, B, C, D, E)


def _nd_step(p, R, n, x):
    c = ttrrnd_coeffs(p, n, x)
    return c.A * (c.B / c.E) * R[n - 1] + (c.C * c.D / c.E) * R[n - 2]


def generate_ttrrnd(params, deadline=None) -> BasisMatrix:
    """Degree-direction three-term recurrence.

    Rows 0 and 1 come from the closed-form weight and norm evaluated with
    linear-space gamma functions; higher rows follow the recurrence.

    Raises
    ------
    OverflowError
        When a gamma argument exceeds the double range.
    GenerationError
        If the recurrence produces non-finite values.
    """
    p = as_params(params)
    _positive_only(p)
    dl = _deadline(deadline)
    a, b, N = p
    x = np.arange(N, dtype=np.float64)
    w = np.array([weight(p, i) for i in range(N)])
    R = np.zeros((N, N))
    R[0] = np.sqrt(w / norm(p, 0))
    R[1] = (-(b + 1) * (N - 1) + x * (a + b + 2)) * np.sqrt(w / norm(p, 1))
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(2, N):
            R[n] = _nd_step(p, R, n, x)
            if n % 64 == 0:
                dl.check()
    return BasisMatrix(p, R, Generator.TTRRND)


def ttrrxd_coeffs(params, x: int, n) -> TtrrxdCoeffs:
    a, b, N = as_params(params)
    n = np.asarray(n, dtype=np.float64)
    sigma = (x - 1) * (N + a - x + 1)
    tau = (b + 1) * (N - 1) - (x - 1) * (a + b + 2)
    lam = n * (a + b + n + 1)
    r1 = math.sqrt((b + x) * (N - x) / ((N + a - x) * x))
    r2 = math.sqrt((b + x - 1) * (N - x + 1) / ((N + a - x + 1) * (x - 1)))
    return TtrrxdCoeffs(r1 / (sigma + tau), 2 * sigma + tau - lam, -sigma * r2,
                        sigma, tau, lam)


def ttrrxd_initial_columns(params):
    """Columns ``x = 0`` and ``x = 1`` of the x-direction recurrence.

    ``(1-N)_n`` and the binomial are combined in log space; only the final
    exponentiation is linear, which is where rows underflow for large sizes.
    """
    p = as_params(params)
    a, b, N = p
    n = np.arange(N, dtype=np.float64)
    log_mag = (gammaln(N) - gammaln(N - n)
               + gammaln(n + b + 1) - gammaln(n + 1) - gammaln(b + 1)
               + 0.5 * (log_weight(p, 0) - log_norm(p, n)))
    c0 = np.where(n % 2 == 0, 1.0, -1.0) * np.exp(log_mag)
    c1 = (((n + b + 1) * (N - n - 1) - n * (N + a - 1)) / ((b + 1) * (N - 1))
          * math.sqrt((b + 1) * (N - 1) / (N + a - 1)) * c0)
    return c0, c1


def _mirror(R, N):
    sign = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)[:, None]
    R[:, N - N // 2:] = sign * R[:, :N // 2][:, ::-1]
    if N % 2:
        R[1::2, N // 2] = 0.0


def generate_ttrrxd(params, deadline=None, strict_underflow=False) -> BasisMatrix:
    """Coordinate-direction three-term recurrence.

    When ``alpha == beta`` only the left half is computed and the right half
    follows from ``H_n(x) = (-1)^n H_n(N-1-x)``.

    ``info['zero_rows']`` counts rows that underflowed entirely; with
    ``strict_underflow`` such rows raise :class:`UnderflowError` instead.
    """
    p = as_params(params)
    _positive_only(p)
    dl = _deadline(deadline)
    N = p.size
    n = np.arange(N, dtype=np.float64)
    R = np.zeros((N, N))
    R[:, 0], R[:, 1] = ttrrxd_initial_columns(p)
    width = (N + 1) // 2 if p.symmetric else N
    with np.errstate(over="ignore", invalid="ignore"):
        for x in range(2, width):
            c = ttrrxd_coeffs(p, x, n)
            R[:, x] = c.eta1 * (c.eta2 * R[:, x - 1] + c.eta3 * R[:, x - 2])
            if x % 64 == 0:
                dl.check()
    if p.symmetric:
        _mirror(R, N)
    nonzero = np.abs(R).max(axis=1) > 0
    zero_rows = int(N - nonzero.sum())
    if zero_rows and strict_underflow:
        raise UnderflowError(f"{zero_rows} rows underflowed to zero")
    info = {"zero_rows": zero_rows,
            "highest_nonzero_row": int(np.nonzero(nonzero)[0].max()) if nonzero.any() else -1}
    return BasisMatrix(p, R, Generator.TTRRXD, info=info)


def generate_rrgsop(params, deadline=None) -> BasisMatrix:
    """Degree recurrence with modified Gram-Schmidt after every row.

    Works on the left half of the coordinate range and mirrors, as the
    method assumes ``alpha == beta``. Rows of opposite parity are then
    orthogonal automatically, so each row is projected only against the
    earlier rows of its own parity, under the inner product that counts
    each mirrored column twice.

    The result is always orthonormal. For ``alpha != beta`` it is not the
    Hahn basis; ``reliable`` is set to False when the mirrored initial rows
    disagree with their direct evaluation.
    """
    p = as_params(params)
    _positive_only(p)
    dl = _deadline(deadline)
    a, b, N = p
    half = (N + 1) // 2
    x = np.arange(N, dtype=np.float64)
    lw = log_weight(p, x)
    row0 = np.exp(0.5 * (lw - log_norm(p, 0)))
    row1 = (-(b + 1) * (N - 1) + x * (a + b + 2)) * np.exp(0.5 * (lw - log_norm(p, 1)))

    mismatch = 0.0
    for k, row in enumerate((row0, row1)):
        mirrored = (-1) ** k * row[:N // 2][::-1]
        scale = np.abs(row).max()
        mismatch = max(mismatch, np.abs(row[N - N // 2:] - mirrored).max() / scale)

    w = np.full(half, 2.0)
    if N % 2:
        w[-1] = 1.0
    R = np.zeros((N, half))
    R[0], R[1] = row0[:half], row1[:half]

    def reorthonormalize(k):
        r = R[k]
        if N % 2 and k % 2:
            r[-1] = 0.0
        for j in range(k % 2, k, 2):
            q = R[j]
            r -= (w @ (r * q)) * q
        nrm = math.sqrt(w @ (r * r))
        if not nrm >= 1e-300:
            raise DegenerateRowError(f"row {k} vanished (norm {nrm:g})")
        r /= nrm

    reorthonormalize(0)
    reorthonormalize(1)
    xs = x[:half]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(2, N):
            R[k] = _nd_step(p, R, k, xs)
            reorthonormalize(k)
            if k % 16 == 0:
                dl.check()
    full = np.zeros((N, N))
    full[:, :half] = R
    _mirror(full, N)
    reliable = bool(mismatch < 1e-8)
    return BasisMatrix(p, full, Generator.RRGSOP, reliable=reliable,
                       info={"mirror_mismatch": float(mismatch)})
