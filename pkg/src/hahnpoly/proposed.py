"""Composed-recurrence generator for large, high-order Hahn bases.

The coordinate plane is split into parts:

* P1: degrees ``0..M``, columns ``0..N2-1``, x-recurrence run forward;
* P2: degrees ``0..M``, columns ``N2..N-1``, x-recurrence run backward;
* P3/P4: degrees ``M+1..N-1`` on the left/right halves, n-recurrence;
* P5: right half by reflection when ``alpha == beta``;
* P6: coefficients past the point where the n-recurrence stops decaying,
  set to zero.

with ``M = floor(0.4 N)`` and ``N2 = N // 2``. Initial values are evaluated
through log-gamma so they stay finite for sizes in the thousands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma, sqrt
from typing import NamedTuple

import numpy as np

from .core import (BasisMatrix, DomainError, GenerationError, Generator,
                   _deadline, as_params)

DEFAULT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class PartitionPlan:
    M: int
    N2: int
    symmetric: bool


def partition_plan(params, symmetric=None) -> PartitionPlan:
    p = as_params(params)
    N = p.size
    if symmetric is None:
        symmetric = p.symmetric
    elif symmetric and not p.symmetric:
        raise ValueError("the symmetric path requires alpha == beta")
    # at least two x-recurrence rows so the n-recurrence has both predecessors
    M = min(max(int(0.4 * N), 1), N - 1)
    return PartitionPlan(M=M, N2=N // 2, symmetric=bool(symmetric))


class MxdCoeffs(NamedTuple):
    nu1: float
    nu2: np.ndarray
    nu3: float
    nu: float


class MndCoeffs(NamedTuple):
    kappa1: float
    kappa2: np.ndarray
    kappa3: float


def mxd_coeffs(params, x: int, n) -> MxdCoeffs:
    """Coefficients of the modified x-recurrence at column ``x``."""
    a, b, N = as_params(params)
    n = np.asarray(n, dtype=np.float64)
    # nu carries the sign of (b + x) so the negative branch works unchanged
    nu = math.copysign(sqrt((N - x) * (b + x) * (N + a - x) * x), b + x)
    nu1 = (-2 * x * x + (2 * N + a - b + 2) * x + (b - 1) * N - a - 1) / nu
    nu2 = -n * (a + b + n + 1) / nu
    nu3 = -sqrt((b + x - 1) * (N - x + 1) * (x - 1) * (N + a - x + 1)) / abs(nu)
    return MxdCoeffs(nu1, nu2, nu3, nu)


def mnd_coeffs(params, n: int, x) -> MndCoeffs:
    """Coefficients of the modified n-recurrence at degree ``n``."""
    a, b, N = as_params(params)
    x = np.asarray(x, dtype=np.float64)
    s = a + b + 2 * n
    k1 = s * sqrt((s + 1) * (s - 1) / (n * (a + b + n) * (N - n) * (a + n) * (b + n) * (a + b + N + n)))
    shift = a - b + 2 * N - 2
    if a != b:
        shift += (b * b - a * a) * (a + b + 2 * N) / ((s - 2) * s)
    k2 = x - 0.25 * shift
    # one radicand instead of two keeps every factor pair sign-consistent
    # on the negative branch
    k3 = -s / (s - 2) * sqrt(
        (n - 1) * (a + n - 1) * (b + n - 1) * (N - n + 1) / (n * (a + b + n) * (a + n) * (b + n) * (N - n))
        * (a + b + n - 1) * (s + 1) * (a + b + N + n - 1) / ((s - 3) * (a + b + N + n)))
    return MndCoeffs(k1, k2, k3)


# Initial values ------------------------------------------------------------

def _log_h00(a, b, N):
    if a <= -1 or b <= -1:
        raise DomainError("positive branch requires alpha, beta > -1")
    return (lgamma(a + b + 2) + lgamma(N + a) - lgamma(a + 1) - lgamma(N + a + b + 1)) / 2


def _log_ratio_0N1(a, b, N):
    return (lgamma(N + b) + lgamma(a + 1) - lgamma(b + 1) - lgamma(N + a)) / 2


def initial_value_00(params) -> float:
    """``H_0(0)`` on the positive branch, via log-gamma.

    ``params`` may be a :class:`HahnParams` or a raw ``(alpha, beta, N)``
    tuple; the latter allows ``N = 1``.
    """
    return math.exp(_log_h00(*_raw(params)))


def initial_value_0N1(params, h00: float) -> float:
    """``H_0(N-1)`` on the positive branch, expressed through ``h00``."""
    a, b, N = _raw(params)
    if h00 == 0:
        # h00 underflowed; go back to the logarithm so the product stays finite
        return math.exp(_log_ratio_0N1(a, b, N) + _log_h00(a, b, N))
    return math.exp(_log_ratio_0N1(a, b, N) + math.log(abs(h00))) * math.copysign(1.0, h00)


def initial_values_negative_branch(params) -> tuple[float, float]:
    """``(H_0(0), H_0(N-1))`` for ``alpha, beta < -N``."""
    a, b, N = _raw(params)
    if not (a < -N and b < -N):
        raise DomainError("negative branch requires alpha, beta < -N")
    h00 = math.exp((-lgamma(-a - b - 1) - lgamma(-N - a + 1) + lgamma(-a) + lgamma(-N - a - b)) / 2)
    h0n = math.exp((-lgamma(-a - b - 1) - lgamma(-N - b + 1) + lgamma(-b) + lgamma(-N - a - b)) / 2)
    return h00, h0n


def initial_values(params) -> tuple[float, float]:
    p = as_params(params)
    if p.negative:
        return initial_values_negative_branch(p)
    h00 = initial_value_00(p)
    return h00, initial_value_0N1(p, h00)


def _raw(params):
    if hasattr(params, "alpha"):
        return params.alpha, params.beta, params.size
    a, b, N = params
    return float(a), float(b), int(N)


def _checked(*cols):
    for c in cols:
        if not np.isfinite(c).all():
            raise GenerationError("non-finite initial set")
    return cols


def initial_set_p1(params, h00: float) -> tuple[np.ndarray, np.ndarray]:
    """Columns 0 and 1 for every degree, from a two-term recurrence in n."""
    a, b, N = as_params(params)
    n = np.arange(N, dtype=np.float64)
    m = n[:-1]
    ratio = np.sqrt((m + 1 + b) * (N - 1 - m) * (2 * m + 3 + b + a) * (m + b + a + 1)
                    / ((m + 1) * (a + 1 + m) * (m + 1 + b + a + N) * (2 * m + b + a + 1)))
    col0 = h00 * np.concatenate([[1.0], np.cumprod(-np.sign(m + 1 + b) * ratio)])
    col1 = (((N - n - 1) * b - n * n - (a + 1) * n + N - 1) / ((b + 1) * (N - 1))
            * sqrt((b + 1) * (N - 1) / (a + N - 1)) * col0)
    return _checked(col0, col1)


def initial_set_p2(params, h0N1: float) -> tuple[np.ndarray, np.ndarray]:
    """Columns ``N-1`` and ``N-2`` for every degree."""
    a, b, N = as_params(params)
    n = np.arange(N, dtype=np.float64)
    m = n[:-1]
    ratio = np.sqrt((2 * m + 3 + a + b) * (m + a + b + 1) * (m + 1 + a) * (N - m - 1)
                    / ((m + b + 1) * (m + 1 + a + b + N) * (2 * m + a + b + 1) * (m + 1)))
    last = h0N1 * np.concatenate([[1.0], np.cumprod(np.sign(m + 1 + a) * ratio)])
    second = ((-n * n - (a + b + 1) * n + (N - 1) * (a + 1)) / ((a + 1) * (N - 1))
              * sqrt((a + 1) * (N - 1) / (b + N - 1)) * last)
    return _checked(last, second)


# Region fills --------------------------------------------------------------

def _left_width(plan: PartitionPlan, N: int) -> int:
    return (N + 1) // 2 if plan.symmetric else plan.N2


def fill_p1_forward(params, plan: PartitionPlan, R: np.ndarray, stop=None) -> None:
    """Fill rows ``0..M`` of columns ``2..stop-1`` by the forward x-recurrence.

    ``stop`` defaults to ``N2`` (or the middle column inclusive on the
    symmetric path).
    """
    p = as_params(params)
    stop = _left_width(plan, p.size) if stop is None else stop
    rows = slice(0, plan.M + 1)
    n = np.arange(plan.M + 1, dtype=np.float64)
    for x in range(2, stop):
        c = mxd_coeffs(p, x, n)
        R[rows, x] = (c.nu1 + c.nu2) * R[rows, x - 1] + c.nu3 * R[rows, x - 2]


def fill_p2_backward(params, plan: PartitionPlan, R: np.ndarray) -> None:
    """Fill rows ``0..M`` of columns ``N-3`` down to ``N2`` backward."""
    p = as_params(params)
    N = p.size
    rows = slice(0, plan.M + 1)
    n = np.arange(plan.M + 1, dtype=np.float64)
    for x in range(N - 1, plan.N2 + 1, -1):
        c = mxd_coeffs(p, x, n)
        if c.nu3 == 0:
            raise ZeroDivisionError(f"nu3 vanishes at x={x}")
        R[rows, x - 2] = (R[rows, x] - (c.nu1 + c.nu2) * R[rows, x - 1]) / c.nu3


CUTOFF_RULES = ("auto", "degree", "coordinate")


def _degree_cut(cur, prev1, prev2, threshold):
    # the two previous degrees are below the threshold and the value grows
    hit = np.flatnonzero((prev1 < cur) & (prev1 < threshold) & (prev2 < threshold))
    return int(hit[0]) if hit.size else None


def _coordinate_cut(cur, threshold):
    # along the scan: two consecutive values below the threshold, then growth;
    # requiring two rules out isolated small values at sign changes
    hit = np.flatnonzero((cur[1:-1] < cur[2:]) & (cur[1:-1] < threshold)
                         & (cur[:-2] < threshold))
    return int(hit[0]) + 2 if hit.size else None


def resolve_cutoff(params, cutoff: str = "auto") -> str:
    if cutoff not in CUTOFF_RULES:
        raise ValueError(f"cutoff must be one of {CUTOFF_RULES}")
    if cutoff == "auto":
        # on the negative branch the row support widens with degree, so small
        # values legitimately grow along n and only the coordinate scan is safe
        return "coordinate" if as_params(params).negative else "degree"
    return cutoff


def fill_p3_p4_ndirection(params, plan: PartitionPlan, R: np.ndarray,
                          threshold: float = DEFAULT_THRESHOLD, deadline=None,
                          cutoff: str = "auto") -> np.ndarray:
    """Fill degrees ``M+1..N-1`` by the n-recurrence with the P6 cutoff.

    Each half is scanned from the centre outward (P3: ``N2-1`` down to 0,
    P4: ``N2`` up to ``N-1``); the first hit and the rest of that scan are
    set to 0. The halves are independent. A hit is, for ``cutoff``:

    ``"degree"``
        a coordinate whose values at degrees ``n-1`` and ``n-2`` are below
        ``threshold`` and where degree ``n`` is larger than degree ``n-1``;
    ``"coordinate"``
        a coordinate preceded in the scan by two values below ``threshold``
        and larger than its predecessor;
    ``"auto"``
        ``"degree"`` on the positive branch, ``"coordinate"`` on the negative.

    Returns the boolean mask of entries zeroed by the cutoff.
    """
    p = as_params(params)
    by_degree = resolve_cutoff(p, cutoff) == "degree"
    N = p.size
    dl = _deadline(deadline)
    width = _left_width(plan, N)
    scans = [np.arange(width - 1, -1, -1)]
    if not plan.symmetric:
        scans.append(np.arange(plan.N2, N))
    cols = np.arange(width) if plan.symmetric else np.arange(N)
    x = cols.astype(np.float64)
    cut = np.zeros((N, N), dtype=bool)
    for k in range(plan.M + 1, N):
        c = mnd_coeffs(p, k, x)
        row = (c.kappa1 * c.kappa2) * R[k - 1, cols] + c.kappa3 * R[k - 2, cols]
        for scan in scans:
            cur = np.abs(row[scan])
            if by_degree:
                i = _degree_cut(cur, np.abs(R[k - 1, scan]), np.abs(R[k - 2, scan]), threshold)
            else:
                i = _coordinate_cut(cur, threshold)
            if i is not None:
                row[scan[i:]] = 0.0
                cut[k, scan[i:]] = True
        R[k, cols] = row
        if k % 256 == 0:
            dl.check()
    return cut


def seam_deviation(params, threshold: float = DEFAULT_THRESHOLD) -> float:
    """Disagreement of the forward and backward x-recurrences at column ``N2``.

    Rows ``0..M`` are continued forward one column past P1 and compared with
    the backward values of P2. Each row's difference is scaled by that row's
    largest magnitude; the maximum over rows is returned.
    """
    p = as_params(params)
    N = p.size
    plan = partition_plan(p, symmetric=False)
    if plan.N2 < 2:
        return 0.0
    R = np.zeros((N, N))
    h00, h0n = initial_values(p)
    R[:, 0], R[:, 1] = initial_set_p1(p, h00)
    fwd = R.copy()
    R[:, N - 1], R[:, N - 2] = initial_set_p2(p, h0n)
    fill_p2_backward(p, plan, R)
    fill_p1_forward(p, plan, fwd, stop=plan.N2 + 1)
    rows = slice(0, plan.M + 1)
    scale = np.maximum(np.abs(R[rows, plan.N2:]).max(axis=1),
                       np.abs(fwd[rows, :plan.N2 + 1]).max(axis=1))
    diff = np.abs(fwd[rows, plan.N2] - R[rows, plan.N2])
    return float((diff / scale).max())


def generate_proposed(params, threshold: float = DEFAULT_THRESHOLD,
                      symmetric=None, deadline=None, cutoff: str = "auto") -> BasisMatrix:
    """Generate the weighted Hahn basis by the composed recurrence.

    Parameters
    ----------
    params : HahnParams or tuple
        ``(alpha, beta, N)``; either admissible branch.
    threshold : float
        Magnitude below which decaying high-degree coefficients may be cut.
    symmetric : bool, optional
        Use the reflection path. Defaults to ``alpha == beta``; pass False
        to force the general path.
    deadline : float or Deadline, optional
        Time limit in seconds.
    cutoff : {"auto", "degree", "coordinate"}
        Direction in which coefficient growth is detected; see
        :func:`fill_p3_p4_ndirection`.

    Returns
    -------
    BasisMatrix
        ``info`` holds ``p6_mask`` (entries zeroed by the cutoff),
        ``p6_zeros`` and the partition plan.
    """
    p = as_params(params)
    N = p.size
    plan = partition_plan(p, symmetric)
    dl = _deadline(deadline)

    h00, h0n = initial_values(p)
    if not (math.isfinite(h00) and math.isfinite(h0n)):
        raise GenerationError("non-finite initial values")
    R = np.zeros((N, N))
    rows = slice(0, plan.M + 1)
    col0, col1 = initial_set_p1(p, h00)
    R[rows, 0], R[rows, 1] = col0[rows], col1[rows]
    fill_p1_forward(p, plan, R)
    if not plan.symmetric:
        last, second = initial_set_p2(p, h0n)
        R[rows, N - 1], R[rows, N - 2] = last[rows], second[rows]
        fill_p2_backward(p, plan, R)
    dl.check()
    with np.errstate(over="ignore", invalid="ignore"):
        cut = fill_p3_p4_ndirection(p, plan, R, threshold, dl, cutoff)

    if plan.symmetric:
        sign = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)[:, None]
        half = N // 2
        R[:, N - half:] = sign * R[:, :half][:, ::-1]
        cut[:, N - half:] = cut[:, :half][:, ::-1]
        if N % 2:
            R[1::2, half] = 0.0
    info = {"p6_mask": cut, "p6_zeros": int(cut.sum()), "plan": plan,
            "threshold": threshold, "cutoff": resolve_cutoff(p, cutoff)}
    return BasisMatrix(p, R, Generator.PROPOSED, info=info)
