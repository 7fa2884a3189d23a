"""Special functions: log-gamma, Pochhammer symbol, Hahn weight and norm.

Also provides an exact-arithmetic evaluation of the terminating
hypergeometric closed form, used as ground truth for small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .core import DomainError, HahnParams, as_params

# Largest argument for which Gamma is finite in double precision (171.62...);
# the integer bound is the conservative guard.
GAMMA_MAX_ARG = 171.0


def log_gamma(a):
    """Natural logarithm of the gamma function for ``a > 0``.

    Accepts scalars or arrays.

    Raises
    ------
    DomainError
        If any ``a <= 0``.
    """
    arr = np.asarray(a, dtype=np.float64)
    if np.any(~(arr > 0)):
        raise DomainError("log_gamma requires a > 0")
    out = gammaln(arr)
    return float(out) if out.ndim == 0 else out


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 for ``k == 0``.

    Returns exactly 0 when a factor is zero within 1e-12.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    p = 1.0
    for i in range(int(k)):
        term = a + i
        if abs(term) < 1e-12:
            return 0.0
        p *= term
        if not math.isfinite(p):
            raise OverflowError(f"pochhammer({a}, {k}) overflows")
    return p


def _gamma(z: float) -> float:
    if z > GAMMA_MAX_ARG:
        raise OverflowError(f"Gamma({z:g}) exceeds the double range")
    return math.gamma(z)


def weight(params, x: int) -> float:
    """Weight ``w(x) = G(N+a-x) G(b+x+1) / (G(N-x) G(x+1))``."""
    a, b, N = as_params(params)
    return _gamma(N + a - x) / _gamma(N - x) * (_gamma(b + x + 1) / _gamma(x + 1))


def log_weight(params, x):
    """Logarithm of :func:`weight`, finite for large sizes (positive branch)."""
    a, b, N = as_params(params)
    x = np.asarray(x, dtype=np.float64)
    out = gammaln(N + a - x) + gammaln(b + x + 1) - gammaln(N - x) - gammaln(x + 1)
    return float(out) if out.ndim == 0 else out


def norm(params, n: int) -> float:
    """Squared norm ``rho(n)`` of the unweighted polynomial of degree ``n``."""
    a, b, N = as_params(params)
    v = (_gamma(a + n + 1) / _gamma(n + 1) * (_gamma(b + n + 1) / _gamma(N - n))
         * (pochhammer(a + b + n + 1, N) / (2 * n + a + b + 1)))
    if not math.isfinite(v) or v == 0.0:
        raise OverflowError(f"rho({n}) is out of the double range")
    return v


def log_norm(params, n):
    """Logarithm of :func:`norm` (positive branch), vectorized over ``n``."""
    a, b, N = as_params(params)
    n = np.asarray(n, dtype=np.float64)
    out = (gammaln(a + n + 1) + gammaln(b + n + 1)
           + gammaln(a + b + n + 1 + N) - gammaln(a + b + n + 1)
           - np.log(2 * n + a + b + 1) - gammaln(n + 1) - gammaln(N - n))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeightNormTable:
    params: HahnParams
    weights: np.ndarray
    norms: np.ndarray


def weight_norm_table(params) -> WeightNormTable:
    """Tabulate ``w(x)`` and ``rho(n)`` in linear space (small sizes only)."""
    p = as_params(params)
    N = p.size
    w = np.array([weight(p, x) for x in range(N)])
    r = np.array([norm(p, n) for n in range(N)])
    return WeightNormTable(p, w, r)


# Exact-arithmetic oracle ---------------------------------------------------

def _rpoch(a: Fraction, k: int) -> Fraction:
    p = Fraction(1)
    for i in range(k):
        p *= a + i
    return p


def _series(n: int, x: int, a: Fraction, b: Fraction, N: int) -> Fraction:
    # 3F2(-n, -x, n+1+a+b; b+1, 1-N; 1), truncated where (-n)_k (-x)_k vanish
    s, t = Fraction(0), Fraction(1)
    top = min(n, x)
    for k in range(top + 1):
        s += t
        if k == top:
            break
        t = t * (k - n) * (k - x) * (k + n + 1 + a + b) / ((k + b + 1) * (k + 1 - N) * (k + 1))
    return s


def _hahn_exact(n: int, x: int, a: Fraction, b: Fraction, N: int) -> Fraction:
    pref = (-1) ** n * _rpoch(b + 1, n) * _rpoch(Fraction(N - n), n) / math.factorial(n)
    return pref * _series(n, x, a, b, N)


def hahn_3f2_oracle(params, n: int, x: int) -> float:
    """Unweighted Hahn polynomial ``H_n(x)`` from its hypergeometric form.

    Evaluated in exact rational arithmetic; float parameters are converted
    exactly, so no rounding happens before the final conversion.
    """
    p = as_params(params)
    if not (0 <= n < p.size and 0 <= x < p.size):
        raise IndexError("n and x must lie in [0, N)")
    return float(_hahn_exact(n, x, Fraction(p.alpha), Fraction(p.beta), p.size))


@lru_cache(maxsize=64)
def _oracle_cached(alpha: float, beta: float, N: int) -> np.ndarray:
    a, b = Fraction(alpha), Fraction(beta)
    # w(x)/w(0), w(0)/rho(0) and rho(n)/rho(0) as rational products; these
    # forms hold on both parameter branches.
    wx = [_rpoch(b + 1, x) * _rpoch(Fraction(N - x), x)
          / (_rpoch(N + a - x, x) * math.factorial(x)) for x in range(N)]
    w0 = _rpoch(a + 1, N - 1) / _rpoch(a + b + 2, N - 1)
    R = np.zeros((N, N))
    for n in range(N):
        rn = (_rpoch(a + 1, n) * _rpoch(b + 1, n) * _rpoch(a + b + N + 1, n)
              * _rpoch(Fraction(N - n), n) * (a + b + 1)
              / (_rpoch(a + b + 1, n) * math.factorial(n) * (2 * n + a + b + 1)))
        for x in range(N):
            h = _hahn_exact(n, x, a, b, N)
            if h:
                R[n, x] = math.copysign(math.sqrt(h * h * wx[x] * w0 / rn), h)
    R.setflags(write=False)
    return R


def oracle_basis(params) -> np.ndarray:
    """Weighted orthonormal matrix built entirely from the exact closed form.

    Intended for ``N <= 64``. The returned array is read-only and cached.
    """
    p = as_params(params)
    if p.size > 64:
        raise ValueError("oracle is limited to N <= 64")
    return _oracle_cached(p.alpha, p.beta, p.size)
