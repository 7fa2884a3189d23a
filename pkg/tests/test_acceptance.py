"""Acceptance criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hahnpoly.analysis import (max_size_sweep, reconstruction_curve, synthetic_image,
                               transform_variances)
from hahnpoly.baselines import generate_rrgsop
from hahnpoly.core import HahnParams, Status, orthogonality_error
from hahnpoly.proposed import (generate_proposed, initial_value_00, initial_value_0N1,
                               seam_deviation)
from hahnpoly.special import oracle_basis

from reference_variances import PAIRS, VARIANCES

RESULTS: list[str] = []
CRITERIA = {}


def criterion(key, title):
    def wrap(fn):
        CRITERIA[key] = (title, fn)
        return fn
    return wrap


def evaluate(key):
    title, fn = CRITERIA[key]
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] {key}. {title}: {detail} ({time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line, flush=True)
    return ok, line


@criterion("1", "oracle equivalence")
def oracle_equivalence():
    t0 = time.perf_counter()
    dev = tail = 0.0
    for a, b in [(0, 0), (5, 2), (20, 20), (100, 50)]:
        for N in (8, 16, 32, 48):
            B = generate_proposed(HahnParams(a, b, N))
            O = oracle_basis((a, b, N))
            mask = B.info["p6_mask"]
            d = np.abs(B.values - O)
            d[mask] = 0
            dev = max(dev, d.max())
            tail = max(tail, np.abs(O[mask]).max(initial=0.0))
    elapsed = time.perf_counter() - t0
    ok = dev < 1e-8 and tail < 1e-6 and elapsed < 30
    return ok, f"max deviation {dev:.2e}, max |oracle| on cut entries {tail:.2e}"


def _table_deviation(rhos):
    worst = 0.0
    for block, rho in zip((0, 6), rhos):
        for c, pair in enumerate(PAIRS):
            s = transform_variances(generate_proposed(HahnParams(*pair, 16)), rho).sorted_variances
            worst = max(worst, np.abs(s - VARIANCES[:, block + c]).max())
    return worst


@criterion("2", "variance table at N=16")
def variance_table():
    t0 = time.perf_counter()
    as_labelled = _table_deviation((0.85, 0.95))
    swapped = _table_deviation((0.95, 0.85))
    ok = as_labelled <= 1e-3 and time.perf_counter() - t0 < 5
    return ok, (f"max deviation {as_labelled:.3f} with rho as labelled; "
                f"{swapped:.4f} with the two rho blocks exchanged")


@criterion("3", "orthogonality at N=4000")
def orthogonality_at_scale():
    parts, ok = [], True
    for a, b in [(100, 100), (400, 200)]:
        t0 = time.perf_counter()
        B = generate_proposed(HahnParams(a, b, 4000))
        el = time.perf_counter() - t0
        err = orthogonality_error(B)
        del B
        ok &= err < 1e-5 and el < 60
        parts.append(f"({a},{b}) error {err:.2e} in {el:.2f}s")
    return ok, "; ".join(parts)


@criterion("4", "maximum stable size ordering")
def size_ordering():
    prop = max_size_sweep(100, 100, "proposed", max_size=8192)
    rr = max_size_sweep(100, 100, "rrgsop", rel_tol=0.25)
    xd = max_size_sweep(100, 100, "ttrrxd")
    nd = max_size_sweep(100, 100, "ttrrnd")
    rr_skew = max_size_sweep(100, 50, "rrgsop")

    def size(r):
        return 0 if r.max_stable_size is None else r.max_stable_size

    nd_ok = nd.status is Status.FAILED or size(nd) <= 150
    ok = (size(prop) > size(rr) > size(xd) > size(nd) and nd_ok
          and abs(size(xd) - 1309) <= 0.05 * 1309 and rr_skew.status is Status.FAILED)
    fmt = lambda r: "Failed" if r.max_stable_size is None else str(r.max_stable_size)
    return ok, (f"Proposed {fmt(prop)} (search capped at 8192), RRGSOP {fmt(rr)}, "
                f"TTRRxd {fmt(xd)}, TTRRnd {fmt(nd)}; RRGSOP(100,50) {fmt(rr_skew)}")


@criterion("5", "reconstruction at 512x512")
def reconstruction():
    t0 = time.perf_counter()
    img = synthetic_image(512, seed=0)
    keeps = [0.25, 0.5, 0.75, 1.0]
    params = [(a, a, 512) for a in (50, 100, 200)]
    rows = reconstruction_curve(img, params, "proposed", keeps)
    full_ok = all(r["nmse"] < 1e-10 for r in rows if r["keep"] == 1.0)
    mono = True
    for a in (50, 100, 200):
        e = [r["nmse"] for r in rows if r["alpha"] == a]
        mono &= all(x >= y for x, y in zip(e, e[1:]))
    prop_half = next(r["nmse"] for r in rows if r["alpha"] == 200 and r["keep"] == 0.5)
    xd = reconstruction_curve(img, [(200, 200, 512)], "ttrrxd", [0.5])[0]
    xd_worse = xd["status"] == "Failed" or xd["nmse"] > 10 * prop_half
    worst_full = max(r["nmse"] for r in rows if r["keep"] == 1.0)
    ok = full_ok and mono and xd_worse and time.perf_counter() - t0 < 120
    xd_text = "Failed" if xd["status"] == "Failed" else f"{xd['nmse']:.3e}"
    # informational: the gap only opens once TTRRxd loses rows to underflow
    big = synthetic_image(2048, seed=0)
    e = [reconstruction_curve(big, [(200, 200, 2048)], g, [1.0])[0]["nmse"]
         for g in ("proposed", "ttrrxd")]
    return ok, (f"full-order NMSE <= {worst_full:.1e}, monotone {mono}; at alpha=beta=200 keep 0.5 "
                f"TTRRxd {xd_text} vs Proposed {prop_half:.3e}; "
                f"N=2048 full order (informational) TTRRxd {e[1]:.1e} vs Proposed {e[0]:.1e}")


def _random_configs(seed=0, count=20):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count - 1):
        a, b = rng.uniform(0, 300, 2)
        out.append(HahnParams(a, b, int(rng.integers(4, 257))))
    N = int(rng.integers(4, 257))
    a, b = -N - rng.uniform(1, 300, 2)
    out.append(HahnParams(a, b, N))
    return out


@criterion("6", "symmetry, seam and row-norm invariants")
def invariants():
    t0 = time.perf_counter()
    sym = seam = norm = 0.0
    failing = []
    for p in _random_configs():
        N = p.size
        S = generate_proposed(HahnParams(p.alpha, p.alpha, N)).values
        sign = np.where(np.arange(N) % 2 == 0, 1.0, -1.0)[:, None]
        s = np.abs(S - sign * S[:, ::-1]).max()
        m = seam_deviation(p)
        B = generate_proposed(p)
        clean = ~B.info["p6_mask"].any(axis=1)
        r = np.abs(np.linalg.norm(B.values[clean], axis=1) - 1).max(initial=0.0)
        if not (s < 1e-10 and m < 1e-6 and r < 1e-6):
            failing.append(f"({p.alpha:.1f},{p.beta:.1f},{N})")
        sym, seam, norm = max(sym, s), max(seam, m), max(norm, r)
    ok = not failing and time.perf_counter() - t0 < 60
    detail = f"max symmetry {sym:.1e}, seam {seam:.1e}, row norm {norm:.1e}"
    if failing:
        detail += f"; {len(failing)}/20 configurations fail: " + " ".join(failing)
    return ok, detail


@criterion("7", "initial values finite")
def initial_values_grid():
    t0 = time.perf_counter()
    bad = []
    for N in (1000, 4000, 8000):
        for a in (0, 10, 100, 500):
            for b in (0, 10, 100, 500):
                h = initial_value_00((a, b, N))
                hn = initial_value_0N1((a, b, N), h)
                if not (math.isfinite(h) and math.isfinite(hn)):
                    bad.append((a, b, N))
    ok = not bad and time.perf_counter() - t0 < 1
    return ok, f"{48 - len(bad)}/48 grid points finite"


@criterion("S", "Proposed at least 10x faster than RRGSOP (N=1024, alpha=beta=100)")
def speed():
    def best(fn):
        times = []
        for _ in range(3):
            t0 = time.perf_counter()
            fn(HahnParams(100, 100, 1024))
            times.append(time.perf_counter() - t0)
        return min(times)
    tp, tr = best(generate_proposed), best(generate_rrgsop)
    return tr >= 10 * tp, f"Proposed {tp:.3f}s, RRGSOP {tr:.3f}s, ratio {tr / tp:.1f}"


@pytest.mark.parametrize("key", list(CRITERIA))
def test_criterion(key):
    ok, line = evaluate(key)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k)[0] for k in CRITERIA]
    sys.exit(0 if all(results) else 1)
