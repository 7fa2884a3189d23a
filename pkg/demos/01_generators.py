"""Where each generator stops being usable.

Builds the basis at growing sizes for alpha = beta = 100 and prints the
orthogonality error, or the reason generation failed.
"""

import time

from hahnpoly import HahnParams, orthogonality_error
from hahnpoly.analysis import GENERATION_FAILURES, generate

SIZES = [32, 128, 512, 1024, 1309, 1400, 2048]

print(f"{'N':>6}" + "".join(f"{g:>22}" for g in ("ttrrnd", "ttrrxd", "rrgsop", "proposed")))
for N in SIZES:
    cells = []
    for g in ("ttrrnd", "ttrrxd", "rrgsop", "proposed"):
        t0 = time.perf_counter()
        try:
            B = generate(g, HahnParams(100, 100, N))
        except GENERATION_FAILURES as exc:
            cells.append(type(exc).__name__)
            continue
        cells.append(f"{orthogonality_error(B):.1e} ({time.perf_counter() - t0:.2f}s)")
    print(f"{N:>6}" + "".join(f"{c:>22}" for c in cells))
