"""Energy compaction under a first-order Markov covariance model.

Prints the N=16 transform variances for two parameter pairs and the
restriction error J_m at N=256, where small (alpha, beta) concentrate energy
at first and larger ones catch up later.
"""

import numpy as np

from hahnpoly import HahnParams, generate_proposed, transform_variances

np.set_printoptions(precision=3, suppress=True, linewidth=120)
for ab in [(20, 20), (200, 200)]:
    for rho in (0.85, 0.95):
        tab = transform_variances(generate_proposed(HahnParams(*ab, 16)), rho)
        print(f"{ab} rho={rho}: {tab.sorted_variances}")

J = {ab: transform_variances(generate_proposed(HahnParams(*ab, 256)), 0.98).restriction
     for ab in [(10, 0), (200, 150)]}
for m in (8, 32, 64, 128, 192, 224):
    print(f"m={m:3d}  J(10,0)={J[(10, 0)][m]:.3e}  J(200,150)={J[(200, 150)][m]:.3e}")
