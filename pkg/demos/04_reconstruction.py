"""Moment truncation on a synthetic 512x512 texture.

Writes the reconstructions to demos/out/ as PGM files.
"""

from pathlib import Path

from hahnpoly import HahnParams, forward_moments, generate_proposed, inverse_moments, nmse
from hahnpoly.analysis import synthetic_image
from hahnpoly.io import save_pgm

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
img = synthetic_image(512, seed=0)
save_pgm(out / "original.pgm", img)
for a in (50, 200):
    B = generate_proposed(HahnParams(a, a, 512))
    eta = forward_moments(img, B)
    for keep in (0.125, 0.25, 0.5, 1.0):
        k = int(keep * 512)
        rec = inverse_moments(eta, B, keep_n=k, keep_m=k)
        save_pgm(out / f"rec_a{a}_k{k}.pgm", rec)
        print(f"alpha=beta={a:3d} keep {k:3d}x{k:<3d} nmse={nmse(img, rec):.3e}")
