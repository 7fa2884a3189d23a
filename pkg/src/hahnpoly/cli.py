"""Command-line interface: ``python -m hahnpoly <command> [options]``.

Every command prints one summary line on stdout. Detailed results go to
``--output`` when it is given.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import io as hio
from .analysis import (GENERATION_FAILURES, generate, max_size_sweep,
                       reconstruction_curve, synthetic_image, transform_variances)
from .core import (DimensionError, DomainError, Generator, HahnParams, SizeError,
                   orthogonality_error)
from .moments import forward_moments, inverse_moments, nmse
from .proposed import DEFAULT_THRESHOLD
from .special import oracle_basis

GENERATOR_CHOICES = [g.value.lower() for g in Generator]


def _add_common(p, multi=False):
    nargs = "+" if multi else None
    p.add_argument("--alpha", type=float, default=[100.0] if multi else 100.0, nargs=nargs)
    p.add_argument("--beta", type=float, default=None, nargs=nargs,
                   help="defaults to --alpha")
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--gen", "--generator", dest="gen", default="proposed",
                   type=str.lower, choices=GENERATOR_CHOICES)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--error-budget", type=float, default=1e-5)
    p.add_argument("--input", type=Path)
    p.add_argument("--output", type=Path)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hahnpoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="generate a basis matrix")
    _add_common(p)
    p.add_argument("--format", choices=["auto", "csv", "bin"], default="auto")

    p = sub.add_parser("moments", help="forward moment transform of an image")
    _add_common(p)

    p = sub.add_parser("reconstruct", help="truncate moments and reconstruct")
    _add_common(p)
    p.add_argument("--keep", type=float, default=1.0)

    p = sub.add_parser("sweep", help="maximum stable size search")
    _add_common(p)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--rel-tol", type=float, default=0.0)

    p = sub.add_parser("compaction", help="transform variances under a covariance model")
    _add_common(p)
    p.add_argument("--rho", type=float, default=0.85)

    p = sub.add_parser("restriction", help="restriction error curve")
    _add_common(p)
    p.add_argument("--rho", type=float, default=0.98)

    p = sub.add_parser("nmse-curve", help="reconstruction error against kept moments")
    _add_common(p, multi=True)
    p.add_argument("--keep", type=float, nargs="+", default=[0.25, 0.5, 0.75, 1.0])

    p = sub.add_parser("oracle-check", help="compare a generator with the exact closed form")
    _add_common(p)
    return parser


def _params(args, default_size):
    beta = args.alpha if args.beta is None else args.beta
    return HahnParams(args.alpha, beta, args.size if args.size is not None else default_size)


def _gen_kwargs(args):
    return {"threshold": args.threshold} if Generator.parse(args.gen) is Generator.PROPOSED else {}


def _image(args, default_size=256):
    if args.input is not None:
        img = hio.load_pgm(args.input)
    else:
        img = synthetic_image(args.size or default_size, args.seed)
    if img.shape[0] != img.shape[1]:
        raise DimensionError(f"image must be square, got {img.shape[1]}x{img.shape[0]}")
    return img


def _write(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def cmd_basis(args):
    p = _params(args, 256)
    t0 = time.perf_counter()
    basis = generate(args.gen, p, **_gen_kwargs(args))
    elapsed = time.perf_counter() - t0
    report = {"generator": basis.generator.value, "alpha": p.alpha, "beta": p.beta,
              "size": p.size, "orthogonality_error": orthogonality_error(basis),
              "p6_zeros": basis.info.get("p6_zeros", 0), "reliable": basis.reliable,
              "elapsed_seconds": elapsed}
    if args.output:
        fmt = args.format
        if fmt == "auto":
            fmt = "csv" if args.output.suffix.lower() == ".csv" else "bin"
        data = hio.matrix_to_csv(basis.values) if fmt == "csv" else hio.write_matrix(basis.values)
        _write(args.output, data)
        _write(args.output.with_name(args.output.name + ".report.csv"), hio.write_csv([report]))
    print(f"basis {report['generator']} alpha={p.alpha:g} beta={p.beta:g} N={p.size} "
          f"orthogonality_error={report['orthogonality_error']:.3e} "
          f"p6_zeros={report['p6_zeros']} elapsed={elapsed:.3f}s")


def cmd_moments(args):
    img = _image(args)
    p = _params(args, img.shape[0])
    basis = generate(args.gen, HahnParams(p.alpha, p.beta, img.shape[0]), **_gen_kwargs(args))
    eta = forward_moments(img, basis)
    if args.output:
        _write(args.output, hio.write_matrix(eta.coefficients))
    ratio = float(np.sum(eta.coefficients ** 2) / np.sum(img ** 2))
    print(f"moments N={img.shape[0]} energy_ratio={ratio:.15f}")


def cmd_reconstruct(args):
    img = _image(args)
    N = img.shape[0]
    p = _params(args, N)
    basis = generate(args.gen, HahnParams(p.alpha, p.beta, N), **_gen_kwargs(args))
    m = int(round(args.keep * N))
    rec = inverse_moments(forward_moments(img, basis), basis, keep_n=m, keep_m=m)
    err = nmse(img, rec)
    row = {"alpha": p.alpha, "beta": p.beta, "size": N, "generator": basis.generator.value,
           "keep": args.keep, "nmse": err}
    if args.output:
        _write(args.output, hio.write_pgm(rec))
        _write(args.output.with_suffix(".csv"), hio.matrix_to_csv(rec))
        _write(args.output.with_name(args.output.name + ".report.csv"), hio.write_csv([row]))
    print(f"reconstruct N={N} keep={args.keep:g} nmse={err:.6e}")


def cmd_sweep(args):
    beta = args.alpha if args.beta is None else args.beta
    rep = max_size_sweep(args.alpha, beta, args.gen, args.time_budget, args.error_budget,
                         max_size=args.max_size, rel_tol=args.rel_tol)
    if args.output:
        _write(args.output, hio.write_csv([rep.as_row()]))
    size = "Failed" if rep.max_stable_size is None else rep.max_stable_size
    print(f"sweep {rep.generator.value} alpha={args.alpha:g} beta={beta:g} "
          f"max_stable_size={size} orthogonality_error={rep.orthogonality_error:.3e}")


def _compaction(args, default_size):
    p = _params(args, default_size)
    basis = generate(args.gen, p, **_gen_kwargs(args))
    return p, transform_variances(basis, args.rho)


def cmd_compaction(args):
    p, tab = _compaction(args, 16)
    rows = [{"l": l, "variance": v, "sorted_variance": s, "restriction": j}
            for l, (v, s, j) in enumerate(zip(tab.variances, tab.sorted_variances, tab.restriction))]
    if args.output:
        _write(args.output, hio.write_csv(rows))
    print(f"compaction N={p.size} rho={args.rho:g} sigma0={tab.variances[0]:.3f} "
          f"trace={tab.variances.sum():.6f}")


def cmd_restriction(args):
    p, tab = _compaction(args, 256)
    rows = [{"m": m, "restriction": j} for m, j in enumerate(tab.restriction)]
    if args.output:
        _write(args.output, hio.write_csv(rows))
    half = tab.restriction[p.size // 8]
    print(f"restriction N={p.size} rho={args.rho:g} J[{p.size // 8}]={half:.6e}")


def cmd_nmse_curve(args):
    img = _image(args, 512)
    N = img.shape[0]
    betas = args.alpha if args.beta is None else args.beta
    if len(betas) != len(args.alpha):
        raise ValueError("--alpha and --beta need the same number of values")
    params = [HahnParams(a, b, N) for a, b in zip(args.alpha, betas)]
    rows = reconstruction_curve(img, params, args.gen, args.keep)
    if args.output:
        _write(args.output, hio.write_csv(rows))
    worst = max((r["nmse"] for r in rows if r["keep"] == 1.0), default=math.nan)
    failed = sum(r["status"] == "Failed" for r in rows)
    print(f"nmse-curve N={N} configs={len(params)} rows={len(rows)} failed={failed} "
          f"full_order_max_nmse={worst:.3e}")


def cmd_oracle_check(args):
    p = _params(args, 32)
    if p.size > 64:
        raise SizeError("oracle-check is limited to --size <= 64")
    basis = generate(args.gen, p, **_gen_kwargs(args))
    oracle = oracle_basis(p)
    mask = basis.info.get("p6_mask", np.zeros((p.size, p.size), dtype=bool))
    dev = np.abs(basis.values - oracle)
    dev[mask] = 0.0
    tail = float(np.abs(oracle[mask]).max()) if mask.any() else 0.0
    row = {"generator": basis.generator.value, "alpha": p.alpha, "beta": p.beta,
           "size": p.size, "max_deviation": float(dev.max()), "max_oracle_in_p6": tail}
    if args.output:
        _write(args.output, hio.write_csv([row]))
    print(f"oracle-check {row['generator']} alpha={p.alpha:g} beta={p.beta:g} N={p.size} "
          f"max_deviation={row['max_deviation']:.3e} max_oracle_in_p6={tail:.3e}")


COMMANDS = {
    "basis": cmd_basis, "moments": cmd_moments, "reconstruct": cmd_reconstruct,
    "sweep": cmd_sweep, "compaction": cmd_compaction, "restriction": cmd_restriction,
    "nmse-curve": cmd_nmse_curve, "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (GENERATION_FAILURES + (DomainError, SizeError, DimensionError,
                                   hio.FormatError, ValueError, OSError)) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
