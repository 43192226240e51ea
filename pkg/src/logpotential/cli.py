"""Command-line front end emitting CSV artifacts for every module.

Exit codes: 0 success, 2 usage/validation, 3 numerical non-convergence,
4 mathematical contract violation.  Every CSV artifact carries a provenance
comment line ``# logpotential v<version> cmd=<name> params=<canonical>``.
A config file of ``key=value`` lines (``#`` comments) may supply defaults;
explicit flags override it.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .analysis import (
    critical_exponents,
    kernel_lr_norm,
    log_modulus_check,
    make_rough_field,
)
from .asymptotics import (
    REPORT_CSV_HEADER,
    verify_infinity,
    verify_origin,
)
from .kernels import KernelParams, tabulate_profile
from .quadrature import AccelerationError, NonConvergenceError
from .spectral import (
    PolynomialAmbiguityError,
    SpectralField,
    SpectralGrid,
    SymbolZeroError,
    read_field_csv,
    solve_homogeneous,
    solve_inhomogeneous,
    write_field_binary,
)
from .kernels import inhomogeneous_symbol, homogeneous_symbol
from .spectral import apply_multiplier
from .symbols import build_partition, make_descriptor, synthesize_l1_kernel

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_CONTRACT = 4

_SYMBOL_ALIASES = {
    "bridge": "bridge_ratio",
    "bridge_ratio": "bridge_ratio",
    "theta_lambda": "theta_lambda",
    "theta1": "theta1",
    "theta2": "theta2",
    "lit_fwd": "lit_ratio_fwd",
    "lit_bwd": "lit_ratio_bwd",
}


def _provenance(cmd: str, args: argparse.Namespace, keys) -> str:
    parts = []
    for k in keys:
        v = getattr(args, k.replace("-", "_"), None)
        if v is not None:
            parts.append(f"{k}={v}")
    return f"# logpotential v{__version__} cmd={cmd} params={';'.join(parts)}"


def _load_config(path):
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, val = (t.strip() for t in line.split("=", 1))
            tokens.extend([f"--{key.replace('_', '-')}", val])
    return tokens


def _params_from(args) -> KernelParams:
    return KernelParams(args.n, args.s, getattr(args, "lam"))


def _add_param_flags(sp, need_s=True):
    sp.add_argument("--n", type=int, required=True, help="spatial dimension")
    if need_s:
        sp.add_argument("--s", type=float, required=True, help="order parameter s > 0")
    sp.add_argument(
        "--lambda", dest="lam", type=float, required=True,
        help="mass shift lambda > 1",
    )


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="logpotential",
        description="logarithmic Bessel/Riesz potential kernels: evaluation, "
        "asymptotics, dyadic synthesis, spectral solvers and norm checks",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", type=str, default=None,
                        help="key=value defaults file; flags override")
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for randomized fixtures")
        sp.add_argument("--out", type=str, required=True, help="output CSV path")

    sp = sub.add_parser("eval", help="tabulate a radial kernel profile")
    _add_param_flags(sp)
    sp.add_argument("--r-min", type=float, required=True)
    sp.add_argument("--r-max", type=float, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--route", choices=("auto", "heat", "hankel", "laplace"),
                    default="auto")
    common(sp)

    sp = sub.add_parser("asymp", help="verify a near-origin or far-field constant")
    sp.add_argument("--regime", choices=("origin", "infinity"), required=True)
    _add_param_flags(sp)
    sp.add_argument("--r-lo", type=float, default=None)
    sp.add_argument("--r-hi", type=float, default=None)
    sp.add_argument("--points", type=int, default=None)
    common(sp)

    sp = sub.add_parser("solve", help="apply/invert operators on a periodic grid")
    sp.add_argument("--grid", type=int, required=True, help="points per axis")
    sp.add_argument("--box", type=float, required=True, help="box length")
    sp.add_argument("--equation", choices=("inhom", "hom"), required=True)
    _add_param_flags(sp)
    sp.add_argument("--input", type=str, default=None,
                    help="field CSV (n=1); default: generated Gaussian bump")
    sp.add_argument("--zero-mode-rule", choices=("require_zero_mean", "project"),
                    default="require_zero_mean")
    common(sp)

    sp = sub.add_parser("dyadic", help="annulus-block L1 synthesis of a symbol")
    sp.add_argument("--symbol", choices=sorted(_SYMBOL_ALIASES), required=True)
    _add_param_flags(sp)
    sp.add_argument("--lambda2", dest="lam2", type=float, default=None)
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--j-min", type=int, default=-14)
    sp.add_argument("--j-max", type=int, default=12)
    sp.add_argument("--grid-size", type=int, default=4096)
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)

    sp = sub.add_parser("norms", help="critical L^r integrability of the kernel")
    _add_param_flags(sp)
    sp.add_argument("--r", type=str, default="critical",
                    help="'critical' or an explicit exponent")
    common(sp)

    sp = sub.add_parser("modulus", help="logarithmic modulus of continuity check")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=2.0)
    sp.add_argument("--grid", type=int, default=2**17)
    sp.add_argument("--box", type=float, default=8.0)
    common(sp)

    return ap


def _cmd_eval(args) -> int:
    params = _params_from(args)
    prof = tabulate_profile(params, args.r_min, args.r_max, args.points, args.route)
    header = _provenance(
        "eval", args, ("n", "s", "lam", "r-min", "r-max", "points", "route", "seed")
    )
    prof.write_csv(args.out, header)
    return EXIT_OK if prof.complete else EXIT_NUMERICAL


def _cmd_asymp(args) -> int:
    params = _params_from(args)
    if args.regime == "origin":
        r_lo = args.r_lo if args.r_lo is not None else 1e-8
        r_hi = args.r_hi if args.r_hi is not None else 0.15
        points = args.points if args.points is not None else 70
        prof = tabulate_profile(params, r_lo, r_hi, points, route="heat")
        report = verify_origin(params, prof)
    else:
        r_lo = args.r_lo if args.r_lo is not None else 5.0
        r_hi = args.r_hi if args.r_hi is not None else 40.0
        points = args.points if args.points is not None else 40
        prof = tabulate_profile(params, r_lo, r_hi, points, route="heat")
        report = verify_infinity(params, prof)
    header = _provenance("asymp", args, ("regime", "n", "s", "lam", "seed"))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        fh.write(REPORT_CSV_HEADER + "\n")
        fh.write(report.csv_row() + "\n")
    return EXIT_OK if report.converged else EXIT_NUMERICAL


def _cmd_solve(args) -> int:
    params = _params_from(args)
    grid = SpectralGrid(args.n, args.box, args.grid)
    if args.input is not None:
        field = read_field_csv(args.input, box_length=args.box)
        if field.grid.points_per_axis != args.grid:
            raise ValueError("input field size does not match --grid")
    else:
        if args.n == 1:
            x = grid.axis()
            field = SpectralField(grid, np.exp(-((x - 0.5 * args.box) ** 2)))
        else:
            axes = np.meshgrid(*([grid.axis()] * args.n), indexing="ij")
            r2 = sum((a - 0.5 * args.box) ** 2 for a in axes)
            field = SpectralField(grid, np.exp(-r2))
        if args.equation == "hom":
            field = SpectralField(grid, field.values - field.values.mean())
    if args.equation == "inhom":
        u = solve_inhomogeneous(field, params)
        back = apply_multiplier(u, lambda xi: inhomogeneous_symbol(params, xi))
    else:
        u = solve_homogeneous(field, params, args.zero_mode_rule)
        back = apply_multiplier(u, lambda xi: homogeneous_symbol(params, xi))
    residual = back.values - (
        field.values - field.values.mean() if args.equation == "hom" else field.values
    )
    header = _provenance(
        "solve", args, ("equation", "n", "s", "lam", "grid", "box", "seed")
    )
    if args.n == 1:
        x = grid.axis()
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            fh.write("x,input,solution,residual\n")
            for xv, fv, uv, rv in zip(x, field.values, u.values, residual.ravel()):
                fh.write(f"{xv:.17g},{fv:.17g},{uv:.17g},{rv:.17g}\n")
    else:
        write_field_binary(u, args.out)
        print(f"max residual {np.max(np.abs(residual)):.3e}")
    return EXIT_OK


def _cmd_dyadic(args) -> int:
    symbol_id = _SYMBOL_ALIASES[args.symbol]
    desc = make_descriptor(symbol_id, args.n, args.s, args.lam,
                           lam2=args.lam2, eps=args.eps)
    partition = build_partition(args.j_min, args.j_max)
    blocks = synthesize_l1_kernel(desc, partition, args.grid_size, args.tol)
    header = _provenance(
        "dyadic", args,
        ("symbol", "n", "s", "lam", "lambda2", "eps", "j-min", "j-max",
         "grid-size", "tol", "seed"),
    )
    blocks.write_csv(args.out, header)
    print(
        f"total_l1={blocks.total_l1:.6g} high_slope={blocks.high_slope:.3f} "
        f"low_slope={blocks.low_slope:.3f} converged={blocks.converged}"
    )
    return EXIT_OK


def _cmd_norms(args) -> int:
    params = _params_from(args)
    if args.r == "critical":
        r_exp, _ = critical_exponents(args.n, args.s)
    else:
        r_exp = float(args.r)
    report = kernel_lr_norm(params, r_exp)
    header = _provenance("norms", args, ("n", "s", "lam", "r", "seed"))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        fh.write("n,s,lambda,r,lr_norm,near_origin_part,tail_part,converged\n")
        fh.write(report.csv_row() + "\n")
    return EXIT_OK if report.converged else EXIT_NUMERICAL


def _cmd_modulus(args) -> int:
    s = args.n / (2.0 * args.p)
    params = KernelParams(args.n, s, args.lam)
    grid = SpectralGrid(args.n, args.box, args.grid)
    field = make_rough_field(grid, params, args.p, seed=args.seed)
    report = log_modulus_check(params, args.p, field)
    header = _provenance("modulus", args, ("n", "p", "lam", "grid", "box", "seed"))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        fh.write(f"# fitted_exponent={report.fitted_exponent:.17g}\n")
        fh.write("h,sup_difference\n")
        for h, d in zip(report.h_values, report.sup_differences):
            fh.write(f"{h:.17g},{d:.17g}\n")
    print(f"fitted_exponent={report.fitted_exponent:.6f} bound={-1.0/args.p:.6f}")
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "asymp": _cmd_asymp,
    "solve": _cmd_solve,
    "dyadic": _cmd_dyadic,
    "norms": _cmd_norms,
    "modulus": _cmd_modulus,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # config defaults: splice the file's key=value pairs in front of the
    # explicit flags so the command line wins on conflicts
    if "--config" in argv:
        idx = argv.index("--config")
        try:
            tokens = _load_config(argv[idx + 1])
        except (OSError, ValueError, IndexError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        argv = argv[:1] + tokens + argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (SymbolZeroError, PolynomialAmbiguityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (NonConvergenceError, AccelerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OverflowError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
