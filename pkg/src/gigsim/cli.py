"""Command line interface.

Subcommands:

* sample: draw terminal increments W(1) of a GIG or GH process.
* path:   simulate full paths on a time grid, long CSV output.
* bounds: tabulate the jump-density bound sandwich on a log grid.
* rho:    tabulate acceptance-rate bounds on a log grid of jump sizes.
* verify: engine-versus-exact KS comparison with QQ/histogram tables.

Exit codes: 0 success, 1 invalid parameters or arguments, 2 statistical
failure (verify rejected), 3 numerical failure (quadrature or a
degenerate region).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__, rngs
from .bounds import bound_table, rho_bounds_high, rho_bounds_low
from .errors import DegenerateRegionError, ParameterError, QuadratureError
from .gh import GhParams, sample_gh
from .gig import GigParams, natural_corner, sample_gig, sample_gig_terminal
from .kernels import BACKEND
from .series import evaluate_path
from .verify import emit_qq_histogram, ks_two_sample, sample_gig_exact

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad arguments; remap to 1 (validation)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_model_args(p, gh: bool = False):
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="GIG shape parameter (nonzero)")
    p.add_argument("--gamma", type=float, default=0.0,
                   help="tempering parameter gamma_p >= 0 (default 0)")
    p.add_argument("--delta", type=float, default=1.0,
                   help="scale parameter delta >= 0 (default 1)")
    if gh:
        p.add_argument("--mu-w", type=float, default=0.0,
                       help="Brownian drift of the GH layer (default 0)")
        p.add_argument("--sigma-w", type=float, default=1.0,
                       help="Brownian volatility of the GH layer (default 1)")


def _add_engine_args(p):
    p.add_argument("--epochs", type=int, default=1000,
                   help="Poisson epochs per component series (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--z0", default="auto",
                   help="envelope corner: 'auto' or a positive number")
    p.add_argument("--n1-method", choices=["auto", "ts", "two-gamma"],
                   default="auto", help="below-corner envelope recipe")
    p.add_argument("--n2-method", choices=["auto", "sqrt", "x2"],
                   default="auto", help="above-corner envelope recipe")


def _parse_z0(value):
    if value == "auto":
        return None
    try:
        z0 = float(value)
    except ValueError:
        raise ParameterError(f"--z0 must be 'auto' or a number, got {value!r}")
    if not z0 > 0.0:
        raise ParameterError(f"--z0 must be positive, got {z0}")
    return z0


def _parse_grid(text, log: bool):
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise ParameterError(f"--grid must look like min:max:points, got {text!r}")
    if not (hi > lo and n >= 2):
        raise ParameterError(f"--grid needs max > min and points >= 2, got {text!r}")
    if log:
        if lo <= 0.0:
            raise ParameterError("--grid endpoints must be positive on a log grid")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _out_stream(path):
    return open(path, "w", newline="") if path else sys.stdout


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="gigsim", description=__doc__.split("\n\n")[0])
    root.add_argument("--version", action="version", version=f"gigsim {__version__}")
    sub = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="terminal increments W(1)")
    _add_model_args(p, gh=True)
    p.add_argument("--process", choices=["gig", "gh"], default="gig")
    p.add_argument("--n", type=int, default=10000, help="number of draws")
    _add_engine_args(p)
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes (results identical for any value)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("path", help="full paths on a time grid")
    _add_model_args(p, gh=True)
    p.add_argument("--process", choices=["gig", "gh"], default="gig")
    p.add_argument("--paths", type=int, default=30, help="number of paths (default 30)")
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--grid", default="0:1:101",
                   help="time grid min:max:points (linear, default 0:1:101)")
    _add_engine_args(p)
    p.add_argument("--out", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("bounds", help="jump density bound sandwich")
    _add_model_args(p)
    p.add_argument("--grid", default="0.001:100:25",
                   help="jump size grid min:max:points (log, default 0.001:100:25)")
    p.add_argument("--no-reference", action="store_true",
                   help="skip the slow quadrature reference column")
    p.add_argument("--out", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("rho", help="acceptance rate bounds")
    _add_model_args(p)
    p.add_argument("--grid", default="0.01:100:25",
                   help="jump size grid min:max:points (log, default 0.01:100:25)")
    p.add_argument("--z0", default="auto",
                   help="envelope corner: 'auto' or a positive number")
    p.add_argument("--out", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("verify", help="engine versus exact sampler")
    _add_model_args(p)
    p.add_argument("--n", type=int, default=20000, help="draws per side")
    _add_engine_args(p)
    p.add_argument("--alpha", type=float, default=0.01, help="KS level (default 0.01)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-prefix", default=None,
                   help="write <prefix>_qq.csv and <prefix>_hist.csv")
    return root


def _cmd_sample(args) -> int:
    z0 = _parse_z0(args.z0)
    if args.process == "gh":
        gh = GhParams(args.lam, args.gamma, args.delta, args.mu_w, args.sigma_w)
        # GH draws share the GIG clock streams path by path
        from .gh import sample_gh_terminal

        samples = sample_gh_terminal(
            gh, args.n, args.epochs, args.seed,
            z0=z0, n1_method=args.n1_method, n2_method=args.n2_method,
        )
        stats = None
        params = gh
    else:
        gig = GigParams(args.lam, args.gamma, args.delta)
        samples, stats = sample_gig_terminal(
            gig, args.n, args.epochs, args.seed,
            z0=z0, n1_method=args.n1_method, n2_method=args.n2_method,
            workers=args.workers, collect_stats=True,
        )
        params = gig
    meta = {
        "process": args.process,
        "params": {k: getattr(params, k) for k in params.__dataclass_fields__},
        "n": args.n,
        "epochs": args.epochs,
        "seed": args.seed,
        "z0": args.z0,
        "n1_method": args.n1_method,
        "n2_method": args.n2_method,
        "backend": BACKEND,
        "acceptance": stats,
    }
    if args.format == "json":
        payload = {"meta": meta, "samples": samples.tolist()}
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(payload, fh, indent=1)
        else:
            json.dump(payload, sys.stdout, indent=1)
            print()
    else:
        fh = _out_stream(args.out)
        try:
            w = csv.writer(fh)
            w.writerow(["W"])
            for v in samples:
                w.writerow([f"{v:.17g}"])
        finally:
            if args.out:
                fh.close()
        if args.out:
            with open(args.out + ".meta.json", "w") as fh:
                json.dump(meta, fh, indent=1)
    return 0


def _cmd_path(args) -> int:
    z0 = _parse_z0(args.z0)
    grid = _parse_grid(args.grid, log=False)
    if grid[0] < 0.0 or grid[-1] > args.horizon:
        raise ParameterError("time grid must lie within [0, horizon]")
    rows = []
    for i in range(int(args.paths)):
        if args.process == "gh":
            gh = GhParams(args.lam, args.gamma, args.delta, args.mu_w, args.sigma_w)
            series = sample_gh(
                gh, args.horizon, args.epochs, args.seed, path=i,
                z0=z0, n1_method=args.n1_method, n2_method=args.n2_method,
            )
        else:
            gig = GigParams(args.lam, args.gamma, args.delta)
            series = sample_gig(
                gig, args.horizon, args.epochs, args.seed, path=i,
                z0=z0, n1_method=args.n1_method, n2_method=args.n2_method,
            )
        path = evaluate_path(series, grid)
        for t, wv in zip(path.grid, path.values):
            rows.append((i, f"{t:.17g}", f"{wv:.17g}"))
    fh = _out_stream(args.out)
    try:
        w = csv.writer(fh)
        w.writerow(["path_id", "t", "W"])
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return 0


def _cmd_bounds(args) -> int:
    gig = GigParams(args.lam, args.gamma, args.delta)
    xs = _parse_grid(args.grid, log=True)
    tab = bound_table(gig, xs, with_reference=not args.no_reference)
    if args.out:
        tab.to_csv(args.out)
    else:
        _print_table(tab)
    return 0


def _print_table(tab) -> None:
    w = csv.writer(sys.stdout)
    w.writerow(["x", "qa", "qb_star", "z0_star", "simple", "q_ref"])
    for row in zip(tab.x, tab.qa, tab.qb_star, tab.z0_star, tab.simple, tab.q_ref):
        w.writerow([f"{v:.17g}" for v in row])


def _cmd_rho(args) -> int:
    gig = GigParams(args.lam, args.gamma, args.delta)
    xs = _parse_grid(args.grid, log=True)
    z0 = _parse_z0(args.z0)
    rows = []
    if gig.nu > 0.5:
        header = ["x", "rho_lower", "rho_upper"]
        for x in xs:
            lo, hi = rho_bounds_high(gig, float(x), z0)
            rows.append([f"{x:.17g}", f"{lo:.17g}", f"{hi:.17g}"])
    elif gig.nu < 0.5:
        header = ["z0", "rho1_floor", "rho2_floor"]
        z0v = z0 if z0 is not None else natural_corner(gig.nu)
        r1, r2 = rho_bounds_low(gig, z0)
        rows.append([f"{z0v:.17g}", f"{r1:.17g}", f"{r2:.17g}"])
    else:
        header = ["x", "rho_lower", "rho_upper"]
        for x in xs:
            rows.append([f"{x:.17g}", "1", "1"])
    fh = _out_stream(args.out)
    try:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return 0


def _cmd_verify(args) -> int:
    z0 = _parse_z0(args.z0)
    gig = GigParams(args.lam, args.gamma, args.delta)
    engine, stats = sample_gig_terminal(
        gig, args.n, args.epochs, args.seed,
        z0=z0, n1_method=args.n1_method, n2_method=args.n2_method,
        workers=args.workers, collect_stats=True,
    )
    oracle = sample_gig_exact(gig, args.n, rngs.stream(args.seed, 2**31, 0))
    ks = ks_two_sample(engine, oracle, args.alpha)
    report = {
        "params": {"lam": gig.lam, "gamma_p": gig.gamma_p, "delta": gig.delta},
        "n": args.n,
        "epochs": args.epochs,
        "seed": args.seed,
        "backend": BACKEND,
        "ks_statistic": ks.statistic,
        "ks_threshold": ks.threshold,
        "alpha": ks.alpha,
        "reject": ks.reject,
        "acceptance": stats,
    }
    if args.out_prefix:
        qq, hist = emit_qq_histogram(engine, oracle, args.out_prefix)
        report["qq_csv"] = qq
        report["hist_csv"] = hist
    json.dump(report, sys.stdout, indent=1)
    print()
    return 2 if ks.reject else 0


_COMMANDS = {
    "sample": _cmd_sample,
    "path": _cmd_path,
    "bounds": _cmd_bounds,
    "rho": _cmd_rho,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParameterError as exc:
        print(f"gigsim: parameter error: {exc}", file=sys.stderr)
        return 1
    except (QuadratureError, DegenerateRegionError) as exc:
        print(f"gigsim: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
