"""Command line: ``kickedtops {evolve,eigenstates,rdm-spectrum,theory,nnsd}``.

Exit codes: 0 success, 2 invalid arguments, 3 dimension cap exceeded,
4 numerical failure.
"""
import argparse
import logging
import sys

import numpy as np

from . import __version__, experiments as ex

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_NUMERIC = 0, 2, 3, 4

COLUMNS = {
    "evolve": """\
CSV columns: t, s_vn (von Neumann entropy, nats), s_lin (1 - Tr rho^2).
JSON summary (<out>.json): plateau mean/std over t >= window start, and the
reference values ln(0.6N), ln(gamma N), ln N, 1 - 2/N, 1 - 1/N.""",
    "eigenstates": """\
CSV columns, one row per (Q, alpha): q, n, m, alpha1, alpha2, mean_s_vn,
se_s_vn, mean_s_lin, se_s_lin, gamma, ln_gammaN, ln_N, s_lin_rmt,
mc_mean_s_vn, mc_se_s_vn, mc_mean_s_lin, mc_se_s_lin.""",
    "rdm-spectrum": """\
CSV columns: q, bin_left, bin_right, kicked_density, monte_carlo_density,
theory_density (bin average of f). <out>_theory.csv holds q, lambda, f on a
dense grid; <out>.json has L1 distances and out-of-support fractions.""",
    "theory": """\
CSV columns: q, n, m, gamma, ln_gammaN, lambda_min, lambda_max, s_lin_rmt.""",
    "nnsd": """\
CSV columns: bin_left, bin_right, density, wigner_density.
<out>_spacings.csv holds the unfolded spacings s; <out>.json the KS distance
to the Wigner surmise and the mean spacing.""",
}


def _q_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad Q list {text!r}") from None
    return tuple(int(v) if v.is_integer() else v for v in vals)


def _pairs(text):
    out = []
    for item in text.split(","):
        try:
            n, m = item.lower().split("x")
            out.append((int(n), int(m)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad N x M pair {item!r}") from None
    return tuple(out)


def _top_args(p, j1, k, eps, alpha, j2=True):
    p.add_argument("--j1", type=float, default=j1, help=f"spin of top 1 (default {j1})")
    if j2:
        p.add_argument("--j2", type=float, default=None, help="spin of top 2 (default j1)")
    p.add_argument("--k", type=float, default=k, help=f"kick strength (default {k})")
    p.add_argument("--epsilon", type=float, default=eps, help=f"coupling (default {eps})")
    p.add_argument("--alpha1", type=float, default=alpha, help=f"phase of top 1 (default {alpha})")
    p.add_argument("--alpha2", type=float, default=alpha, help=f"phase of top 2 (default {alpha})")


def _common(p, out, seed=True):
    p.add_argument("--out", default=out, help=f"output CSV path (default {out})")
    p.add_argument("--dim-cap", type=int, default=ex.DEFAULT_DIM_CAP,
                   help="refuse Hilbert spaces larger than this (default %(default)s)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _sweep_args(p, q_list, trials, j1=6):
    _top_args(p, j1, 9.0, 10.0, 0.47, j2=False)
    p.add_argument("--q-list", type=_q_list, default=q_list,
                   help="comma separated Q = M/N values (default %s)" % ",".join(map(str, q_list)))
    p.add_argument("--trials", type=int, default=trials, help=f"Monte Carlo states (default {trials})")
    p.add_argument("--bins", type=int, default=60, help="histogram bins (default 60)")
    p.add_argument("--ensemble", choices=["real", "complex"], default="real")
    p.add_argument("--workers", type=int, default=1, help="parallel Q points (default 1)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kickedtops",
        description="Entanglement of coupled kicked tops vs random-matrix bounds.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    p = sub.add_parser("evolve", help="entropy time series",
                       epilog=COLUMNS["evolve"], formatter_class=fmt)
    _top_args(p, 10.0, 3.0, 0.1, 0.47)
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--initial", choices=["product", "entangled"], default="product")
    p.add_argument("--theta", type=float, default=2.25, help="coherent state polar angle")
    p.add_argument("--phi", type=float, default=1.1, help="coherent state azimuth")
    p.add_argument("--window-start", type=int, default=None,
                   help="first step of the plateau window (default steps/2)")
    p.add_argument("--stepper", choices=["dense", "factored"], default="dense")
    _common(p, "evolve.csv", seed=False)

    p = sub.add_parser("eigenstates", help="eigenstate entanglement vs Q",
                       epilog=COLUMNS["eigenstates"], formatter_class=fmt)
    _sweep_args(p, (1, 2, 3, 4), 2000)
    p.add_argument("--parity-variants", action="store_true",
                   help="also run alpha1 = alpha2 = 0 for every Q")
    _common(p, "eigenstates.csv")

    p = sub.add_parser("rdm-spectrum", help="pooled RDM eigenvalue histograms",
                       epilog=COLUMNS["rdm-spectrum"], formatter_class=fmt)
    _sweep_args(p, (1, 2), 500)
    _common(p, "rdm_spectrum.csv")

    p = sub.add_parser("theory", help="gamma(Q), ln(gamma N), support, mean linear entropy",
                       epilog=COLUMNS["theory"], formatter_class=fmt)
    p.add_argument("--q-list", type=_q_list, default=(1, 2, 3, 4))
    p.add_argument("--n", type=int, default=33, help="N used with --q-list (default 33)")
    p.add_argument("--pairs", type=_pairs, default=(), help="extra N x M pairs, e.g. 2x2,16x16")
    p.add_argument("--out", default="theory.csv")

    p = sub.add_parser("nnsd", help="nearest-neighbour spacing statistics",
                       epilog=COLUMNS["nnsd"], formatter_class=fmt)
    _sweep_args(p, (4,), 0)
    p.add_argument("--split-parity", action="store_true",
                   help="take spacings within parity sectors (for alpha = 0)")
    p.add_argument("--diagnostic", choices=["picket", "poisson"], default=None,
                   help="replace the Floquet spectrum by a control spectrum")
    _common(p, "nnsd.csv")
    return parser


def _configs(args):
    if args.command == "evolve":
        return ex.EvolveConfig(
            j1=args.j1, j2=args.j1 if args.j2 is None else args.j2, k=args.k,
            epsilon=args.epsilon, alpha1=args.alpha1, alpha2=args.alpha2,
            steps=args.steps, initial=args.initial, theta=args.theta, phi=args.phi,
            window_start=args.window_start, stepper=args.stepper, dim_cap=args.dim_cap,
        )
    if args.command == "theory":
        return ex.TheoryConfig(q_list=args.q_list, n=args.n, pairs=args.pairs)
    return ex.SweepConfig(
        j1=args.j1, k=args.k, epsilon=args.epsilon, alpha1=args.alpha1,
        alpha2=args.alpha2, q_list=args.q_list, trials=args.trials, bins=args.bins,
        seed=args.seed, ensemble=args.ensemble, dim_cap=args.dim_cap,
        parity_variants=getattr(args, "parity_variants", False),
        split_parity=getattr(args, "split_parity", False),
        diagnostic=getattr(args, "diagnostic", None), workers=args.workers,
    )


RUNNERS = {
    "evolve": (ex.run_evolve, ex.write_evolve),
    "eigenstates": (ex.run_eigenstates, ex.write_eigenstates),
    "rdm-spectrum": (ex.run_rdm_spectrum, ex.write_rdm_spectrum),
    "theory": (ex.run_theory, ex.write_theory),
    "nnsd": (ex.run_nnsd, ex.write_nnsd),
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    run, write = RUNNERS[args.command]
    try:
        cfg = _configs(args)
        result = run(cfg)
    except ex.DimensionCapError as err:
        print(f"kickedtops: {err}", file=sys.stderr)
        return EXIT_CAP
    except (ArithmeticError, np.linalg.LinAlgError) as err:
        print(f"kickedtops: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as err:
        print(f"kickedtops: invalid arguments: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        paths = write(result, args.out)
    except OSError as err:
        print(f"kickedtops: cannot write output: {err}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
