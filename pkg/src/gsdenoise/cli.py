"""Command-line front end.

Subcommands cover the full workflow: inspect a graph, synthesize a test
signal, sanitize it with a calibrated Gaussian mechanism, precompute the
SURE weight cache, denoise, score, and benchmark. Exit codes: 0 success,
2 usage error (argparse), 1 anything that fails during computation; errors
go to stderr.
"""

import argparse
import csv
import sys

import numpy as np

from .graph import laplacian, read_edgelist
from .frame import PartitionOfUnity
from .pipeline import PipelineConfig, denoise_pipeline
from .privacy import MECHANISMS, PrivacyParams, calibrate_sigma, sanitize
from .signals import SignalSpec, mse, read_signal, snr, synth_signal, write_signal
from .sure import DISTRIBUTIONS, estimate_diagonal_weights, load_weights, save_weights
from . import __version__

BENCH_COLUMNS = ("run", "epsilon", "sigma", "snr_in", "snr_out", "sure",
                 "wall_ms_setup", "wall_ms_forward", "wall_ms_weights",
                 "wall_ms_select", "wall_ms_apply", "wall_ms_inverse")


def _config_parser():
    """Parent parser whose flags mirror PipelineConfig field names."""
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("pipeline configuration")
    g.add_argument("--variant", default="unnormalized",
                   choices=("unnormalized", "normalized", "random_walk"))
    g.add_argument("--kind", default="linear", choices=("linear", "smooth"),
                   help="partition-of-unity window kind")
    g.add_argument("--b", type=float, default=2.0, help="dilation base")
    g.add_argument("--c", type=float, default=1.0,
                   help="smooth-window sharpness")
    g.add_argument("--K", type=int, default=100,
                   help="Chebyshev polynomial degree")
    g.add_argument("--jackson", default=True,
                   action=argparse.BooleanOptionalAction,
                   help="Jackson damping of the Chebyshev coefficients")
    g.add_argument("--N", type=int, default=10,
                   help="Monte-Carlo probe count for the SURE weights")
    g.add_argument("--distribution", default="rademacher",
                   choices=DISTRIBUTIONS, help="probe distribution")
    g.add_argument("--beta", type=float, default=2.0,
                   help="thresholding exponent (1 = soft)")
    g.add_argument("--P", type=int, default=100,
                   help="percentile candidates per scale")
    g.add_argument("--seed", type=int, default=0)
    return p


def _config_from(args, sigma=None):
    return PipelineConfig(
        variant=args.variant, kind=args.kind, b=args.b, c=args.c,
        K=args.K, jackson=args.jackson, N=args.N,
        distribution=args.distribution, beta=args.beta, P=args.P,
        sigma=sigma, seed=args.seed)


def _build_parser():
    cfg = _config_parser()
    top = argparse.ArgumentParser(
        prog="gsdenoise",
        description="Graph-signal denoising by wavelet thresholding with "
                    "Monte-Carlo SURE threshold selection.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph-info", parents=[cfg],
                       help="print node/edge counts and the spectral bound")
    p.add_argument("graph", help="edge-list file")

    p = sub.add_parser("synth", parents=[cfg],
                       help="synthesize a Bernoulli-diffusion signal")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True, help="signal file to write")
    p.add_argument("--p", type=float, default=0.01,
                   help="Bernoulli source density")
    p.add_argument("--k", type=int, default=4, help="diffusion power")

    p = sub.add_parser("sanitize", parents=[cfg],
                       help="add calibrated Gaussian noise to a signal")
    p.add_argument("signal", help="signal file to sanitize")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--graph", help="edge-list file, only needed for "
                                   "label,value signal files")
    p.add_argument("--sigma", type=float,
                   help="noise scale; overrides mechanism calibration")
    p.add_argument("--epsilon", type=float, help="privacy budget")
    p.add_argument("--delta", type=float, default=1e-6, help="privacy slack")
    p.add_argument("--sensitivity", type=float, default=1.0,
                   help="l2-sensitivity of the signal")
    p.add_argument("--mechanism", default="analytic", choices=MECHANISMS)

    p = sub.add_parser("weights", parents=[cfg],
                       help="precompute the SURE weight cache for a graph")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True, help="cache file to write")

    p = sub.add_parser("denoise", parents=[cfg],
                       help="denoise a signal file")
    p.add_argument("graph")
    p.add_argument("signal")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sigma", type=float, required=True,
                   help="noise scale published with the signal")
    p.add_argument("--weights", help="weight cache file to reuse")

    p = sub.add_parser("eval", parents=[cfg],
                       help="print SNR and MSE of an estimate vs a reference")
    p.add_argument("reference")
    p.add_argument("estimate")
    p.add_argument("--graph", help="edge-list file, only needed for "
                                   "label,value signal files")

    p = sub.add_parser("bench", parents=[cfg],
                       help="sweep noise levels x repetitions, write a CSV")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True, help="CSV file to write")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--epsilon", type=float, action="append", default=None,
                   help="privacy budget; repeat for a sweep")
    p.add_argument("--sigma", type=float, action="append", default=None,
                   help="noise scale; repeat for a sweep")
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--sensitivity", type=float, default=1.0)
    p.add_argument("--mechanism", default="analytic", choices=MECHANISMS)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--signal-seed", type=int, default=0,
                   help="seed of the clean test signal")
    return top


def _cmd_graph_info(args):
    g = read_edgelist(args.graph)
    L = laplacian(g, args.variant)
    print(f"n={g.n} m={g.m} lambda_ub={L.lambda_ub:g}")
    return 0


def _cmd_synth(args):
    g = read_edgelist(args.graph)
    spec = SignalSpec(args.p, args.k, seed=args.seed)
    f = synth_signal(g, spec)
    write_signal(args.output, f,
                 header={"p": args.p, "k": args.k, "seed": args.seed})
    return 0


def _cmd_sanitize(args):
    graph = read_edgelist(args.graph) if args.graph else None
    f, _ = read_signal(args.signal, graph=graph)
    header = {"seed": args.seed}
    if args.sigma is not None:
        sigma = args.sigma
    else:
        if args.epsilon is None:
            raise ValueError("sanitize needs either --sigma or --epsilon")
        params = PrivacyParams(args.epsilon, args.delta, args.sensitivity,
                               args.mechanism)
        sigma = calibrate_sigma(params)
        header.update(mechanism=args.mechanism, epsilon=args.epsilon,
                      delta=args.delta, sensitivity=args.sensitivity)
    noisy, sigma = sanitize(f, sigma, seed=args.seed)
    header["sigma"] = repr(sigma)
    write_signal(args.output, noisy, header=header)
    print(f"sigma={sigma:g}")
    return 0


def _cmd_weights(args):
    g = read_edgelist(args.graph)
    L = laplacian(g, args.variant)
    pou = PartitionOfUnity.for_operator(L, kind=args.kind, b=args.b, c=args.c)
    est = estimate_diagonal_weights(
        L, pou, K=args.K, jackson=args.jackson, N=args.N,
        dist=args.distribution, seed=args.seed, graph_hash=g.content_hash())
    save_weights(args.output, est)
    print(f"n={est.n} J={est.J} N={est.N} file={args.output}")
    return 0


def _cmd_denoise(args):
    g = read_edgelist(args.graph)
    f, _ = read_signal(args.signal, graph=g)
    cached = load_weights(args.weights) if args.weights else None
    config = _config_from(args, sigma=args.sigma)
    fhat, report = denoise_pipeline(g, f, config, weights=cached)
    write_signal(args.output, fhat,
                 header={"sigma": repr(args.sigma), "seed": args.seed,
                         "sure": repr(report["sure"])})
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    print(f"cache={report['cache']}")
    print(f"sure={report['sure']!r}")
    print("thresholds=" + ",".join(repr(t) for t in report["thresholds"]))
    for stage, ms in report["timings_ms"].items():
        print(f"wall_ms_{stage}={ms:.3f}")
    return 0


def _cmd_eval(args):
    graph = read_edgelist(args.graph) if args.graph else None
    ref, _ = read_signal(args.reference, graph=graph)
    est, _ = read_signal(args.estimate, graph=graph)
    print(f"snr={snr(ref, est):g} mse={mse(ref, est):g}")
    return 0


def _cmd_bench(args):
    if (args.epsilon is None) == (args.sigma is None):
        raise ValueError("bench sweeps exactly one of --epsilon or --sigma")
    g = read_edgelist(args.graph)
    f = synth_signal(g, SignalSpec(args.p, args.k, seed=args.signal_seed))
    if args.epsilon is not None:
        levels = [(eps, calibrate_sigma(PrivacyParams(
            eps, args.delta, args.sensitivity, args.mechanism)))
            for eps in args.epsilon]
    else:
        levels = [("", sig) for sig in args.sigma]
    L = laplacian(g, args.variant)
    with open(args.output, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(BENCH_COLUMNS)
        for eps, sigma in levels:
            for run in range(args.reps):
                rng = np.random.default_rng(
                    np.random.SeedSequence((args.seed, run)))
                noisy = f + sigma * rng.standard_normal(g.n)
                config = _config_from(args, sigma=sigma)
                fhat, report = denoise_pipeline(g, noisy, config, operator=L)
                t = report["timings_ms"]
                out.writerow([run, eps, repr(sigma),
                              f"{snr(f, noisy):.6f}", f"{snr(f, fhat):.6f}",
                              repr(report["sure"])]
                             + [f"{t[s]:.3f}" for s in
                                ("setup", "forward", "weights", "select",
                                 "apply", "inverse")])
    return 0


_COMMANDS = {
    "graph-info": _cmd_graph_info,
    "synth": _cmd_synth,
    "sanitize": _cmd_sanitize,
    "weights": _cmd_weights,
    "denoise": _cmd_denoise,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"gsdenoise: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
