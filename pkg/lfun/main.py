# lfun - Command-Line Entry Point
"""
Command-line front end.

Subcommands:
    fourier    f̂(T) of a form file
    lvalue     L(f, 1/2 + iT) of a form file
    bench      timing and jet-count scaling over a list of heights
    gen-delta  exact coefficient file of Δ
    selftest   invariant suites of every module

Exit codes: 0 success, 1 self-test failure, 2 invalid input, 3 numerical
failure.
"""

import argparse
import logging
import sys
import time
from typing import List, Optional

from lfun import __version__
from lfun.config import config
from lfun.engine import PIPELINES, PipelineParams
from lfun.errors import LFunError, ParameterError
from lfun.forms import delta_form, load_form, write_form_file
from lfun.utils.reporting import BenchRow, fit_slope, result_record, write_csv, write_json
from lfun.workers import worker_pool


logger = logging.getLogger("lfun")

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1


# ============================================================================
# Argument parsing
# ============================================================================

def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--form", required=True, help="Path of the JSON form file.")
    p.add_argument("--gamma", type=float, default=config.DEFAULT_GAMMA,
                   help=f"Target error exponent (default: {config.DEFAULT_GAMMA:g}).")
    p.add_argument("--epsilon", type=float, default=config.DEFAULT_EPSILON,
                   help=f"Budget exponent (default: {config.DEFAULT_EPSILON:g}).")
    p.add_argument("--eta", type=float, default=config.DEFAULT_ETA,
                   help=f"Segment exponent in (0, 1/3) (default: {config.DEFAULT_ETA:g}).")
    p.add_argument("--precision", choices=sorted(config.PRECISION_POLICIES), default=config.PRECISION,
                   help="Arithmetic mode for prefactors.")
    p.add_argument("--threads", type=int, default=None,
                   help="Worker threads (LFUN_THREADS overrides; default: machine parallelism).")
    p.add_argument("--delta", type=float, default=None,
                   help="Override the grouping neighbourhood radius.")
    p.add_argument("--d", type=int, default=None, dest="d",
                   help="Fixed expansion order (default: chosen per group member).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfun",
        description="Fast L-values and Fourier coefficients of level-1 cusp forms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, dest="log_level",
                        help=f"Logging level (default: {config.LOG_LEVEL}).")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, what in (("fourier", "Fourier coefficient f̂(T)"), ("lvalue", "L(f, 1/2 + iT)")):
        p = sub.add_parser(name, help=f"Compute {what}.")
        _add_pipeline_flags(p)
        p.add_argument("--T", type=float, required=True, dest="T", help="Height or coefficient index.")
        p.add_argument("--mode", choices=["fast", "direct"], default="fast")
        p.add_argument("--output", default=None, help="Path of the result JSON.")

    p = sub.add_parser("bench", help="Time both pipelines over a list of heights.")
    _add_pipeline_flags(p)
    p.add_argument("--T", type=float, nargs="+", required=True, dest="T",
                   help="At least four heights spanning two decades.")
    p.add_argument("--pipeline", choices=["fourier", "lvalue"], default="fourier")
    p.add_argument("--modes", nargs="+", choices=["fast", "direct"], default=["fast", "direct"])
    p.add_argument("--output", default="bench.csv", help="Path of the bench CSV.")

    p = sub.add_parser("gen-delta", help="Write the exact coefficient file of Δ.")
    p.add_argument("--n", type=int, required=True, help="Number of coefficients.")
    p.add_argument("--output", required=True, help="Path of the form file.")

    p = sub.add_parser("selftest", help="Run the invariant suites.")
    p.add_argument("--form", default=None, help="Also check this form file.")
    p.add_argument("--output", default=None, help="Path of the JSON report.")
    return parser


def configure_logging(level: str) -> None:
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise ParameterError(f"unknown log level {level!r}")
    logging.basicConfig(level=numeric, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _params(args: argparse.Namespace, T: float) -> PipelineParams:
    return PipelineParams(
        T=T, gamma=args.gamma, epsilon=args.epsilon, eta=args.eta, d=args.d,
        precision=args.precision, threads=args.threads, delta=args.delta,
    )


# ============================================================================
# Subcommands
# ============================================================================

def run_pipeline(args: argparse.Namespace) -> int:
    params = _params(args, args.T)
    form = load_form(args.form)
    worker_pool.start(params.threads)
    pipeline = PIPELINES[(args.command, args.mode)]

    started = time.perf_counter()
    result = pipeline(form, args.T, params)
    wall = time.perf_counter() - started

    record = result_record(result, wall)
    if args.output:
        write_json(record, args.output)
    value = complex(result.value)
    print(f"{args.command}({args.T:g}) [{args.mode}] = {value.real!r} + {value.imag!r}i")
    print(f"   error estimate {result.abs_error_estimate:.3e}, {result.jet_evals} jet evaluations, "
          f"{result.groups} groups, {wall:.2f}s")
    return EXIT_OK


def check_bench_heights(heights: List[float]) -> None:
    if len(heights) < 4:
        raise ParameterError(f"bench needs at least 4 heights, got {len(heights)}")
    if min(heights) <= 0 or max(heights) / min(heights) < 100:
        raise ParameterError("bench heights must be positive and span at least two decades")


def run_bench(args: argparse.Namespace) -> int:
    heights = sorted(args.T)
    check_bench_heights(heights)
    params = [_params(args, T) for T in heights]
    form = load_form(args.form)
    worker_pool.start(args.threads)

    rows = []
    for mode in args.modes:
        pipeline = PIPELINES[(args.pipeline, mode)]
        for p in params:
            started = time.perf_counter()
            result = pipeline(form, p.T, p)
            wall = time.perf_counter() - started
            rows.append(BenchRow(p.T, mode, wall, result.jet_evals, result.groups, complex(result.value)))
            print(f"   T={p.T:g} {mode}: {result.jet_evals} jet evaluations, {result.groups} groups, {wall:.2f}s")
    write_csv(rows, args.output)

    for mode in args.modes:
        picked = [r for r in rows if r.mode == mode]
        slope = fit_slope([r.T for r in picked], [r.jet_evals for r in picked])
        print(f"📈 {mode}: jet-evaluation slope {slope:.3f}")
    return EXIT_OK


def run_gen_delta(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise ParameterError(f"--n must be positive, got {args.n}")
    write_form_file(delta_form(args.n), args.output)
    print(f"wrote {args.n} coefficients of Δ to {args.output}")
    return EXIT_OK


def run_selftest(args: argparse.Namespace) -> int:
    from lfun.selftest import run_selftest as run_suites, write_report

    report = run_suites(form_path=args.form)
    if args.output:
        write_report(report, args.output)
    for name, suite in report["suites"].items():
        mark = "✅" if suite["passed"] else "❌"
        print(f"{mark} {name}: {suite['checks_passed']}/{suite['checks']}")
        for failure in suite["failures"]:
            print(f"   {failure}")
    return EXIT_OK if report["passed"] else EXIT_SELFTEST_FAILED


COMMANDS = {
    "fourier": run_pipeline,
    "lvalue": run_pipeline,
    "bench": run_bench,
    "gen-delta": run_gen_delta,
    "selftest": run_selftest,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv and run one subcommand.

    Returns:
        Process exit code; argparse usage errors exit 2 on their own
    """
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except LFunError as e:
        print(f"lfun: error: {e}", file=sys.stderr)
        return e.exit_code
    finally:
        worker_pool.shutdown()


if __name__ == "__main__":
    sys.exit(main())
