"""Command-line front end: ``bvnoise {simulate,sweep-p,sweep-n,threshold,verify}``.

Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analytic, sweeps
from .density import success_probability_full
from .factorized import success_probability_factorized
from .hidden import HiddenString
from .matrix import MAX_QUBITS
from .montecarlo import TrajectoryConfig, estimate_success
from .svg import write_line_chart
from .verify import VerifyConfig, run_checks

BACKENDS = ("analytic", "full", "factorized", "mc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _bits(text: str) -> HiddenString:
    try:
        return HiddenString.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvnoise",
        description="Bernstein-Vazirani success probability under per-qubit depolarizing noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def hidden_opts(p):
        p.add_argument("--s", type=_bits, help="hidden bit string (default: all ones)")
        p.add_argument("--random-s", action="store_true", help="draw the hidden string from --seed")

    def mc_opts(p):
        p.add_argument("--shots", type=int, default=10_000, help="Monte Carlo shots (default 10000)")
        p.add_argument("--seed", type=int, default=0, help="64-bit unsigned seed (default 0)")

    def output_opts(p):
        p.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
        p.add_argument(
            "--svg",
            nargs="?",
            const="",
            default=None,
            help="also write an SVG chart (optional path; default: --out with .svg suffix)",
        )
        p.add_argument("--log-y", choices=("auto", "on", "off"), default="auto", help="SVG y-axis scale")

    sim = sub.add_parser("simulate", help="success probability for one (n, s, p)")
    sim.add_argument("--n", type=int, help="qubit count (default: length of --s, else 3)")
    hidden_opts(sim)
    sim.add_argument("--p", type=float, required=True, help="depolarizing probability")
    sim.add_argument(
        "--backend",
        choices=BACKENDS,
        action="append",
        help="backend to evaluate; repeat for several (default: analytic)",
    )
    mc_opts(sim)

    sp = sub.add_parser("sweep-p", help="success probability over a p grid")
    sp.add_argument("--n-list", type=_int_list, help="qubit counts, comma separated")
    hidden_opts(sp)
    sp.add_argument("--p-list", type=_float_list, help="explicit p values")
    sp.add_argument("--p-min", type=float, default=0.0)
    sp.add_argument("--p-max", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=101)
    sp.add_argument(
        "--backend",
        choices=BACKENDS,
        action="append",
        help="extra columns: full (n <= 12) and/or mc; analytic and factorized are always filled",
    )
    mc_opts(sp)
    output_opts(sp)

    sn = sub.add_parser("sweep-n", help="success probability over n = 1..n-max")
    sn.add_argument("--n-max", type=int, default=1000)
    hidden_opts(sn)
    sn.add_argument("--p-list", type=_float_list, default=list(sweeps.SWEEP_N_P_LIST))
    sn.add_argument("--backend", choices=BACKENDS, action="append", help="as for sweep-p")
    mc_opts(sn)
    output_opts(sn)

    th = sub.add_parser("threshold", help="noise threshold p*(n) at a fixed success target")
    th.add_argument("--n-max", type=int, default=1000)
    th.add_argument("--target", type=float, default=analytic.DEFAULT_TARGET)
    output_opts(th)

    ve = sub.add_parser("verify", help="run the cross-backend verification suite")
    ve.add_argument("--n-max", type=int, default=6)
    ve.add_argument("--tolerance", type=float, default=1e-10)
    ve.add_argument("--shots", type=int, default=100_000)
    ve.add_argument("--seed", type=int, default=0)
    return parser


def _check_seed(args) -> None:
    if hasattr(args, "seed") and not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    if hasattr(args, "shots") and args.shots < 1:
        raise UsageError("--shots must be >= 1")


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"p must lie in [0, 1], got {p}")


def _hidden_for(args, n: int) -> HiddenString:
    if args.s is not None:
        if args.s.n != n:
            raise UsageError(f"--s has {args.s.n} bits but n={n}")
        return args.s
    if args.random_s:
        return HiddenString.random(n, np.random.default_rng(args.seed))
    return HiddenString.ones(n)


def cmd_simulate(args, out) -> int:
    _check_seed(args)
    _check_p(args.p)
    backends = args.backend or ["analytic"]
    if args.s is not None and args.n is None:
        n = args.s.n
    else:
        n = args.n if args.n is not None else 3
    if n < 1:
        raise UsageError("--n must be >= 1")
    if "full" in backends and n > MAX_QUBITS:
        raise UsageError(f"full backend is capped at n={MAX_QUBITS} qubits (got n={n})")
    s = _hidden_for(args, n)

    print(f"n={n}", file=out)
    print(f"s={s}", file=out)
    print(f"p={args.p:.12g}", file=out)
    for backend in dict.fromkeys(backends):
        if backend == "analytic":
            res = analytic.success_probability(n, args.p)
            print(f"analytic success={res.prob:.12f} log2={res.log2_prob:.12g}", file=out)
        elif backend == "factorized":
            res = success_probability_factorized(s, args.p)
            print(f"factorized success={res.prob:.12f} log2={res.log2_prob:.12g}", file=out)
        elif backend == "full":
            print(f"full success={success_probability_full(s, args.p):.12f}", file=out)
        else:
            est = estimate_success(TrajectoryConfig(s, args.p, args.shots, args.seed))
            print(
                f"mc success={est.estimate:.12f} stderr={est.stderr:.12g} shots={est.shots} seed={est.seed}",
                file=out,
            )
    return EXIT_OK


def _sweep_options(args):
    _check_seed(args)
    backends = set(args.backend or ())
    shots = args.shots if "mc" in backends else None
    rng = np.random.default_rng(args.seed) if args.random_s else None
    return "full" in backends, shots, rng


def _emit(args, rows, header, out) -> None:
    text = sweeps.to_csv(rows, header)
    if args.out is None:
        out.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _svg_path(args, default_name: str) -> Path | None:
    if args.svg is None:
        return None
    if args.svg:
        return Path(args.svg)
    if args.out is not None:
        return args.out.with_suffix(".svg")
    return Path(default_name)


def _log_y(args):
    return {"auto": None, "on": True, "off": False}[args.log_y]


def cmd_sweep_p(args, out) -> int:
    full, shots, rng = _sweep_options(args)
    if args.p_list is not None:
        p_values = args.p_list
        for p in p_values:
            _check_p(p)
    else:
        try:
            p_values = sweeps.p_grid(args.p_min, args.p_max, args.steps)
        except ValueError as exc:
            raise UsageError(str(exc))
    if args.n_list is not None:
        n_values = args.n_list
    elif args.s is not None:
        n_values = [args.s.n]
    elif max(p_values) <= sweeps.LOW_NOISE_P_MAX:
        n_values = list(sweeps.LOW_NOISE_N_LIST)
    else:
        n_values = list(sweeps.SWEEP_P_N_LIST)
    if min(n_values) < 1:
        raise UsageError("qubit counts must be >= 1")
    if args.s is not None and set(n_values) != {args.s.n}:
        raise UsageError(f"--s has {args.s.n} bits but --n-list is {n_values}")

    records = sweeps.sweep(n_values, p_values, s=args.s, rng=rng, full=full, shots=shots, seed=args.seed)
    _emit(args, records, sweeps.SWEEP_HEADER, out)
    svg = _svg_path(args, "sweep_p.svg")
    if svg is not None:
        series = []
        for n in sorted(set(n_values)):
            rows = [r for r in records if r.n == n]
            series.append((f"n = {n}", [r.p for r in rows], [r.analytic for r in rows]))
        write_line_chart(
            svg,
            series,
            title="Success probability vs depolarizing probability",
            x_label="depolarizing probability p",
            y_label="success probability",
            log_y=_log_y(args),
        )
    return EXIT_OK


def cmd_sweep_n(args, out) -> int:
    full, shots, rng = _sweep_options(args)
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    for p in args.p_list:
        _check_p(p)
    if args.s is not None:
        raise UsageError("sweep-n varies n; use --random-s or the all-ones default instead of --s")
    records = sweeps.sweep(
        range(1, args.n_max + 1), args.p_list, rng=rng, full=full, shots=shots, seed=args.seed
    )
    _emit(args, records, sweeps.SWEEP_HEADER, out)
    svg = _svg_path(args, "sweep_n.svg")
    if svg is not None:
        series = []
        for p in sorted(set(args.p_list)):
            rows = [r for r in records if r.p == p]
            series.append((f"p = {p:g}", [r.n for r in rows], [r.analytic for r in rows]))
        write_line_chart(
            svg,
            series,
            title="Success probability vs number of qubits",
            x_label="number of qubits n",
            y_label="success probability",
            log_y=_log_y(args),
        )
    return EXIT_OK


def cmd_threshold(args, out) -> int:
    if args.n_max < 1:
        raise UsageError("--n-max must be >= 1")
    if not 0.0 < args.target < 1.0:
        raise UsageError(f"--target must lie in (0, 1), got {args.target}")
    rows = sweeps.threshold_rows(args.n_max, args.target)
    _emit(args, rows, sweeps.THRESHOLD_HEADER, out)
    svg = _svg_path(args, "threshold.svg")
    if svg is not None and rows:
        ns = [r.n for r in rows]
        write_line_chart(
            svg,
            [
                ("p* (exact)", ns, [r.p_star_bisection for r in rows]),
                ("small-p approximation", ns, [r.p_approx for r in rows]),
            ],
            title=f"Maximum depolarizing probability at success {args.target:.4g}",
            x_label="number of qubits n",
            y_label="threshold p*",
            log_y=_log_y(args),
        )
    return EXIT_OK


def cmd_verify(args, out) -> int:
    _check_seed(args)
    if args.n_max < 1 or args.n_max > MAX_QUBITS:
        raise UsageError(f"--n-max must lie in 1..{MAX_QUBITS}")
    if args.tolerance <= 0:
        raise UsageError("--tolerance must be positive")
    cfg = VerifyConfig(n_max=args.n_max, tolerance=args.tolerance, shots=args.shots, seed=args.seed)
    results = run_checks(cfg)
    for r in results:
        print(r.line(), file=out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=out)
        return EXIT_FAIL
    print(f"ALL {len(results)} CHECKS PASSED", file=out)
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep-p": cmd_sweep_p,
    "sweep-n": cmd_sweep_n,
    "threshold": cmd_threshold,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bvnoise {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"bvnoise {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
