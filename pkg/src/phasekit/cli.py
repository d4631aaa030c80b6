"""Command-line front end.

Subcommands: kennedy, homodyne, bsclass, optimum, montecarlo, figure.
Strengths are always mean photon numbers, matching the library and every
tabulated figure. Output for fixed flags (and seed) is byte-identical
across runs. Exit codes: 0 success, 2 argument problems, 3 numerical
resource limits.
"""

from __future__ import annotations

import argparse
import math
import sys

from .helstrom import (
    d_err_small_alpha,
    p_err_optimal,
    small_alpha_series_cutoff,
)
from .model import (
    Beamsplitter,
    DiscriminationResult,
    PulsePair,
    kennedy_angle,
)
from .montecarlo import ConfigurationError, DecisionRule, TrialConfig, run_trials
from .numerics import NumericalResourceError
from .receivers import (
    DEFAULT_TAIL_TOL,
    best_angle,
    p_beamsplitter_ml,
    p_homodyne_asymptotic,
    p_homodyne_generalized,
    p_kennedy_asymptotic,
    p_kennedy_generalized,
)
from .scan import figure_table, format_value, write_csv, write_json

__all__ = ["main"]


def _non_negative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"must be a non-negative decimal: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not (0 <= value < 2**64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _grid(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("grid must contain at least one value")
    return values


def _result_lines(result: DiscriminationResult, quote: bool) -> list[str]:
    lines = [
        f"P = {format_value(result.error_probability)}",
        f"D = {format_value(result.distinguishability)}",
    ]
    if quote:
        lines.append(f"method = {result.method}")
        for key in sorted(result.metadata):
            lines.append(f"{key} = {format_value(result.metadata[key])}")
    return lines


def _add_strength_flags(p: argparse.ArgumentParser, beta2_required: bool = True) -> None:
    p.add_argument("--alpha2", type=_non_negative, required=True,
                   help="signal mean photon number")
    p.add_argument("--beta2", type=_non_negative, required=beta2_required,
                   help="reference mean photon number")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasekit",
        description="error probabilities for opposite-phase weak pulses "
        "against a finite-energy phase reference",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("kennedy", "dark-port photon counting receiver"),
        ("homodyne", "count-comparison receiver behind a balanced splitter"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_strength_flags(p, beta2_required=False)
        p.add_argument("--asymptotic", action="store_true",
                       help="infinitely strong reference (omit --beta2)")
        p.add_argument("--quote-tolerances", action="store_true",
                       help="print truncation bounds alongside the result")

    p = sub.add_parser("bsclass", help="maximum-likelihood receiver at one splitter angle")
    _add_strength_flags(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--phi-over-pi", type=float, help="splitter angle divided by pi")
    group.add_argument("--optimize", action="store_true",
                       help="search the family [0, pi/4] for the best angle")
    p.add_argument("--grid-points", type=_positive_int, default=128,
                   help="grid size for --optimize (default 128)")
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL,
                   help="per-port Poisson tail budget (default 1e-12)")
    p.add_argument("--quote-tolerances", action="store_true")

    p = sub.add_parser("optimum", help="minimum error probability over all measurements")
    _add_strength_flags(p)
    p.add_argument("--tail-tol", type=float, default=1e-10,
                   help="basis truncation budget (default 1e-10)")
    p.add_argument("--method", choices=("exact", "small-alpha"), default="exact",
                   help="truncated trace norm, or the weak-signal series")
    p.add_argument("--quote-tolerances", action="store_true")

    p = sub.add_parser("montecarlo", help="simulate a receiver and report the error rate")
    _add_strength_flags(p)
    p.add_argument("--phi-over-pi", type=float, default=None,
                   help="splitter angle / pi (defaults: rule kennedy -> cancellation "
                        "angle, otherwise 0.25)")
    p.add_argument("--rule", choices=[r.value for r in DecisionRule], default="ml",
                   help="decision rule (default ml)")
    p.add_argument("--trials", type=_positive_int, default=1_000_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--random-common-phase", action="store_true",
                   help="draw a shared optical phase per trial (statistics unchanged)")
    p.add_argument("--quote-tolerances", action="store_true")

    p = sub.add_parser("figure", help="emit the data table behind one figure")
    p.add_argument("--id", type=int, required=True, choices=(1, 2, 3, 4, 5))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default standard output)")
    p.add_argument("--alpha2", type=_non_negative, default=None,
                   help="signal strength for figures 3-4")
    p.add_argument("--beta2", type=_non_negative, default=None,
                   help="reference strength for figures 3-4")
    p.add_argument("--alpha2-grid", type=_grid, default=None,
                   help="comma-separated alpha^2 grid for figures 1-2")
    p.add_argument("--beta2-grid", type=_grid, default=None,
                   help="comma-separated beta^2 values for figures 1, 2 and 5")
    p.add_argument("--n-angles", type=_positive_int, default=None,
                   help="sweep resolution for figures 3-4 (default 128)")
    p.add_argument("--cross-check-alpha2", type=_non_negative, default=None,
                   help="add the exact-trace-norm column to figure 5 at this alpha^2")
    p.add_argument("--tail-tol", type=float, default=None)
    return parser


def _cmd_kennedy(args) -> str:
    if args.asymptotic:
        if args.beta2 is not None:
            raise ValueError("--asymptotic means --beta2 must be omitted")
        result = p_kennedy_asymptotic(args.alpha2)
    else:
        if args.beta2 is None:
            raise ValueError("--beta2 is required without --asymptotic")
        result = p_kennedy_generalized(PulsePair(args.alpha2, args.beta2))
    return "\n".join(_result_lines(result, args.quote_tolerances)) + "\n"


def _cmd_homodyne(args) -> str:
    if args.asymptotic:
        if args.beta2 is not None:
            raise ValueError("--asymptotic means --beta2 must be omitted")
        result = p_homodyne_asymptotic(args.alpha2)
    else:
        if args.beta2 is None:
            raise ValueError("--beta2 is required without --asymptotic")
        result = p_homodyne_generalized(PulsePair(args.alpha2, args.beta2))
    return "\n".join(_result_lines(result, args.quote_tolerances)) + "\n"


def _cmd_bsclass(args) -> str:
    pair = PulsePair(args.alpha2, args.beta2)
    if args.optimize:
        splitter, result = best_angle(pair, args.grid_points, args.tail_tol)
        lines = [f"phi_over_pi = {format_value(splitter.phi / math.pi)}"]
        lines += _result_lines(result, args.quote_tolerances)
        return "\n".join(lines) + "\n"
    splitter = Beamsplitter(args.phi_over_pi * math.pi)
    result = p_beamsplitter_ml(pair, splitter, args.tail_tol)
    return "\n".join(_result_lines(result, args.quote_tolerances)) + "\n"


def _cmd_optimum(args) -> str:
    pair = PulsePair(args.alpha2, args.beta2)
    if args.method == "exact":
        result = p_err_optimal(pair, args.tail_tol)
        n_used = result.metadata["n_max"]
    else:
        d = d_err_small_alpha(pair)
        n_used = small_alpha_series_cutoff(pair.beta2) if pair.beta2 > 0 else 0
        result = DiscriminationResult.from_error_probability(
            0.5 * (1.0 - d), "helstrom_small_alpha", n_cut=n_used
        )
    lines = [
        f"P_err = {format_value(result.error_probability)}",
        f"D_err = {format_value(result.distinguishability)}",
        f"N_max = {format_value(n_used)}",
    ]
    if args.quote_tolerances:
        lines.append(f"method = {result.method}")
        for key in sorted(result.metadata):
            lines.append(f"{key} = {format_value(result.metadata[key])}")
    return "\n".join(lines) + "\n"


def _cmd_montecarlo(args) -> str:
    pair = PulsePair(args.alpha2, args.beta2)
    rule = DecisionRule(args.rule)
    if args.phi_over_pi is not None:
        splitter = Beamsplitter(args.phi_over_pi * math.pi)
    elif rule is DecisionRule.KENNEDY_SINGLE_PORT:
        splitter = kennedy_angle(pair)
    else:
        splitter = Beamsplitter(math.pi / 4.0)
    cfg = TrialConfig(
        pair,
        splitter,
        rule,
        trials=args.trials,
        seed=args.seed,
        random_common_phase=args.random_common_phase,
    )
    est = run_trials(cfg)
    lines = [
        f"error_rate = {format_value(est.error_rate)}",
        f"standard_error = {format_value(est.standard_error)}",
        f"ci99 = [{format_value(est.ci99_low)}, {format_value(est.ci99_high)}]",
        f"errors = {est.errors}",
        f"trials = {est.trials}",
        f"seed = {est.seed}",
    ]
    if args.quote_tolerances:
        lines.append(f"rule = {rule.value}")
        lines.append(f"phi_over_pi = {format_value(splitter.phi / math.pi)}")
    return "\n".join(lines) + "\n"


def _cmd_figure(args) -> str | None:
    table = figure_table(
        args.id,
        alpha2_grid=args.alpha2_grid,
        beta2_grid=args.beta2_grid,
        alpha2=args.alpha2,
        beta2=args.beta2,
        n_angles=args.n_angles,
        cross_check_alpha2=args.cross_check_alpha2,
        tail_tol=args.tail_tol,
    )
    writer = write_csv if args.format == "csv" else write_json
    if args.out is None:
        import io

        buf = io.StringIO()
        writer(table, buf)
        return buf.getvalue()
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer(table, fh)
    return None


_HANDLERS = {
    "kennedy": _cmd_kennedy,
    "homodyne": _cmd_homodyne,
    "bsclass": _cmd_bsclass,
    "optimum": _cmd_optimum,
    "montecarlo": _cmd_montecarlo,
    "figure": _cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        out = _HANDLERS[args.command](args)
    except NumericalResourceError as exc:
        print(f"phasekit: {exc}", file=sys.stderr)
        return 3
    except (ConfigurationError, ValueError) as exc:
        print(f"phasekit: {exc}", file=sys.stderr)
        return 2
    if out is not None:
        sys.stdout.write(out)
    return 0
