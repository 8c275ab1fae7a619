"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 property violation
(order-gap bound broken, norm drift), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from . import harness
from ._backend import BACKEND_NAME
from .errors import ConfigError, NormDriftError, PropertyViolationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PROPERTY = 3
EXIT_IO = 4


def _parse_number_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad list {text!r}: {exc}") from exc


def _parse_int_list(text: str) -> list[int]:
    values = _parse_number_list(text)
    out = []
    for v in values:
        if v != int(v):
            raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
        out.append(int(v))
    return out


def _parse_rule(text: str) -> dict:
    if text == "fixed":
        return {"mode": "fixed"}
    if text.startswith("proportional:"):
        try:
            coeff = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad rule {text!r}: {exc}") from exc
        return {"mode": "proportional", "coefficient": coeff}
    raise argparse.ArgumentTypeError(
        f"rule must be 'fixed' or 'proportional:COEFF', got {text!r}"
    )


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override its keys")
    sub.add_argument("--n", dest="n_list", type=_parse_int_list, help="comma-separated N values")
    sub.add_argument("--gamma", type=float, help="drive amplitude")
    sub.add_argument("--gamma-list", dest="gamma_list", type=_parse_number_list)
    sub.add_argument("--omega-r", dest="omega_r", type=float, help="resonance frequency")
    sub.add_argument("--omega-r-list", dest="omega_r_list", type=_parse_number_list)
    sub.add_argument(
        "--omega-r-rule", dest="omega_r_rule", type=_parse_rule,
        help="'fixed' or 'proportional:COEFF' (omega_r = COEFF * N)",
    )
    sub.add_argument("--t-end", dest="t_end", type=float)
    sub.add_argument("--dt", type=float, help="integrator step override")
    sub.add_argument("--stride", type=int, help="sampling stride override")
    sub.add_argument("--trials", type=int)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--timing", choices=("nominal", "corrected"))
    sub.add_argument("--algorithm", type=int, choices=(1, 2))
    sub.add_argument("--kind", choices=("trial", "odd", "even"))
    sub.add_argument("--ground-index", dest="ground_index", type=int)
    sub.add_argument("--start-index", dest="start_index", type=int)
    sub.add_argument("--detuning", type=float)
    sub.add_argument("--samples", type=int, help="random term lists for theorem-check")
    sub.add_argument("--m-cap", dest="m_cap", type=int)
    sub.add_argument("--exponents", type=lambda s: s.split(","), help="comma-separated rationals")
    sub.add_argument("--workers", type=int)
    sub.add_argument("--out", help="CSV output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsearch",
        description="Ground-state search by resonant star drives: simulate, sweep, analyze.",
    )
    parser.add_argument(
        "--version", action="version", version=f"qsearch 0.1.0 ({BACKEND_NAME} backend)"
    )
    subs = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "rabi": "two-level transfer probability vs the full integrator",
        "evolve": "full N-state run, ground-population series",
        "fig2": "uniform-drive population series and peaks across N",
        "fig3": "peak population over an (N, omega_r) grid",
        "peak-law": "measured vs predicted peak and period for the parity-split drive",
        "algorithm": "seeded end-to-end search trials",
        "theorem-check": "order-gap survey over random drive-term families",
    }
    for name, desc in descriptions.items():
        sub = subs.add_parser(name, help=desc)
        _add_common(sub)
    return parser


def _collect_overrides(args: argparse.Namespace) -> dict:
    skip = {"command", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _emit(records, out_path, summary_lines) -> None:
    if out_path:
        harness.write_csv(records, out_path)
    for line in summary_lines:
        print(line)


def run_command(cfg: harness.ExperimentConfig) -> int:
    if cfg.command == "rabi":
        records, deviation = harness.run_rabi(cfg)
        _emit(
            records, cfg.out,
            [
                f"rabi: {len(records)} rows, max |formula - integrator| = {deviation:.3e}",
            ],
        )
        return EXIT_OK
    if cfg.command == "evolve":
        records, drift = harness.run_evolve(cfg)
        _emit(records, cfg.out, [f"evolve: {len(records)} rows, norm drift = {drift:.3e}"])
        return EXIT_OK
    if cfg.command == "fig2":
        records = harness.run_fig2_sweep(cfg)
        peaks = {r.n: r.value for r in records if r.observable == "peak_pop"}
        lines = [f"fig2: N={n} peak={v:.6f}" for n, v in sorted(peaks.items())]
        _emit(records, cfg.out, lines)
        return EXIT_OK
    if cfg.command == "fig3":
        records = harness.run_fig3_sweep(cfg)
        lines = [
            f"fig3: N={r.n} omega_r={r.omega_r:g} peak={r.value:.6f}"
            for r in records
            if r.observable == "peak_pop"
        ]
        _emit(records, cfg.out, lines)
        return EXIT_OK
    if cfg.command == "peak-law":
        records = harness.run_peak_law_sweep(cfg)
        worst = max(
            (abs(r.value) for r in records if r.observable == "peak_rel_err"),
            default=float("nan"),
        )
        _emit(records, cfg.out, [f"peak-law: {len(records)} rows, worst peak error = {worst:.3%}"])
        return EXIT_OK
    if cfg.command == "algorithm":
        records, estimate = harness.run_algorithm_cmd(cfg)
        lines = [
            f"algorithm {cfg.algorithm}: {estimate.successes}/{estimate.trials} successes "
            f"(frequency {estimate.frequency:.4f}, 95% CI [{estimate.ci_low:.4f}, {estimate.ci_high:.4f}], "
            f"predicted peak {estimate.predicted_pr:.4f})",
        ]
        _emit(records, cfg.out, lines)
        return EXIT_OK
    if cfg.command == "theorem-check":
        result = harness.run_theorem_check(cfg)
        if cfg.out:
            harness.write_theorem_csv(result, cfg.out)
        print(
            f"theorem-check: {len(result.rows)} term lists, max d = {result.max_d}, "
            f"violations = {result.violations}"
        )
        return EXIT_OK
    raise ConfigError(f"unknown command {cfg.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = harness.config_from_json(args.config) if args.config else {}
        cfg = harness.build_config(args.command, file_values, _collect_overrides(args))
        return run_command(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PropertyViolationError, NormDriftError) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
