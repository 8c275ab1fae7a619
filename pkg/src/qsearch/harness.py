"""Run configurations, parameter sweeps, and CSV emission.

Sweeps fan out over independent grid points through a process pool (capped
by the QSEARCH_THREADS environment variable) and are made deterministic by
sorting the collected rows on the grid key before anything is written.
"""

from __future__ import annotations

import json
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .dynamics import StepPolicy, first_peak, major_peak_times, peak_scan
from .errors import ConfigError, PropertyViolationError
from .model import PerturbationKind, PerturbationSpec, basis_state, build_grover_hamiltonian
from .ordergap import (
    DEFAULT_EXPONENT_MENU,
    LambdaTerm,
    lambda1_terms,
    lambda2_terms,
    order_gap,
    random_term_list,
)
from .reduced import (
    RabiParams,
    ResonanceParams,
    evolve_reduced_opt,
    evolve_reduced_trial,
    oscillation_period,
    peak_probability,
    rabi_population,
)
from .search import Timing, estimate_success

CSV_HEADER = "N,gamma,omega_R,t,observable,value"

OBSERVABLES = frozenset(
    {
        "pop_b1",
        "peak_pop",
        "peak_time",
        "period",
        "success_freq",
        "predicted_pr",
        "d_gap",
        # extensions beyond the core set:
        "predicted_period",
        "peak_rel_err",
        "period_rel_err",
        "trial_success",
        "ci_low",
        "ci_high",
        "norm_drift",
    }
)

COMMANDS = ("rabi", "evolve", "fig2", "fig3", "peak-law", "algorithm", "theorem-check")


@dataclass(frozen=True)
class SweepRecord:
    """One CSV row: grid point, optional time, named observable, value."""

    n: int
    gamma: float
    omega_r: float
    t: float | None
    observable: str
    value: float

    def __post_init__(self):
        if self.observable not in OBSERVABLES:
            raise ValueError(f"unknown observable {self.observable!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite value for {self.observable}")


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def record_to_row(rec: SweepRecord) -> str:
    t_field = "" if rec.t is None else format_float(rec.t)
    return ",".join(
        (
            str(rec.n),
            format_float(rec.gamma),
            format_float(rec.omega_r),
            t_field,
            rec.observable,
            format_float(rec.value),
        )
    )


def sort_records(records: list[SweepRecord]) -> list[SweepRecord]:
    return sorted(
        records,
        key=lambda r: (r.n, r.gamma, r.omega_r, r.observable, -math.inf if r.t is None else r.t),
    )


def write_csv(records: list[SweepRecord], path: str) -> None:
    lines = [CSV_HEADER]
    lines.extend(record_to_row(r) for r in sort_records(records))
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def parse_csv(path: str) -> list[SweepRecord]:
    records = []
    with open(path, "r", newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        for line in fh:
            n, gamma, omega_r, t, observable, value = line.rstrip("\n").split(",")
            records.append(
                SweepRecord(
                    int(n),
                    float(gamma),
                    float(omega_r),
                    None if t == "" else float(t),
                    observable,
                    float(value),
                )
            )
    return records


@dataclass(frozen=True)
class ExperimentConfig:
    """One run configuration; JSON keys and CLI flags map 1:1 onto fields."""

    command: str
    n_list: tuple[int, ...] = (100,)
    gamma: float = 0.01
    gamma_list: tuple[float, ...] | None = None
    omega_r: float = 10.0
    omega_r_list: tuple[float, ...] | None = None
    omega_r_rule: dict | None = None
    t_end: float | None = None
    dt: float | None = None
    stride: int | None = None
    trials: int = 100
    seed: int = 0
    timing: str = "nominal"
    out: str | None = None
    algorithm: int = 2
    kind: str = "trial"
    ground_index: int = 1
    start_index: int | None = None
    detuning: float = 0.0
    samples: int = 10000
    m_cap: int = 6
    exponents: tuple[str, ...] | None = None
    workers: int | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.n_list:
            raise ConfigError("n_list must not be empty")
        if any(n < 2 for n in self.n_list):
            raise ConfigError("every N must be >= 2")
        if not self.gamma > 0:
            raise ConfigError(f"gamma must be > 0, got {self.gamma}")
        if self.gamma_list is not None and any(g <= 0 for g in self.gamma_list):
            raise ConfigError("every gamma must be > 0")
        if not self.omega_r > 0:
            raise ConfigError(f"omega_r must be > 0, got {self.omega_r}")
        if self.omega_r_list is not None and any(w <= 0 for w in self.omega_r_list):
            raise ConfigError("every omega_r must be > 0")
        if self.omega_r_rule is not None:
            mode = self.omega_r_rule.get("mode")
            if mode not in ("fixed", "proportional"):
                raise ConfigError(f"omega_r_rule mode must be fixed|proportional, got {mode!r}")
            if mode == "proportional" and not self.omega_r_rule.get("coefficient", 0) > 0:
                raise ConfigError("proportional omega_r_rule needs a positive coefficient")
        if self.t_end is not None and not self.t_end > 0:
            raise ConfigError(f"t_end must be > 0, got {self.t_end}")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.timing not in ("nominal", "corrected"):
            raise ConfigError(f"timing must be nominal|corrected, got {self.timing!r}")
        if self.algorithm not in (1, 2):
            raise ConfigError(f"algorithm must be 1 or 2, got {self.algorithm}")
        if self.kind not in ("trial", "odd", "even"):
            raise ConfigError(f"kind must be trial|odd|even, got {self.kind!r}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.m_cap < 1:
            raise ConfigError("m_cap must be >= 1")
        if self.exponents is not None:
            for token in self.exponents:
                try:
                    Fraction(token)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ConfigError(f"bad exponent {token!r}: {exc}") from exc

    @property
    def timing_mode(self) -> Timing:
        return Timing(self.timing)

    def step_policy(self) -> StepPolicy:
        return StepPolicy(dt=self.dt, stride=self.stride)

    def resolve_workers(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        env = os.environ.get("QSEARCH_THREADS", "")
        if env:
            return max(1, int(env))
        return os.cpu_count() or 1

    def omega_for(self, n: int) -> float:
        rule = self.omega_r_rule
        if rule is not None and rule["mode"] == "proportional":
            return rule["coefficient"] * n
        return self.omega_r

    def exponent_menu(self) -> tuple[Fraction, ...]:
        if self.exponents is None:
            return DEFAULT_EXPONENT_MENU
        return tuple(Fraction(token) for token in self.exponents)


def config_from_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config JSON must be an object")
    return data


def build_config(command: str, file_values: dict, overrides: dict) -> ExperimentConfig:
    """Merge config-file values with CLI overrides (flags win)."""
    merged: dict = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged["command"] = command
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("n_list", "gamma_list", "omega_r_list", "exponents"):
        if merged.get(key) is not None:
            merged[key] = tuple(merged[key])
    cfg = ExperimentConfig(**merged)
    cfg.validate()
    return cfg


def _pool_map(fn, points: list, workers: int) -> list:
    if workers <= 1 or len(points) <= 1:
        return [fn(pt) for pt in points]
    with ProcessPoolExecutor(max_workers=min(workers, len(points))) as pool:
        return list(pool.map(fn, points))


def _trial_horizon(n: int, gamma: float, omega_r: float) -> float:
    """Covers a bit over two major crests of the uniform-drive oscillation."""
    omega_sum = math.hypot(gamma**2 * (n - 2) / omega_r, 2.0 * gamma)
    return 2.6 * math.pi / omega_sum


def _fig_trial_point(args) -> list[SweepRecord]:
    n, gamma, omega_r, t_end, dt, stride, want_series = args
    p = ResonanceParams(n, gamma, omega_r)
    horizon = t_end if t_end is not None else _trial_horizon(n, gamma, omega_r)
    series = evolve_reduced_trial(p, horizon, StepPolicy(dt=dt, stride=stride))
    pop = series.population(1)
    records = []
    if want_series:
        records.extend(
            SweepRecord(n, gamma, omega_r, float(t), "pop_b1", float(v))
            for t, v in zip(series.times, pop)
        )
    _, peak_value = peak_scan(series.times, pop, refine=True)
    t_first, _ = first_peak(series.times, pop)
    records.append(SweepRecord(n, gamma, omega_r, None, "peak_pop", peak_value))
    records.append(SweepRecord(n, gamma, omega_r, None, "peak_time", t_first))
    records.append(SweepRecord(n, gamma, omega_r, None, "norm_drift", series.norm_drift))
    return records


def run_fig2_sweep(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Uniform-drive ground-population series and peak summaries per N."""
    points = [
        (n, cfg.gamma, cfg.omega_for(n), cfg.t_end, cfg.dt, cfg.stride, True)
        for n in cfg.n_list
    ]
    results = _pool_map(_fig_trial_point, points, cfg.resolve_workers())
    return sort_records([r for chunk in results for r in chunk])


def run_fig3_sweep(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Peak uniform-drive population over an (N, omega_r) grid."""
    grid: list[tuple[int, float]] = []
    for n in cfg.n_list:
        if cfg.omega_r_list is not None:
            grid.extend((n, w) for w in cfg.omega_r_list)
        else:
            grid.append((n, cfg.omega_for(n)))
    points = [(n, cfg.gamma, w, cfg.t_end, cfg.dt, cfg.stride, False) for n, w in grid]
    results = _pool_map(_fig_trial_point, points, cfg.resolve_workers())
    return sort_records([r for chunk in results for r in chunk])


def _peak_law_point(args) -> list[SweepRecord]:
    n, gamma, omega_r, t_end, dt, stride = args
    p = ResonanceParams(n, gamma, omega_r)
    predicted_peak = peak_probability(p)
    predicted_period = oscillation_period(p)
    horizon = t_end if t_end is not None else 2.6 * predicted_period
    series = evolve_reduced_opt(p, horizon, StepPolicy(dt=dt, stride=stride))
    pop = series.population(1)
    _, peak_value = peak_scan(series.times, pop, refine=True)
    crests = major_peak_times(series.times, pop)
    measured_period = crests[1][0] - crests[0][0] if len(crests) >= 2 else float("nan")
    records = [
        SweepRecord(n, gamma, omega_r, None, "peak_pop", peak_value),
        SweepRecord(n, gamma, omega_r, None, "predicted_pr", predicted_peak),
        SweepRecord(n, gamma, omega_r, None, "predicted_period", predicted_period),
        SweepRecord(n, gamma, omega_r, None, "peak_rel_err", (peak_value - predicted_peak) / predicted_peak),
        SweepRecord(n, gamma, omega_r, None, "norm_drift", series.norm_drift),
    ]
    if math.isfinite(measured_period):
        records.append(SweepRecord(n, gamma, omega_r, None, "period", measured_period))
        records.append(
            SweepRecord(
                n, gamma, omega_r, None, "period_rel_err",
                (measured_period - predicted_period) / predicted_period,
            )
        )
    return records


def run_peak_law_sweep(cfg: ExperimentConfig) -> list[SweepRecord]:
    """Measured vs predicted peak and period over an (N, gamma, omega_r) grid."""
    gammas = cfg.gamma_list if cfg.gamma_list is not None else (cfg.gamma,)
    grid = []
    for n in cfg.n_list:
        for g in gammas:
            if cfg.omega_r_list is not None:
                grid.extend((n, g, w) for w in cfg.omega_r_list)
            else:
                grid.append((n, g, cfg.omega_for(n)))
    points = [(n, g, w, cfg.t_end, cfg.dt, cfg.stride) for n, g, w in grid]
    results = _pool_map(_peak_law_point, points, cfg.resolve_workers())
    return sort_records([r for chunk in results for r in chunk])


def run_rabi(cfg: ExperimentConfig) -> tuple[list[SweepRecord], float]:
    """Two-level transfer-probability series plus the integrator deviation.

    Returns the formula series as records and the maximum absolute deviation
    of the full two-state integration from the closed form.
    """
    from .dynamics import evolve

    gamma = cfg.gamma
    gap = cfg.omega_r
    omega = gap + cfg.detuning
    t_end = cfg.t_end if cfg.t_end is not None else 2.0 * math.pi / gamma
    h = build_grover_hamiltonian(2, cfg.ground_index, gap)
    start = 2 if cfg.ground_index == 1 else 1
    drive = PerturbationSpec(PerturbationKind.TRIAL, start, gamma, omega)
    traj = evolve(h, drive, basis_state(2, start), t_end, cfg.step_policy())
    params = RabiParams(gamma, cfg.detuning)
    formula = np.asarray(rabi_population(params, traj.times))
    measured = traj.population(cfg.ground_index)
    deviation = float(np.max(np.abs(formula - measured)))
    records = [
        SweepRecord(2, gamma, omega, float(t), "pop_b1", float(v))
        for t, v in zip(traj.times, formula)
    ]
    return sort_records(records), deviation


def run_evolve(cfg: ExperimentConfig) -> tuple[list[SweepRecord], float]:
    """Full-system run; emits the ground-population series and norm drift."""
    from .dynamics import evolve

    n = cfg.n_list[0]
    gamma = cfg.gamma
    omega = cfg.omega_for(n)
    h = build_grover_hamiltonian(n, cfg.ground_index, omega)
    start = cfg.start_index if cfg.start_index is not None else (2 if cfg.ground_index == 1 else 1)
    kind = {"trial": PerturbationKind.TRIAL, "odd": PerturbationKind.ODD_PHASE, "even": PerturbationKind.EVEN_PHASE}[cfg.kind]
    drive = PerturbationSpec(kind, start, gamma, omega)
    t_end = cfg.t_end if cfg.t_end is not None else 2.0 * math.pi / gamma
    traj = evolve(h, drive, basis_state(n, start), t_end, cfg.step_policy())
    pop = traj.population(cfg.ground_index)
    records = [
        SweepRecord(n, gamma, omega, float(t), "pop_b1", float(v))
        for t, v in zip(traj.times, pop)
    ]
    records.append(SweepRecord(n, gamma, omega, None, "norm_drift", traj.norm_drift))
    return sort_records(records), traj.norm_drift


def run_algorithm_cmd(cfg: ExperimentConfig) -> tuple[list[SweepRecord], "object"]:
    """Seeded search trials; per-trial rows plus the summary statistics.

    Per-trial rows use the trial index as the t field.
    """
    n = cfg.n_list[0]
    gamma = cfg.gamma
    omega = cfg.omega_for(n)
    h = build_grover_hamiltonian(n, cfg.ground_index, omega)
    estimate = estimate_success(
        cfg.algorithm,
        h,
        gamma,
        cfg.trials,
        cfg.seed,
        cfg.timing_mode,
        cfg.start_index,
        cfg.step_policy(),
    )
    records = [
        SweepRecord(n, gamma, omega, float(i), "trial_success", float(out.success))
        for i, out in enumerate(estimate.outcomes)
    ]
    records.append(SweepRecord(n, gamma, omega, None, "success_freq", estimate.frequency))
    records.append(SweepRecord(n, gamma, omega, None, "predicted_pr", estimate.predicted_pr))
    records.append(SweepRecord(n, gamma, omega, None, "ci_low", estimate.ci_low))
    records.append(SweepRecord(n, gamma, omega, None, "ci_high", estimate.ci_high))
    return sort_records(records), estimate


THEOREM_CSV_HEADER = "sample,m,d,s1_vanishes,s2_vanishes,witness,terms"


def _term_string(terms: list[LambdaTerm]) -> str:
    parts = []
    for t in terms:
        alpha = t.alpha
        alpha_s = f"{alpha.c0}+{alpha.c1}N" if hasattr(alpha, "c0") else str(alpha)
        parts.append(f"{alpha_s}:{t.a}:{t.x}")
    return ";".join(parts)


@dataclass(frozen=True)
class TheoremRow:
    label: str
    m: int
    d: Fraction
    s1_vanishes: bool
    s2_vanishes: bool
    witness: float
    terms: str


@dataclass(frozen=True)
class TheoremRunResult:
    rows: tuple[TheoremRow, ...] = field(default_factory=tuple)
    max_d: Fraction = Fraction(0)
    violations: int = 0


def run_theorem_check(cfg: ExperimentConfig) -> TheoremRunResult:
    """Order-gap survey: canonical term lists plus a seeded random search.

    Raises PropertyViolationError if any sampled list exceeds the proven
    bound d <= 2 or produces a non-positive cancellation witness.
    """
    menu = cfg.exponent_menu()
    rng = random.Random(cfg.seed)
    rows: list[TheoremRow] = []
    max_d = Fraction(-10**9)
    violations = 0

    def add_row(label: str, terms: list[LambdaTerm]) -> None:
        nonlocal max_d, violations
        report = order_gap(terms)
        rows.append(
            TheoremRow(
                label, report.m, report.d, report.s1_vanishes, report.s2_vanishes,
                report.witness, _term_string(terms),
            )
        )
        max_d = max(max_d, report.d)
        if report.d > 2 or not report.witness > 0:
            violations += 1

    add_row("lambda1", lambda1_terms())
    add_row("lambda2", lambda2_terms())
    for i in range(cfg.samples):
        add_row(str(i), random_term_list(rng, cfg.m_cap, menu))

    result = TheoremRunResult(tuple(rows), max_d, violations)
    if violations:
        raise PropertyViolationError(
            f"{violations} samples violated the order-gap bound or witness positivity"
        )
    return result


def write_theorem_csv(result: TheoremRunResult, path: str) -> None:
    lines = [THEOREM_CSV_HEADER]
    for row in result.rows:
        lines.append(
            ",".join(
                (
                    row.label,
                    str(row.m),
                    str(row.d),
                    str(int(row.s1_vanishes)),
                    str(int(row.s2_vanishes)),
                    format_float(row.witness),
                    row.terms,
                )
            )
        )
    try:
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


