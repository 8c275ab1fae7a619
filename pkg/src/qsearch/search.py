"""End-to-end ground-state search runs with seeded measurement sampling.

Both procedures measure, drive the star potential centered on the measured
state at the resonance frequency, and measure again at a configured time.
Evolution always uses the full N-state integrator, so the symmetry
assumptions behind the reduced systems are themselves under test here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats

from .dynamics import StepPolicy, evolve, peak_scan
from .errors import ConfigError
from .model import (
    HamiltonianSpec,
    PerturbationKind,
    PerturbationSpec,
    StateVector,
    basis_state,
    energy_complexity,
    uniform_state,
)
from .reduced import ResonanceParams, evolve_reduced_trial, peak_probability, peak_time

ENERGY_ZERO_GUARD = 1e-12
MEASURE_NORM_TOL = 1e-6


class Timing(enum.Enum):
    """When the post-drive measurement happens.

    NOMINAL measures at pi/(2 gamma), the half-cycle of the bare two-state
    oscillation. CORRECTED measures at the predicted peak of the driven
    many-state oscillation instead: the closed-form peak time for the
    parity-split drive, a scanned reduced-system peak for the uniform one.
    """

    NOMINAL = "nominal"
    CORRECTED = "corrected"


class Step(enum.Enum):
    INIT = "init"
    AFTER_TRIAL = "after_trial"
    AFTER_ODD = "after_odd"
    AFTER_EVEN = "after_even"


@dataclass(frozen=True)
class MeasurementRecord:
    step: Step
    time: float
    index: int
    energy: float


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a single search run.

    `iterations` counts drive-and-measure phases executed (0 on an immediate
    hit). `total_time` sums the per-phase evolution times, `energy` is the
    spectral-norm figure of one drive phase, and `norm_drift` the worst
    norm deviation seen across the run's integrations.
    """

    returned_index: int
    success: bool
    records: tuple[MeasurementRecord, ...]
    total_time: float
    energy: float
    iterations: int
    norm_drift: float = 0.0


def measure(state: StateVector, rng: np.random.Generator) -> int:
    """Sample a 1-based basis index with probability |c_k|^2."""
    c = state.amplitudes
    weights = np.abs(c) ** 2
    total = float(weights.sum())
    if abs(total - 1.0) > MEASURE_NORM_TOL:
        raise ValueError(f"state norm^2 off by {abs(total - 1.0):.3e}; refusing to sample")
    u = rng.random() * total
    cum = np.cumsum(weights)
    return int(np.searchsorted(cum, u, side="right")) + 1


def _require_canonical(h: HamiltonianSpec) -> None:
    if not h.is_canonical:
        raise ConfigError("search algorithms require the canonical one-ground spectrum")


@lru_cache(maxsize=64)
def _scanned_trial_peak_time(n: int, gamma: float, omega_r: float) -> float:
    """Peak time of the uniform-drive ground population, from the reduced system."""
    p = ResonanceParams(n, gamma, omega_r)
    horizon = 1.25 * 0.5 * math.pi / gamma
    series = evolve_reduced_trial(p, horizon)
    t_peak, _ = peak_scan(series.times, series.population(1), refine=True)
    return t_peak


def measurement_time(
    algorithm: int, h: HamiltonianSpec, gamma: float, timing: Timing
) -> float:
    nominal = 0.5 * math.pi / gamma
    if timing is Timing.NOMINAL:
        return nominal
    if algorithm == 2:
        return peak_time(ResonanceParams(h.dimension, gamma, h.gap))
    return _scanned_trial_peak_time(h.dimension, gamma, h.gap)


def _phase(
    h: HamiltonianSpec,
    kind: PerturbationKind,
    center: int,
    gamma: float,
    t_meas: float,
    rng: np.random.Generator,
    policy: StepPolicy | None,
) -> tuple[int, float]:
    drive = PerturbationSpec(kind, center, gamma, h.gap)
    traj = evolve(h, drive, basis_state(h.dimension, center), t_meas, policy)
    index = measure(traj.final_state, rng)
    return index, traj.norm_drift


def run_algorithm1(
    h: HamiltonianSpec,
    gamma: float,
    rng: np.random.Generator,
    timing: Timing = Timing.NOMINAL,
    start_index: int | None = None,
    policy: StepPolicy | None = None,
) -> SearchOutcome:
    """Measure, drive the uniform star at the measured state, measure again.

    The pre-measurement state is the uniform superposition unless
    `start_index` pins the first measurement outcome.
    """
    _require_canonical(h)
    n = h.dimension
    energy = energy_complexity(h, PerturbationSpec(PerturbationKind.TRIAL, 1, gamma, h.gap))

    g1 = start_index if start_index is not None else measure(uniform_state(n), rng)
    records = [MeasurementRecord(Step.INIT, 0.0, g1, h.energies[g1 - 1])]
    if abs(h.energies[g1 - 1]) <= ENERGY_ZERO_GUARD:
        return SearchOutcome(g1, g1 == h.ground_index, tuple(records), 0.0, energy, 0)

    t_meas = measurement_time(1, h, gamma, timing)
    g2, drift = _phase(h, PerturbationKind.TRIAL, g1, gamma, t_meas, rng, policy)
    records.append(MeasurementRecord(Step.AFTER_TRIAL, t_meas, g2, h.energies[g2 - 1]))
    return SearchOutcome(g2, g2 == h.ground_index, tuple(records), t_meas, energy, 1, drift)


def run_algorithm2(
    h: HamiltonianSpec,
    gamma: float,
    rng: np.random.Generator,
    timing: Timing = Timing.NOMINAL,
    start_index: int | None = None,
    policy: StepPolicy | None = None,
) -> SearchOutcome:
    """Two-phase search: odd-phase drive, then even-phase drive on a miss.

    The odd-phase star resonantly transfers population to an odd-position
    ground state, the even-phase star to an even-position one; whichever
    phase matches the (unknown) ground parity does the work.
    """
    _require_canonical(h)
    n = h.dimension
    energy = energy_complexity(h, PerturbationSpec(PerturbationKind.ODD_PHASE, 1, gamma, h.gap))

    g1 = start_index if start_index is not None else measure(uniform_state(n), rng)
    records = [MeasurementRecord(Step.INIT, 0.0, g1, h.energies[g1 - 1])]
    if abs(h.energies[g1 - 1]) <= ENERGY_ZERO_GUARD:
        return SearchOutcome(g1, g1 == h.ground_index, tuple(records), 0.0, energy, 0)

    t_meas = measurement_time(2, h, gamma, timing)
    g2, drift1 = _phase(h, PerturbationKind.ODD_PHASE, g1, gamma, t_meas, rng, policy)
    records.append(MeasurementRecord(Step.AFTER_ODD, t_meas, g2, h.energies[g2 - 1]))
    if abs(h.energies[g2 - 1]) <= ENERGY_ZERO_GUARD:
        return SearchOutcome(g2, g2 == h.ground_index, tuple(records), t_meas, energy, 1, drift1)

    g3, drift2 = _phase(h, PerturbationKind.EVEN_PHASE, g2, gamma, t_meas, rng, policy)
    records.append(MeasurementRecord(Step.AFTER_EVEN, t_meas, g3, h.energies[g3 - 1]))
    return SearchOutcome(
        g3, g3 == h.ground_index, tuple(records), 2 * t_meas, energy, 2, max(drift1, drift2)
    )


def run_search(
    algorithm: int,
    h: HamiltonianSpec,
    gamma: float,
    rng: np.random.Generator,
    timing: Timing = Timing.NOMINAL,
    start_index: int | None = None,
    policy: StepPolicy | None = None,
) -> SearchOutcome:
    if algorithm == 1:
        return run_algorithm1(h, gamma, rng, timing, start_index, policy)
    if algorithm == 2:
        return run_algorithm2(h, gamma, rng, timing, start_index, policy)
    raise ConfigError(f"algorithm must be 1 or 2, got {algorithm}")


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Deterministic per-trial stream derived from (master seed, index)."""
    return np.random.default_rng([master_seed, trial_index])


@dataclass(frozen=True)
class SuccessEstimate:
    """Empirical success statistics over independent seeded trials."""

    trials: int
    successes: int
    frequency: float
    ci_low: float
    ci_high: float
    predicted_pr: float
    outcomes: tuple[SearchOutcome, ...]
    max_norm_drift: float = 0.0


def clopper_pearson(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


def estimate_success(
    algorithm: int,
    h: HamiltonianSpec,
    gamma: float,
    trials: int,
    master_seed: int,
    timing: Timing = Timing.NOMINAL,
    start_index: int | None = None,
    policy: StepPolicy | None = None,
    keep_outcomes: bool = True,
) -> SuccessEstimate:
    """Run independent seeded trials and compare against the predicted peak.

    Trial i uses the RNG stream (master_seed, i), so the estimate is
    reproducible run to run and independent of execution order.
    """
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    _require_canonical(h)
    outcomes = []
    successes = 0
    worst_drift = 0.0
    for i in range(trials):
        outcome = run_search(algorithm, h, gamma, trial_rng(master_seed, i), timing, start_index, policy)
        successes += outcome.success
        worst_drift = max(worst_drift, outcome.norm_drift)
        if keep_outcomes:
            outcomes.append(outcome)
    lo, hi = clopper_pearson(successes, trials)
    predicted = peak_probability(ResonanceParams(h.dimension, gamma, h.gap))
    return SuccessEstimate(
        trials=trials,
        successes=successes,
        frequency=successes / trials,
        ci_low=lo,
        ci_high=hi,
        predicted_pr=predicted,
        outcomes=tuple(outcomes),
        max_norm_drift=worst_drift,
    )
