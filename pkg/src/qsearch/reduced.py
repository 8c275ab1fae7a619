"""Closed forms and symmetry-reduced resonance systems.

With the ground state at index 1, the drive centered on index 2, and every
other level at the same energy, the N coupled amplitude equations collapse to
three (uniform-phase drive) or four (parity-split drive) because the
off-star amplitudes evolve identically. The reduced systems are integrated
with the same fixed-step RK4 scheme as the full system, so a disagreement
between the two isolates a modeling error rather than a solver difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .dynamics import StepPolicy
from .errors import NormDriftError

NORM_REJECT_TOL = 1e-6


@dataclass(frozen=True)
class RabiParams:
    """Two-level drive parameters: coupling gamma and detuning from resonance."""

    gamma: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @property
    def rabi_frequency(self) -> float:
        """Effective oscillation frequency sqrt(gamma^2 + detuning^2/4)."""
        return math.sqrt(self.gamma**2 + 0.25 * self.detuning**2)


def rabi_population(p: RabiParams, t: float | np.ndarray):
    """Driven two-level transfer probability at time t.

    gamma^2 / (gamma^2 + detuning^2/4) * sin^2(Omega t), which reaches 1 at
    odd multiples of pi/(2 gamma) exactly on resonance.
    """
    amp = p.gamma**2 / (p.gamma**2 + 0.25 * p.detuning**2)
    return amp * np.sin(p.rabi_frequency * np.asarray(t)) ** 2


@dataclass(frozen=True)
class ResonanceParams:
    """Resonantly driven search setting: dimension N, coupling, drive frequency."""

    n: int
    gamma: float
    omega_r: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"N must be >= 2, got {self.n}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not self.omega_r > 0:
            raise ValueError(f"omega_r must be > 0, got {self.omega_r}")

    @property
    def load(self) -> float:
        """Dimensionless penalty N gamma^2 / omega_r^2 of the parity-split drive."""
        return self.n * self.gamma**2 / self.omega_r**2


class ReducedTrialState(NamedTuple):
    b1: complex
    b2: complex
    b3: complex


class ReducedOptState(NamedTuple):
    b1: complex
    b2: complex
    b3: complex
    b4: complex


@dataclass(frozen=True)
class ReducedSeries:
    """Sampled reduced-system trajectory.

    `amplitudes` holds one row per sample (3 or 4 columns). `norm_drift` is
    the maximum deviation of the multiplicity-weighted norm from 1 over all
    integration steps.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    params: ResonanceParams
    norm_drift: float

    def __post_init__(self):
        self.times.setflags(write=False)
        self.amplitudes.setflags(write=False)

    def __len__(self) -> int:
        return self.times.shape[0]

    def population(self, k: int) -> np.ndarray:
        """|b_k(t)|^2 series for 1-based component index k."""
        if not 1 <= k <= self.amplitudes.shape[1]:
            raise IndexError(f"component {k} out of range")
        return np.abs(self.amplitudes[:, k - 1]) ** 2

    @property
    def b1(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    def state_at(self, i: int):
        row = tuple(complex(z) for z in self.amplitudes[i])
        if len(row) == 3:
            return ReducedTrialState(*row)
        return ReducedOptState(*row)


def _plan(p: ResonanceParams, t_end: float, policy: StepPolicy | None):
    policy = policy or StepPolicy()
    return policy.plan(t_end, max(p.omega_r, 1.0), p.gamma)


def evolve_reduced_trial(
    p: ResonanceParams, t_end: float, policy: StepPolicy | None = None
) -> ReducedSeries:
    """Integrate the three-amplitude system from b2(0) = 1.

    The b2 equation carries the (N-2) multiplicity of the equivalent
    off-star amplitudes; the conserved weighted norm is
    |b1|^2 + |b2|^2 + (N-2)|b3|^2.
    """
    dt, n_steps, stride = _plan(p, t_end, policy)
    times, states, drift = _backend.reduced_trial_rk4(
        0j, 1.0 + 0j, 0j, float(p.n - 2), p.gamma, p.omega_r, 0.0, dt, n_steps, stride
    )
    if drift > NORM_REJECT_TOL:
        raise NormDriftError(f"weighted-norm drift {drift:.3e} exceeds {NORM_REJECT_TOL}")
    return ReducedSeries(times, states, p, float(drift))


def evolve_reduced_opt(
    p: ResonanceParams, t_end: float, policy: StepPolicy | None = None
) -> ReducedSeries:
    """Integrate the four-amplitude system from b2(0) = 1.

    Both phase groups enter b2 with multiplicity (N-2)/2; the conserved
    weighted norm is |b1|^2 + |b2|^2 + ((N-2)/2)(|b3|^2 + |b4|^2).
    """
    dt, n_steps, stride = _plan(p, t_end, policy)
    times, states, drift = _backend.reduced_opt_rk4(
        0j, 1.0 + 0j, 0j, 0j, 0.5 * (p.n - 2), p.gamma, p.omega_r,
        0.0, dt, n_steps, stride,
    )
    if drift > NORM_REJECT_TOL:
        raise NormDriftError(f"weighted-norm drift {drift:.3e} exceeds {NORM_REJECT_TOL}")
    return ReducedSeries(times, states, p, float(drift))


def approx_b1(p: ResonanceParams, t: float | np.ndarray):
    """Large-N closed form for the ground amplitude under the parity-split drive.

    -i * omega_r / sqrt(N gamma^2 + omega_r^2)
        * sin(gamma omega_r t / sqrt(N gamma^2 + omega_r^2))

    Its squared amplitude equals peak_probability(p) exactly; accuracy as an
    approximation to the reduced system degrades for small N.
    """
    w = math.sqrt(p.n * p.gamma**2 + p.omega_r**2)
    return -1j * (p.omega_r / w) * np.sin(p.gamma * p.omega_r * np.asarray(t) / w)


def peak_probability(p: ResonanceParams) -> float:
    """Maximum ground-state population 1 / (1 + N gamma^2 / omega_r^2)."""
    return 1.0 / (1.0 + p.load)


def peak_time(p: ResonanceParams) -> float:
    """First time approx_b1 reaches its peak: (pi/(2 gamma)) sqrt(1 + load)."""
    return 0.5 * math.pi / p.gamma * math.sqrt(1.0 + p.load)


def oscillation_period(p: ResonanceParams) -> float:
    """Period of the ground-population oscillation, pi sqrt(1 + load) / gamma."""
    return math.pi * math.sqrt(1.0 + p.load) / p.gamma


@dataclass(frozen=True)
class ComplexityReport:
    """Predicted cost figures for the parity-split search at one setting.

    `expected_total_time` is period / peak probability: the mean number of
    runs needed times the per-run evolution time scale. `realized_c` solves
    Pr = 1 / (1 + c N E^-2 T^-2) with T taken as the per-run period and E as
    the energy figure.
    """

    predicted_pr: float
    period: float
    expected_total_time: float
    energy: float
    time_energy_product: float
    realized_c: float


def complexity_report(p: ResonanceParams) -> ComplexityReport:
    pr = peak_probability(p)
    tau = oscillation_period(p)
    energy = p.omega_r + p.gamma * math.sqrt(p.n - 1)
    total_time = tau / pr
    realized_c = (1.0 / pr - 1.0) * energy**2 * tau**2 / p.n
    return ComplexityReport(
        predicted_pr=pr,
        period=tau,
        expected_total_time=total_time,
        energy=energy,
        time_energy_product=total_time * energy,
        realized_c=realized_c,
    )


