"""Full N-state integration of i dpsi/dt = (H + V(t)) psi and trajectory tools.

The integrator is a classical fixed-step 4th-order Runge-Kutta scheme in the
lab frame. Fixed steps keep runs bit-reproducible and the error controlled by
resolving the fastest of the drive frequency, the level energies, and the
coupling amplitude; rotating-frame views are computed after the fact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionMismatchError, NormDriftError, StepCapExceededError
from .model import (
    HamiltonianSpec,
    PerturbationKind,
    PerturbationSpec,
    StateVector,
    Trajectory,
    phase_mask,
)

DEFAULT_DIVISOR = 200
DEFAULT_TARGET_SAMPLES = 4000
DEFAULT_MAX_STEPS = 50_000_000
NORM_REJECT_TOL = 1e-6


@dataclass(frozen=True)
class StepPolicy:
    """Step-size and sampling control for the fixed-step integrators.

    When `dt` is None the step is min(2*pi/omega_max, pi/gamma) / divisor,
    with omega_max = max(|drive omega|, max|E_j|, 1). When `stride` is None,
    roughly `target_samples` evenly strided samples are recorded.
    """

    dt: float | None = None
    divisor: float = DEFAULT_DIVISOR
    stride: int | None = None
    target_samples: int = DEFAULT_TARGET_SAMPLES
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.divisor > 0:
            raise ValueError(f"divisor must be > 0, got {self.divisor}")
        if self.stride is not None and self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def step_size(self, omega_max: float, gamma: float) -> float:
        if self.dt is not None:
            return self.dt
        omega_max = max(abs(omega_max), 1.0)
        limit = 2.0 * math.pi / omega_max
        if gamma > 0:
            limit = min(limit, math.pi / gamma)
        return limit / self.divisor

    def plan(self, span: float, omega_max: float, gamma: float) -> tuple[float, int, int]:
        """Resolve (dt, n_steps, stride) for an integration over `span`."""
        if not span > 0:
            raise ValueError(f"time span must be > 0, got {span}")
        dt = self.step_size(omega_max, gamma)
        n_steps = max(1, math.ceil(span / dt))
        if n_steps > self.max_steps:
            raise StepCapExceededError(
                f"{n_steps} steps needed, cap is {self.max_steps}"
            )
        dt = span / n_steps
        stride = self.stride or max(1, n_steps // self.target_samples)
        return dt, n_steps, stride


def _drive_gamma(v: PerturbationSpec) -> float:
    if v.kind is PerturbationKind.CUSTOM_STAR:
        return max(e.amplitude for e in v.entries)
    return v.gamma


def _drive_omega_max(h: HamiltonianSpec, v: PerturbationSpec) -> float:
    e_max = max(abs(e) for e in h.energies)
    if v.kind is PerturbationKind.CUSTOM_STAR:
        w = max(abs(e.frequency) for e in v.entries)
    else:
        w = abs(v.omega)
    return max(w, e_max, 1.0)


def evolve(
    h: HamiltonianSpec,
    v: PerturbationSpec,
    initial: StateVector,
    t_end: float,
    policy: StepPolicy | None = None,
) -> Trajectory:
    """Integrate the driven system from `initial.t` to `t_end`.

    Raises StepCapExceededError when the policy cannot afford the run and
    NormDriftError when norm conservation degrades beyond 1e-6.
    """
    n = h.dimension
    if initial.dimension != n:
        raise DimensionMismatchError(
            f"state dimension {initial.dimension} != Hamiltonian dimension {n}"
        )
    if v.center > n:
        raise DimensionMismatchError(f"drive center {v.center} exceeds dimension {n}")
    if not t_end > initial.t:
        raise ValueError(f"t_end={t_end} must exceed initial time {initial.t}")

    policy = policy or StepPolicy()
    dt, n_steps, stride = policy.plan(
        t_end - initial.t, _drive_omega_max(h, v), _drive_gamma(v)
    )
    energies = h.energy_array()
    c0 = np.array(initial.amplitudes, dtype=np.complex128, copy=True)

    if v.kind is PerturbationKind.CUSTOM_STAR:
        amps = np.zeros(n)
        freqs = np.zeros(n)
        for e in v.entries:
            if e.index > n:
                raise DimensionMismatchError(
                    f"entry index {e.index} exceeds dimension {n}"
                )
            amps[e.index - 1] = e.amplitude
            freqs[e.index - 1] = e.frequency
        times, states, drift = _backend.custom_star_rk4(
            c0, energies, v.center - 1, amps, freqs, initial.t, dt, n_steps, stride
        )
    else:
        mask = phase_mask(v, n)
        times, states, drift = _backend.full_star_rk4(
            c0, energies, v.center - 1, v.gamma, v.omega, mask,
            initial.t, dt, n_steps, stride,
        )

    if drift > NORM_REJECT_TOL:
        raise NormDriftError(
            f"norm drift {drift:.3e} exceeds {NORM_REJECT_TOL}; shrink the step"
        )
    return Trajectory(times, states, h, float(drift))


def rotating_frame(traj: Trajectory) -> Trajectory:
    """Phase-unwound view b_k(t) = e^{i E_k t} c_k(t); populations unchanged."""
    if traj.frame != "lab":
        raise ValueError("trajectory is already in the rotating frame")
    energies = traj.hamiltonian.energy_array()
    phases = np.exp(1j * np.outer(traj.times, energies))
    return Trajectory(
        traj.times.copy(),
        traj.amplitudes * phases,
        traj.hamiltonian,
        traj.norm_drift,
        frame="rotating",
    )


def population(traj: Trajectory, k: int) -> np.ndarray:
    """Time series of |c_k(t)|^2 for 1-based index k."""
    return traj.population(k)


def _parabolic_refine(times: np.ndarray, values: np.ndarray, i: int) -> tuple[float, float]:
    """Vertex of the parabola through samples i-1, i, i+1 (uniform spacing assumed)."""
    if i == 0 or i == len(values) - 1:
        return float(times[i]), float(values[i])
    vm, v0, vp = values[i - 1], values[i], values[i + 1]
    denom = vp - 2.0 * v0 + vm
    if denom >= 0.0 or not np.isfinite(denom):
        return float(times[i]), float(v0)
    delta = 0.5 * (vm - vp) / denom
    h = 0.5 * (times[i + 1] - times[i - 1])
    t_star = float(times[i] + delta * h)
    v_star = float(v0 - 0.25 * (vm - vp) * delta)
    return t_star, v_star


def peak_scan(times: np.ndarray, values: np.ndarray, refine: bool = False) -> tuple[float, float]:
    """Global maximum of a sampled series; ties break toward the smallest t.

    With `refine`, a parabola through the three samples bracketing the
    maximum sharpens the estimate.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.size == 0:
        raise ValueError("empty series")
    i = int(np.argmax(values))
    if refine:
        return _parabolic_refine(times, values, i)
    return float(times[i]), float(values[i])


def major_peak_times(
    times: np.ndarray,
    values: np.ndarray,
    frac: float = 0.5,
    refine: bool = True,
) -> list[tuple[float, float]]:
    """Main crests of an oscillating series, in time order.

    A crest region opens when the series rises to `frac` of the global
    maximum and closes only after falling back below 0.7 * frac of it
    (hysteresis), so ripple riding on a broad crest yields one crest, not
    many. Each region contributes its maximum; regions touching the data
    edges are dropped because their maxima cannot be bracketed.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.size < 3:
        return []
    top = float(np.max(values))
    enter = frac * top
    release = 0.7 * frac * top
    peaks: list[tuple[float, float]] = []
    start = None
    for i, v in enumerate(values):
        if start is None:
            if v >= enter:
                start = i
        elif v < release:
            j = start + int(np.argmax(values[start:i]))
            if 0 < j < len(values) - 1:
                peaks.append(
                    _parabolic_refine(times, values, j)
                    if refine
                    else (float(times[j]), float(values[j]))
                )
            start = None
    return peaks


def first_peak(
    times: np.ndarray,
    values: np.ndarray,
    frac: float = 0.5,
    refine: bool = True,
) -> tuple[float, float]:
    """Earliest major crest of the series (see major_peak_times)."""
    peaks = major_peak_times(times, values, frac=frac, refine=refine)
    if not peaks:
        return peak_scan(times, values, refine=refine)
    return peaks[0]
