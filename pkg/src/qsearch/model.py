"""Diagonal database Hamiltonians, star-shaped sinusoidal drives, and states.

Conventions used throughout the package: hbar = 1, energies and drive
frequencies are dimensionless angular frequencies, basis indices are 1-based.
The drive matrices are Hermitian, zero on the diagonal, and nonzero only in
one row and the matching column (the "star" centered on index j).
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError

NORM_TOL = 1e-9


class PerturbationKind(enum.Enum):
    """Phase pattern of the star drive.

    TRIAL puts the same e^{+i w t} phase on every column entry. ODD_PHASE
    and EVEN_PHASE split the phases by the parity of the non-center index
    (and are entrywise complex conjugates of each other). CUSTOM_STAR takes
    an explicit per-index list of amplitudes and signed frequencies.
    """

    TRIAL = "trial"
    ODD_PHASE = "odd"
    EVEN_PHASE = "even"
    CUSTOM_STAR = "custom"


@dataclass(frozen=True)
class StarEntry:
    """One explicit column entry <p|V|j> = amplitude * e^{i frequency t}."""

    index: int
    amplitude: float
    frequency: float

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"entry index must be >= 1, got {self.index}")
        if not self.amplitude > 0:
            raise ValueError(f"entry amplitude must be > 0, got {self.amplitude}")


@dataclass(frozen=True)
class HamiltonianSpec:
    """Diagonal database Hamiltonian with a designated ground index.

    For the canonical search spectrum the ground energy is 0 and every other
    level sits at `gap`. Arbitrary (even degenerate) spectra are accepted for
    exploratory runs; closed-form helpers check `is_canonical` and refuse
    otherwise.
    """

    energies: tuple[float, ...]
    ground_index: int
    gap: float | None = None
    qubit_count: int | None = None

    def __post_init__(self):
        n = len(self.energies)
        if n < 2:
            raise ValueError(f"need at least 2 states, got {n}")
        if not 1 <= self.ground_index <= n:
            raise ValueError(f"ground_index {self.ground_index} out of range 1..{n}")
        e_ground = self.energies[self.ground_index - 1]
        if e_ground > min(self.energies):
            raise ValueError("ground_index does not attain the minimum energy")
        if self.gap is not None:
            if not self.gap > 0:
                raise ValueError(f"gap must be > 0, got {self.gap}")
            if not self._matches_canonical(e_ground):
                raise ValueError("gap given but spectrum is not (0, gap, ..., gap)")
        if self.qubit_count is not None and n != 2**self.qubit_count:
            raise ValueError(f"N={n} is not 2**{self.qubit_count}")

    def _matches_canonical(self, e_ground: float) -> bool:
        if e_ground != 0.0:
            return False
        return all(
            e == self.gap
            for i, e in enumerate(self.energies)
            if i != self.ground_index - 1
        )

    @property
    def dimension(self) -> int:
        return len(self.energies)

    @property
    def is_canonical(self) -> bool:
        """True for the strict one-ground-state spectrum (0, gap, ..., gap)."""
        return self.gap is not None

    @property
    def ground_energy(self) -> float:
        return self.energies[self.ground_index - 1]

    def energy_array(self) -> np.ndarray:
        return np.asarray(self.energies, dtype=np.float64)


def build_grover_hamiltonian(n: int, ground_index: int, gap: float) -> HamiltonianSpec:
    """Canonical search Hamiltonian: one zero-energy state, N-1 at `gap`."""
    if n < 2:
        raise ValueError(f"need at least 2 states, got {n}")
    if not 1 <= ground_index <= n:
        raise ValueError(f"ground_index {ground_index} out of range 1..{n}")
    if not gap > 0:
        raise ValueError(f"gap must be > 0, got {gap}")
    energies = tuple(0.0 if i == ground_index - 1 else float(gap) for i in range(n))
    qubits = n.bit_length() - 1 if n & (n - 1) == 0 else None
    return HamiltonianSpec(energies, ground_index, gap=float(gap), qubit_count=qubits)


@dataclass(frozen=True)
class PerturbationSpec:
    """Star drive centered on basis index `center`.

    For the parity kinds, `gamma` and `omega` fix every entry. CUSTOM_STAR
    instead carries explicit entries; the signed per-entry frequency selects
    the phase direction, so a TRIAL drive is the special case where every
    entry is (p, gamma, +omega).
    """

    kind: PerturbationKind
    center: int
    gamma: float = 0.0
    omega: float = 0.0
    entries: tuple[StarEntry, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.center < 1:
            raise ValueError(f"center must be >= 1, got {self.center}")
        if self.kind is PerturbationKind.CUSTOM_STAR:
            if not self.entries:
                raise ValueError("CUSTOM_STAR needs at least one entry")
            seen = set()
            for e in self.entries:
                if e.index == self.center:
                    raise ValueError("custom entry may not target the center")
                if e.index in seen:
                    raise ValueError(f"duplicate custom entry for index {e.index}")
                seen.add(e.index)
        else:
            # gamma = 0 is allowed as an explicit null drive (free evolution)
            if self.gamma < 0:
                raise ValueError(f"gamma must be >= 0, got {self.gamma}")
            if self.entries:
                raise ValueError("entries are only valid for CUSTOM_STAR")

    def conjugated(self) -> "PerturbationSpec":
        """The entrywise complex conjugate drive (odd <-> even)."""
        if self.kind is PerturbationKind.ODD_PHASE:
            return PerturbationSpec(PerturbationKind.EVEN_PHASE, self.center, self.gamma, self.omega)
        if self.kind is PerturbationKind.EVEN_PHASE:
            return PerturbationSpec(PerturbationKind.ODD_PHASE, self.center, self.gamma, self.omega)
        if self.kind is PerturbationKind.TRIAL:
            return PerturbationSpec(PerturbationKind.TRIAL, self.center, self.gamma, -self.omega)
        flipped = tuple(StarEntry(e.index, e.amplitude, -e.frequency) for e in self.entries)
        return PerturbationSpec(PerturbationKind.CUSTOM_STAR, self.center, self.gamma, self.omega, flipped)


def _column_phase_sign(kind: PerturbationKind, p: int) -> int:
    """Sign of the exponent in <p|V|j> = gamma * e^{sign * i * omega * t}."""
    if kind is PerturbationKind.TRIAL:
        return +1
    odd = p % 2 == 1
    if kind is PerturbationKind.ODD_PHASE:
        return +1 if odd else -1
    if kind is PerturbationKind.EVEN_PHASE:
        return -1 if odd else +1
    raise ValueError(f"no fixed phase pattern for {kind}")


def potential_entry(spec: PerturbationSpec, p: int, q: int, t: float) -> complex:
    """Matrix element <p|V(t)|q> of the star drive."""
    if p < 1 or q < 1:
        raise ValueError(f"indices must be >= 1, got ({p}, {q})")
    j = spec.center
    if p == q or (p != j and q != j):
        return 0j
    if spec.kind is PerturbationKind.CUSTOM_STAR:
        other = p if q == j else q
        for e in spec.entries:
            if e.index == other:
                value = e.amplitude * cmath.exp(1j * e.frequency * t)
                return value if q == j else value.conjugate()
        return 0j
    sign = _column_phase_sign(spec.kind, p if q == j else q)
    value = spec.gamma * cmath.exp(sign * 1j * spec.omega * t)
    return value if q == j else value.conjugate()


def column_vector(spec: PerturbationSpec, n: int, t: float) -> np.ndarray:
    """The center column (<p|V(t)|j>)_p as a dense length-n vector."""
    if spec.center > n:
        raise DimensionMismatchError(f"center {spec.center} exceeds dimension {n}")
    col = np.zeros(n, dtype=np.complex128)
    if spec.kind is PerturbationKind.CUSTOM_STAR:
        for e in spec.entries:
            if e.index > n:
                raise DimensionMismatchError(f"entry index {e.index} exceeds dimension {n}")
            col[e.index - 1] = e.amplitude * cmath.exp(1j * e.frequency * t)
        return col
    z = spec.gamma * cmath.exp(1j * spec.omega * t)
    plus = phase_mask(spec, n).astype(bool)
    col[plus] = z
    col[~plus] = z.conjugate()
    col[spec.center - 1] = 0j
    return col


def phase_mask(spec: PerturbationSpec, n: int) -> np.ndarray:
    """uint8 mask, 1 where the column entry carries e^{+i omega t}.

    Only meaningful for the parity kinds; the center position is zeroed.
    """
    if spec.kind is PerturbationKind.CUSTOM_STAR:
        raise ValueError("phase_mask is undefined for CUSTOM_STAR")
    idx = np.arange(1, n + 1)
    if spec.kind is PerturbationKind.TRIAL:
        mask = np.ones(n, dtype=np.uint8)
    elif spec.kind is PerturbationKind.ODD_PHASE:
        mask = (idx % 2 == 1).astype(np.uint8)
    else:
        mask = (idx % 2 == 0).astype(np.uint8)
    mask[spec.center - 1] = 0
    return mask


def potential_matrix(spec: PerturbationSpec, n: int, t: float) -> np.ndarray:
    """Dense n x n drive matrix at time t (test oracle; O(N^2))."""
    col = column_vector(spec, n, t)
    mat = np.zeros((n, n), dtype=np.complex128)
    j = spec.center - 1
    mat[:, j] = col
    mat[j, :] = col.conjugate()
    return mat


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes at a model time, normalized to 1.

    Directly constructed states must satisfy the strict 1e-9 norm tolerance;
    states extracted from an integration carry its looser acceptance
    tolerance in `norm_tol` (drift up to 1e-6 is representable there, the
    run-level drift lives on the Trajectory).
    """

    amplitudes: np.ndarray
    t: float = 0.0
    norm_tol: float = field(default=NORM_TOL, repr=False, compare=False)

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        if abs(self.norm_squared - 1.0) > self.norm_tol:
            raise ValueError(f"state norm^2 deviates from 1 by {abs(self.norm_squared - 1.0):.3e}")

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def population(self, k: int) -> float:
        """|c_k|^2 for 1-based index k."""
        if not 1 <= k <= self.dimension:
            raise IndexError(f"index {k} out of range 1..{self.dimension}")
        return float(abs(self.amplitudes[k - 1]) ** 2)


def basis_state(n: int, k: int, t: float = 0.0) -> StateVector:
    if not 1 <= k <= n:
        raise IndexError(f"index {k} out of range 1..{n}")
    amp = np.zeros(n, dtype=np.complex128)
    amp[k - 1] = 1.0
    return StateVector(amp, t)


def uniform_state(n: int, t: float = 0.0) -> StateVector:
    amp = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    return StateVector(amp, t)


@dataclass(frozen=True)
class Trajectory:
    """Sampled state history from one integration run.

    `amplitudes` has one row per sample time. `norm_drift` is the maximum of
    |norm^2 - 1| seen over every integration step, not only the samples.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    hamiltonian: HamiltonianSpec
    norm_drift: float
    frame: str = "lab"

    def __post_init__(self):
        if self.times.shape[0] != self.amplitudes.shape[0]:
            raise ValueError("times and amplitudes disagree on sample count")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        self.times.setflags(write=False)
        self.amplitudes.setflags(write=False)

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[1]

    def population(self, k: int) -> np.ndarray:
        """Time series of |c_k|^2 for 1-based index k."""
        if not 1 <= k <= self.dimension:
            raise IndexError(f"index {k} out of range 1..{self.dimension}")
        return np.abs(self.amplitudes[:, k - 1]) ** 2

    def state_at(self, i: int) -> StateVector:
        return StateVector(self.amplitudes[i].copy(), float(self.times[i]), norm_tol=1e-6)

    @property
    def final_state(self) -> StateVector:
        return self.state_at(len(self) - 1)


def apply_potential(spec: PerturbationSpec, state: StateVector, t: float) -> np.ndarray:
    """V(t) applied to the state's amplitudes in O(N) using star sparsity."""
    c = state.amplitudes
    n = c.shape[0]
    col = column_vector(spec, n, t)
    j = spec.center - 1
    out = col * c[j]
    out[j] = np.vdot(col, c)
    return out


def energy_complexity(h: HamiltonianSpec, spec: PerturbationSpec) -> float:
    """Spectral-norm energy figure ||H||_2 + ||V||_2 of one drive phase.

    The star drive has time-independent spectral norm equal to the Euclidean
    norm of its column, gamma*sqrt(N-1) for the uniform-amplitude kinds. For
    non-canonical spectra the Hamiltonian part falls back to max|E_j| and a
    warning flags the report.
    """
    n = h.dimension
    if h.is_canonical:
        h_norm = h.gap
    else:
        h_norm = max(abs(e) for e in h.energies)
        warnings.warn(
            "non-canonical spectrum: energy figure uses max|E_j| for ||H||_2",
            stacklevel=2,
        )
    if spec.kind is PerturbationKind.CUSTOM_STAR:
        v_norm = math.sqrt(sum(e.amplitude**2 for e in spec.entries))
    else:
        v_norm = spec.gamma * math.sqrt(n - 1)
    return h_norm + v_norm
