import math

import numpy as np
import pytest

from qsearch.dynamics import (
    StepPolicy,
    evolve,
    first_peak,
    major_peak_times,
    peak_scan,
    population,
    rotating_frame,
)
from qsearch.errors import NormDriftError, StepCapExceededError
from qsearch.model import (
    PerturbationKind,
    PerturbationSpec,
    basis_state,
    build_grover_hamiltonian,
)
from qsearch.reduced import ResonanceParams, approx_b1, evolve_reduced_trial

from conftest import solve_dense


class TestEvolve:
    def test_two_state_resonance_full_transfer(self):
        # at resonance the ground population reaches 1 at t = pi/(2 gamma)
        gamma = 0.01
        h = build_grover_hamiltonian(2, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, gamma, 1.0)
        t_end = 0.5 * math.pi / gamma
        traj = evolve(h, v, basis_state(2, 2), t_end, StepPolicy(divisor=1000))
        assert traj.population(1)[-1] == pytest.approx(1.0, abs=1e-8)

    def test_null_drive_preserves_populations(self, rng):
        h = build_grover_hamiltonian(6, 1, 2.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 3, 0.0, 2.0)
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        c /= np.linalg.norm(c)
        from qsearch.model import StateVector

        traj = evolve(h, v, StateVector(c), 20.0, StepPolicy(divisor=800))
        for k in range(1, 7):
            pops = traj.population(k)
            assert np.max(np.abs(pops - pops[0])) < 1e-10

    def test_matches_reduced_oracle_n64(self):
        # full lab-frame run against the independently integrated reduced system
        gamma, omega = 0.01, 10.0
        h = build_grover_hamiltonian(64, 1, omega)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, gamma, omega)
        policy = StepPolicy(divisor=1000, target_samples=1500)
        traj = evolve(h, v, basis_state(64, 2), 160.0, policy)
        series = evolve_reduced_trial(ResonanceParams(64, gamma, omega), 160.0, policy)
        np.testing.assert_allclose(traj.times, series.times)
        err = np.max(np.abs(traj.population(1) - series.population(1)))
        assert err < 1e-8

    def test_matches_adaptive_reference_small_n(self, rng):
        # cross-check against an independent adaptive integrator
        h = build_grover_hamiltonian(6, 2, 3.0)
        v = PerturbationSpec(PerturbationKind.ODD_PHASE, 4, 0.05, 3.0)
        traj = evolve(h, v, basis_state(6, 4), 25.0, StepPolicy(divisor=800, target_samples=50))
        ref = solve_dense(h, v, basis_state(6, 4).amplitudes, traj.times)
        assert np.max(np.abs(traj.amplitudes - ref)) < 1e-8

    def test_norm_drift_rejection(self):
        h = build_grover_hamiltonian(4, 1, 10.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.5, 10.0)
        with pytest.raises(NormDriftError):
            evolve(h, v, basis_state(4, 2), 200.0, StepPolicy(dt=0.3))

    def test_step_cap(self):
        h = build_grover_hamiltonian(4, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.01, 1.0)
        with pytest.raises(StepCapExceededError):
            evolve(h, v, basis_state(4, 2), 100.0, StepPolicy(dt=1e-5, max_steps=1000))

    def test_time_ordering_required(self):
        h = build_grover_hamiltonian(4, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.01, 1.0)
        with pytest.raises(ValueError):
            evolve(h, v, basis_state(4, 2), 0.0)

    def test_step_halving_fourth_order(self):
        # at the acceptance-grade step, halving h must move the final state
        # by less than 16x the 1e-8 accuracy target, and successive halvings
        # must shrink the change about sixteenfold (4th-order convergence)
        gamma = 0.01
        h = build_grover_hamiltonian(2, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, gamma, 1.0)
        t_end = 0.5 * math.pi / gamma

        def final(divisor):
            return evolve(h, v, basis_state(2, 2), t_end, StepPolicy(divisor=divisor)).amplitudes[-1]

        diff_coarse = np.max(np.abs(final(500) - final(1000)))
        diff_fine = np.max(np.abs(final(1000) - final(2000)))
        assert diff_fine < 16 * 1e-8
        assert 10 < diff_coarse / diff_fine < 22

    def test_time_reversal(self):
        # running the conjugated final state under the conjugated,
        # time-reflected drive undoes the evolution; with t_end a whole
        # number of drive periods that reversed drive is the drive itself
        gamma, omega = 0.04, 2.0
        k = 20
        t_end = 2.0 * math.pi * k / omega
        h = build_grover_hamiltonian(8, 1, omega)
        drive = PerturbationSpec(PerturbationKind.ODD_PHASE, 2, gamma, omega)
        policy = StepPolicy(divisor=800)
        start = basis_state(8, 2)
        fwd = evolve(h, drive, start, t_end, policy)
        from qsearch.model import StateVector

        flipped = StateVector(fwd.amplitudes[-1].conjugate(), 0.0, norm_tol=1e-6)
        back = evolve(h, drive, flipped, t_end, policy)
        recovered = back.amplitudes[-1].conjugate()
        assert np.max(np.abs(recovered - start.amplitudes)) < 1e-7


class TestRotatingFrame:
    def test_zero_energy_row_unchanged(self):
        h = build_grover_hamiltonian(3, 1, 2.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.05, 2.0)
        traj = evolve(h, v, basis_state(3, 2), 10.0)
        rot = rotating_frame(traj)
        np.testing.assert_allclose(rot.amplitudes[:, 0], traj.amplitudes[:, 0], atol=1e-15)

    def test_populations_preserved(self):
        h = build_grover_hamiltonian(5, 2, 3.0)
        v = PerturbationSpec(PerturbationKind.ODD_PHASE, 1, 0.05, 3.0)
        traj = evolve(h, v, basis_state(5, 1), 8.0)
        rot = rotating_frame(traj)
        for k in range(1, 6):
            np.testing.assert_allclose(rot.population(k), traj.population(k), atol=1e-12)

    def test_double_rotation_rejected(self):
        h = build_grover_hamiltonian(3, 1, 2.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.05, 2.0)
        rot = rotating_frame(evolve(h, v, basis_state(3, 2), 5.0))
        with pytest.raises(ValueError, match="already"):
            rotating_frame(rot)

    def test_phase_factor_value(self):
        # E = 10 at t = pi/10 flips the sign of the amplitude
        h = build_grover_hamiltonian(2, 1, 10.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.01, 10.0)
        t_end = math.pi / 10.0
        traj = evolve(h, v, basis_state(2, 2), t_end, StepPolicy(stride=10**9))
        rot = rotating_frame(traj)
        expected = traj.amplitudes[-1, 1] * np.exp(1j * 10.0 * traj.times[-1])
        assert rot.amplitudes[-1, 1] == pytest.approx(expected, abs=1e-12)
        assert rot.amplitudes[-1, 1] == pytest.approx(-traj.amplitudes[-1, 1], abs=1e-9)


class TestPopulation:
    def test_sums_to_one(self):
        h = build_grover_hamiltonian(6, 1, 4.0)
        v = PerturbationSpec(PerturbationKind.EVEN_PHASE, 2, 0.05, 4.0)
        traj = evolve(h, v, basis_state(6, 2), 12.0, StepPolicy(divisor=800))
        total = sum(population(traj, k) for k in range(1, 7))
        assert np.max(np.abs(total - 1.0)) < 1e-9

    def test_initial_condition(self):
        h = build_grover_hamiltonian(4, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.02, 1.0)
        traj = evolve(h, v, basis_state(4, 2), 5.0)
        assert population(traj, 2)[0] == 1.0

    def test_two_state_sine_squared(self):
        gamma = 0.01
        h = build_grover_hamiltonian(2, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, gamma, 1.0)
        traj = evolve(h, v, basis_state(2, 2), 300.0, StepPolicy(divisor=1000))
        ref = np.sin(gamma * traj.times) ** 2
        assert np.max(np.abs(population(traj, 1) - ref)) < 1e-8

    def test_index_bounds(self):
        h = build_grover_hamiltonian(4, 1, 1.0)
        v = PerturbationSpec(PerturbationKind.TRIAL, 2, 0.02, 1.0)
        traj = evolve(h, v, basis_state(4, 2), 1.0)
        with pytest.raises(IndexError):
            population(traj, 5)


class TestPeakScan:
    def test_sine_squared_peak(self):
        gamma = 0.01
        t = np.linspace(0.0, 300.0, 20001)
        values = np.sin(gamma * t) ** 2
        t_peak, value = peak_scan(t, values, refine=True)
        assert t_peak == pytest.approx(0.5 * math.pi / gamma, abs=np.diff(t)[0])
        assert value == pytest.approx(1.0, abs=1e-6)

    def test_constant_series_returns_first(self):
        t = np.linspace(0, 1, 11)
        t_peak, value = peak_scan(t, np.ones(11), refine=True)
        assert t_peak == 0.0 and value == 1.0

    def test_large_n_closed_form_peak(self):
        # scanned peak of the closed-form series equals the predicted maximum
        p = ResonanceParams(100, 0.01, 1.0)
        t = np.linspace(0.0, 400.0, 40001)
        values = np.abs(approx_b1(p, t)) ** 2
        _, value = peak_scan(t, values, refine=True)
        assert value == pytest.approx(1.0 / 1.01, abs=1e-6)

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError):
            peak_scan(np.array([]), np.array([]))

    def test_major_peaks_and_first_peak(self):
        t = np.linspace(0.0, 10.0, 5001)
        values = np.sin(t) ** 2 + 0.001 * np.sin(40 * t)
        crests = major_peak_times(t, values)
        assert len(crests) == 3
        t_first, _ = first_peak(t, values)
        assert t_first == pytest.approx(math.pi / 2, abs=0.05)
