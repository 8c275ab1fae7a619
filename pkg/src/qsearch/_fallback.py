"""Pure-Python/numpy fallback for the compiled integration kernels.

Mirrors the sampling and norm-tracking contract of ``qsearch._core`` exactly;
only the arithmetic backend differs. The full-system kernels vectorize each
RK4 stage with numpy, the reduced kernels run on plain complex scalars.
"""

from __future__ import annotations

import cmath

import numpy as np


def _sample_count(n_steps: int, stride: int) -> int:
    count = 1 + n_steps // stride
    if n_steps % stride != 0:
        count += 1
    return count


def full_star_rk4(c0, energies, center, gamma, omega, plus_mask,
                  t0, dt, n_steps, stride):
    n = c0.shape[0]
    energies = np.asarray(energies, dtype=np.float64)
    plus = np.array(plus_mask, dtype=np.float64, copy=True)
    plus[center] = 0.0
    minus = 1.0 - plus
    minus[center] = 0.0

    times = np.empty(_sample_count(n_steps, stride))
    states = np.empty((times.shape[0], n), dtype=np.complex128)
    c = np.array(c0, dtype=np.complex128, copy=True)

    def rhs(cc, t):
        z = cmath.exp(1j * omega * t)
        zc = z.conjugate()
        cj = cc[center]
        out = energies * cc
        out += (gamma * cj) * (z * plus + zc * minus)
        out[center] += gamma * (zc * (plus @ cc) + z * (minus @ cc))
        return -1j * out

    max_dev = 0.0
    si = 0
    times[si] = t0
    states[si] = c
    si += 1
    half = 0.5 * dt
    for step in range(n_steps):
        t = t0 + step * dt
        k1 = rhs(c, t)
        k2 = rhs(c + half * k1, t + half)
        k3 = rhs(c + half * k2, t + half)
        k4 = rhs(c + dt * k3, t + dt)
        c += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        dev = abs(float(np.sum(c.real * c.real + c.imag * c.imag)) - 1.0)
        if dev > max_dev:
            max_dev = dev
        if (step + 1) % stride == 0 or step + 1 == n_steps:
            times[si] = t0 + (step + 1) * dt
            states[si] = c
            si += 1
    return times, states, max_dev


def custom_star_rk4(c0, energies, center, amps, freqs, t0, dt, n_steps, stride):
    n = c0.shape[0]
    energies = np.asarray(energies, dtype=np.float64)
    amps = np.asarray(amps, dtype=np.float64)
    freqs = np.asarray(freqs, dtype=np.float64)

    times = np.empty(_sample_count(n_steps, stride))
    states = np.empty((times.shape[0], n), dtype=np.complex128)
    c = np.array(c0, dtype=np.complex128, copy=True)

    def rhs(cc, t):
        col = amps * np.exp(1j * freqs * t)
        col[center] = 0.0
        cj = cc[center]
        out = energies * cc + col * cj
        out[center] += np.vdot(col, cc)
        return -1j * out

    max_dev = 0.0
    si = 0
    times[si] = t0
    states[si] = c
    si += 1
    half = 0.5 * dt
    for step in range(n_steps):
        t = t0 + step * dt
        k1 = rhs(c, t)
        k2 = rhs(c + half * k1, t + half)
        k3 = rhs(c + half * k2, t + half)
        k4 = rhs(c + dt * k3, t + dt)
        c += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        dev = abs(float(np.sum(c.real * c.real + c.imag * c.imag)) - 1.0)
        if dev > max_dev:
            max_dev = dev
        if (step + 1) % stride == 0 or step + 1 == n_steps:
            times[si] = t0 + (step + 1) * dt
            states[si] = c
            si += 1
    return times, states, max_dev


def reduced_trial_rk4(b1, b2, b3, coupling, gamma, omega,
                      t0, dt, n_steps, stride):
    times = np.empty(_sample_count(n_steps, stride))
    states = np.empty((times.shape[0], 3), dtype=np.complex128)

    max_dev = 0.0
    si = 0
    times[si] = t0
    states[si] = (b1, b2, b3)
    si += 1
    half = 0.5 * dt

    def rhs(y1, y2, y3, e):
        d1 = -1j * gamma * y2
        d2 = -1j * (gamma * y1 + coupling * gamma * e.conjugate() * y3)
        d3 = -1j * gamma * e * y2
        return d1, d2, d3

    for step in range(n_steps):
        t = t0 + step * dt
        e1 = cmath.exp(1j * omega * t)
        e2 = cmath.exp(1j * omega * (t + half))
        e3 = cmath.exp(1j * omega * (t + dt))
        k11, k12, k13 = rhs(b1, b2, b3, e1)
        k21, k22, k23 = rhs(b1 + half * k11, b2 + half * k12, b3 + half * k13, e2)
        k31, k32, k33 = rhs(b1 + half * k21, b2 + half * k22, b3 + half * k23, e2)
        k41, k42, k43 = rhs(b1 + dt * k31, b2 + dt * k32, b3 + dt * k33, e3)
        sixth = dt / 6.0
        b1 += sixth * (k11 + 2.0 * (k21 + k31) + k41)
        b2 += sixth * (k12 + 2.0 * (k22 + k32) + k42)
        b3 += sixth * (k13 + 2.0 * (k23 + k33) + k43)
        acc = (abs(b1) ** 2 + abs(b2) ** 2 + coupling * abs(b3) ** 2)
        dev = abs(acc - 1.0)
        if dev > max_dev:
            max_dev = dev
        if (step + 1) % stride == 0 or step + 1 == n_steps:
            times[si] = t0 + (step + 1) * dt
            states[si] = (b1, b2, b3)
            si += 1
    return times, states, max_dev


def reduced_opt_rk4(b1, b2, b3, b4, multiplicity, gamma, omega,
                    t0, dt, n_steps, stride):
    times = np.empty(_sample_count(n_steps, stride))
    states = np.empty((times.shape[0], 4), dtype=np.complex128)

    max_dev = 0.0
    si = 0
    times[si] = t0
    states[si] = (b1, b2, b3, b4)
    si += 1
    half = 0.5 * dt

    def rhs(y1, y2, y3, y4, e):
        ec = e.conjugate()
        d1 = -1j * gamma * y2
        d2 = -1j * (gamma * y1 + multiplicity * gamma * (ec * y3 + e * y4))
        d3 = -1j * gamma * e * y2
        d4 = -1j * gamma * ec * y2
        return d1, d2, d3, d4

    for step in range(n_steps):
        t = t0 + step * dt
        e1 = cmath.exp(1j * omega * t)
        e2 = cmath.exp(1j * omega * (t + half))
        e3 = cmath.exp(1j * omega * (t + dt))
        k1 = rhs(b1, b2, b3, b4, e1)
        k2 = rhs(b1 + half * k1[0], b2 + half * k1[1], b3 + half * k1[2], b4 + half * k1[3], e2)
        k3 = rhs(b1 + half * k2[0], b2 + half * k2[1], b3 + half * k2[2], b4 + half * k2[3], e2)
        k4 = rhs(b1 + dt * k3[0], b2 + dt * k3[1], b3 + dt * k3[2], b4 + dt * k3[3], e3)
        sixth = dt / 6.0
        b1 += sixth * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
        b2 += sixth * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
        b3 += sixth * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
        b4 += sixth * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
        acc = (abs(b1) ** 2 + abs(b2) ** 2
               + multiplicity * (abs(b3) ** 2 + abs(b4) ** 2))
        dev = abs(acc - 1.0)
        if dev > max_dev:
            max_dev = dev
        if (step + 1) % stride == 0 or step + 1 == n_steps:
            times[si] = t0 + (step + 1) * dt
            states[si] = (b1, b2, b3, b4)
            si += 1
    return times, states, max_dev
