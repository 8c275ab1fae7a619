# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step RK4 kernels for the star-coupled Schrodinger systems.

All kernels share the sampling contract of the pure-Python fallback: the
initial state is sample 0, then every `stride`-th step and the final step.
The returned drift is the maximum of |norm^2 - 1| over every step, where the
reduced kernels use the multiplicity-weighted norm.
"""

import numpy as np

cimport cython
from libc.math cimport cos, sin, fabs


cdef inline Py_ssize_t _sample_count(Py_ssize_t n_steps, Py_ssize_t stride) noexcept:
    cdef Py_ssize_t count = 1 + n_steps // stride
    if n_steps % stride != 0:
        count += 1
    return count


cdef inline void _star_rhs(const double complex[::1] c, const double[::1] energies,
                           Py_ssize_t j, double gamma,
                           const unsigned char[::1] plus_mask,
                           double omega, double t,
                           double complex[::1] out, Py_ssize_t n) noexcept nogil:
    cdef double complex mi = -1j
    cdef double complex z = cos(omega * t) + 1j * sin(omega * t)
    cdef double complex zc = z.conjugate()
    cdef double complex cj = c[j]
    cdef double complex sp = 0, sm = 0
    cdef Py_ssize_t p
    for p in range(n):
        if p == j:
            continue
        if plus_mask[p]:
            sp = sp + c[p]
            out[p] = mi * (energies[p] * c[p] + gamma * z * cj)
        else:
            sm = sm + c[p]
            out[p] = mi * (energies[p] * c[p] + gamma * zc * cj)
    out[j] = mi * (energies[j] * cj + gamma * (zc * sp + z * sm))


cdef inline void _custom_rhs(const double complex[::1] c, const double[::1] energies,
                             Py_ssize_t j,
                             const double[::1] amps, const double[::1] freqs,
                             double t,
                             double complex[::1] out, Py_ssize_t n) noexcept nogil:
    cdef double complex mi = -1j
    cdef double complex cj = c[j]
    cdef double complex acc = 0, phi
    cdef Py_ssize_t p
    for p in range(n):
        if p == j:
            continue
        if amps[p] != 0.0:
            phi = amps[p] * (cos(freqs[p] * t) + 1j * sin(freqs[p] * t))
            acc = acc + phi.conjugate() * c[p]
            out[p] = mi * (energies[p] * c[p] + phi * cj)
        else:
            out[p] = mi * energies[p] * c[p]
    out[j] = mi * (energies[j] * cj + acc)


def full_star_rk4(double complex[::1] c0, const double[::1] energies,
                  Py_ssize_t center, double gamma, double omega,
                  const unsigned char[::1] plus_mask,
                  double t0, double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Integrate i dc/dt = (diag(E) + V(t)) c for a parity-pattern star drive.

    `center` is 0-based here; `plus_mask[p]` selects e^{+i omega t} for the
    column entry at p. Returns (times, states, max_norm_dev).
    """
    cdef Py_ssize_t n = c0.shape[0]
    cdef Py_ssize_t n_samp = _sample_count(n_steps, stride)
    times_arr = np.empty(n_samp, dtype=np.float64)
    states_arr = np.empty((n_samp, n), dtype=np.complex128)
    cdef double[::1] times = times_arr
    cdef double complex[:, ::1] states = states_arr

    work = np.empty((5, n), dtype=np.complex128)
    cdef double complex[:, ::1] w = work
    cdef double complex[::1] c = np.array(c0, dtype=np.complex128, copy=True)

    cdef double max_dev = 0.0, acc, dev, t
    cdef Py_ssize_t step, p, si = 0
    cdef double half = 0.5 * dt, sixth = dt / 6.0

    times[si] = t0
    for p in range(n):
        states[si, p] = c[p]
    si += 1

    with nogil:
        for step in range(n_steps):
            t = t0 + step * dt
            _star_rhs(c, energies, center, gamma, plus_mask, omega, t, w[0], n)
            for p in range(n):
                w[4, p] = c[p] + half * w[0, p]
            _star_rhs(w[4], energies, center, gamma, plus_mask, omega, t + half, w[1], n)
            for p in range(n):
                w[4, p] = c[p] + half * w[1, p]
            _star_rhs(w[4], energies, center, gamma, plus_mask, omega, t + half, w[2], n)
            for p in range(n):
                w[4, p] = c[p] + dt * w[2, p]
            _star_rhs(w[4], energies, center, gamma, plus_mask, omega, t + dt, w[3], n)
            acc = 0.0
            for p in range(n):
                c[p] = c[p] + sixth * (w[0, p] + 2.0 * (w[1, p] + w[2, p]) + w[3, p])
                acc += c[p].real * c[p].real + c[p].imag * c[p].imag
            dev = fabs(acc - 1.0)
            if dev > max_dev:
                max_dev = dev
            if (step + 1) % stride == 0 or step + 1 == n_steps:
                times[si] = t0 + (step + 1) * dt
                for p in range(n):
                    states[si, p] = c[p]
                si += 1

    return times_arr, states_arr, max_dev


def custom_star_rk4(double complex[::1] c0, const double[::1] energies,
                    Py_ssize_t center, const double[::1] amps, const double[::1] freqs,
                    double t0, double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Like full_star_rk4 for per-index amplitudes and signed frequencies."""
    cdef Py_ssize_t n = c0.shape[0]
    cdef Py_ssize_t n_samp = _sample_count(n_steps, stride)
    times_arr = np.empty(n_samp, dtype=np.float64)
    states_arr = np.empty((n_samp, n), dtype=np.complex128)
    cdef double[::1] times = times_arr
    cdef double complex[:, ::1] states = states_arr

    work = np.empty((5, n), dtype=np.complex128)
    cdef double complex[:, ::1] w = work
    cdef double complex[::1] c = np.array(c0, dtype=np.complex128, copy=True)

    cdef double max_dev = 0.0, acc, dev, t
    cdef Py_ssize_t step, p, si = 0
    cdef double half = 0.5 * dt, sixth = dt / 6.0

    times[si] = t0
    for p in range(n):
        states[si, p] = c[p]
    si += 1

    with nogil:
        for step in range(n_steps):
            t = t0 + step * dt
            _custom_rhs(c, energies, center, amps, freqs, t, w[0], n)
            for p in range(n):
                w[4, p] = c[p] + half * w[0, p]
            _custom_rhs(w[4], energies, center, amps, freqs, t + half, w[1], n)
            for p in range(n):
                w[4, p] = c[p] + half * w[1, p]
            _custom_rhs(w[4], energies, center, amps, freqs, t + half, w[2], n)
            for p in range(n):
                w[4, p] = c[p] + dt * w[2, p]
            _custom_rhs(w[4], energies, center, amps, freqs, t + dt, w[3], n)
            acc = 0.0
            for p in range(n):
                c[p] = c[p] + sixth * (w[0, p] + 2.0 * (w[1, p] + w[2, p]) + w[3, p])
                acc += c[p].real * c[p].real + c[p].imag * c[p].imag
            dev = fabs(acc - 1.0)
            if dev > max_dev:
                max_dev = dev
            if (step + 1) % stride == 0 or step + 1 == n_steps:
                times[si] = t0 + (step + 1) * dt
                for p in range(n):
                    states[si, p] = c[p]
                si += 1

    return times_arr, states_arr, max_dev


def reduced_trial_rk4(double complex b1, double complex b2, double complex b3,
                      double coupling, double gamma, double omega,
                      double t0, double dt, Py_ssize_t n_steps, Py_ssize_t stride):
    """Three-amplitude resonance system with multiplicity factor `coupling`.

        i b1' = g b2
        i b2' = g b1 + coupling * g * e^{-i w t} b3
        i b3' = g e^{+i w t} b2

    Conserved weighted norm: |b1|^2 + |b2|^2 + coupling |b3|^2.
    """
    cdef Py_ssize_t n_samp = _sample_count(n_steps, stride)
    times_arr = np.empty(n_samp, dtype=np.float64)
    states_arr = np.empty((n_samp, 3), dtype=np.complex128)
    cdef double[::1] times = times_arr
    cdef double complex[:, ::1] states = states_arr

    cdef double complex mi = -1j
    cdef double complex e1, e2, e3
    cdef double complex k11, k12, k13, k21, k22, k23, k31, k32, k33, k41, k42, k43
    cdef double complex y1, y2, y3
    cdef double max_dev = 0.0, acc, dev, t
    cdef Py_ssize_t step, si = 0
    cdef double half = 0.5 * dt, sixth = dt / 6.0

    times[0] = t0
    states[0, 0] = b1
    states[0, 1] = b2
    states[0, 2] = b3
    si = 1

    with nogil:
        for step in range(n_steps):
            t = t0 + step * dt
            e1 = cos(omega * t) + 1j * sin(omega * t)
            e2 = cos(omega * (t + half)) + 1j * sin(omega * (t + half))
            e3 = cos(omega * (t + dt)) + 1j * sin(omega * (t + dt))

            k11 = mi * gamma * b2
            k12 = mi * (gamma * b1 + coupling * gamma * e1.conjugate() * b3)
            k13 = mi * gamma * e1 * b2

            y1 = b1 + half * k11
            y2 = b2 + half * k12
            y3 = b3 + half * k13
            k21 = mi * gamma * y2
            k22 = mi * (gamma * y1 + coupling * gamma * e2.conjugate() * y3)
            k23 = mi * gamma * e2 * y2

            y1 = b1 + half * k21
            y2 = b2 + half * k22
            y3 = b3 + half * k23
            k31 = mi * gamma * y2
            k32 = mi * (gamma * y1 + coupling * gamma * e2.conjugate() * y3)
            k33 = mi * gamma * e2 * y2

            y1 = b1 + dt * k31
            y2 = b2 + dt * k32
            y3 = b3 + dt * k33
            k41 = mi * gamma * y2
            k42 = mi * (gamma * y1 + coupling * gamma * e3.conjugate() * y3)
            k43 = mi * gamma * e3 * y2

            b1 = b1 + sixth * (k11 + 2.0 * (k21 + k31) + k41)
            b2 = b2 + sixth * (k12 + 2.0 * (k22 + k32) + k42)
            b3 = b3 + sixth * (k13 + 2.0 * (k23 + k33) + k43)

            acc = (b1.real * b1.real + b1.imag * b1.imag
                   + b2.real * b2.real + b2.imag * b2.imag
                   + coupling * (b3.real * b3.real + b3.imag * b3.imag))
            dev = fabs(acc - 1.0)
            if dev > max_dev:
                max_dev = dev
            if (step + 1) % stride == 0 or step + 1 == n_steps:
                times[si] = t0 + (step + 1) * dt
                states[si, 0] = b1
                states[si, 1] = b2
                states[si, 2] = b3
                si += 1

    return times_arr, states_arr, max_dev


def reduced_opt_rk4(double complex b1, double complex b2, double complex b3,
                    double complex b4, double multiplicity, double gamma,
                    double omega, double t0, double dt,
                    Py_ssize_t n_steps, Py_ssize_t stride):
    """Four-amplitude resonance system with per-parity multiplicity.

        i b1' = g b2
        i b2' = g b1 + multiplicity * g * (e^{-i w t} b3 + e^{+i w t} b4)
        i b3' = g e^{+i w t} b2
        i b4' = g e^{-i w t} b2

    Conserved weighted norm: |b1|^2 + |b2|^2 + multiplicity (|b3|^2 + |b4|^2).
    """
    cdef Py_ssize_t n_samp = _sample_count(n_steps, stride)
    times_arr = np.empty(n_samp, dtype=np.float64)
    states_arr = np.empty((n_samp, 4), dtype=np.complex128)
    cdef double[::1] times = times_arr
    cdef double complex[:, ::1] states = states_arr

    cdef double complex mi = -1j
    cdef double complex e1, e2, e3, ec
    cdef double complex k11, k12, k13, k14, k21, k22, k23, k24
    cdef double complex k31, k32, k33, k34, k41, k42, k43, k44
    cdef double complex y1, y2, y3, y4
    cdef double max_dev = 0.0, acc, dev, t
    cdef Py_ssize_t step, si = 0
    cdef double half = 0.5 * dt, sixth = dt / 6.0

    times[0] = t0
    states[0, 0] = b1
    states[0, 1] = b2
    states[0, 2] = b3
    states[0, 3] = b4
    si = 1

    with nogil:
        for step in range(n_steps):
            t = t0 + step * dt
            e1 = cos(omega * t) + 1j * sin(omega * t)
            e2 = cos(omega * (t + half)) + 1j * sin(omega * (t + half))
            e3 = cos(omega * (t + dt)) + 1j * sin(omega * (t + dt))

            ec = e1.conjugate()
            k11 = mi * gamma * b2
            k12 = mi * (gamma * b1 + multiplicity * gamma * (ec * b3 + e1 * b4))
            k13 = mi * gamma * e1 * b2
            k14 = mi * gamma * ec * b2

            y1 = b1 + half * k11
            y2 = b2 + half * k12
            y3 = b3 + half * k13
            y4 = b4 + half * k14
            ec = e2.conjugate()
            k21 = mi * gamma * y2
            k22 = mi * (gamma * y1 + multiplicity * gamma * (ec * y3 + e2 * y4))
            k23 = mi * gamma * e2 * y2
            k24 = mi * gamma * ec * y2

            y1 = b1 + half * k21
            y2 = b2 + half * k22
            y3 = b3 + half * k23
            y4 = b4 + half * k24
            k31 = mi * gamma * y2
            k32 = mi * (gamma * y1 + multiplicity * gamma * (ec * y3 + e2 * y4))
            k33 = mi * gamma * e2 * y2
            k34 = mi * gamma * ec * y2

            y1 = b1 + dt * k31
            y2 = b2 + dt * k32
            y3 = b3 + dt * k33
            y4 = b4 + dt * k34
            ec = e3.conjugate()
            k41 = mi * gamma * y2
            k42 = mi * (gamma * y1 + multiplicity * gamma * (ec * y3 + e3 * y4))
            k43 = mi * gamma * e3 * y2
            k44 = mi * gamma * ec * y2

            b1 = b1 + sixth * (k11 + 2.0 * (k21 + k31) + k41)
            b2 = b2 + sixth * (k12 + 2.0 * (k22 + k32) + k42)
            b3 = b3 + sixth * (k13 + 2.0 * (k23 + k33) + k43)
            b4 = b4 + sixth * (k14 + 2.0 * (k24 + k34) + k44)

            acc = (b1.real * b1.real + b1.imag * b1.imag
                   + b2.real * b2.real + b2.imag * b2.imag
                   + multiplicity * (b3.real * b3.real + b3.imag * b3.imag
                                     + b4.real * b4.real + b4.imag * b4.imag))
            dev = fabs(acc - 1.0)
            if dev > max_dev:
                max_dev = dev
            if (step + 1) % stride == 0 or step + 1 == n_steps:
                times[si] = t0 + (step + 1) * dt
                states[si, 0] = b1
                states[si, 1] = b2
                states[si, 2] = b3
                states[si, 3] = b4
                si += 1

    return times_arr, states_arr, max_dev
