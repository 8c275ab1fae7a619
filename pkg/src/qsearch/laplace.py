"""s-domain engine: ground-amplitude transforms and exact inversion.

The driven systems are linear with constant-plus-sinusoidal coefficients, so
the transform of the ground amplitude is a strictly proper rational function
of s. Inversion goes through companion-matrix root finding and a
partial-fraction split into simple exponential modes; nearly degenerate
poles are refused rather than silently interpolated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePoleError
from .reduced import ResonanceParams

POLE_GAP_TOL = 1e-9
# Companion-matrix eigenvalues resolve a root cluster no finer than about
# sqrt(machine epsilon) * scale, so the practical refusal threshold is the
# larger of the nominal tolerance and that noise floor.
POLE_GAP_FLOOR = 32.0 * float(np.sqrt(np.finfo(np.float64).eps))
REDUCE_TOL = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Dense complex polynomial, coefficients in ascending degree order."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        nz = np.nonzero(coeffs)[0]
        coeffs = coeffs[: nz[-1] + 1] if nz.size else coeffs[:1]
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coefficients[0] == 0

    def __call__(self, s):
        s = np.asarray(s, dtype=np.complex128)
        out = np.zeros_like(s)
        for c in self.coefficients[::-1]:
            out = out * s + c
        return out if out.shape else complex(out)

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial(np.zeros(1))
        k = np.arange(1, self.degree + 1)
        return Polynomial(self.coefficients[1:] * k)

    def roots(self) -> np.ndarray:
        """Roots via eigenvalues of the companion matrix."""
        if self.degree == 0:
            return np.empty(0, dtype=np.complex128)
        return np.roots(self.coefficients[::-1])


@dataclass(frozen=True)
class RationalFunction:
    """Ratio of two polynomials in s.

    Construction cancels a shared root only when numerator and denominator
    roots coincide within a 1e-12 relative tolerance; otherwise the operands
    are stored as given.
    """

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        if self.denominator.is_zero:
            raise ValueError("denominator is identically zero")
        reduced = _cancel_common_roots(self.numerator, self.denominator)
        if reduced is not None:
            object.__setattr__(self, "numerator", reduced[0])
            object.__setattr__(self, "denominator", reduced[1])

    def __call__(self, s):
        return self.numerator(s) / self.denominator(s)

    @property
    def is_strictly_proper(self) -> bool:
        return self.numerator.degree < self.denominator.degree


def _cancel_common_roots(num: Polynomial, den: Polynomial):
    if num.is_zero or num.degree == 0 or den.degree == 0:
        return None
    nroots = num.roots()
    droots = den.roots()
    scale = max(np.max(np.abs(nroots), initial=0.0), np.max(np.abs(droots), initial=0.0), 1.0)
    keep_n = list(range(len(nroots)))
    keep_d = list(range(len(droots)))
    cancelled = False
    for i, r in enumerate(nroots):
        for j in list(keep_d):
            if abs(r - droots[j]) <= REDUCE_TOL * scale:
                keep_n.remove(i)
                keep_d.remove(j)
                cancelled = True
                break
    if not cancelled:
        return None
    lead_n = num.coefficients[-1]
    lead_d = den.coefficients[-1]
    new_num = lead_n * np.polynomial.polynomial.polyfromroots(nroots[keep_n])
    new_den = lead_d * np.polynomial.polynomial.polyfromroots(droots[keep_d])
    return Polynomial(new_num), Polynomial(new_den)


def b1_s_trial(p: ResonanceParams) -> RationalFunction:
    """Transform of the ground amplitude under the uniform-phase star drive.

    Cleared form: -i g (s + i w) / [(s^2 + g^2)(s + i w) + g^2 (N-2) s],
    for ground index 1, drive centered on the initial index 2, and all
    excited levels at the resonant energy w.
    """
    g, w, n = p.gamma, p.omega_r, p.n
    num = np.array([g * w, -1j * g], dtype=np.complex128)
    den = np.array(
        [1j * g**2 * w, g**2 * (n - 1), 1j * w, 1.0],
        dtype=np.complex128,
    )
    return RationalFunction(Polynomial(num), Polynomial(den))


def b1_s_opt(p: ResonanceParams) -> RationalFunction:
    """Transform of the ground amplitude under the parity-split star drive.

    Cleared form: -i g (s^2 + w^2) / [(s^2 + g^2)(s^2 + w^2) + g^2 (N-2) s^2].
    The denominator is a quadratic in s^2 with positive real coefficients,
    so all four poles are purely imaginary.
    """
    g, w, n = p.gamma, p.omega_r, p.n
    num = np.array([-1j * g * w**2, 0.0, -1j * g], dtype=np.complex128)
    den = np.array(
        [g**2 * w**2, 0.0, w**2 + (n - 1) * g**2, 0.0, 1.0],
        dtype=np.complex128,
    )
    return RationalFunction(Polynomial(num), Polynomial(den))


def b1_s_star(gamma: float, lambda_terms: list[tuple[float, float]]) -> RationalFunction:
    """Transform for a general star drive given numeric coupling terms.

    Each (weight, frequency) pair contributes weight * s / (s + i freq) to
    the feedback factor; the uniform and parity-split drives are the special
    cases [(N-2, w)] and [((N-2)/2, w), ((N-2)/2, -w)]. Weights arise as
    squared entry amplitudes over gamma^2, hence must be positive.
    """
    if not lambda_terms:
        raise ValueError("need at least one coupling term")
    freqs = [w for _, w in lambda_terms]
    if len(set(freqs)) != len(freqs):
        raise ValueError("coupling-term frequencies must be distinct")
    poly = np.polynomial.polynomial
    base = np.array([gamma**2, 0.0, 1.0], dtype=np.complex128)  # s^2 + g^2
    prod = np.array([1.0], dtype=np.complex128)
    for _, w in lambda_terms:
        prod = poly.polymul(prod, np.array([1j * w, 1.0]))
    den = poly.polymul(base, prod)
    for a_j, w_j in lambda_terms:
        if not a_j > 0:
            raise ValueError(f"coupling weight must be > 0, got {a_j}")
        rest = np.array([1.0], dtype=np.complex128)
        for _, w in lambda_terms:
            if w != w_j:
                rest = poly.polymul(rest, np.array([1j * w, 1.0]))
        term = poly.polymul(np.array([0.0, gamma**2 * a_j]), rest)  # g^2 a s * rest
        den = poly.polyadd(den, term)
    num = -1j * gamma * prod
    return RationalFunction(Polynomial(num), Polynomial(den))


def exponential_modes(rf: RationalFunction) -> tuple[np.ndarray, np.ndarray]:
    """Partial-fraction split into simple modes: poles p_k and residues r_k.

    Requires a strictly proper function with well-separated poles; refuses
    with DegeneratePoleError otherwise (fall back to time-domain
    integration in that case).
    """
    if not rf.is_strictly_proper:
        raise ValueError("inverse transform needs a strictly proper rational function")
    poles = rf.denominator.roots()
    scale = max(float(np.max(np.abs(poles), initial=0.0)), 1.0)
    if len(poles) > 1:
        gap = np.min(np.abs(poles[:, None] - poles[None, :])[~np.eye(len(poles), dtype=bool)])
        threshold = max(POLE_GAP_TOL, POLE_GAP_FLOOR) * scale
        if gap < threshold:
            raise DegeneratePoleError(
                f"pole gap {gap:.3e} below {threshold:.3e}; use time-domain integration"
            )
    dden = rf.denominator.derivative()
    residues = rf.numerator(poles) / dden(poles)
    return poles, np.asarray(residues, dtype=np.complex128)


def inverse_transform(rf: RationalFunction, t):
    """Time-domain value sum_k r_k exp(p_k t); t may be scalar or array."""
    poles, residues = exponential_modes(rf)
    t_arr = np.asarray(t, dtype=np.float64)
    out = np.tensordot(np.exp(np.multiply.outer(t_arr, poles)), residues, axes=1)
    return out if t_arr.shape else complex(out)
