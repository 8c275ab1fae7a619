"""Exact order-gap analysis of generalized star-drive feedback factors.

A star drive with arbitrary entry amplitudes and frequencies feeds back into
the ground amplitude through a rational factor

    Lambda(s) = s * sum_j alpha_j / (s + i omega_j),

where each alpha_j is a positive weight (a squared entry amplitude, possibly
scaling with the opaque dimension parameter N) and each frequency omega_j =
a_j * w^(x_j) is graded by the resonance frequency w. How strongly the drive
suppresses the dimension penalty is measured by the order gap d: the largest
w-exponent among the expanded denominator coefficients minus the largest
among the numerator coefficients, with exact symbolic cancellation.

Everything here is exact: exponents are rationals, coefficients are
rationals or linear forms in N, and a coefficient only counts as vanishing
when its monomials cancel identically. The i-powers multiplying each
s-coefficient are dropped from the stored grading (they are a common
unit-modulus factor within one coefficient, so they affect neither
cancellation nor exponents) and are restored by ``GradedRational.evaluate``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

GradedDict = dict  # Fraction exponent -> coefficient (Fraction or AlphaCoeff)


@dataclass(frozen=True)
class AlphaCoeff:
    """Weight linear in the opaque dimension parameter: c0 + c1 * N."""

    c0: Fraction
    c1: Fraction

    @staticmethod
    def of(value) -> "AlphaCoeff":
        if isinstance(value, AlphaCoeff):
            return value
        if isinstance(value, tuple):
            return AlphaCoeff(Fraction(value[0]), Fraction(value[1]))
        return AlphaCoeff(Fraction(value), Fraction(0))

    def __bool__(self) -> bool:
        return self.c0 != 0 or self.c1 != 0

    def __add__(self, other):
        other = AlphaCoeff.of(other)
        return AlphaCoeff(self.c0 + other.c0, self.c1 + other.c1)

    __radd__ = __add__

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return AlphaCoeff(self.c0 * scalar, self.c1 * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return AlphaCoeff(-self.c0, -self.c1)

    @property
    def positive_for_all_n(self) -> bool:
        """Strictly positive for every dimension N > 2."""
        if self.c1 == 0:
            return self.c0 > 0
        return self.c1 > 0 and self.c0 + 2 * self.c1 >= 0

    def evaluate(self, n_value: float) -> float:
        return float(self.c0) + float(self.c1) * n_value


def _alpha_positive(alpha) -> bool:
    if isinstance(alpha, AlphaCoeff):
        return alpha.positive_for_all_n
    return alpha > 0


def _alpha_value(alpha, n_value: float) -> float:
    if isinstance(alpha, AlphaCoeff):
        return alpha.evaluate(n_value)
    return float(alpha)


@dataclass(frozen=True)
class LambdaTerm:
    """One feedback term: weight alpha at frequency a * w^x.

    alpha accepts a positive number (kept as an exact Fraction), a (c0, c1)
    pair meaning c0 + c1*N, or an AlphaCoeff. Exponents and the frequency
    prefactor are exact rationals; a must be nonzero so the term frequency
    never vanishes.
    """

    alpha: Fraction | AlphaCoeff
    a: Fraction
    x: Fraction

    def __init__(self, alpha, a, x):
        if isinstance(alpha, (AlphaCoeff, tuple)):
            alpha = AlphaCoeff.of(alpha)
        else:
            alpha = Fraction(alpha)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "x", Fraction(x))
        if not _alpha_positive(self.alpha):
            raise ValueError(f"term weight must be positive, got {self.alpha}")
        if self.a == 0:
            raise ValueError("frequency prefactor a must be nonzero")

    def frequency(self, omega_r: float) -> float:
        return float(self.a) * omega_r ** float(self.x)


def _graded_add(target: GradedDict, exp: Fraction, coeff) -> None:
    cur = target.get(exp)
    new = coeff if cur is None else cur + coeff
    if new:
        target[exp] = new
    elif cur is not None:
        del target[exp]


def _graded_scale(d: GradedDict, a: Fraction, x: Fraction) -> GradedDict:
    """Multiply every monomial by the frequency monomial a * w^x."""
    return {exp + x: coeff * a for exp, coeff in d.items()}


def _sym_coeffs(freqs: list[tuple[Fraction, Fraction]]) -> list[GradedDict]:
    """Graded elementary symmetric polynomials e_0..e_m of the frequencies."""
    coeffs: list[GradedDict] = [{Fraction(0): Fraction(1)}]
    for a, x in freqs:
        nxt: list[GradedDict] = [dict(coeffs[0])]
        for r in range(1, len(coeffs) + 1):
            acc: GradedDict = dict(coeffs[r]) if r < len(coeffs) else {}
            if r - 1 < len(coeffs):
                for exp, coeff in _graded_scale(coeffs[r - 1], a, x).items():
                    _graded_add(acc, exp, coeff)
            nxt.append(acc)
        coeffs = nxt
    return coeffs


@dataclass(frozen=True)
class GradedRational:
    """Expanded feedback factor with w-graded coefficients.

    ``num[d]`` and ``den[d]`` map each s-degree d to a graded dict of
    exponent -> exact coefficient; the dropped unit factor i^(m-d) is
    restored by ``evaluate``.
    """

    terms: tuple[LambdaTerm, ...]
    num: dict
    den: dict

    @property
    def m(self) -> int:
        return len(self.terms)

    def evaluate(self, s: complex, omega_r: float, n_value: float = 1024.0) -> complex:
        num = self._eval_side(self.num, s, omega_r, n_value)
        den = self._eval_side(self.den, s, omega_r, n_value)
        return num / den

    def _eval_side(self, side: dict, s: complex, omega_r: float, n_value: float) -> complex:
        total = 0j
        for d, graded in side.items():
            coeff = 0.0
            for exp, c in graded.items():
                coeff += _alpha_value(c, n_value) * omega_r ** float(exp)
            total += (1j) ** (self.m - d) * coeff * s**d
        return total


def build_lambda(terms: list[LambdaTerm]) -> GradedRational:
    """Expand sum_j alpha_j s / (s + i omega_j) over a common denominator.

    Numerator coefficient of s^d is sum_j alpha_j e_{m-d}(frequencies
    excluding j) for d = 1..m; denominator coefficient of s^d is
    e_{m-d}(all frequencies) for d = 0..m (both up to the dropped i-power).
    """
    if not terms:
        raise ValueError("need at least one term")
    freqs = [(t.a, t.x) for t in terms]
    if len(set(freqs)) != len(freqs):
        raise ValueError("term frequencies must be pairwise distinct")
    m = len(terms)

    den_sym = _sym_coeffs(freqs)
    den = {m - r: den_sym[r] for r in range(m + 1) if den_sym[r]}

    num: dict[int, GradedDict] = {}
    for j, term in enumerate(terms):
        others = freqs[:j] + freqs[j + 1 :]
        sym = _sym_coeffs(others)
        for r in range(m):
            acc = num.setdefault(m - r, {})
            for exp, coeff in sym[r].items():
                _graded_add(acc, exp, term.alpha * coeff)
    num = {d: g for d, g in num.items() if g}

    return GradedRational(tuple(terms), num, den)


def _max_exponent(side: dict) -> Fraction:
    best = None
    for graded in side.values():
        for exp in graded:
            if best is None or exp > best:
                best = exp
    if best is None:
        raise ValueError("all coefficients cancelled; degenerate term list")
    return best


def _no_positive_order(graded: GradedDict | None) -> bool:
    if not graded:
        return True
    return all(exp <= 0 for exp in graded)


@dataclass(frozen=True)
class OrderGapReport:
    """Outcome of the order-gap analysis for one term list.

    ``s1_vanishes`` / ``s2_vanishes`` state that the s^1 / s^2 numerator
    coefficients carry no surviving monomial of positive w-order (the
    graded reading of the coefficient-vanishing conditions). The witness is
    sum_j alpha_j prod_{k != j} omega_k^2 evaluated at w = 1; every monomial
    in it is positive, so it certifies that full cancellation of both
    coefficients is impossible with positive weights.
    """

    d: Fraction
    den_max_exponent: Fraction
    num_max_exponent: Fraction
    s1_vanishes: bool
    s2_vanishes: bool
    witness: float
    m: int


def order_gap(terms: list[LambdaTerm], n_ref: float = 1024.0) -> OrderGapReport:
    """Order gap d and the cancellation diagnostics for a term list.

    Requires at least one exponent x_j equal to 1 (the resonance condition);
    the witness and any N-dependent weights are evaluated at ``n_ref``.
    """
    if not any(t.x == 1 for t in terms):
        raise ValueError("resonance requires at least one exponent x_j = 1")
    rational = build_lambda(terms)

    den_max = _max_exponent(rational.den)
    num_max = _max_exponent(rational.num)

    witness = 0.0
    for j, tj in enumerate(terms):
        prod = 1.0
        for k, tk in enumerate(terms):
            if k != j:
                prod *= float(tk.a) ** 2
        witness += _alpha_value(tj.alpha, n_ref) * prod

    return OrderGapReport(
        d=den_max - num_max,
        den_max_exponent=den_max,
        num_max_exponent=num_max,
        s1_vanishes=_no_positive_order(rational.num.get(1)),
        s2_vanishes=_no_positive_order(rational.num.get(2)),
        witness=witness,
        m=rational.m,
    )


def lambda1_terms() -> list[LambdaTerm]:
    """Single resonant term with weight N-2: the uniform-phase drive."""
    return [LambdaTerm(alpha=(-2, 1), a=1, x=1)]


def lambda2_terms() -> list[LambdaTerm]:
    """Conjugate resonant pair with weights (N-2)/2: the parity-split drive."""
    half = Fraction(1, 2)
    return [
        LambdaTerm(alpha=(-1, half), a=1, x=1),
        LambdaTerm(alpha=(-1, half), a=-1, x=1),
    ]


DEFAULT_EXPONENT_MENU: tuple[Fraction, ...] = (
    Fraction(1),
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(2, 3),
    Fraction(3, 2),
    Fraction(2),
    Fraction(3),
    Fraction(0),
    Fraction(-1, 2),
    Fraction(-1),
)


def random_term_list(
    rng: random.Random,
    m_cap: int = 6,
    exponent_menu: tuple[Fraction, ...] = DEFAULT_EXPONENT_MENU,
) -> list[LambdaTerm]:
    """Draw a valid random term list for the refuting search.

    Mixes three shapes: free independent terms, conjugate pairs with equal
    weights and opposite prefactors (the pattern that cancels the s^1
    coefficient), and combinations of both. At least one exponent equals 1
    and frequencies are kept pairwise distinct.
    """
    if m_cap < 1:
        raise ValueError("m_cap must be >= 1")

    def draw_a() -> Fraction:
        a = 0
        while a == 0:
            a = rng.randint(-6, 6)
        return Fraction(a)

    mode = rng.choice(("free", "paired", "mixed"))
    used: set[tuple[Fraction, Fraction]] = set()
    terms: list[LambdaTerm] = []

    def try_add(alpha, a: Fraction, x: Fraction) -> bool:
        if (a, x) in used:
            return False
        used.add((a, x))
        terms.append(LambdaTerm(alpha=alpha, a=a, x=x))
        return True

    if mode in ("paired", "mixed"):
        n_pairs = rng.randint(1, max(1, m_cap // 2))
        for i in range(n_pairs):
            alpha = rng.randint(1, 9)
            a = draw_a()
            x = Fraction(1) if i == 0 else rng.choice(exponent_menu)
            if (a, x) in used or (-a, x) in used:
                continue
            try_add(alpha, a, x)
            try_add(alpha, -a, x)
    if mode in ("free", "mixed"):
        n_free = rng.randint(1, m_cap)
        for _ in range(n_free):
            if len(terms) >= m_cap:
                break
            try_add(rng.randint(1, 9), draw_a(), rng.choice(exponent_menu))

    if not any(t.x == 1 for t in terms):
        a = draw_a()
        while (a, Fraction(1)) in used:
            a = draw_a()
        try_add(rng.randint(1, 9), a, Fraction(1))

    if len(terms) > m_cap:
        resonant = next(t for t in terms if t.x == 1)
        terms = terms[:m_cap]
        if not any(t.x == 1 for t in terms):
            terms[-1] = resonant
    return terms
