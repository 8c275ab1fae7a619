import random
from fractions import Fraction

import pytest

from qsearch.ordergap import (
    AlphaCoeff,
    LambdaTerm,
    build_lambda,
    lambda1_terms,
    lambda2_terms,
    order_gap,
    random_term_list,
)


def direct_lambda(terms, s, omega_r, n_value):
    """Unexpanded reference: s * sum_j alpha_j / (s + i omega_j)."""
    total = 0j
    for t in terms:
        alpha = t.alpha.evaluate(n_value) if isinstance(t.alpha, AlphaCoeff) else float(t.alpha)
        total += alpha / (s + 1j * t.frequency(omega_r))
    return s * total


class TestBuildLambda:
    def test_single_resonant_term_form(self):
        rational = build_lambda(lambda1_terms())
        for s, w, n in ((0.5 + 0.2j, 2.0, 100.0), (1.1 - 0.7j, 0.3, 17.0)):
            expected = (n - 2) * s / (s + 1j * w)
            assert rational.evaluate(s, w, n) == pytest.approx(expected, rel=1e-12)

    def test_conjugate_pair_form(self):
        rational = build_lambda(lambda2_terms())
        for s, w, n in ((0.5 + 0.2j, 2.0, 100.0), (0.9 - 1.3j, 0.7, 33.0)):
            expected = (n - 2) * s**2 / (s**2 + w**2)
            assert rational.evaluate(s, w, n) == pytest.approx(expected, rel=1e-12)

    def test_expansion_matches_direct_form(self, ):
        rng = random.Random(7)
        for _ in range(25):
            terms = random_term_list(rng)
            rational = build_lambda(terms)
            s, w = 0.37 + 0.58j, 1.7
            expected = direct_lambda(terms, s, w, 1024.0)
            assert rational.evaluate(s, w, 1024.0) == pytest.approx(expected, rel=1e-9)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            build_lambda([])

    def test_zero_weight_rejected(self):
        with pytest.raises(ValueError):
            LambdaTerm(alpha=0, a=1, x=1)
        with pytest.raises(ValueError):
            LambdaTerm(alpha=-3, a=1, x=1)

    def test_duplicate_frequency_rejected(self):
        terms = [LambdaTerm(2, 3, 1), LambdaTerm(5, 3, 1)]
        with pytest.raises(ValueError):
            build_lambda(terms)

    def test_zero_prefactor_rejected(self):
        with pytest.raises(ValueError):
            LambdaTerm(alpha=1, a=0, x=1)


class TestOrderGap:
    def test_uniform_drive_gap_is_one(self):
        report = order_gap(lambda1_terms())
        assert report.d == Fraction(1)
        assert report.den_max_exponent == Fraction(1)
        assert report.num_max_exponent == Fraction(0)

    def test_parity_pair_gap_is_two(self):
        report = order_gap(lambda2_terms())
        assert report.d == Fraction(2)
        assert report.s1_vanishes and report.s2_vanishes
        assert report.witness > 0

    def test_resonance_precondition(self):
        with pytest.raises(ValueError):
            order_gap([LambdaTerm(1, 1, 2)])

    def test_symbolic_weight_cancellation_independent_of_n(self):
        # the conjugate-pair cancellation is symbolic in N, not numeric luck
        half = Fraction(1, 2)
        terms = [
            LambdaTerm(alpha=(-1, half), a=2, x=1),
            LambdaTerm(alpha=(-1, half), a=-2, x=1),
        ]
        assert order_gap(terms).d == Fraction(2)

    def test_unbalanced_pair_gap_is_one(self):
        terms = [LambdaTerm(3, 1, 1), LambdaTerm(4, -1, 1)]
        assert order_gap(terms).d == Fraction(1)

    def test_fractional_exponents(self):
        terms = [
            LambdaTerm(2, 1, 1),
            LambdaTerm(2, -1, 1),
            LambdaTerm(5, 3, Fraction(1, 2)),
        ]
        report = order_gap(terms)
        assert report.d <= 2
        assert report.den_max_exponent == Fraction(5, 2)

    def test_alpha_coeff_positivity_domain(self):
        assert AlphaCoeff(Fraction(-2), Fraction(1)).positive_for_all_n
        assert not AlphaCoeff(Fraction(-3), Fraction(1)).positive_for_all_n
        assert AlphaCoeff(Fraction(5), Fraction(0)).positive_for_all_n
        assert not AlphaCoeff(Fraction(0), Fraction(0)).positive_for_all_n


class TestRefutingSearch:
    def test_random_lists_respect_bound(self):
        rng = random.Random(20260810)
        max_d = Fraction(-100)
        for _ in range(2000):
            terms = random_term_list(rng)
            report = order_gap(terms)
            assert report.d <= 2, f"violation: {terms}"
            assert report.witness > 0
            if report.d > 0:
                assert all(t.x > 0 for t in terms)
            max_d = max(max_d, report.d)
        assert max_d == Fraction(2)

    def test_generator_respects_preconditions(self):
        rng = random.Random(99)
        for _ in range(300):
            terms = random_term_list(rng, m_cap=4)
            assert 1 <= len(terms) <= 4
            assert any(t.x == 1 for t in terms)
            freqs = [(t.a, t.x) for t in terms]
            assert len(set(freqs)) == len(freqs)
