import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xiongsets.errors import HorizonError
from xiongsets.gauss import (
    ball_measure_lower, bits_for_digits, branch_preimages, exactness_probe, forward_image, gauss_measure,
    gauss_step, invariance_defect, merge_intervals, orbit_values, pair_rngs, sample_cf_point, scrambled_stats,
)


def T(x):
    y = 1 / x
    return y - math.floor(y)


class TestStep:
    @pytest.mark.parametrize("x,a,tx", [
        (Fraction(2, 5), 2, Fraction(1, 2)),
        (Fraction(5, 7), 1, Fraction(2, 5)),
        (Fraction(1, 3), 3, Fraction(0)),
    ])
    def test_examples(self, x, a, tx):
        assert gauss_step(x) == (a, tx)

    def test_zero_terminal(self):
        assert gauss_step(0) == (None, 0)

    @pytest.mark.parametrize("x", [Fraction(1), Fraction(-1, 2), Fraction(3, 2)])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            gauss_step(x)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(1, 10 ** 9), st.integers(2, 10 ** 9))
    def test_matches_definition(self, p, q):
        x = Fraction(p % q or 1, q)
        a, tx = gauss_step(x)
        assert a == math.floor(1 / x) and tx == T(x)


class TestMeasure:
    def test_half(self):
        assert abs(float(gauss_measure(0, Fraction(1, 2))) - math.log2(1.5)) < 1e-15

    def test_total(self):
        assert abs(gauss_measure(0, 1) - 1) < 1e-25

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            gauss_measure(Fraction(1, 2), Fraction(1, 3))

    def test_branch_digit_two(self):
        pieces, tail = branch_preimages(Fraction(1, 2), Fraction(3, 4), 2)
        assert pieces[1] == (Fraction(4, 11), Fraction(2, 5))
        pieces, _ = branch_preimages(Fraction(1, 3), Fraction(1, 2), 2)
        assert pieces[1] == (Fraction(2, 5), Fraction(3, 7))
        assert abs(float(tail) - math.log2(1 + 1 / 3)) < 1e-15

    @pytest.mark.parametrize("a,b", [(0, Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 2)), (Fraction(1, 10), Fraction(9, 10))])
    def test_invariance(self, a, b):
        rep = invariance_defect(a, b, M=10 ** 5)
        assert rep.passed
        # the preimage mass on branches above M telescopes to log2((M+1+b)/(M+1+a))
        M = 10 ** 5
        oracle = mpmath.log((M + 1 + mpmath.mpf(b.numerator) / b.denominator)
                            / (M + 1 + mpmath.mpf(Fraction(a).numerator) / Fraction(a).denominator), 2)
        assert abs(rep.defect - float(oracle)) < 1e-13

    def test_ball_lower(self):
        k = 10
        for centre in (Fraction(1, 2), Fraction(9, 10) - Fraction(1, 100)):
            lo, hi = max(0, centre - Fraction(1, k)), min(1, centre + Fraction(1, k))
            assert gauss_measure(lo, hi) >= ball_measure_lower(k) * 0.5


class TestExactness:
    def test_merge(self):
        got = merge_intervals([(Fraction(1, 2), Fraction(3, 4)), (Fraction(0), Fraction(1, 2)), (Fraction(7, 8), Fraction(1))])
        assert got == [(Fraction(0), Fraction(3, 4)), (Fraction(7, 8), Fraction(1))]

    def test_forward_image_single_branch(self):
        assert forward_image(Fraction(1, 3), Fraction(1, 2)) == [(Fraction(0), Fraction(1))]

    def test_forward_image_samples(self, rng):
        for _ in range(50):
            lo = Fraction(rng.randint(1, 999), 1000)
            hi = min(Fraction(1), lo + Fraction(rng.randint(1, 300), 10 ** 4))
            img = forward_image(lo, hi)
            for _ in range(40):
                x = lo + (hi - lo) * Fraction(rng.randint(1, 999), 1000)
                tx = T(x)
                assert tx == 0 or any(a <= tx <= b for a, b in img)

    def test_one_step(self):
        tr = exactness_probe([(Fraction(1, 3), Fraction(1, 2))], steps=1)
        assert tr.reached() == 1

    def test_whole_space_constant(self):
        tr = exactness_probe([(Fraction(0), Fraction(1))], steps=4)
        assert all(abs(m - 1) < 1e-12 for m in tr.measures)

    def test_small_interval(self):
        tr = exactness_probe([(Fraction(9, 10), Fraction(19, 20))], steps=6)
        assert tr.reached() is not None and tr.reached() <= 5
        assert tr.measures[0] == pytest.approx(math.log2(1.95 / 1.9))

    def test_empty_start(self):
        with pytest.raises(ValueError):
            exactness_probe([])


class TestSampling:
    def test_deterministic(self):
        a = sample_cf_point(random.Random(3), 40)
        b = sample_cf_point(random.Random(3), 40)
        assert a == b and len(a.digits) >= 40

    def test_digits_match_value(self):
        p = sample_cf_point(random.Random(5), 30)
        v = Fraction(0)
        for d in reversed(p.digits):
            v = 1 / (d + v)
        assert v == p.x

    def test_bits_budget(self):
        assert bits_for_digits(10) == 64
        assert bits_for_digits(1000) > 1000 / 0.584

    def test_pair_rngs_independent(self):
        a, b = pair_rngs(7, 2)
        assert a.random() != b.random()
        assert pair_rngs(7, 2)[0].random() == pair_rngs(7, 3)[0].random()

    def test_orbit_matches_exact(self):
        x = sample_cf_point(random.Random(11), 60).x
        exact = x
        for u, v in orbit_values(x, 50):
            assert abs(Fraction(u, v) - exact) <= 2 * exact * Fraction(1, 2 ** 127) + Fraction(1, 2 ** 120)
            exact = T(exact)

    def test_orbit_horizon(self):
        with pytest.raises(HorizonError):
            list(orbit_values(Fraction(1, 3), 5))


class TestScrambled:
    def test_small_run(self):
        rep = scrambled_stats(2024, 20, 2000, 4)
        assert 0 < rep.value < 1
        assert rep.details["fraction_max_ge"] >= 0.9
        assert rep.details["fraction_min_le"] >= 0.9

    def test_deterministic(self):
        a = scrambled_stats(1, 5, 100, 4)
        b = scrambled_stats(1, 5, 100, 4)
        assert a.value == b.value and a.details["mins"] == b.details["mins"]

    def test_reference_value(self):
        rep = scrambled_stats(1, 2, 10, 10)
        want = math.log2(1.1) * (1 - math.log2(1.9))
        assert rep.reference == pytest.approx(want, rel=1e-12)

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            scrambled_stats(1, 1, 10, 1)
