from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xiongsets.contfrac import (
    MSet, cf_digits, cf_value, convergents, erase_digit_ratio, fundamental_interval, gap_bound, interval_length,
    min_sibling_gap, mset_gap, mset_hull, phi_decode, phi_encode, q_pair, quasi_mult_bound, quasi_mult_ratio,
)

digit_lists = st.lists(st.integers(1, 10 ** 6), min_size=1, max_size=50)
small_digits = st.lists(st.integers(1, 20), min_size=1, max_size=15)


def value_oracle(digits):
    """``[a_1, ..., a_n]`` evaluated from the back."""
    v = Fraction(0)
    for a in reversed(digits):
        v = 1 / (a + v)
    return v


def q_oracle(digits):
    return value_oracle(digits).denominator if digits else 1


class TestDigits:
    @pytest.mark.parametrize("x,digits", [
        (Fraction(2, 5), [2, 2]),
        (Fraction(1, 3), [3]),
        (Fraction(1, 2), [2]),
        (Fraction(5, 8), [1, 1, 1, 2]),
    ])
    def test_examples(self, x, digits):
        assert cf_digits(x) == digits

    @pytest.mark.parametrize("x", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-1, 3)])
    def test_outside_unit_interval(self, x):
        with pytest.raises(ValueError):
            cf_digits(x)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(1, 10 ** 12), st.integers(2, 10 ** 12))
    def test_round_trip(self, p, q):
        x = Fraction(p % q or 1, q)
        d = cf_digits(x)
        assert cf_value(d) == x
        assert len(d) == 1 or d[-1] >= 2

    def test_max_digits(self):
        assert cf_digits(Fraction(5, 8), 2) == [1, 1]


class TestConvergents:
    def test_fibonacci(self):
        c = convergents([1, 1, 1, 1, 1])
        assert list(c.q[1:]) == [1, 2, 3, 5, 8]
        assert c.value == Fraction(5, 8)

    def test_determinant_n2(self):
        c = convergents([1, 1])
        assert c.p[2] * c.q[1] - c.p[1] * c.q[2] == -1 == (-1) ** 3

    def test_recurrence_value(self):
        assert convergents([2, 3]).q[2] == 7

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            convergents([1, 0, 2])

    @settings(max_examples=300, deadline=None)
    @given(digit_lists)
    def test_invariants(self, digits):
        c = convergents(digits)
        n = len(digits)
        for k in range(1, n + 1):
            assert c.p[k] * c.q[k - 1] - c.p[k - 1] * c.q[k] == (-1) ** (k + 1)
            assert c.determinant(k) == (-1) ** (k + 1)
        assert gcd(c.p[n], c.q[n]) == 1
        assert c.q[n] ** 2 >= 2 ** (n - 1)
        assert Fraction(c.p[n], c.q[n]) == value_oracle(digits)


class TestFundamentalIntervals:
    def test_digit_two(self):
        I = fundamental_interval([2])
        assert (I.lo, I.hi) == (Fraction(1, 3), Fraction(1, 2))
        assert I.length == Fraction(1, 6)
        assert Fraction(1, 3) in I and Fraction(1, 2) not in I

    def test_digit_one(self):
        I = fundamental_interval([1])
        assert (I.lo, I.hi, I.length) == (Fraction(1, 2), Fraction(1), Fraction(1, 2))

    def test_children_tile(self):
        total = sum(interval_length([2, a]) for a in range(1, 1001))
        tail = interval_length([2]) - total
        # children a > 1000 fill the span from p/q to (1001p + p')/(1001q + q')
        q, qm = 2, 1
        assert tail == Fraction(1, q * (1001 * q + qm))

    @settings(max_examples=200, deadline=None)
    @given(small_digits)
    def test_length_and_endpoints(self, digits):
        I = fundamental_interval(digits)
        q, qm = q_pair(digits)
        assert I.length == Fraction(1, q * (q + qm))
        # the points whose expansion starts with the digits: sample a few rationals
        for tail in ([1], [2, 3], [7]):
            x = value_oracle(digits + tail)
            assert x in I

    @settings(max_examples=100, deadline=None)
    @given(small_digits, st.integers(2, 12))
    def test_children_disjoint_and_inside(self, digits, m):
        parent = fundamental_interval(digits)
        kids = sorted((fundamental_interval(digits + [a]) for a in range(1, m + 1)), key=lambda I: I.lo)
        for a, b in zip(kids, kids[1:]):
            assert a.hi <= b.lo
        assert all(parent.lo <= k.lo and k.hi <= parent.hi for k in kids)

    def test_golden_convergents(self):
        I = phi_encode([1] * 5)
        assert Fraction(5, 8) in I or Fraction(8, 13) in I
        g = (5 ** 0.5 - 1) / 2
        assert float(I.lo) <= g <= float(I.hi)

    def test_decode(self):
        assert phi_decode(Fraction(1, 2)) == [2]
        d = phi_decode(Fraction(3, 7))
        assert cf_value(d) == Fraction(3, 7)
        I = phi_encode(d)
        assert Fraction(3, 7) in I or Fraction(3, 7) in I.closure()


class TestLemmas:
    def test_dz_example(self):
        assert erase_digit_ratio([2, 3], 1) == Fraction(7, 3)

    def test_dz_single(self):
        assert erase_digit_ratio([5], 1) == 5

    @settings(max_examples=300, deadline=None)
    @given(small_digits, st.data())
    def test_dz_bounds(self, digits, data):
        k = data.draw(st.integers(1, len(digits)))
        r = erase_digit_ratio(digits, k)
        erased = digits[:k - 1] + digits[k:]
        assert r == Fraction(q_oracle(digits), q_oracle(erased))
        a = digits[k - 1]
        assert Fraction(a + 1, 2) <= r <= a + 1

    def test_quasi_mult_example(self):
        assert quasi_mult_ratio([1], [1]) == Fraction(2, 3)
        lam, worst = quasi_mult_bound([([1], [1])])
        assert lam == Fraction(3, 2)

    def test_bound_monotone_under_union(self, rng):
        corpus = [([rng.randint(1, 30) for _ in range(rng.randint(1, 8))],
                   [rng.randint(1, 30) for _ in range(rng.randint(1, 8))]) for _ in range(200)]
        a, _ = quasi_mult_bound(corpus[:100])
        b, _ = quasi_mult_bound(corpus)
        assert a <= b <= 8

    def test_quasi_mult_empty(self):
        with pytest.raises(ValueError):
            quasi_mult_bound([])


class TestGaps:
    def test_prefix_one(self):
        g = mset_gap([1], 2, 1, 2)
        assert gap_bound([1], 2) == Fraction(1, 48)
        assert g >= Fraction(1, 48)

    def test_same_digit(self):
        with pytest.raises(ValueError):
            mset_gap([1], 3, 2, 2)

    def test_hull_endpoints(self):
        c = convergents([2, 1])
        lo, hi = mset_hull([2, 1], 4)
        ends = {Fraction(5 * c.p[2] + c.p[1], 5 * c.q[2] + c.q[1]), Fraction(c.p[2] + c.p[1], c.q[2] + c.q[1])}
        assert {lo, hi} == ends
        assert MSet((2, 1), 4).hull == (lo, hi)

    @pytest.mark.parametrize("k", [2, 3, 5, 10])
    def test_adjacent_minimise(self, k):
        prefix = [1, 3]
        for s in range(1, k + 1):
            gaps = {t: mset_gap(prefix, k, s, t) for t in range(1, k + 1) if t != s}
            best = min(gaps.values())
            assert best in {gaps.get(s - 1), gaps.get(s + 1)}

    def test_sibling_min_matches_pairwise(self, rng):
        for _ in range(40):
            k = rng.randint(2, 8)
            prefix = [rng.randint(1, k) for _ in range(rng.randint(1, 4))]
            pairwise = min(mset_gap(prefix, k, s, t) for s in range(1, k + 1) for t in range(s + 1, k + 1))
            assert min_sibling_gap(prefix, k)[0] == pairwise

    def test_bound_shrinks_with_q(self):
        assert gap_bound([1, 1, 1, 1], 3) < gap_bound([1, 1], 3)
