from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xiongsets.errors import AlphabetError, HorizonError
from xiongsets.ledger import SegmentLedger, materialize, window
from xiongsets.symbolic import (
    COUNTABLE, EMPTY, ArithmeticPositions, ArraySource, ExplicitPositions, FunctionSource, Word,
    first_difference, gamma_erase, periodic, rho_distance, theta_replace, upper_density, word_distance,
)

from conftest import naive_materialize


class TestWord:
    def test_alphabet_bound(self):
        with pytest.raises(AlphabetError):
            Word([1, 3], 2)
        with pytest.raises(AlphabetError):
            Word([0, 1], 2)
        with pytest.raises(ValueError):
            Word([], 2)

    def test_concat_and_slice(self):
        w = Word([1, 2], 2) + Word([2], 2)
        assert w == [1, 2, 2]
        assert w[1:] == Word([2, 2], 2)
        assert len(w) == 3

    def test_countable(self):
        assert Word([7, 100]).alphabet == COUNTABLE


class TestRho:
    def test_first_difference_at_three(self):
        x, y = periodic([1, 1, 2], 2), periodic([1, 1, 1], 2)
        assert rho_distance(x, y, 10) == Fraction(1, 4)

    def test_equal_on_horizon(self):
        x = periodic([1, 2], 2)
        assert rho_distance(x, x, 50) == 0
        assert first_difference(x, x, 50) is None

    def test_countable_first_index(self):
        x, y = periodic([5]), periodic([6])
        assert rho_distance(x, y, 3, COUNTABLE) == 1

    def test_errors(self):
        with pytest.raises(ValueError):
            rho_distance(periodic([1], 2), periodic([1], 2), 0)
        with pytest.raises(AlphabetError):
            rho_distance(periodic([1], 2), periodic([1], 3), 4)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=12, max_size=12),
           st.lists(st.integers(1, 3), min_size=12, max_size=12),
           st.lists(st.integers(1, 3), min_size=12, max_size=12))
    def test_ultrametric(self, a, b, c):
        d = lambda u, v: word_distance(u, v, 3)
        assert d(a, c) <= max(d(a, b), d(b, c))

    def test_chunked_search_matches(self):
        a = np.ones(300_000, dtype=np.int64)
        b = a.copy()
        b[200_123] = 2
        assert first_difference(ArraySource(a, 2), ArraySource(b, 2), 300_000, chunk=1 << 10) == 200_124


class TestTheta:
    def test_prefix_substitution(self):
        y = theta_replace(Word([1, 2], 3), periodic([3], 3))
        assert y.take(1, 5).tolist() == [1, 2, 3, 3, 3]

    def test_own_prefix_is_identity(self):
        x = periodic([2, 1, 1], 2)
        assert theta_replace(Word(x.take(1, 4).tolist(), 2), x).take(1, 30).tolist() == x.take(1, 30).tolist()

    def test_over_ledger(self, small_ledger):
        ledger, x, z = small_ledger
        point = ledger.point()
        y = theta_replace(Word([2, 1], 2), point)
        assert y.take(1, 2).tolist() == [2, 1]
        assert y.take(3, 40).tolist() == point.take(3, 40).tolist()


class TestErase:
    def test_single_deletion(self):
        assert gamma_erase(ExplicitPositions([2]), [3, 1, 4, 1, 5], 4) == [3, 4, 1, 5]

    def test_empty_set(self):
        assert gamma_erase(EMPTY, [3, 1, 4], 3) == [3, 1, 4]

    def test_arithmetic(self):
        x = FunctionSource(lambda p: p)
        assert gamma_erase(ArithmeticPositions(2, 2), x, 5) == [1, 3, 5, 7, 9]

    def test_short_source(self):
        with pytest.raises(HorizonError):
            gamma_erase(EMPTY, ArraySource([1, 2]), 3)

    def test_ledger_identity(self, small_ledger):
        ledger, x, z = small_ledger
        free = ledger.total_length - ledger.mark_count(ledger.total_length)
        out = gamma_erase(ledger.marks, ledger.point(), free)
        assert out.tolist() == [x[i % len(x)] for i in range(free)]


class TestDensity:
    def test_even_numbers(self):
        assert upper_density(ArithmeticPositions(2, 2), 10) == Fraction(1, 2)

    def test_empty(self):
        assert upper_density(EMPTY, 7) == 0

    @settings(max_examples=50, deadline=None)
    @given(st.sets(st.integers(1, 500), max_size=60), st.integers(1, 600))
    def test_count_matches_brute_force(self, marks, m):
        A = ExplicitPositions(sorted(marks))
        d = upper_density(A, m)
        assert d * m == sum(1 for a in marks if a <= m)

    def test_ledger_counts_match_brute_force(self, small_ledger):
        ledger, x, z = small_ledger
        _, marks = naive_materialize(ledger.stages, x, z, 2)
        marks = set(marks)
        running = 0
        for m in range(1, ledger.total_length + 1):
            running += m in marks
            assert ledger.mark_count(m) == running

    def test_stage2_checkpoint_below_half(self, budget_ledger):
        ledger, _, _ = budget_ledger
        A1 = ledger.stage(2).A1
        assert upper_density(ledger.marks, A1) < Fraction(1, 2)


class TestLedger:
    def test_contiguous(self, budget_ledger):
        ledger, _, _ = budget_ledger
        ledger.check_contiguity()
        assert sum(s.length for s in ledger.segments) == ledger.total_length

    def test_window_matches_materializer(self, small_ledger):
        ledger, x, z = small_ledger
        naive, _ = naive_materialize(ledger.stages, x, z, 2)
        assert materialize(ledger, periodic(x), periodic(z)).tolist() == naive

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_random_windows(self, small_ledger, data):
        ledger, x, z = small_ledger
        naive, _ = naive_materialize(ledger.stages, x, z, 2)
        start = data.draw(st.integers(1, len(naive)))
        length = data.draw(st.integers(1, len(naive) - start + 1))
        assert window(ledger, start, length, periodic(x), periodic(z)).tolist() == naive[start - 1:start - 1 + length]

    def test_zsegment_window_stage1(self, full_stage1):
        ledger, x, z = full_stage1
        s = ledger.stage(1).s
        assert window(ledger, s + 1, 1, periodic(x), periodic(z)).tolist() == [z[s % len(z)]]

    def test_filler_window(self, full_stage1):
        ledger, x, z = full_stage1
        assert window(ledger, 5, 10, periodic(x), periodic(z)).tolist() == [x[i % len(x)] for i in range(4, 14)]

    def test_tail(self, small_ledger):
        ledger, x, z = small_ledger
        with pytest.raises(HorizonError):
            window(ledger, ledger.total_length, 2, periodic(x), periodic(z))
        padded = window(ledger, ledger.total_length + 1, 3, periodic(x), periodic(z), pad=1)
        assert padded == [1, 1, 1]

    def test_json_round_trip(self, budget_ledger):
        ledger, _, _ = budget_ledger
        back = SegmentLedger.loads(ledger.dumps())
        assert back.dumps() == ledger.dumps()
        assert back.segments == ledger.segments
        assert back.point().take(ledger.stage(2).B + 1, 40).tolist() == ledger.point().take(ledger.stage(2).B + 1, 40).tolist()

    def test_big_positions_survive_json(self, full_stage1):
        ledger, _, _ = full_stage1
        back = SegmentLedger.loads(ledger.dumps())
        assert back.total_length == ledger.total_length > 2 ** 512
        assert back.stage(1).anchors[-1] == ledger.stage(1).anchors[-1]

    def test_far_position_reads(self, full_stage1):
        ledger, x, z = full_stage1
        L = ledger.stage(1)
        point = ledger.point()
        # last word of the last block
        pos = L.r(L.blocks, L.width)
        img = L.maps.image(L.tuple_of(L.blocks)[-1], (x[0],))
        assert point.take(pos, 1).tolist() == list(img)
