import random
from fractions import Fraction

import mpmath
import pytest

from xiongsets.contfrac import interval_length
from xiongsets.cover import (
    CoverElement, TargetSet, canonical_cover, cover_certify, covers_target, random_cover, s_power_sum,
)
from xiongsets.dimension import claim_s
from xiongsets.errors import CoverError


def cf_point(digits):
    v = Fraction(0)
    for a in reversed(digits):
        v = 1 / (a + v)
    return v


def sample_target(F, rng, count, depth=10):
    for _ in range(count):
        w = list(F.prefix)
        for j in range(len(w) + 1, depth + 1):
            w.append(rng.randint(1, F.cap(j)))
        yield cf_point(w)


class TestTargetSet:
    def test_caps(self):
        F = TargetSet((), 3)
        assert [F.cap(j) for j in range(1, 6)] == [1, 2, 3, 3, 3]

    def test_cells_count(self):
        F = TargetSet((), 4)
        assert len(list(F.cells(5))) == 1 * 2 * 3 * 4 * 4

    def test_cells_with_prefix(self):
        F = TargetSet((5, 1), 3)
        cells = list(F.cells(3))
        assert cells == [(5, 1, 1), (5, 1, 2), (5, 1, 3)]

    def test_admissible(self):
        F = TargetSet((2,), 3)
        assert F.admissible((2, 2, 3))
        assert not F.admissible((2, 3))
        assert not F.admissible((1, 1))

    def test_depth_below_prefix(self):
        with pytest.raises(ValueError):
            list(TargetSet((1, 2), 3).cells(1))


class TestCovers:
    def test_canonical_covers_samples(self, rng):
        F = TargetSet((1, 2), 4)
        cover = canonical_cover(F, 4)
        assert covers_target(cover, F, 4)
        for x in sample_target(F, rng, 200):
            assert any(e.lo <= x <= e.hi for e in cover)

    def test_random_cover_covers_samples(self, rng):
        F = TargetSet((1, 2, 3), 5)
        cover = random_cover(F, 5, rng)
        assert covers_target(cover, F, 5)
        for x in sample_target(F, rng, 200):
            assert any(e.lo <= x <= e.hi for e in cover)

    def test_missing_cell_detected(self):
        F = TargetSet((1, 2), 3)
        cover = canonical_cover(F, 4)[1:]
        assert not covers_target(cover, F, 4)

    def test_reversed_element(self):
        with pytest.raises(CoverError):
            CoverElement(Fraction(1, 2), Fraction(1, 3))

    def test_power_sum(self):
        with mpmath.workdps(40):
            got = s_power_sum([Fraction(1, 4), Fraction(1, 9), Fraction(0)], 0.5)
            assert abs(got - mpmath.mpf(5) / 6) < mpmath.mpf(10) ** -35


class TestCertify:
    K = 10

    def test_canonical(self):
        prefix = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)
        F = TargetSet(prefix, self.K)
        cert = cover_certify(canonical_cover(F, len(prefix) + 1), self.K, claim_s(self.K), prefix)
        assert cert.holds
        # the full family below the prefix merges into the prefix interval
        assert cert.phases["J"] == [prefix]
        assert cert.merges == 1

    def test_whole_target(self):
        prefix = (3, 1)
        I = CoverElement.fundamental(prefix)
        cert = cover_certify([I], self.K, claim_s(self.K), prefix)
        assert cert.holds
        assert cert.phases["J"] == [prefix]
        # a single element reduces to itself
        s = float(claim_s(self.K))
        want = (3 * self.K ** 3) ** -s * float(Fraction(1, 28)) ** s
        assert interval_length(prefix) == Fraction(1, 28)
        assert abs(float(cert.bound) / want - 1) < 1e-12

    @pytest.mark.parametrize("seed", range(8))
    def test_random_covers(self, seed):
        rng = random.Random(seed)
        prefix = tuple(rng.randint(1, self.K) for _ in range(10))
        F = TargetSet(prefix, self.K)
        cover = random_cover(F, len(prefix) + 1, rng)
        cert = cover_certify(cover, self.K, claim_s(self.K), prefix)
        assert cert.holds
        sums = cert.phases["sums"]
        assert sums["C"] >= sums["M"] >= sums["J"] > 0

    def test_stray_elements_dropped(self, rng):
        prefix = (2,) * 10
        F = TargetSet(prefix, self.K)
        far = CoverElement(Fraction(99, 100), Fraction(991, 1000))
        cert = cover_certify(canonical_cover(F, 11) + [far], self.K, claim_s(self.K), prefix)
        assert cert.dropped_empty == 1 and cert.holds

    def test_incomplete_cover(self):
        prefix = (1,) * 10
        F = TargetSet(prefix, self.K)
        with pytest.raises(CoverError):
            cover_certify(canonical_cover(F, 11)[:-1], self.K, claim_s(self.K), prefix)

    def test_empty_and_bad_prefix(self):
        with pytest.raises(CoverError):
            cover_certify([], self.K, 0.4)
        with pytest.raises(CoverError):
            cover_certify([CoverElement(Fraction(0), Fraction(1))], 3, 0.4, (0,))
