"""The Gauss map ``T(x) = 1/x - floor(1/x)``: exact steps, measure and orbit statistics."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np

from .errors import BudgetExceeded, HorizonError

LN2 = math.log(2)
LEVY_DIGITS_PER_BIT = 12 * LN2 ** 2 / math.pi ** 2  # expected digits per bit of denominator, about 0.584


def gauss_step(x) -> tuple[int | None, Fraction]:
    """``(floor(1/x), T(x))``; 0 is a terminal point returned as ``(None, 0)``."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if x == 0:
        return None, Fraction(0)
    a, r = divmod(x.denominator, x.numerator)
    return a, Fraction(r, x.numerator)


def gauss_measure(a, b, dps: int = 30) -> mpmath.mpf:
    """``(ln(1+b) - ln(1+a)) / ln 2``"""
    a, b = Fraction(a), Fraction(b)
    if not 0 <= a <= b <= 1:
        raise ValueError(f"need 0 <= a <= b <= 1, got [{a}, {b}]")
    with mpmath.workdps(dps):
        return (mpmath.log1p(_mp(b)) - mpmath.log1p(_mp(a))) / mpmath.log(2)


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def ball_measure_lower(k: int) -> mpmath.mpf:
    """Lower bound on the Gauss measure of a ball of radius ``1/k`` inside ``[0, 1)``."""
    return mpmath.log(mpmath.mpf(2 * k + 1) / (2 * k - 1)) / mpmath.log(2)


# ---------------------------------------------------------------------------
# invariance


def branch_preimages(a, b, M: int) -> tuple[list[tuple[Fraction, Fraction]], mpmath.mpf]:
    """Preimages ``(1/(n+b), 1/(n+a)]`` of ``[a, b)`` on branches ``n <= M`` and the tail mass bound."""
    a, b = Fraction(a), Fraction(b)
    if M < 1:
        raise ValueError("M must be positive")
    pieces = [(1 / (n + b), 1 / (n + a)) for n in range(1, M + 1)]
    return pieces, gauss_measure(0, Fraction(1, M + 1))


@dataclass
class InvarianceReport:
    a: Fraction
    b: Fraction
    M: int
    measure: float
    branch_sum: float
    defect: float
    tail: float
    slack: float

    @property
    def passed(self) -> bool:
        return -self.slack <= self.defect <= self.tail + self.slack


def invariance_defect(a, b, M: int = 10 ** 6) -> InvarianceReport:
    """``mu([a,b)) - sum_{n<=M} mu(T^-1[a,b) on branch n)``, compared with the tail mass."""
    a, b = Fraction(a), Fraction(b)
    n = np.arange(1, M + 1, dtype=np.longdouble)
    af = np.longdouble(a.numerator) / np.longdouble(a.denominator)
    bf = np.longdouble(b.numerator) / np.longdouble(b.denominator)
    # mu((1/(n+b), 1/(n+a)]) = log2((1 + 1/(n+a)) / (1 + 1/(n+b)))
    terms = np.log1p(1 / (n + af)) - np.log1p(1 / (n + bf))
    ln2 = np.log(np.longdouble(2))
    branch_sum = np.sum(terms) / ln2
    measure = (np.log1p(bf) - np.log1p(af)) / ln2
    tail = np.log1p(np.longdouble(1) / (M + 1)) / ln2
    defect = measure - branch_sum
    # floating slack of the long sum, far below the tail
    slack = np.longdouble(M) * np.finfo(np.longdouble).eps
    return InvarianceReport(a, b, M, float(measure), float(branch_sum), float(defect), float(tail), float(slack))


# ---------------------------------------------------------------------------
# exactness


Interval = tuple[Fraction, Fraction]


def merge_intervals(intervals: Iterable[Interval]) -> list[Interval]:
    out: list[list[Fraction]] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def forward_image(lo: Fraction, hi: Fraction) -> list[Interval]:
    """``T((lo, hi))`` as a union of open intervals (endpoints do not matter for measure)."""
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"bad interval ({lo}, {hi})")
    if lo == 0:
        return [(Fraction(0), Fraction(1))]
    n_lo = math.floor(1 / hi)  # branch holding points just below hi
    n_hi = math.floor(1 / lo)
    if Fraction(1, n_hi) == lo:
        n_hi -= 1
    if n_hi - n_lo >= 2:
        # a whole branch lies inside, and each branch maps onto (0, 1)
        return [(Fraction(0), Fraction(1))]
    out = []
    for n in range(n_lo, n_hi + 1):
        a = max(lo, Fraction(1, n + 1))
        b = min(hi, Fraction(1, n))
        if a < b:
            out.append((1 / b - n, 1 / a - n))
    return out


def union_measure(intervals: Sequence[Interval], dps: int = 30) -> mpmath.mpf:
    with mpmath.workdps(dps):
        return mpmath.fsum(gauss_measure(lo, hi, dps) for lo, hi in intervals)


@dataclass
class ExactnessTrajectory:
    start: list[Interval]
    measures: list[float]
    counts: list[int]

    def reached(self, level: float = 1 - 1e-3) -> int | None:
        for i, m in enumerate(self.measures):
            if m >= level:
                return i
        return None


def exactness_probe(intervals: Sequence[Interval], steps: int = 10, max_intervals: int = 1 << 16) -> ExactnessTrajectory:
    """``mu(T^n A)`` for ``n = 0..steps`` by exact forward images."""
    current = merge_intervals((Fraction(a), Fraction(b)) for a, b in intervals)
    if not current:
        raise ValueError("empty start set")
    measures = [float(union_measure(current))]
    counts = [len(current)]
    for _ in range(steps):
        nxt = []
        for lo, hi in current:
            nxt.extend(forward_image(lo, hi))
        current = merge_intervals(nxt)
        if len(current) > max_intervals:
            raise BudgetExceeded(f"{len(current)} intervals exceed the budget {max_intervals}")
        measures.append(float(union_measure(current)))
        counts.append(len(current))
    return ExactnessTrajectory(list(intervals), measures, counts)


# ---------------------------------------------------------------------------
# sampling and orbit statistics


def bits_for_digits(budget: int, safety: float = 1.1) -> int:
    return max(64, math.ceil(budget / LEVY_DIGITS_PER_BIT * safety))


@dataclass
class CFPoint:
    x: Fraction
    digits: list[int]
    redraws: int = 0


def sample_cf_point(rng: random.Random, budget: int, max_redraws: int = 100) -> CFPoint:
    """A uniform random rational ``p / 2^bits`` whose expansion has at least ``budget`` digits."""
    bits = bits_for_digits(budget)
    for attempt in range(max_redraws + 1):
        p = rng.getrandbits(bits) | 1
        x = Fraction(p, 1 << bits)
        num, den, digits = x.numerator, x.denominator, []
        while num:
            a, r = divmod(den, num)
            digits.append(a)
            num, den = r, num
        if len(digits) >= budget:
            return CFPoint(x, digits, attempt)
    raise HorizonError(f"no sample reached {budget} digits in {max_redraws + 1} draws")


def pair_rngs(seed: int, pairs: int) -> list[random.Random]:
    """Independent generators per pair index, derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(pairs)
    return [random.Random(int.from_bytes(c.generate_state(4, np.uint64).tobytes(), "little")) for c in children]


def orbit_values(x: Fraction, horizon: int, bits: int = 128) -> Iterator[tuple[int, int]]:
    """``T^n x ~ u / v`` for ``n = 0..horizon-1`` with ``u, v`` below ``2**bits``.

    The orbit runs through the exact Euclid remainders (``T^n x = r_{n+1}/r_n``);
    only the returned pair is truncated, to relative precision ``2**(1-bits)``.
    """
    r_prev, r = x.denominator, x.numerator
    for _ in range(horizon):
        if r == 0:
            raise HorizonError("orbit reached 0 before the horizon")
        shift = max(r_prev.bit_length() - bits, 0)
        yield r >> shift, r_prev >> shift
        r_prev, r = r, r_prev % r


@dataclass
class McReport:
    seed: int
    samples: int
    horizon: int
    statistic: str
    value: float
    reference: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)


def scrambled_stats(seed: int, pairs: int, horizon: int, k: int, max_threshold: float = 0.9,
                    min_threshold: float = 1e-3) -> McReport:
    """Orbit-distance extremes and joint box-visit frequency for random pairs."""
    if k < 2:
        raise ValueError("k must be at least 2")
    lo_box, hi_box = 1 / k, 1 - 1 / k
    visits = total = 0
    mins, maxs, redraws = [], [], 0
    for rng in pair_rngs(seed, pairs):
        px = sample_cf_point(rng, horizon + 1)
        py = sample_cf_point(rng, horizon + 1)
        redraws += px.redraws + py.redraws
        dmin, dmax = math.inf, 0.0
        for (a, b), (c, d) in zip(orbit_values(px.x, horizon), orbit_values(py.x, horizon)):
            # 256-bit exact difference of the truncated values, rounded once
            dist = abs(a * d - c * b) / (b * d)
            dmin = min(dmin, dist)
            dmax = max(dmax, dist)
            u, v = a / b, c / d
            if u <= lo_box and v >= hi_box:
                visits += 1
            total += 1
        mins.append(dmin)
        maxs.append(dmax)
    freq = visits / total
    ref = float(gauss_measure(0, Fraction(1, k)) * gauss_measure(1 - Fraction(1, k), 1))
    frac_max = sum(m >= max_threshold for m in maxs) / pairs
    frac_min = sum(m <= min_threshold for m in mins) / pairs
    tol = 0.2
    details = {
        "fraction_max_ge": frac_max, "max_threshold": max_threshold,
        "fraction_min_le": frac_min, "min_threshold": min_threshold,
        "redraws": redraws, "mins": mins, "maxs": maxs,
    }
    passed = frac_max >= 0.95 and frac_min >= 0.9 and abs(freq - ref) <= tol * ref
    return McReport(seed, pairs, horizon, f"box [0,1/{k}]x[1-1/{k},1) frequency", freq, ref, tol, passed, details)
