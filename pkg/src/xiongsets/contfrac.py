"""Exact continued-fraction arithmetic.

Everything here works with ``int`` and ``fractions.Fraction``.  A finite
expansion of a rational in ``(0, 1)`` is normalised so that its last digit
is at least 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


def _check_digits(digits: Sequence[int]) -> tuple[int, ...]:
    digits = tuple(int(a) for a in digits)
    for a in digits:
        if a < 1:
            raise ValueError(f"continued-fraction digits are positive, got {a}")
    return digits


def cf_digits(x: Fraction, max_digits: int | None = None) -> list[int]:
    """Digits ``a_1, a_2, ...`` of ``x`` in ``(0, 1)`` by exact Euclid steps."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    num, den = x.numerator, x.denominator
    out = []
    while num and (max_digits is None or len(out) < max_digits):
        a, r = divmod(den, num)
        out.append(a)
        num, den = r, num
    return out


def cf_value(digits: Sequence[int]) -> Fraction:
    """``[a_1, ..., a_n] = 1/(a_1 + 1/(a_2 + ...))``"""
    c = convergents(digits)
    return Fraction(c.p[-1], c.q[-1])


@dataclass(frozen=True)
class ConvergentPair:
    """Numerators and denominators ``p_0..p_n``, ``q_0..q_n``.

    ``p_{-1} = 1`` and ``q_{-1} = 0`` are implicit.
    """

    digits: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.digits)

    def prev(self) -> tuple[int, int]:
        """``(p_{n-1}, q_{n-1})``, including the virtual index -1."""
        return (self.p[-2], self.q[-2]) if self.n else (1, 0)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p[-1], self.q[-1])

    def determinant(self, k: int) -> int:
        """``p_k q_{k-1} - p_{k-1} q_k``, expected to be ``(-1)**(k+1)``."""
        pk1, qk1 = (self.p[k - 1], self.q[k - 1]) if k >= 1 else (1, 0)
        return self.p[k] * qk1 - pk1 * self.q[k]


def convergents(digits: Sequence[int]) -> ConvergentPair:
    digits = _check_digits(digits)
    p, q = [0], [1]
    pm, qm = 1, 0
    for a in digits:
        pn, qn = a * p[-1] + pm, a * q[-1] + qm
        pm, qm = p[-1], q[-1]
        p.append(pn)
        q.append(qn)
    return ConvergentPair(digits, tuple(p), tuple(q))


def q_pair(digits: Sequence[int]) -> tuple[int, int]:
    """``(q_n, q_{n-1})`` without storing the whole history."""
    q, qm = 1, 0
    for a in digits:
        q, qm = a * q + qm, q
    return q, qm


@dataclass(frozen=True)
class FundInterval:
    """The set of points whose expansion starts with ``digits``.

    For odd depth the interval is ``[(p+p')/(q+q'), p/q)``, for even depth
    ``(p/q, (p+p')/(q+q')]``; depth 0 is ``[0, 1)``.
    """

    digits: tuple[int, ...]
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    def child(self, a: int) -> "FundInterval":
        return fundamental_interval(self.digits + (a,))

    def closure(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi


def fundamental_interval(digits: Sequence[int]) -> FundInterval:
    digits = _check_digits(digits)
    if not digits:
        return FundInterval((), Fraction(0), Fraction(1), True, False)
    c = convergents(digits)
    p, q = c.p[-1], c.q[-1]
    pp, qp = c.prev()
    inner = Fraction(p + pp, q + qp)
    outer = Fraction(p, q)
    if len(digits) % 2:
        return FundInterval(digits, inner, outer, True, False)
    return FundInterval(digits, outer, inner, False, True)


def interval_length(digits: Sequence[int]) -> Fraction:
    """``|I^n| = 1/(q_n (q_n + q_{n-1}))``"""
    q, qm = q_pair(_check_digits(digits))
    return Fraction(1, q * (q + qm))


def phi_encode(digits: Sequence[int]) -> FundInterval:
    """The interval of points whose expansion begins with ``digits``."""
    return fundamental_interval(digits)


def phi_decode(x: Fraction, depth: int | None = None) -> list[int]:
    return cf_digits(x, depth)


# ---------------------------------------------------------------------------
# ratio and gap bounds


def erase_digit_ratio(digits: Sequence[int], k: int) -> Fraction:
    """``q_n(a_1..a_n) / q_{n-1}(a_1..a_n without a_k)``, checked against its bounds."""
    digits = _check_digits(digits)
    n = len(digits)
    if not 1 <= k <= n:
        raise ValueError(f"position {k} outside 1..{n}")
    full = q_pair(digits)[0]
    erased = q_pair(digits[:k - 1] + digits[k:])[0]
    ratio = Fraction(full, erased)
    a = digits[k - 1]
    assert Fraction(a + 1, 2) <= ratio <= a + 1, f"erasure ratio {ratio} outside bounds for {digits}, k={k}"
    return ratio


def quasi_mult_ratio(mu: Sequence[int], nu: Sequence[int]) -> Fraction:
    """``|I(mu nu)| / (|I(mu)| |I(nu)|)``"""
    mu, nu = _check_digits(mu), _check_digits(nu)
    return interval_length(mu + nu) / (interval_length(mu) * interval_length(nu))


def quasi_mult_bound(corpus: Iterable[tuple[Sequence[int], Sequence[int]]]) -> tuple[Fraction, tuple]:
    """Smallest ``lambda`` with ``1/lambda <= ratio <= lambda`` on the corpus, and a worst pair."""
    best, worst = None, None
    for mu, nu in corpus:
        r = quasi_mult_ratio(mu, nu)
        need = max(r, 1 / r)
        if best is None or need > best:
            best, worst = need, (tuple(mu), tuple(nu))
    if best is None:
        raise ValueError("empty corpus")
    return best, worst


@dataclass(frozen=True)
class MSet:
    """Points with expansion ``prefix`` followed by a digit at most ``k``."""

    prefix: tuple[int, ...]
    k: int

    @cached_property
    def hull(self) -> tuple[Fraction, Fraction]:
        return mset_hull(self.prefix, self.k)

    @property
    def lo(self) -> Fraction:
        return self.hull[0]

    @property
    def hi(self) -> Fraction:
        return self.hull[1]


def mset_hull(prefix: Sequence[int], k: int, pq: tuple[int, int, int, int] | None = None) -> tuple[Fraction, Fraction]:
    """Closed hull of the union of the depth-``n+1`` intervals with last digit ``<= k``.

    ``pq`` may pass ``(p_n, q_n, p_{n-1}, q_{n-1})`` to skip the recurrence.
    """
    if k < 1:
        raise ValueError("the digit cap is at least 1")
    if pq is None:
        c = convergents(prefix)
        p, q = c.p[-1], c.q[-1]
        pp, qp = c.prev()
    else:
        p, q, pp, qp = pq
    a = Fraction((k + 1) * p + pp, (k + 1) * q + qp)
    b = Fraction(p + pp, q + qp)
    return (a, b) if a < b else (b, a)


def hull_distance(u: tuple[Fraction, Fraction], v: tuple[Fraction, Fraction]) -> Fraction:
    """Distance between two closed intervals (0 when they meet)."""
    return max(Fraction(0), max(u[0], v[0]) - min(u[1], v[1]))


def gap_bound(prefix: Sequence[int], k: int) -> Fraction:
    q, qm = q_pair(_check_digits(prefix))
    return Fraction(1, 3 * k ** 3 * q * (q + qm))


def mset_gap(prefix: Sequence[int], k: int, s: int, t: int) -> Fraction:
    """Distance between ``MSet(prefix+s, k)`` and ``MSet(prefix+t, k)``, checked against the gap bound."""
    if s == t:
        raise ValueError("s and t must differ")
    if not (1 <= s <= k and 1 <= t <= k):
        raise ValueError(f"s and t must lie in 1..{k}")
    prefix = _check_digits(prefix)
    gap = hull_distance(mset_hull(prefix + (s,), k), mset_hull(prefix + (t,), k))
    bound = gap_bound(prefix, k)
    assert gap >= bound, f"gap {gap} below {bound} for prefix {prefix}, k={k}, s={s}, t={t}"
    return gap


def min_sibling_gap(prefix: Sequence[int], k: int) -> tuple[Fraction, tuple[int, int]]:
    """Smallest gap between the ``k`` sibling M-sets below ``prefix``, with the digits attaining it.

    Sorting the hulls reduces the all-pairs minimum to consecutive pairs.
    The gap bound is asserted.
    """
    prefix = _check_digits(prefix)
    c = convergents(prefix)
    p, q = c.p[-1], c.q[-1]
    pp, qp = c.prev()
    hulls = []
    for a in range(1, k + 1):
        pa, qa = a * p + pp, a * q + qp
        hulls.append((mset_hull((), k, (pa, qa, p, q)), a))
    hulls.sort()
    best, arg = None, None
    for (u, a), (v, b) in zip(hulls, hulls[1:]):
        g = hull_distance(u, v)
        if best is None or g < best:
            best, arg = g, (a, b)
    if best is None:
        return Fraction(0), (1, 1)
    bound = Fraction(1, 3 * k ** 3 * q * (q + qp))
    assert best >= bound, f"gap {best} below {bound} for prefix {prefix}, k={k}"
    return best, arg
