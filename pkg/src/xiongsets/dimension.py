"""Hausdorff-dimension estimates for digit-restricted continued fractions.

Interval lengths are exact; powers and sums are evaluated in the log
domain with ``np.longdouble`` (64-bit mantissa on x86) or ``mpmath``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .contfrac import q_pair
from .errors import BudgetExceeded
from .symbolic import PositionSet, SymbolSource

ENUM_BUDGET = 10 ** 7
LD = np.longdouble


def _enum_q(k: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(q_n, q_{n-1})`` for every digit string in ``{1..k}^n``, lexicographic order."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if k ** n > ENUM_BUDGET:
        raise BudgetExceeded(f"{k}^{n} digit strings exceed the enumeration budget {ENUM_BUDGET}")
    if (k + 1) ** n > 2 ** 62:
        raise BudgetExceeded("denominators would overflow 64-bit integers")
    q = np.ones(1, dtype=np.int64)
    qm = np.zeros(1, dtype=np.int64)
    digits = np.arange(1, k + 1, dtype=np.int64)
    for _ in range(n):
        a = np.tile(digits, q.size)
        q_rep, qm_rep = np.repeat(q, k), np.repeat(qm, k)
        q, qm = a * q_rep + qm_rep, q_rep
    return q, qm


@lru_cache(maxsize=32)
def log_lengths(k: int, n: int) -> np.ndarray:
    """``log |I^n(w)|`` for ``w`` in ``{1..k}^n`` (lexicographic), as longdouble."""
    q, qm = _enum_q(k, n)
    qL = q.astype(LD)
    out = -(np.log(qL) + np.log(qL + qm.astype(LD)))
    out.flags.writeable = False
    return out


def s_sum(k: int, n: int, s: float) -> np.longdouble:
    """``sum_{w in {1..k}^n} |I^n(w)|^s``."""
    if s == 0:
        return LD(k) ** n
    return np.sum(np.exp(LD(s) * log_lengths(k, n)))


@dataclass
class DimEstimate:
    k: int
    depth: int
    s: float
    s_sum: np.longdouble
    lo: float
    hi: float
    method: str = "bisection"
    iterations: int = 0
    previous_depth: float | None = None

    @property
    def width(self) -> float:
        return self.hi - self.lo


def dim_bisect(k: int, depth: int, tol: float = 1e-6, max_iter: int = 200, diagnostics: bool = True) -> DimEstimate:
    """Root of ``s -> s_sum(k, depth, s) = 1`` on ``[0, 1]``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if k == 1:
        return DimEstimate(k, depth, 0.0, s_sum(1, depth, 0.0), 0.0, 0.0, "single interval")
    lo, hi = LD(0), LD(1)
    f_hi = s_sum(k, depth, 1.0)
    assert s_sum(k, depth, 0.0) > 1 > f_hi, "bisection interval does not bracket the root"
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = (lo + hi) / 2
        if s_sum(k, depth, mid) > 1:
            lo = mid
        else:
            hi = mid
        it += 1
    est = DimEstimate(k, depth, float(lo), s_sum(k, depth, lo), float(lo), float(hi), iterations=it)
    if diagnostics and depth > 1:
        est.previous_depth = dim_bisect(k, depth - 1, tol, max_iter, False).s
    return est


@dataclass
class JarnikBounds:
    k: int
    lower: mpmath.mpf
    upper: mpmath.mpf
    in_range: bool


def jarnik_bounds(k: int, dps: int = 30) -> JarnikBounds:
    """``(1 - 4/(k ln 2), 1 - 1/(8 k ln k))``; the bounds are claimed only for ``k > 8``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    with mpmath.workdps(dps):
        lower = 1 - mpmath.mpf(4) / (k * mpmath.log(2))
        upper = 1 - mpmath.mpf(1) / (8 * k * mpmath.log(k))
    return JarnikBounds(k, lower, upper, k > 8)


# ---------------------------------------------------------------------------
# the sibling inequality


def default_caps(k: int, depth: int, fixed: int = 0) -> list[int | None]:
    """Cap pattern of positions ``1..depth``: free (None) up to ``fixed``, then ``min(i, k)``."""
    return [None if i <= fixed else min(i, k) for i in range(1, depth + 1)]


@dataclass
class ClaimResult:
    holds: bool
    margin: mpmath.mpf
    beta: Fraction
    beta_ok: bool
    internal: mpmath.mpf
    internal_ok: bool


def claim_s(k: int) -> mpmath.mpf:
    return 1 - mpmath.mpf(4) / (k * mpmath.log(2))


def claim_check(k: int, s, prefix: Sequence[int], caps: Sequence[int | None] | None = None, dps: int = 40) -> ClaimResult:
    """``sum_{i<=k} |I(prefix, i)|^s >= |I(prefix)|^s``, with the margin as a relative excess.

    Also evaluates the auxiliary quantity ``beta`` and the bound
    ``(1 - beta/k) 2^(1-s) >= 1`` used to establish the inequality.
    """
    prefix = tuple(int(a) for a in prefix)
    if caps is not None:
        if len(caps) < len(prefix):
            raise ValueError("caps must cover every prefix position")
        for a, c in zip(prefix, caps):
            if a < 1 or (c is not None and a > c):
                raise ValueError(f"prefix {prefix} violates the digit caps {list(caps)}")
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    q, qm = q_pair(prefix)
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        parent = mpmath.power(mpmath.mpf(1) / (q * (q + qm)), s)
        kids = mpmath.fsum(
            mpmath.power(mpmath.mpf(1) / ((i * q + qm) * ((i + 1) * q + qm)), s) for i in range(1, k + 1)
        )
        margin = kids / parent - 1
        beta = Fraction(k * q + k * qm, k * q + q + qm)
        internal = (1 - mpmath.mpf(beta.numerator) / (beta.denominator * k)) * mpmath.power(2, 1 - s)
        # rounding slack of the log-domain evaluation
        eps = mpmath.mpf(2) ** (-dps * 3)
        return ClaimResult(
            holds=margin >= -eps, margin=margin, beta=beta,
            beta_ok=Fraction(1, 2) < beta < 2, internal=internal, internal_ok=internal >= 1,
        )


# ---------------------------------------------------------------------------
# symbolic sets


@dataclass
class WeishuReport:
    depth: int
    count: int
    estimate: float
    lam: Fraction
    tolerance: float
    passed: bool


def box_count_dimension(words: Iterable, depth: int, base: int) -> tuple[int, float]:
    """Distinct depth-``d`` prefixes and the proxy ``log(count) / (d log base)``."""
    seen = set()
    for w in words:
        if isinstance(w, SymbolSource):
            w = w.take(1, depth)
        seen.add(tuple(int(s) for s in list(w)[:depth]))
    count = len(seen)
    if count == 0:
        raise ValueError("no sample words")
    return count, math.log(count) / (depth * math.log(base))


def density_bound(A: PositionSet, depth: int, start: int = 1) -> Fraction:
    """``max_{start <= m <= depth} #(A cap [1,m]) / m`` exactly."""
    best = Fraction(0)
    for m in range(start, depth + 1):
        best = max(best, Fraction(A.count_le(m), m))
    return best


def weishu_check(words: Iterable, A: PositionSet, depth: int, base: int = 2, tolerance: float = 0.1) -> WeishuReport:
    """Compare a box-count estimate of ``Y`` with the lower bound ``1 - lambda``."""
    if depth < 1:
        raise ValueError("depth must be positive")
    count, est = box_count_dimension(words, depth, base)
    lam = density_bound(A, depth)
    ok = est >= float(1 - lam) * (1 - tolerance)
    return WeishuReport(depth, count, est, lam, tolerance, ok)


def infinite_dimension_proxy(depth: int) -> float:
    """``log2(depth!) / depth``: box count of ``prod {1..i}`` at depth ``d`` (unbounded in ``d``)."""
    return math.lgamma(depth + 1) / (depth * math.log(2))


# ---------------------------------------------------------------------------
# Hoelder witnesses


@dataclass
class HolderWitness:
    alpha: float
    c: float
    r: float | None
    pairs: int
    worst: tuple | None = None
    extras: dict = field(default_factory=dict)


def holder_witness(pairs: Iterable[tuple], alpha: float, r: float | None = None, dps: int = 30) -> HolderWitness:
    """Smallest ``c`` with ``|f(x)-f(y)| <= c d(x,y)^alpha`` over the sampled pairs.

    ``pairs`` holds ``(d(x, y), |f(x) - f(y)|)`` with exact or float entries;
    pairs with ``d >= r`` are skipped.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    best, worst, used = mpmath.mpf(0), None, 0
    with mpmath.workdps(dps):
        for d, fd in pairs:
            d, fd = Fraction(d), Fraction(fd)
            if d <= 0 or (r is not None and d >= r):
                continue
            used += 1
            ratio = mpmath.mpf(fd.numerator) / fd.denominator / mpmath.power(
                mpmath.mpf(d.numerator) / d.denominator, alpha)
            if ratio > best:
                best, worst = ratio, (d, fd)
    if not used:
        raise ValueError("no sample pair inside the locality radius")
    return HolderWitness(alpha, float(best), r, used, worst)
