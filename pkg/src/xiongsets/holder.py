"""The erasure map ``phi(Delta(x)) -> phi(x)`` and its local Hoelder exponent.

Over the countable alphabet the constructed points are read as continued
fractions.  Removing the marked positions sends ``phi(Delta(x))`` back to
``phi(x)``; because marks have zero density this map is locally
``1/(1+eps)``-Hoelder for every ``eps > 0``, with constant
``(lam^2 / |I^1(k+1)|^2)^(1/(1+eps))`` when all digits are at most ``k``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .construction import Budget, ConstructionParams, build_delta_countable
from .contfrac import cf_value, interval_length
from .dimension import HolderWitness, holder_witness
from .ledger import FILLER, SegmentLedger
from .symbolic import COUNTABLE, ArraySource, periodic


def schedule_ratio(tau: int, n: int, c: float) -> float:
    """``(c tau(n) + 1) / (n - tau(n) - 1)``; infinite while the denominator is not positive."""
    den = n - tau - 1
    return math.inf if den <= 0 else (c * tau + 1) / den


def threshold_N(ledger: SegmentLedger, eps: float, c: float, horizon: int) -> int:
    """Smallest ``N`` with ``schedule_ratio < eps`` for every ``n`` in ``[N, horizon]``."""
    N = 1
    for n in range(1, horizon + 1):
        if schedule_ratio(ledger.mark_count(n), n, c) >= eps:
            N = n + 1
    if N > horizon:
        raise ValueError(f"the schedule inequality never settles below {horizon}")
    return N


def holder_constant(lam, k: int, eps: float) -> float:
    I1 = interval_length((k + 1,))
    lam = Fraction(lam)
    with mpmath.workdps(30):
        lam = mpmath.mpf(lam.numerator) / lam.denominator
        return float(mpmath.power(lam ** 2 / (mpmath.mpf(I1.numerator) / I1.denominator) ** 2,
                                  1 / (1 + mpmath.mpf(eps))))


@dataclass
class HolderReport:
    k: int
    eps: float
    N: int
    horizon: int
    witness: HolderWitness
    constant: float
    schedule_ok: bool
    tau_density: list[tuple[int, Fraction]]

    @property
    def passed(self) -> bool:
        return self.schedule_ok and self.witness.c <= self.constant


def random_W_point(rng: random.Random, length: int, k: int) -> list[int]:
    """A prefix of a point of ``prod {1..i}`` with every digit at most ``k``."""
    return [rng.randint(1, min(i, k)) for i in range(1, length + 1)]


def holder_instance(k: int = 5, eps: float = 0.5, pairs: int = 200, lam=2, seed: int = 0,
                      stages: int = 3, budget: Budget = Budget(4, 4), horizon: int = 4000,
                      extra_depth: int = 40) -> HolderReport:
    rng = random.Random(seed)
    zrng = random.Random(seed + 1)
    z = periodic([zrng.randint(1, k) for _ in range(97)])
    ledger = build_delta_countable(ConstructionParams(COUNTABLE, stages, budget))
    c = 2 * math.log(k + 1) / math.log(2)
    N = threshold_N(ledger, eps, c, horizon)
    depth = horizon + extra_depth
    if depth > ledger.total_length:
        raise ValueError("the ledger is too short for the requested horizon")
    marks = ledger.marks

    # filler positions beyond N where a single base-point symbol can change
    candidates = []
    for seg in ledger.segments:
        if seg.kind == FILLER and seg.end > N and seg.start < horizon:
            for pos in range(max(seg.start, N + 1), min(seg.end, horizon) + 1):
                candidates.append((pos, seg.src["x"] + pos - seg.start))

    samples = []
    for _ in range(pairs):
        pos, cursor = rng.choice(candidates)
        x = random_W_point(rng, depth, k)
        cap = min(cursor, k)
        if cap < 2:
            continue
        y = list(x)
        y[cursor - 1] = rng.choice([v for v in range(1, cap + 1) if v != x[cursor - 1]])
        P = pos + extra_depth
        dx = ledger.point(ArraySource(x, periodic=True), z).take(1, P).tolist()
        dy = ledger.point(ArraySource(y, periodic=True), z).take(1, P).tolist()
        assert dx[:pos - 1] == dy[:pos - 1] and dx[pos - 1] != dy[pos - 1]
        kept = P - marks.count_le(P)
        beta, gamma = cf_value(dx), cf_value(dy)
        fb, fg = cf_value(x[:kept]), cf_value(y[:kept])
        samples.append((abs(beta - gamma), abs(fb - fg)))
    witness = holder_witness(samples, 1 / (1 + eps))
    witness.extras["lambda"] = lam
    checks = range(N, horizon + 1, max(1, (horizon - N) // 200))
    schedule_ok = all(schedule_ratio(ledger.mark_count(n), n, c) < eps for n in checks)
    tau_density = [(n, Fraction(ledger.mark_count(n), n)) for n in (10 ** e for e in range(1, 7)) if n <= ledger.total_length]
    return HolderReport(k, eps, N, horizon, witness, holder_constant(lam, k, eps), schedule_ok, tau_density)
