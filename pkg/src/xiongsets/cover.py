"""Lower-bound certificates for s-sums of covers of a digit-restricted set.

The target set is

    F = {x : x starts with ``prefix`` and a_j <= cap(j) for j > len(prefix)}

with ``cap(j) = min(j, k)``.  A finite cover of ``F`` by closed intervals
is reduced in four phases:

1. shrink every interval to the hull of its trace on ``F``,
2. replace it with the fundamental interval of the longest common prefix
   of that trace (the sibling gap bound makes this lose at most a factor
   ``3k^3`` in length),
3. drop duplicates and intervals nested in others,
4. merge complete sibling families into their parent wherever the sibling
   inequality applies.

Each phase is checked exactly (lengths) or in high precision (powers).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath

from .contfrac import fundamental_interval, interval_length, mset_hull
from .dimension import claim_check
from .errors import CoverError


@dataclass(frozen=True)
class CoverElement:
    lo: Fraction
    hi: Fraction
    provenance: str = "raw"
    digits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise CoverError(f"cover element [{self.lo}, {self.hi}] is reversed")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @classmethod
    def fundamental(cls, digits: Sequence[int], provenance: str = "fundamental") -> "CoverElement":
        I = fundamental_interval(digits)
        return cls(I.lo, I.hi, provenance, tuple(digits))


@dataclass(frozen=True)
class TargetSet:
    prefix: tuple[int, ...]
    k: int

    def cap(self, j: int) -> int:
        """Digit cap at position ``j`` (> len(prefix))."""
        return min(j, self.k)

    def cells(self, depth: int) -> Iterator[tuple[int, ...]]:
        """Admissible strings of the given depth in lexicographic order."""
        if depth < len(self.prefix):
            raise ValueError("depth below the fixed prefix")

        def rec(w):
            if len(w) == depth:
                yield w
                return
            for a in range(1, self.cap(len(w) + 1) + 1):
                yield from rec(w + (a,))

        yield from rec(self.prefix)

    def admissible(self, w: Sequence[int]) -> bool:
        w = tuple(w)
        L = len(self.prefix)
        if w[:L] != self.prefix[:len(w)]:
            return False
        return all(1 <= a <= self.cap(j) for j, a in enumerate(w[L:], start=L + 1))


class _Node:
    """A string with its last two convergents, for walking down the digit tree."""

    __slots__ = ("w", "p", "q", "pp", "qp")

    def __init__(self, w, p, q, pp, qp):
        self.w, self.p, self.q, self.pp, self.qp = w, p, q, pp, qp

    @classmethod
    def root(cls, prefix):
        p, q, pp, qp = 0, 1, 1, 0
        for a in prefix:
            p, q, pp, qp = a * p + pp, a * q + qp, p, q
        return cls(tuple(prefix), p, q, pp, qp)

    def child(self, a):
        return _Node(self.w + (a,), a * self.p + self.pp, a * self.q + self.qp, self.p, self.q)

    def hull(self, cap):
        return mset_hull((), cap, (self.p, self.q, self.pp, self.qp))


def _overlaps(h, lo, hi) -> bool:
    return max(h[0], lo) < min(h[1], hi)


def _extreme_leaf(F: TargetSet, lo: Fraction, hi: Fraction, depth: int, leftmost: bool):
    """Leftmost (or rightmost) admissible depth-``depth`` cell meeting ``(lo, hi)``, with its clipped hull."""

    def rec(node: _Node):
        n = len(node.w)
        if n == depth:
            h = node.hull(F.cap(n + 1))
            return (node.w, h) if _overlaps(h, lo, hi) else None
        kids = [node.child(a) for a in range(1, F.cap(n + 1) + 1)]
        # children run right-to-left on even depth parents, left-to-right on odd
        left_to_right = n % 2 == 1
        if left_to_right != leftmost:
            kids.reverse()
        for kid in kids:
            if not _overlaps(kid.hull(F.cap(n + 2)), lo, hi):
                continue
            found = rec(kid)
            if found:
                return found
        return None

    root = _Node.root(F.prefix)
    if not _overlaps(root.hull(F.cap(len(F.prefix) + 1)), lo, hi):
        return None
    return rec(root)


def _common_prefix(u, v) -> int:
    m = 0
    while m < min(len(u), len(v)) and u[m] == v[m]:
        m += 1
    return m


@dataclass
class CoverCertificate:
    k: int
    s: float
    input_sum: mpmath.mpf
    bound: mpmath.mpf
    j_sum: mpmath.mpf
    phases: dict
    dropped_empty: int = 0
    dropped_degenerate: int = 0
    merges: int = 0
    log: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.input_sum >= self.bound > 0


def s_power_sum(lengths, s, dps: int = 40) -> mpmath.mpf:
    with mpmath.workdps(dps):
        s = mpmath.mpf(s)
        return mpmath.fsum(mpmath.power(mpmath.mpf(L.numerator) / L.denominator, s) for L in lengths if L > 0)


def covers_target(cover: Sequence[CoverElement], F: TargetSet, depth: int) -> bool:
    """Whether every admissible depth-``depth`` cell hull lies in the union of the cover."""
    spans = sorted((e.lo, e.hi) for e in cover)
    merged = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    for w in F.cells(depth):
        h = _Node.root(w).hull(F.cap(depth + 1))
        if not any(lo <= h[0] and h[1] <= hi for lo, hi in merged):
            return False
    return True


def cover_certify(cover: Sequence[CoverElement], k: int, s, prefix: Sequence[int] = (),
                  check_depth: int | None = None, max_extra_depth: int = 12) -> CoverCertificate:
    """Run the four-phase reduction and certify ``sum |B|^s >= (3k^3)^-s sum_J |E|^s > 0``."""
    F = TargetSet(tuple(prefix), k)
    if not F.admissible(F.prefix) or any(a < 1 for a in F.prefix):
        raise CoverError("invalid prefix")
    if not cover:
        raise CoverError("empty cover")
    L0 = len(F.prefix)
    check_depth = L0 + 2 if check_depth is None else check_depth
    if not covers_target(cover, F, check_depth):
        raise CoverError(f"the cover misses part of the target at depth {check_depth}")

    log = []
    shrunk, replaced = [], []
    empty = degenerate = 0
    for B in cover:
        H = L0 + 2
        while True:
            left = _extreme_leaf(F, B.lo, B.hi, H, True)
            if left is None:
                break
            right = _extreme_leaf(F, B.lo, B.hi, H, False)
            m = _common_prefix(left[0], right[0])
            if m + 2 <= H or H >= L0 + max_extra_depth:
                break
            H = m + 2
        if left is None:
            empty += 1
            continue
        if m + 2 > H:
            degenerate += 1
            continue
        b, c = max(B.lo, left[1][0]), min(B.hi, right[1][1])
        Bp = CoverElement(b, c, "shrunk")
        shrunk.append(Bp)
        w = left[0][:m]
        Im = CoverElement.fundamental(w)
        need = Im.length / (3 * k ** 3)
        if Bp.length < need:
            raise CoverError(f"shrunk element [{b}, {c}] shorter than |I^{m}|/(3k^3) = {need}")
        replaced.append(Im)

    # phase 3: prune duplicates and nested intervals
    words = sorted({e.digits for e in replaced}, key=lambda w: (len(w), w))
    kept = set()
    for w in words:
        if not any(w[:i] in kept for i in range(len(w))):
            kept.add(w)
    M = sorted(kept, key=lambda w: (len(w), w))

    # phase 4: merge complete sibling families where the sibling inequality applies
    J = set(M)
    merges = 0
    changed = True
    while changed:
        changed = False
        by_parent: dict = {}
        for w in J:
            if len(w) > L0:
                by_parent.setdefault(w[:-1], set()).add(w[-1])
        for parent in sorted(by_parent, key=lambda w: (-len(w), w)):
            n = len(parent) + 1
            cap = F.cap(n)
            if cap != k or by_parent[parent] != set(range(1, k + 1)):
                continue
            res = claim_check(k, s, parent)
            if not res.holds:
                raise CoverError(f"sibling inequality fails below {parent}: margin {res.margin}")
            for a in range(1, k + 1):
                J.discard(parent + (a,))
            J.add(parent)
            merges += 1
            changed = True
            log.append(("merge", parent))
    J = sorted(J, key=lambda w: (len(w), w))

    input_sum = s_power_sum([e.length for e in cover], s)
    g_sum = s_power_sum([e.length for e in shrunk], s)
    c_sum = s_power_sum([e.length for e in replaced], s)
    m_sum = s_power_sum([interval_length(w) for w in M], s)
    j_sum = s_power_sum([interval_length(w) for w in J], s)
    with mpmath.workdps(40):
        factor = mpmath.power(3 * k ** 3, -mpmath.mpf(s))
        bound = factor * j_sum
        slack = mpmath.mpf(2) ** -100
        chain_ok = (
            input_sum + slack >= g_sum
            and g_sum + slack >= factor * c_sum
            and c_sum + slack >= m_sum
            and m_sum + slack >= j_sum
        )
    if not chain_ok:
        raise CoverError("a reduction phase increased the s-sum")
    phases = {
        "G'": shrunk, "C": replaced, "M": M, "J": J,
        "sums": {"input": input_sum, "G'": g_sum, "C": c_sum, "M": m_sum, "J": j_sum},
    }
    return CoverCertificate(k, float(s), input_sum, bound, j_sum, phases, empty, degenerate, merges, log)


# ---------------------------------------------------------------------------
# sample covers


def canonical_cover(F: TargetSet, depth: int) -> list[CoverElement]:
    return [CoverElement.fundamental(w) for w in F.cells(depth)]


def random_cover(F: TargetSet, depth: int, rng: random.Random, extra: int = 10) -> list[CoverElement]:
    """An overlapping cover: runs of neighbouring cells, randomly widened, plus stray intervals."""
    hulls = sorted(_Node.root(w).hull(F.cap(depth + 1)) for w in F.cells(depth))
    lo_all, hi_all = hulls[0][0], hulls[-1][1]
    span = hi_all - lo_all
    out, i = [], 0
    while i < len(hulls):
        j = min(len(hulls), i + rng.randint(1, 6))
        lo, hi = hulls[i][0], hulls[j - 1][1]
        width = hi - lo
        lo -= width * Fraction(rng.randint(0, 100), 400)
        hi += width * Fraction(rng.randint(0, 100), 400)
        out.append(CoverElement(lo, hi))
        i = j
    for _ in range(extra):
        a = lo_all + span * Fraction(rng.randint(0, 10 ** 6), 10 ** 6)
        b = a + span * Fraction(rng.randint(1, 10 ** 4), 10 ** 6)
        out.append(CoverElement(a, b))
    rng.shuffle(out)
    return out
