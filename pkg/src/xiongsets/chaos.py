"""Finite-horizon checks of proximality, return to z, targeting and scrambling."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import HorizonError, NoSuchTuple
from .ledger import PHI, SegmentLedger
from .symbolic import COUNTABLE, SymbolSource, as_source, metric_base, periodic, word_distance


def _shift_distance(a: SymbolSource, b: SymbolSource, shift: int, horizon: int, base: int):
    """``rho(sigma^shift a, sigma^shift b)`` read over ``horizon`` symbols.

    Returns ``(distance, limited)``; ``limited`` is True when the windows
    agree entirely, in which case the distance is only known to be below
    ``base**-horizon`` and 0 is reported.
    """
    wa = a.take(shift + 1, horizon)
    wb = b.take(shift + 1, horizon)
    for i, (s, t) in enumerate(zip(wa.tolist(), wb.tolist())):
        if s != t:
            return Fraction(1, base ** i), False
    return Fraction(0), True


@dataclass
class ProximalReport:
    stage: int
    anchor: int
    distances: list[Fraction]
    horizon_limited: list[bool]
    bound: Fraction

    @property
    def max(self) -> Fraction:
        return max(self.distances, default=Fraction(0))

    @property
    def passed(self) -> bool:
        return self.max <= self.bound


def proximal_check(y: SymbolSource, z, d: int, k: int) -> ProximalReport:
    """Distances between ``sigma^{j*A_1} z`` and ``sigma^{j*A_1} y`` for ``j <= d`` at stage ``k``.

    ``y`` is a point read through a ledger (a :class:`DeltaPoint`).
    """
    ledger: SegmentLedger = y.ledger
    L = ledger.stage(k)
    if not 1 <= d <= k:
        raise ValueError(f"d must lie in [1, {k}] at stage {k}, got {d}")
    z = as_source(z, y.alphabet if y.alphabet != COUNTABLE else None)
    base = metric_base(ledger.alphabet)
    dists, limited = [], []
    for j in range(1, d + 1):
        dist, lim = _shift_distance(z, y, j * L.A1, k + 1, base)
        dists.append(dist)
        limited.append(lim)
    return ProximalReport(k, L.A1, dists, limited, Fraction(1, base ** k))


def return_to_z_check(family: Sequence[SymbolSource], z, k: int) -> Fraction:
    """Diameter of ``{z[1..k]}`` together with every member's window at ``B_k + 1``."""
    if not family:
        return Fraction(0)
    ledger = family[0].ledger
    L = ledger.stage(k)
    z = as_source(z)
    words = [tuple(z.take(1, k).tolist())]
    for member in family:
        if member.ledger.stage(k).B != L.B:
            raise ValueError("family members come from different layouts")
        words.append(tuple(member.take(L.B + 1, k).tolist()))
    return max(word_distance(u, v, ledger.alphabet) for u in words for v in words)


# ---------------------------------------------------------------------------
# targeting


@dataclass
class Member:
    """A base point, known through a prefix, with one target prefix per ``j``."""

    x_prefix: tuple[int, ...]
    targets: list[tuple[int, ...]]

    def source(self) -> SymbolSource:
        return periodic(list(self.x_prefix))


@dataclass
class TargetSpec:
    d: int
    members: list[Member] = field(default_factory=list)

    def __post_init__(self):
        self.members = [
            m if isinstance(m, Member) else Member(tuple(m[0]), [tuple(t) for t in m[1]])
            for m in self.members
        ]
        for m in self.members:
            m.x_prefix = tuple(int(s) for s in m.x_prefix)
            m.targets = [tuple(int(s) for s in t) for t in m.targets]
            if len(m.targets) != self.d:
                raise ValueError(f"each member needs {self.d} targets, got {len(m.targets)}")

    @classmethod
    def from_dict(cls, d: dict) -> "TargetSpec":
        return cls(int(d["d"]), [Member(tuple(m["x_prefix"]), [tuple(t) for t in m["targets"]]) for m in d["members"]])

    def to_dict(self) -> dict:
        return {"d": self.d, "members": [{"x_prefix": list(m.x_prefix), "targets": [list(t) for t in m.targets]} for m in self.members]}


def psi_lengths(spec: TargetSpec, k: int) -> list[list[int]]:
    """``psi[member][j-1]``: common target-prefix depth within the member's ``k``-cylinder."""
    out = []
    for m in spec.members:
        cell = [o for o in spec.members if o.x_prefix[:k] == m.x_prefix[:k]]
        row = []
        for j in range(spec.d):
            depth = min(k, len(m.targets[j]))
            for o in cell:
                other = o.targets[j]
                i = 0
                while i < depth and i < len(other) and other[i] == m.targets[j][i]:
                    i += 1
                depth = i
            row.append(depth)
        out.append(row)
    return out


def find_target_block(spec: TargetSpec, k: int, ledger: SegmentLedger) -> tuple[int, int]:
    """Smallest block ordinal realising the spec at stage ``k``, with its ``q``."""
    L = ledger.stage(k)
    if spec.d > L.width:
        raise NoSuchTuple(f"d={spec.d} exceeds the {L.width} words per block at stage {k}")
    for m in spec.members:
        if len(m.x_prefix) < k:
            raise ValueError(f"member prefix {m.x_prefix} is shorter than the stage {k}")
    psi = psi_lengths(spec, k)
    digits = []
    for j in range(spec.d):
        reqs = {}
        for m, row in zip(spec.members, psi):
            head = m.x_prefix[:k]
            want = m.targets[j][:row[j]]
            if reqs.setdefault(head, want) != want:
                # identical cylinders get identical psi, so prefixes must agree
                raise NoSuchTuple(f"conflicting targets for x-prefix {head}")
        allowed = L.maps.positions_matching(reqs.items())
        if not allowed:
            raise NoSuchTuple(f"no stage-{k} map realises slot {j + 1}")
        digits.append(allowed[0] - 1)
    digits += [0] * (L.width - spec.d)
    ordinal = 0
    for dgt in digits:
        ordinal = ordinal * L.width + dgt
    ordinal += 1
    if ordinal > L.blocks:
        raise NoSuchTuple(f"block {ordinal} needed but the schedule has {L.blocks} blocks at stage {k}")
    return ordinal, L.anchors[ordinal - 1]


def find_target_time(spec: TargetSpec, k: int, ledger: SegmentLedger) -> int:
    """A shift ``q`` with ``sigma^{j q}(Delta(x))`` starting with every target prefix."""
    return find_target_block(spec, k, ledger)[1]


@dataclass
class TargetReport:
    q: int
    checked: int
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_target_time(q: int, spec: TargetSpec, ledger: SegmentLedger, k: int | None = None, z=None) -> TargetReport:
    """Read back the windows at ``j*q + 1`` and compare with the target prefixes."""
    if q < 1:
        raise ValueError("q must be positive")
    if k is None:
        k = max((len(m.x_prefix) for m in spec.members), default=1)
        k = min(k, ledger.built_stages)
    z = periodic([1]) if z is None else z
    psi = psi_lengths(spec, k)
    failures, checked = [], 0
    for idx, (m, row) in enumerate(zip(spec.members, psi)):
        point = ledger.point(m.source(), z)
        for j in range(1, spec.d + 1):
            n = row[j - 1]
            if n == 0:
                continue
            checked += 1
            try:
                got = tuple(point.take(j * q + 1, n).tolist())
            except HorizonError:
                got = None
            if got != m.targets[j - 1][:n]:
                failures.append({"member": idx, "j": j, "want": m.targets[j - 1][:n], "got": got})
    return TargetReport(q, checked, failures)


# ---------------------------------------------------------------------------
# scrambled pairs


@dataclass
class ScrambleReport:
    shifts: int
    min: Fraction
    max: Fraction
    stage: int
    base: int

    @property
    def passed(self) -> bool:
        return self.min <= Fraction(1, self.base ** self.stage) and self.max >= Fraction(1, self.base)


def default_shifts(ledger: SegmentLedger, phi_anchors: int = 64) -> list[int]:
    shifts = set()
    for L in ledger.stages:
        shifts.update((L.A1, L.B))
    found = 0
    for seg in ledger.segments:
        if seg.kind == PHI and not seg.src.get("copy"):
            shifts.add(seg.start - 1)
            found += 1
            if found == phi_anchors:
                break
    return sorted(shifts)


def scrambled_pair_check(x: SymbolSource, y: SymbolSource, stage: int | None = None,
                         shifts: Sequence[int] | None = None, horizon: int = 64) -> ScrambleReport:
    """Min and max of ``rho(sigma^m x, sigma^m y)`` over a sampled set of shifts.

    These are finite proxies for liminf and limsup.
    """
    ledger = x.ledger
    stage = ledger.built_stages if stage is None else stage
    shifts = default_shifts(ledger) if shifts is None else list(shifts)
    base = metric_base(ledger.alphabet)
    dists = []
    for m in shifts:
        h = min(horizon, ledger.total_length - m)
        if h < 1:
            continue
        dists.append(_shift_distance(x, y, m, h, base)[0])
    if not dists:
        raise HorizonError("no sampled shift lies inside the built prefix")
    return ScrambleReport(len(dists), min(dists), max(dists), stage, base)
