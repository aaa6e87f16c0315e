"""Staged construction of the chaotic point map ``x -> Delta(x)``.

Each stage ``n`` lays down, in order:

* a filler taken from ``x`` up to position ``A_1``,
* ``n`` copies of z-segments at ``j*A_1 + 1`` separated by fillers,
* ``n`` copies of ``z[1..n]`` at ``j*B + 1`` separated by fillers,
* the blocks: block ``i`` holds the words ``phi_{p_{i,j}}(x[1..n])`` at
  ``j*g_i + 1`` for ``j = 1..l`` with fillers in between, and consecutive
  blocks abut (``g_{i+1} = l*g_i + n``).

Fillers consume ``x`` strictly in order, so erasing every z-segment and
phi-word position gives back ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import AlphabetError, BudgetExceeded, HorizonError, ScheduleError
from .layout import SelfMapTable, StageLayout, constant_map_index, index_word
from .ledger import FILLER, PHI, ZSEG, SegmentLedger
from .symbolic import COUNTABLE, as_source, check_alphabet

MAP_CAP = 1 << 20
BLOCK_CAP = 1 << 20
SEGMENT_CAP = 1 << 22


@dataclass(frozen=True)
class Budget:
    maps: int
    blocks: int

    def __post_init__(self):
        if self.maps < 1 or self.blocks < 1:
            raise ScheduleError("budget values must be at least 1")


@dataclass
class ConstructionParams:
    alphabet: int | str = 2
    max_stage: int = 1
    budget: Budget | None = None
    z: object = None
    x: object = None
    paper_literal_zsegments: bool = False
    reembed_phi: bool = False
    map_cap: int = MAP_CAP
    block_cap: int = BLOCK_CAP
    segment_cap: int = SEGMENT_CAP

    def violations(self) -> list[str]:
        out = []
        try:
            a = check_alphabet(self.alphabet)
            if a != COUNTABLE and a < 2:
                out.append(f"alphabet must be at least 2, got {a}")
        except AlphabetError as e:
            out.append(str(e))
        if not isinstance(self.max_stage, int) or self.max_stage < 1:
            out.append(f"max_stage must be a positive integer, got {self.max_stage!r}")
        if self.budget is not None and not isinstance(self.budget, Budget):
            out.append("budget must be a Budget(maps, blocks) or None")
        return out

    def validate(self):
        problems = self.violations()
        if problems:
            raise ScheduleError("; ".join(problems))

    @property
    def schedule(self) -> str:
        return "full" if self.budget is None else f"budget:{self.budget.maps},{self.budget.blocks}"

    def flags(self) -> dict:
        return {"paper_literal_zsegments": self.paper_literal_zsegments, "reembed_phi": self.reembed_phi}


# ---------------------------------------------------------------------------
# self-maps


def enumerate_self_maps(N: int, n: int, budget: int | None = None, cap: int = MAP_CAP) -> SelfMapTable:
    """Self-maps of ``{1..N}^n`` in canonical order.

    Without a budget every map is listed, provided there are at most
    ``cap`` of them.  With a budget ``b`` the first ``b`` maps are kept and
    all constant maps are added.
    """
    if N < 1 or n < 1:
        raise ValueError("need N >= 1 and n >= 1")
    M = N ** n
    total = M ** M
    if budget is None:
        if total > cap:
            raise BudgetExceeded(f"{total} self-maps of {{1..{N}}}^{n} exceed the cap {cap}")
        return SelfMapTable(N, n, tuple(range(total)), True)
    if budget < 1:
        raise ValueError("budget must be positive")
    chosen = set(range(min(budget, total)))
    chosen.update(constant_map_index(index_word(r, N, n), N) for r in range(M))
    indices = tuple(sorted(chosen))
    return SelfMapTable(N, n, indices, len(indices) == total)


def stage_symbols(alphabet, n: int) -> int:
    """Alphabet size of the words the stage-``n`` maps act on."""
    return n if alphabet == COUNTABLE else int(alphabet)


# ---------------------------------------------------------------------------
# planning


def plan_stage(params: ConstructionParams, prev: StageLayout | None, n: int) -> StageLayout:
    if (prev is None) != (n == 1) or (prev is not None and prev.n != n - 1):
        raise ScheduleError(f"stage {n} needs stage {n - 1} planned first")
    budget = params.budget
    maps = enumerate_self_maps(
        stage_symbols(params.alphabet, n), n,
        None if budget is None else budget.maps, params.map_cap,
    )
    l = maps.count
    if budget is None:
        if l > 64 or l ** l > params.block_cap:
            raise BudgetExceeded(f"stage {n}: {l}^{l} blocks exceed the cap {params.block_cap}")
        nb = l ** l
    else:
        nb = budget.blocks if l > 64 else min(budget.blocks, l ** l)
    if 2 * nb * l > params.segment_cap:
        raise BudgetExceeded(f"stage {n}: {2 * nb * l} segments exceed the cap {params.segment_cap}")

    s = nb * l
    t = n * s + 2 * n * n
    T = prev.marks_total if prev else 0
    prev_end = prev.end if prev else 0
    if n == 1:
        A1 = s if s > 2 else 3
        A = [A1, A1 - 1]
        B = 2 * A1
    else:
        A1 = max(n * (T + 2 * n * n) + 1, prev_end + 1, n + 1)
        An1 = max(1, T + t - (n + 1) - n * A1 + 1)
        B = n * A1 + n + An1
        A = [A1] + [A1 - n] * (n - 1) + [An1] + [B - n] * (n - 1)
    zend = n * B + n
    copy_len = prev.end - prev.zend if (params.reembed_phi and prev) else 0

    anchors = [zend + copy_len]
    for _ in range(nb - 1):
        anchors.append(l * anchors[-1] + n)
    end = l * anchors[-1] + n

    fillers = (A1 - prev_end) + sum(A[1:]) + (l - 1) * sum(g - n for g in anchors)
    cursor_start = prev.cursor_end + 1 if prev else 1
    layout = StageLayout(
        n=n, maps=maps, blocks=nb, s=s, t=t, marks_before=T, A=A, B=B,
        start=prev_end + 1, zend=zend, copy_len=copy_len, anchors=anchors, end=end,
        cursor_start=cursor_start, cursor_end=cursor_start + fillers - 1,
        paper_literal=params.paper_literal_zsegments,
    )
    check_layout(layout, prev)
    return layout


def check_layout(L: StageLayout, prev: StageLayout | None = None):
    """Assert the layout identities; raises AssertionError on any failure."""
    n, A = L.n, L.A
    T = L.marks_before
    assert len(A) == 2 * n
    assert L.s == L.blocks * L.width
    assert L.t == n * L.s + 2 * n * n
    assert A[0] > n * (T + 2 * n * n)
    assert A[0] - (prev.end if prev else 0) >= 1
    assert all(a >= 1 for a in A)
    assert L.B == n * A[0] + n + A[n]
    for j in range(2, n + 1):
        assert A[j - 1] == A[0] - n
        assert A[n + j - 1] == L.B - n
    if n >= 2:
        assert A[2 * n - 1] > T + L.t - (n + 1)
    assert L.zend == n * L.B + n
    assert L.anchors[0] == L.zend + L.copy_len
    for g, g_next in zip(L.anchors, L.anchors[1:]):
        assert g_next == L.width * g + n
    assert L.end == L.width * L.anchors[-1] + n
    assert all(g - n >= 1 for g in L.anchors)


# ---------------------------------------------------------------------------
# building


def _emit_stage(ledger: SegmentLedger, L: StageLayout, prev: StageLayout | None):
    n, A1, cursor = L.n, L.A1, L.cursor_start

    def filler(length):
        nonlocal cursor
        ledger.append(length, FILLER, {"x": cursor})
        cursor += length

    filler(A1 - (prev.end if prev else 0))
    for j in range(1, n + 1):
        zsrc = (A1 if L.paper_literal else j * A1) + 1
        ledger.append(n, ZSEG, {"z": zsrc})
        filler(L.A[j])
    for j in range(1, n + 1):
        ledger.append(n, ZSEG, {"z": 1})
        if j < n:
            filler(L.A[n + j])
    assert ledger.total_length == L.zend

    if L.copy_len:
        i = ledger.segment_index(prev.zend + 1)
        for seg in ledger.segments[i:ledger.segment_index(prev.end) + 1]:
            src = dict(seg.src)
            if seg.kind != FILLER:
                src["copy"] = True
            ledger.append(seg.length, seg.kind, src)

    for i, g in enumerate(L.anchors, start=1):
        tup = L.tuple_of(i)
        for j in range(1, L.width + 1):
            assert ledger.total_length + 1 == j * g + 1
            ledger.append(n, PHI, {"stage": n, "block": i, "slot": j, "map": tup[j - 1]})
            if j < L.width:
                filler(g - n)
    assert ledger.total_length == L.end
    assert cursor == L.cursor_end + 1
    ledger.add_stage(L)


def build_delta(params: ConstructionParams) -> SegmentLedger:
    """Build every stage up to ``params.max_stage`` into a fresh ledger."""
    params.validate()
    ledger = SegmentLedger(params.alphabet, params.flags())
    prev = None
    for n in range(1, params.max_stage + 1):
        L = plan_stage(params, prev, n)
        _emit_stage(ledger, L, prev)
        prev = L
    if params.x is not None:
        ledger.sources["x"] = as_source(params.x, None if params.alphabet == COUNTABLE else params.alphabet)
    if params.z is not None:
        ledger.sources["z"] = as_source(params.z, None if params.alphabet == COUNTABLE else params.alphabet)
    return ledger


def in_W(symbols: Iterable[int], start: int = 1) -> bool:
    """Whether the symbol at each position ``i`` (from ``start``) is at most ``i``."""
    return all(1 <= s <= i for i, s in enumerate(symbols, start=start))


def build_delta_countable(params: ConstructionParams) -> SegmentLedger:
    """The countable-alphabet variant; stage-``n`` maps act on ``{1..n}^n``."""
    if params.alphabet != COUNTABLE:
        raise AlphabetError("build_delta_countable needs alphabet='countable'")
    if params.x is not None:
        head = as_source(params.x).take(1, params.max_stage)
        if not in_W(head):
            raise AlphabetError(f"base point prefix {list(map(int, head))} is not in W (x_i <= i)")
    return build_delta(params)


# ---------------------------------------------------------------------------
# densities


@dataclass
class DensityPoint:
    m: int
    density: Fraction
    stage: int | None = None
    case: str | None = None
    bound: Fraction | None = None
    strict: bool = True

    @property
    def ok(self) -> bool:
        if self.bound is None:
            return True
        return self.density < self.bound if self.strict else self.density <= self.bound


def stage_cases(ledger: SegmentLedger, n: int) -> list[tuple[str, int, int, Fraction, bool]]:
    """The three checkpoint ranges of stage ``n`` with their printed bounds.

    Each entry is ``(case, lo, hi, bound, strict)`` for positions ``lo..hi``.
    """
    L = ledger.stage(n)
    T = L.marks_before
    if n == 1:
        out = []
        if L.A1 == L.s:
            out.append(("i", L.A1 + 1, 2 * L.A1 + 1, Fraction(2, L.s + 1), True))
            out.append(("ii", 2 * L.A1 + 2, L.end, Fraction(L.t, 2 * L.s + 1), True))
        return out
    prev = ledger.stage(n - 1)
    return [
        ("i", prev.zend + 1, L.A1, Fraction(1, n - 1), False),
        ("ii", L.A1 + 1, L.zend, Fraction(T + 2 * n * n, L.A1), True),
        ("iii", L.zend + 1, L.end, Fraction(T + L.t, L.zend), True),
    ]


def density_sup(ledger: SegmentLedger, lo: int, hi: int) -> tuple[Fraction, int]:
    """Exact ``max_{lo<=m<=hi} marks(m)/m`` and an argmax.

    The density only rises along marked runs, so the maximum sits at a
    range endpoint or at the last position of a marked segment.
    """
    if lo < 1 or hi < lo:
        raise ValueError("empty or invalid range")
    if hi > ledger.total_length:
        raise HorizonError(f"{hi} is beyond the built prefix")
    candidates = {lo, hi}
    i0, i1 = ledger.segment_index(lo), ledger.segment_index(hi)
    for seg in ledger.segments[i0:i1 + 1]:
        if seg.marked and lo <= seg.end <= hi:
            candidates.add(seg.end)
    best, arg = Fraction(-1), lo
    for m in sorted(candidates):
        d = Fraction(ledger.mark_count(m), m)
        if d > best:
            best, arg = d, m
    return best, arg


def stage_of(ledger: SegmentLedger, m: int) -> int:
    for L in ledger.stages:
        if m <= L.end:
            return L.n
    raise HorizonError(f"{m} is beyond the built prefix")


def density_profile(ledger: SegmentLedger, checkpoints: Iterable[int]) -> list[DensityPoint]:
    """Exact mark densities, each paired with the bound of its stage range."""
    out = []
    for m in checkpoints:
        if not 1 <= m <= ledger.total_length:
            raise HorizonError(f"checkpoint {m} outside [1, {ledger.total_length}]")
        point = DensityPoint(m, Fraction(ledger.mark_count(m), m))
        n = stage_of(ledger, m)
        point.stage = n
        for case, lo, hi, bound, strict in stage_cases(ledger, n):
            if lo <= m <= hi:
                point.case, point.bound, point.strict = case, bound, strict
        if not point.ok:
            raise AssertionError(f"density {point.density} at {m} breaks the case-{point.case} bound {point.bound}")
        out.append(point)
    return out


def check_stage_densities(ledger: SegmentLedger) -> list[dict]:
    """Supremum of the density over every checkpoint range of every stage."""
    rows = []
    for L in ledger.stages:
        for case, lo, hi, bound, strict in stage_cases(ledger, L.n):
            sup, arg = density_sup(ledger, lo, hi)
            rows.append({
                "stage": L.n, "case": case, "lo": lo, "hi": hi, "sup": sup, "argmax": arg,
                "bound": bound, "ok": sup < bound if strict else sup <= bound,
            })
    return rows


def endpoint_densities(ledger: SegmentLedger) -> list[Fraction]:
    return [Fraction(ledger.mark_count(L.end), L.end) for L in ledger.stages]
