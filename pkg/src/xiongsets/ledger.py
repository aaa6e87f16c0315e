"""Lazy representation of constructed points as a ledger of segments.

A ledger records, for every position range of the constructed sequence,
where its symbols come from: a stretch of the base point ``x`` (filler),
a stretch of the point ``z`` (z-segment), or the image of ``x[1..n]``
under a stage-``n`` self-map (phi word).  Reading a window resolves those
descriptors on the fly, so positions can be astronomically large.
"""

from __future__ import annotations

import bisect
import json
from typing import Iterator, NamedTuple

import numpy as np

from .errors import HorizonError
from .layout import StageLayout
from .symbolic import COUNTABLE, ArraySource, PositionSet, SymbolSource, Word, as_source, check_alphabet

FILLER, ZSEG, PHI = "filler", "zseg", "phi"
KINDS = (FILLER, ZSEG, PHI)


class Segment(NamedTuple):
    start: int
    length: int
    kind: str
    src: dict

    @property
    def end(self) -> int:
        return self.start + self.length - 1

    @property
    def marked(self) -> bool:
        return self.kind != FILLER and not self.src.get("copy", False)


class SegmentLedger:
    """An append-only, gapless list of segments starting at position 1."""

    def __init__(self, alphabet, flags: dict | None = None):
        self.alphabet = check_alphabet(alphabet)
        self.flags = dict(flags or {})
        self.segments: list[Segment] = []
        self.stages: list[StageLayout] = []
        self._starts: list[int] = []
        self._cum_marks: list[int] = [0]
        self.total_length = 0
        self.sources: dict = {}

    # -- building ----------------------------------------------------------
    def append(self, length: int, kind: str, src: dict) -> Segment:
        if kind not in KINDS:
            raise ValueError(f"unknown segment kind {kind!r}")
        if length < 1:
            raise ValueError(f"segment lengths are positive, got {length}")
        seg = Segment(self.total_length + 1, int(length), kind, src)
        self.segments.append(seg)
        self._starts.append(seg.start)
        self._cum_marks.append(self._cum_marks[-1] + (seg.length if seg.marked else 0))
        self.total_length += seg.length
        return seg

    def add_stage(self, layout: StageLayout):
        self.stages.append(layout)

    def check_contiguity(self):
        pos = 1
        for seg in self.segments:
            assert seg.start == pos, f"gap or overlap at {pos}"
            pos += seg.length
        assert pos - 1 == self.total_length

    # -- lookup -------------------------------------------------------------
    def __len__(self):
        return len(self.segments)

    def segment_index(self, pos: int) -> int:
        if not 1 <= pos <= self.total_length:
            raise HorizonError(f"position {pos} outside the built prefix [1, {self.total_length}]")
        return bisect.bisect_right(self._starts, pos) - 1

    def segment_at(self, pos: int) -> Segment:
        return self.segments[self.segment_index(pos)]

    def stage(self, n: int) -> StageLayout:
        if not 1 <= n <= len(self.stages):
            raise HorizonError(f"stage {n} not built (have {len(self.stages)})")
        return self.stages[n - 1]

    @property
    def built_stages(self) -> int:
        return len(self.stages)

    def mark_count(self, m: int) -> int:
        """Number of marked positions in ``[1, m]``."""
        if m < 1:
            return 0
        if m >= self.total_length:
            return self._cum_marks[-1]
        i = bisect.bisect_right(self._starts, m) - 1
        seg = self.segments[i]
        inside = m - seg.start + 1 if seg.marked else 0
        return self._cum_marks[i] + inside

    @property
    def marks(self) -> "LedgerPositions":
        return LedgerPositions(self)

    def point(self, x=None, z=None, pad: int | None = None) -> "DeltaPoint":
        x = self.sources.get("x") if x is None else x
        z = self.sources.get("z") if z is None else z
        if x is None or z is None:
            raise ValueError("both the base point x and the point z are needed to read a ledger")
        return DeltaPoint(self, x, z, pad)

    # -- serialisation -------------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "alphabet": self.alphabet,
            "construction": self.flags,
            "segments": [
                {"start": str(s.start), "len": str(s.length), "kind": s.kind, "src": _src_out(s.src)}
                for s in self.segments
            ],
            "stage_layouts": [layout.to_dict() for layout in self.stages],
        }
        sources = self._sources_out()
        if sources:
            out["sources"] = sources
        return out

    def _sources_out(self) -> dict:
        out = {}
        for name, src in sorted(self.sources.items()):
            if isinstance(src, ArraySource):
                out[name] = {"symbols": [int(v) for v in src.symbols], "periodic": src.periodic}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "SegmentLedger":
        ledger = cls(d["alphabet"], d.get("construction"))
        for raw in d["segments"]:
            seg = ledger.append(int(raw["len"]), raw["kind"], _src_in(raw["src"]))
            if seg.start != int(raw["start"]):
                raise ValueError(f"ledger file is not contiguous at segment starting {raw['start']}")
        for raw in d.get("stage_layouts", []):
            ledger.add_stage(StageLayout.from_dict(raw))
        alpha = None if ledger.alphabet == COUNTABLE else ledger.alphabet
        for name, raw in d.get("sources", {}).items():
            ledger.sources[name] = ArraySource(np.asarray(raw["symbols"], dtype=np.int64), alpha, bool(raw["periodic"]))
        return ledger

    @classmethod
    def loads(cls, text: str) -> "SegmentLedger":
        return cls.from_dict(json.loads(text))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "SegmentLedger":
        with open(path) as fh:
            return cls.loads(fh.read())


_INT_KEYS = ("x", "z", "block")


def _src_out(src: dict) -> dict:
    return {k: (str(v) if k in _INT_KEYS else v) for k, v in src.items()}


def _src_in(src: dict) -> dict:
    return {k: (int(v) if k in _INT_KEYS else v) for k, v in src.items()}


class LedgerPositions(PositionSet):
    """All z-segment and phi-word positions of a ledger (copies excluded)."""

    def __init__(self, ledger: SegmentLedger):
        self.ledger = ledger

    def count_le(self, m: int) -> int:
        return self.ledger.mark_count(m)

    def runs_excluded(self) -> Iterator[tuple[int, int]]:
        run_start, run_len = None, 0
        for seg in self.ledger.segments:
            if seg.marked:
                if run_len:
                    yield run_start, run_len
                run_start, run_len = None, 0
            else:
                if run_start is None:
                    run_start = seg.start
                run_len += seg.length
        if run_start is None:
            run_start = self.ledger.total_length + 1
        # the tail beyond the built prefix is unmarked
        yield run_start, run_len + (1 << 20)
        start = run_start + run_len + (1 << 20)
        while True:
            yield start, 1 << 20
            start += 1 << 20


class DeltaPoint(SymbolSource):
    """The sequence described by a ledger for a concrete base point and z.

    Positions past the built prefix raise :class:`HorizonError` unless a
    ``pad`` symbol is given.
    """

    def __init__(self, ledger: SegmentLedger, x, z, pad: int | None = None):
        self.ledger = ledger
        self.alphabet = ledger.alphabet
        self.x = as_source(x, None if ledger.alphabet == COUNTABLE else ledger.alphabet)
        self.z = as_source(z, None if ledger.alphabet == COUNTABLE else ledger.alphabet)
        self.pad = pad
        self._heads: dict[int, tuple[int, ...]] = {}

    def _head(self, n: int) -> tuple[int, ...]:
        if n not in self._heads:
            self._heads[n] = tuple(int(s) for s in self.x.take(1, n))
        return self._heads[n]

    def phi_word(self, src: dict) -> np.ndarray:
        layout = self.ledger.stage(src["stage"])
        return np.asarray(layout.maps.image(src["map"], self._head(layout.n)), dtype=np.int64)

    def _resolve(self, seg: Segment, offset: int, length: int) -> np.ndarray:
        if seg.kind == FILLER:
            return self.x.take(seg.src["x"] + offset, length)
        if seg.kind == ZSEG:
            return self.z.take(seg.src["z"] + offset, length)
        return self.phi_word(seg.src)[offset:offset + length]

    def at(self, pos: int) -> int:
        return int(self.take(pos, 1)[0])

    def take(self, start: int, length: int) -> np.ndarray:
        if start < 1:
            raise HorizonError("positions start at 1")
        if length < 1:
            return np.zeros(0, dtype=np.int64)
        stop = start + length - 1
        total = self.ledger.total_length
        parts = []
        if start <= total:
            i = bisect.bisect_right(self.ledger._starts, start) - 1
            pos = start
            segs = self.ledger.segments
            while pos <= min(stop, total):
                seg = segs[i]
                n = min(seg.end, stop) - pos + 1
                parts.append(np.asarray(self._resolve(seg, pos - seg.start, n)))
                pos += n
                i += 1
        if stop > total:
            if self.pad is None:
                raise HorizonError(f"position {stop} is beyond the built prefix (length {total})")
            parts.append(np.full(stop - max(start, total + 1) + 1, self.pad, dtype=np.int64))
        if len(parts) == 1:
            return parts[0]
        if len({p.dtype for p in parts}) > 1:
            parts = [p.astype(np.int64) for p in parts]
        return np.concatenate(parts)


def window(ledger: SegmentLedger, start: int, length: int, x, z, pad: int | None = None) -> Word:
    """Symbols ``start .. start+length-1`` of the ledger's sequence for ``x`` and ``z``."""
    if start < 1:
        raise HorizonError("positions start at 1")
    if length < 1:
        raise ValueError("window length must be positive")
    return DeltaPoint(ledger, x, z, pad).word(start, length)


def materialize(ledger: SegmentLedger, x, z, limit: int = 1 << 24) -> Word:
    """The whole built prefix as one word; refuses prefixes longer than ``limit``."""
    if ledger.total_length > limit:
        raise HorizonError(f"prefix of length {ledger.total_length} exceeds the materialisation limit {limit}")
    return window(ledger, 1, ledger.total_length, x, z)
