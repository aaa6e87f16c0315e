"""Self-map tables and the solved layout of one construction stage."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence


def word_index(word: Sequence[int], N: int) -> int:
    """Lexicographic rank (0-based) of a word over ``{1..N}``."""
    idx = 0
    for s in word:
        idx = idx * N + (int(s) - 1)
    return idx


def index_word(idx: int, N: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, N)
        out.append(r + 1)
    return tuple(reversed(out))


def digits_msb(value: int, base: int, width: int) -> tuple[int, ...]:
    """``width`` base-``base`` digits of ``value``, most significant first."""
    out = [0] * width
    for i in range(width - 1, -1, -1):
        value, out[i] = divmod(value, base)
    if value:
        raise ValueError("value does not fit in the requested width")
    return tuple(out)


@lru_cache(maxsize=4096)
def _value_table(index: int, M: int) -> tuple[int, ...]:
    return digits_msb(index, M, M)


@dataclass(frozen=True)
class SelfMapTable:
    """An ordered list of self-maps of ``{1..N}^n``.

    A map is identified by its canonical index: the base-``M`` number
    (``M = N**n``) whose digits, most significant first, are the ranks of
    the images of the domain words taken in lexicographic order.  Canonical
    order is increasing index.
    """

    N: int
    n: int
    indices: tuple[int, ...]
    full: bool = False

    @property
    def domain_size(self) -> int:
        return self.N ** self.n

    @property
    def count(self) -> int:
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def table(self, pos: int) -> tuple[int, ...]:
        """Value table of the map at 1-based position ``pos``."""
        return _value_table(self.indices[pos - 1], self.domain_size)

    def image(self, pos: int, word: Sequence[int]) -> tuple[int, ...]:
        if len(word) != self.n:
            raise ValueError(f"stage-{self.n} maps act on words of length {self.n}")
        if any(not 1 <= s <= self.N for s in word):
            raise ValueError(f"word {tuple(word)} is not over {{1..{self.N}}}")
        return index_word(self.table(pos)[word_index(word, self.N)], self.N, self.n)

    def positions_matching(self, requirements) -> list[int]:
        """Positions of maps sending each ``word`` to something starting with ``prefix``.

        ``requirements`` is an iterable of ``(word, prefix)`` pairs.
        """
        reqs = [(word_index(w, self.N), tuple(p)) for w, p in requirements]
        out = []
        for pos in range(1, self.count + 1):
            table = self.table(pos)
            if all(index_word(table[wi], self.N, self.n)[:len(p)] == p for wi, p in reqs):
                out.append(pos)
        return out

    def to_dict(self) -> dict:
        return {"N": self.N, "n": self.n, "full": self.full, "indices": [str(i) for i in self.indices]}

    @classmethod
    def from_dict(cls, d: dict) -> "SelfMapTable":
        return cls(int(d["N"]), int(d["n"]), tuple(int(i) for i in d["indices"]), bool(d["full"]))


def constant_map_index(word: Sequence[int], N: int) -> int:
    M = N ** len(word)
    r = word_index(word, N)
    if M == 1:
        return 0
    return r * (M ** M - 1) // (M - 1)


def identity_map_index(N: int, n: int) -> int:
    M = N ** n
    idx = 0
    for i in range(M):
        idx = idx * M + i
    return idx


@dataclass
class StageLayout:
    """Every solved quantity of one stage.

    ``A`` holds the lengths ``A_1 .. A_2n``; ``anchors[i-1]`` is
    ``r_{i,1} - 1`` for block ``i`` so that the word in slot ``j`` of that
    block starts at ``j * anchors[i-1] + 1``.
    """

    n: int
    maps: SelfMapTable
    blocks: int
    s: int
    t: int
    marks_before: int
    A: list[int]
    B: int
    start: int
    zend: int
    copy_len: int
    anchors: list[int]
    end: int
    cursor_start: int
    cursor_end: int
    paper_literal: bool = False
    extras: dict = field(default_factory=dict)

    @property
    def width(self) -> int:
        """Words per block (``l_n``)."""
        return self.maps.count

    @property
    def A1(self) -> int:
        return self.A[0]

    @property
    def c(self) -> int:
        """Length of the chaotic part of the stage."""
        return self.end - self.zend

    @property
    def marks_total(self) -> int:
        return self.marks_before + self.t

    @property
    def filler_total(self) -> int:
        return self.cursor_end - self.cursor_start + 1

    def first_group(self) -> list[int]:
        return [j * self.A1 + 1 for j in range(1, self.n + 1)]

    def second_group(self) -> list[int]:
        return [j * self.B + 1 for j in range(1, self.n + 1)]

    def r(self, i: int, j: int) -> int:
        """Position of the word in slot ``j`` of block ``i`` (both 1-based)."""
        return j * self.anchors[i - 1] + 1

    def tuple_of(self, i: int) -> tuple[int, ...]:
        """Map positions used by block ``i`` (lexicographic tuple order)."""
        return tuple(d + 1 for d in digits_msb(i - 1, self.width, self.width))

    def block_spans(self) -> Iterator[tuple[int, int]]:
        for g in self.anchors:
            yield g + 1, self.width * g + self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "maps": self.maps.to_dict(),
            "blocks": str(self.blocks),
            "s": str(self.s),
            "t": str(self.t),
            "marks_before": str(self.marks_before),
            "A": [str(a) for a in self.A],
            "B": str(self.B),
            "start": str(self.start),
            "zend": str(self.zend),
            "copy_len": str(self.copy_len),
            "anchors": [str(g) for g in self.anchors],
            "end": str(self.end),
            "cursor_start": str(self.cursor_start),
            "cursor_end": str(self.cursor_end),
            "paper_literal": self.paper_literal,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StageLayout":
        return cls(
            n=int(d["n"]),
            maps=SelfMapTable.from_dict(d["maps"]),
            blocks=int(d["blocks"]),
            s=int(d["s"]),
            t=int(d["t"]),
            marks_before=int(d["marks_before"]),
            A=[int(a) for a in d["A"]],
            B=int(d["B"]),
            start=int(d["start"]),
            zend=int(d["zend"]),
            copy_len=int(d["copy_len"]),
            anchors=[int(g) for g in d["anchors"]],
            end=int(d["end"]),
            cursor_start=int(d["cursor_start"]),
            cursor_end=int(d["cursor_end"]),
            paper_literal=bool(d["paper_literal"]),
        )
