"""Words, symbol sources, the shift metric, erasure and densities.

Positions are 1-indexed everywhere.  A *symbol source* is any object with
``at(pos)`` and ``take(start, length)``; sources may be finite, periodic,
computed on demand, or backed by a construction ledger, so that sequences
of astronomically large length can be read without materialising them.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import AlphabetError, HorizonError

COUNTABLE = "countable"

Alphabet = Union[int, str]


def check_alphabet(alphabet: Alphabet) -> Alphabet:
    if alphabet == COUNTABLE:
        return alphabet
    if isinstance(alphabet, (int, np.integer)) and not isinstance(alphabet, bool) and alphabet >= 1:
        return int(alphabet)
    raise AlphabetError(f"alphabet must be a positive integer or {COUNTABLE!r}, got {alphabet!r}")


def metric_base(alphabet: Alphabet) -> int:
    """Base of the shift metric: N for a finite alphabet, 2 for the countable one."""
    return 2 if alphabet == COUNTABLE else int(alphabet)


class Word:
    """A finite nonempty word over ``{1..N}`` or over the positive integers."""

    __slots__ = ("_symbols", "alphabet")

    def __init__(self, symbols, alphabet: Alphabet = COUNTABLE):
        arr = np.asarray(symbols)
        if arr.dtype == object:
            arr = arr.astype(np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a word needs at least one symbol")
        if not np.issubdtype(arr.dtype, np.integer):
            raise TypeError(f"symbols must be integers, got dtype {arr.dtype}")
        self.alphabet = check_alphabet(alphabet)
        if arr.min() < 1:
            raise AlphabetError("symbols must be positive integers")
        if self.alphabet != COUNTABLE and arr.max() > self.alphabet:
            raise AlphabetError(f"symbol {int(arr.max())} exceeds alphabet bound {self.alphabet}")
        arr = arr.view()
        arr.flags.writeable = False
        self._symbols = arr

    @property
    def symbols(self) -> np.ndarray:
        return self._symbols

    def __len__(self):
        return int(self._symbols.size)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self._symbols[item], self.alphabet)
        return int(self._symbols[item])

    def __iter__(self):
        return (int(s) for s in self._symbols)

    def __eq__(self, other):
        if isinstance(other, Word):
            return self._symbols.size == other._symbols.size and bool(
                np.array_equal(self._symbols, other._symbols)
            )
        if isinstance(other, (list, tuple)):
            return self.tolist() == list(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.tolist()))

    def __add__(self, other: "Word") -> "Word":
        return Word(np.concatenate([self._symbols, np.asarray(other.symbols)]), self.alphabet)

    def __repr__(self):
        body = "".join(map(str, self.tolist())) if len(self) <= 40 and (
            self.alphabet != COUNTABLE and self.alphabet <= 9
        ) else str(self.tolist()[:40]) + ("..." if len(self) > 40 else "")
        return f"Word({body})"

    def tolist(self) -> list:
        return [int(s) for s in self._symbols]


# ---------------------------------------------------------------------------
# symbol sources


class SymbolSource:
    """Base class; subclasses implement ``at`` and may override ``take``."""

    alphabet: Alphabet | None = None

    def at(self, pos: int) -> int:
        raise NotImplementedError

    def take(self, start: int, length: int) -> np.ndarray:
        if start < 1:
            raise HorizonError("positions start at 1")
        return np.array([self.at(start + i) for i in range(length)], dtype=np.int64)

    def word(self, start: int, length: int) -> Word:
        return Word(self.take(start, length), self.alphabet or COUNTABLE)

    def prefix(self, length: int) -> Word:
        return self.word(1, length)


class ArraySource(SymbolSource):
    """A finite symbol array; reads past the end fail unless ``periodic``."""

    def __init__(self, symbols, alphabet: Alphabet | None = None, periodic: bool = False):
        arr = np.asarray(symbols.symbols if isinstance(symbols, Word) else symbols)
        if arr.dtype == object:
            arr = arr.astype(np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("an array source needs at least one symbol")
        if arr.min() < 1:
            raise AlphabetError("symbols must be positive integers")
        if alphabet is None and isinstance(symbols, Word):
            alphabet = symbols.alphabet
        if alphabet is not None:
            alphabet = check_alphabet(alphabet)
            if alphabet != COUNTABLE and arr.max() > alphabet:
                raise AlphabetError(f"symbol {int(arr.max())} exceeds alphabet bound {alphabet}")
            if alphabet != COUNTABLE:
                # narrowest dtype: long reads of small alphabets stay cheap
                arr = arr.astype(np.min_scalar_type(alphabet), copy=False)
        self.symbols = arr
        self.alphabet = alphabet
        self.periodic = periodic

    def __len__(self):
        return int(self.symbols.size)

    def at(self, pos: int) -> int:
        if pos < 1:
            raise HorizonError("positions start at 1")
        n = self.symbols.size
        if pos > n:
            if not self.periodic:
                raise HorizonError(f"position {pos} beyond the {n} available symbols")
            pos = (pos - 1) % n + 1
        return int(self.symbols[pos - 1])

    def take(self, start: int, length: int) -> np.ndarray:
        if start < 1:
            raise HorizonError("positions start at 1")
        n = self.symbols.size
        if start + length - 1 <= n:
            return self.symbols[start - 1:start - 1 + length]
        if not self.periodic:
            raise HorizonError(f"read [{start}, {start + length - 1}] beyond the {n} available symbols")
        offset = (start - 1) % n
        rolled = np.concatenate([self.symbols[offset:], self.symbols[:offset]])
        return np.tile(rolled, length // n + 1)[:length]


def periodic(word, alphabet: Alphabet | None = None) -> ArraySource:
    """The infinite sequence ``word word word ...``."""
    return ArraySource(word, alphabet, periodic=True)


class FunctionSource(SymbolSource):
    """Symbols computed by ``fn(pos)``; positions may be arbitrarily large ints."""

    def __init__(self, fn: Callable[[int], int], alphabet: Alphabet | None = None):
        self.fn = fn
        self.alphabet = None if alphabet is None else check_alphabet(alphabet)

    def at(self, pos: int) -> int:
        if pos < 1:
            raise HorizonError("positions start at 1")
        return int(self.fn(pos))


class OverrideSource(SymbolSource):
    """``v_1 ... v_n x_{n+1} x_{n+2} ...``"""

    def __init__(self, head: Word, base: SymbolSource):
        self.head = head
        self.base = base
        self.alphabet = base.alphabet if base.alphabet is not None else head.alphabet

    def at(self, pos: int) -> int:
        if pos < 1:
            raise HorizonError("positions start at 1")
        if pos <= len(self.head):
            return self.head[pos - 1]
        return self.base.at(pos)

    def take(self, start: int, length: int) -> np.ndarray:
        if start < 1:
            raise HorizonError("positions start at 1")
        h = len(self.head)
        parts = []
        if start <= h:
            stop = min(h, start + length - 1)
            parts.append(np.asarray(self.head.symbols[start - 1:stop], dtype=np.int64))
        tail_start = max(start, h + 1)
        tail_len = start + length - tail_start
        if tail_len > 0:
            parts.append(np.asarray(self.base.take(tail_start, tail_len), dtype=np.int64))
        return np.concatenate(parts) if len(parts) > 1 else parts[0]


def as_source(obj, alphabet: Alphabet | None = None) -> SymbolSource:
    """Coerce words, sequences and callables to a :class:`SymbolSource`."""
    if isinstance(obj, SymbolSource):
        return obj
    if isinstance(obj, Word):
        return ArraySource(obj, alphabet or obj.alphabet)
    if callable(obj):
        return FunctionSource(obj, alphabet)
    return ArraySource(np.asarray(obj), alphabet)


def theta_replace(v, x) -> SymbolSource:
    """Overwrite the first ``len(v)`` symbols of ``x`` by the word ``v``."""
    if not isinstance(v, Word):
        v = Word(v)
    return OverrideSource(v, as_source(x))


# ---------------------------------------------------------------------------
# metric


def first_difference(x, y, horizon: int, chunk: int = 1 << 16) -> int | None:
    """Index of the first differing symbol within ``[1, horizon]``, else None."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    x, y = as_source(x), as_source(y)
    pos = 1
    while pos <= horizon:
        n = min(chunk, horizon - pos + 1)
        a, b = x.take(pos, n), y.take(pos, n)
        neq = np.flatnonzero(np.asarray(a) != np.asarray(b))
        if neq.size:
            return pos + int(neq[0])
        pos += n
    return None


def _alphabet_of(src) -> Alphabet | None:
    return getattr(src, "alphabet", None)


def rho_distance(x, y, horizon: int, alphabet: Alphabet | None = None) -> Fraction:
    """Shift-metric distance ``base**-(k-1)`` with ``k`` the first differing index.

    Sequences that agree on the whole horizon get 0, which is then only an
    upper bound of ``base**-horizon`` on the true distance; use
    :func:`first_difference` to tell the two cases apart.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    ax, ay = _alphabet_of(x), _alphabet_of(y)
    if ax is not None and ay is not None and ax != ay:
        raise AlphabetError(f"alphabets differ: {ax!r} vs {ay!r}")
    if alphabet is None:
        alphabet = ax if ax is not None else ay
    if alphabet is None:
        raise AlphabetError("alphabet unknown; pass it explicitly")
    k = first_difference(x, y, horizon)
    if k is None:
        return Fraction(0)
    return Fraction(1, metric_base(alphabet) ** (k - 1))


def word_distance(u: Sequence[int], v: Sequence[int], alphabet: Alphabet) -> Fraction:
    """Distance between two equal-length words viewed as sequence prefixes."""
    if len(u) != len(v):
        raise ValueError("words must have equal length")
    for i, (a, b) in enumerate(zip(u, v)):
        if a != b:
            return Fraction(1, metric_base(alphabet) ** i)
    return Fraction(0)


# ---------------------------------------------------------------------------
# position sets


class PositionSet:
    """A strictly increasing set of positive integers with exact counting."""

    def count_le(self, m: int) -> int:
        raise NotImplementedError

    def runs_excluded(self) -> Iterator[tuple[int, int]]:
        """Maximal runs ``(start, length)`` of positions *not* in the set."""
        raise NotImplementedError

    def __contains__(self, pos: int) -> bool:
        return self.count_le(pos) - self.count_le(pos - 1) == 1


class ExplicitPositions(PositionSet):
    def __init__(self, marks: Iterable[int]):
        marks = [int(m) for m in marks]
        if any(m < 1 for m in marks):
            raise ValueError("positions are positive")
        if any(b <= a for a, b in zip(marks, marks[1:])):
            raise ValueError("positions must be strictly increasing")
        self.marks = marks

    def __len__(self):
        return len(self.marks)

    def count_le(self, m: int) -> int:
        return bisect.bisect_right(self.marks, m)

    def runs_excluded(self):
        prev = 0
        for a in self.marks:
            if a > prev + 1:
                yield prev + 1, a - prev - 1
            prev = a
        # unbounded final run, emitted in large chunks
        start = prev + 1
        while True:
            yield start, 1 << 20
            start += 1 << 20


class ArithmeticPositions(PositionSet):
    """``{first, first+step, first+2*step, ...}``"""

    def __init__(self, first: int, step: int):
        if first < 1 or step < 1:
            raise ValueError("first and step must be positive")
        self.first, self.step = first, step

    def count_le(self, m: int) -> int:
        if m < self.first:
            return 0
        return (m - self.first) // self.step + 1

    def runs_excluded(self):
        if self.first > 1:
            yield 1, self.first - 1
        a = self.first
        while True:
            if self.step > 1:
                yield a + 1, self.step - 1
            a += self.step


EMPTY = ExplicitPositions([])


def upper_density(A: PositionSet, m: int) -> Fraction:
    """``#(A ∩ [1, m]) / m`` exactly."""
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(A.count_le(m), m)


def gamma_erase(A: PositionSet, x, out_len: int) -> Word:
    """First ``out_len`` symbols of ``x`` after deleting the positions in ``A``."""
    if out_len < 1:
        raise ValueError("out_len must be positive")
    x = as_source(x)
    parts, got = [], 0
    for start, length in A.runs_excluded():
        need = min(length, out_len - got)
        parts.append(np.asarray(x.take(start, need)))
        got += need
        if got == out_len:
            break
    out = np.concatenate(parts) if len(parts) > 1 else parts[0]
    return Word(out, x.alphabet or COUNTABLE)
