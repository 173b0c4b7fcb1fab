"""Bi-infinite 0-1 sequences described by finite data.

Every descriptor evaluates at any integer index in bounded time and the
evaluation is pure: descriptors are frozen, structurally comparable, and
safe to share across threads.  The recursive descriptors (Patched,
FamilyMember) carry an explicit delegation budget so termination is a
checked property rather than an assumption; blowing the budget raises
RecursionBudgetExceeded, which signals a malformed recursive family.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass, field
from fractions import Fraction


class RecursionBudgetExceeded(Exception):
    """Patch delegation exceeded the descriptor's declared depth bound."""


class DisjointnessViolation(Exception):
    """Patch intervals overlap or leave the positive index range."""


class BitSequence:
    """Base class for sequence descriptors.  Subclasses implement _bit."""

    def bit(self, k: int) -> int:
        return self._bit(k, self.delegation_budget())

    def _bit(self, k: int, budget: int) -> int:
        raise NotImplementedError

    def delegation_budget(self) -> int:
        return 0


def evaluate(seq: BitSequence, k: int) -> int:
    """The value of the sequence at integer index k (any sign)."""
    return seq.bit(k)


def materialize(seq: BitSequence, lo: int, hi: int) -> bytes:
    """Window [lo, hi] as a bytes object of 0/1 values."""
    if isinstance(seq, Rich):
        # fast path through the shared shortlex stream
        out = bytearray()
        if lo < 1:
            out.extend(b"\x00" * (min(hi, 0) - lo + 1))
        if hi >= 1:
            start = max(lo, 1)
            _ensure_rich(hi)
            out.extend(_RICH_STREAM[start - 1:hi])
        return bytes(out)
    return bytes(seq.bit(k) for k in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# plain descriptors


@dataclass(frozen=True)
class Constant(BitSequence):
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("constant value must be 0 or 1")

    def _bit(self, k, budget):
        return self.value


@dataclass(frozen=True)
class Periodic(BitSequence):
    pattern: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("pattern must be non-empty")
        if any(b not in (0, 1) for b in self.pattern):
            raise ValueError("pattern entries must be bits")
        object.__setattr__(self, "pattern", tuple(self.pattern))

    def _bit(self, k, budget):
        return self.pattern[(k - self.offset) % len(self.pattern)]


@dataclass(frozen=True)
class Sturmian(BitSequence):
    """Floor-difference word of an exact rational slope t in [0, 1].

    bit(k) = floor((k+1) t) - floor(k t).  The same formula works at
    negative indices, and the symmetric window averages converge to t with
    error at most 2/(2n+1), so the density is an exact limit.
    """

    slope: Fraction

    def __post_init__(self):
        t = Fraction(self.slope)
        if not 0 <= t <= 1:
            raise ValueError("slope must lie in [0, 1]")
        object.__setattr__(self, "slope", t)

    def _bit(self, k, budget):
        p, q = self.slope.numerator, self.slope.denominator
        return ((k + 1) * p) // q - (k * p) // q


@dataclass(frozen=True)
class DivisibleBy(BitSequence):
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("divisor must be at least 1")

    def _bit(self, k, budget):
        return 1 if k % self.d == 0 else 0


@dataclass(frozen=True)
class SingleOnes(BitSequence):
    positions: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(self.positions))

    def _bit(self, k, budget):
        return 1 if k in self.positions else 0


# ---------------------------------------------------------------------------
# the rich sequence: negative part zero, positive part the shortlex stream

_RICH_STREAM = bytearray()
_RICH_NEXT_LEN = 1
_RICH_LOCK = threading.Lock()


def _ensure_rich(n: int) -> None:
    """Grow the shared shortlex concatenation to cover positions 1..n."""
    global _RICH_NEXT_LEN
    if len(_RICH_STREAM) >= n:
        return
    with _RICH_LOCK:
        while len(_RICH_STREAM) < n:
            l = _RICH_NEXT_LEN
            block = bytearray()
            for j in range(1 << l):
                word = bin(j)[2:].zfill(l)
                block.extend(0 if ch == "0" else 1 for ch in word)
            _RICH_STREAM.extend(block)
            _RICH_NEXT_LEN = l + 1


def rich_prefix(n: int) -> bytes:
    """Positions 1..n of the rich sequence's positive part."""
    _ensure_rich(n)
    return bytes(_RICH_STREAM[:n])


def shortlex_word(j: int) -> tuple[int, ...]:
    """The j-th binary word (0-based) in shortlex order: 0, 1, 00, 01, ..."""
    if j < 0:
        raise ValueError(j)
    # words shorter than l occupy the first 2**(l+1) - 2 slots
    m = j + 2
    l = m.bit_length() - 1
    idx = m - (1 << l)
    return tuple((idx >> (l - 1 - t)) & 1 for t in range(l))


@dataclass(frozen=True)
class Rich(BitSequence):
    """Every finite binary word occurs (infinitely often) in the positive part."""

    def _bit(self, k, budget):
        if k < 1:
            return 0
        _ensure_rich(k)
        return _RICH_STREAM[k - 1]


def rich_sequence() -> Rich:
    return Rich()


# ---------------------------------------------------------------------------
# explicit finite patchings


@dataclass(frozen=True)
class PatchInterval:
    center: int
    radius: int
    source: BitSequence
    source_offset: int = 0

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    @property
    def left(self) -> int:
        return self.center - self.radius

    @property
    def right(self) -> int:
        return self.center + self.radius


@dataclass(frozen=True)
class PatchFamily:
    intervals: tuple[PatchInterval, ...]
    _lefts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for a, b in zip(ivs, ivs[1:]):
            if b.left <= a.right:
                raise DisjointnessViolation(
                    f"intervals [{a.left},{a.right}] and [{b.left},{b.right}] overlap or are unsorted")
        object.__setattr__(self, "_lefts", tuple(iv.left for iv in ivs))

    def locate(self, k: int) -> PatchInterval | None:
        j = bisect.bisect_right(self._lefts, k) - 1
        if j >= 0 and self.intervals[j].right >= k:
            return self.intervals[j]
        return None

    @property
    def max_right(self) -> int | None:
        return self.intervals[-1].right if self.intervals else None


@dataclass(frozen=True)
class Patched(BitSequence):
    base: BitSequence
    patches: PatchFamily

    def delegation_budget(self) -> int:
        deep = max([self.base.delegation_budget()]
                   + [iv.source.delegation_budget() for iv in self.patches.intervals],
                   default=0)
        return 1 + deep

    def _bit(self, k, budget):
        iv = self.patches.locate(k)
        if iv is None:
            return self.base._bit(k, budget)
        if budget <= 0:
            raise RecursionBudgetExceeded("patch delegation exhausted its budget")
        return iv.source._bit(k - iv.center + iv.source_offset, budget - 1)


# ---------------------------------------------------------------------------
# members of recursive families (the concrete families live in constructions)


@dataclass(frozen=True)
class FamilyMember(BitSequence):
    """Member i of a recursive family; evaluation delegates to the family rule."""

    family: object
    index: int

    def delegation_budget(self) -> int:
        return self.family.delegation_budget()

    def _bit(self, k, budget):
        return self.family.member_bit(self.index, k, budget)
