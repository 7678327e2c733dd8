"""Periodicity of finite words.

Functions accept any sliceable sequence (``str`` or tuples of letter ids)
and return values of the same type.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Sequence, TypeVar

from .errors import EmptyWordError, PreconditionError
from .words import Occurrence

S = TypeVar("S", str, tuple)


class PeriodMode(Enum):
    WEAK_LEFT = "WeakLeft"
    WEAK_RIGHT = "WeakRight"
    COMPLETE = "Complete"


def cyclic_shift(word: S, n: int) -> S:
    if len(word) == 0:
        raise EmptyWordError("cannot shift an empty word")
    r = n % len(word)
    return word[r:] + word[:r]


def is_periodic(word: Sequence, period: Sequence, mode: PeriodMode) -> bool:
    p = len(period)
    if p == 0:
        raise ValueError("period must be nonempty")
    n = len(word)
    if mode is PeriodMode.WEAK_RIGHT:
        off = (-n) % p
        return all(word[i] == period[(i + off) % p] for i in range(n))
    if mode is PeriodMode.COMPLETE and n % p:
        return False
    return all(word[i] == period[i % p] for i in range(n))


def smallest_period(word: Sequence) -> int:
    """Smallest p such that ``word[i] == word[i + p]`` throughout (failure function)."""
    n = len(word)
    if n == 0:
        return 0
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    return n - fail[-1]


def minimal_period(word: S, mode: PeriodMode) -> S | None:
    n = len(word)
    if n < 2:
        return None
    p = smallest_period(word)
    # Any other period q with 2q <= n is a multiple of p (two periods that fit
    # together force their gcd), so p is the only candidate.
    if 2 * p > n:
        return None
    if mode is PeriodMode.WEAK_RIGHT:
        return word[n - p:]
    if mode is PeriodMode.COMPLETE and n % p:
        return None
    return word[:p]


def _period_of(word: S, p: int, mode: PeriodMode) -> S:
    return word[len(word) - p:] if mode is PeriodMode.WEAK_RIGHT else word[:p]


def divisor_property_check(word: S, p: int, mode: PeriodMode) -> bool:
    lam = minimal_period(word, mode)
    if lam is None:
        raise PreconditionError("word has no minimal period in this mode")
    if p < 1 or 2 * p > len(word):
        raise PreconditionError("period length must satisfy 1 <= 2p <= |word|")
    delta = _period_of(word, p, mode)
    if not is_periodic(word, delta, mode):
        raise PreconditionError(f"word is not {p}-periodic in mode {mode.value}")
    q, r = divmod(p, len(lam))
    return r == 0 and delta == lam * q


@dataclass(frozen=True)
class PeriodicSpan:
    occurrence: Occurrence
    period_len: int
    left_period: Sequence
    right_period: Sequence

    def __post_init__(self) -> None:
        if self.period_len < 1 or len(self.left_period) != self.period_len:
            raise ValueError("left period length must equal period_len >= 1")
        if self.right_period != cyclic_shift(self.left_period, self.occurrence.length):
            raise ValueError("right period must be the shift of the left period")

    @classmethod
    def of(cls, text: Sequence, occurrence: Occurrence, p: int) -> "PeriodicSpan":
        """Span whose left period is read off the first p letters of the occurrence."""
        if occurrence.length < p:
            raise PreconditionError("occurrence shorter than its period")
        left = text[occurrence.start:occurrence.start + p]
        return cls(occurrence, p, left, cyclic_shift(left, occurrence.length))

    def holds_in(self, text: Sequence) -> bool:
        return is_periodic(self.occurrence.slice(text), self.left_period, PeriodMode.WEAK_LEFT)


def merge_overlapping(text: S, span1: PeriodicSpan, span2: PeriodicSpan) -> PeriodicSpan | None:
    """Union of two overlapping periodic spans, or None if they overlap too little."""
    for span in (span1, span2):
        if span.occurrence.end >= len(text) or not span.holds_in(text):
            raise PreconditionError("span is not periodic within the text")
    lo = max(span1.occurrence.start, span2.occurrence.start)
    hi = min(span1.occurrence.end, span2.occurrence.end)
    if hi - lo + 1 < 2 * max(span1.period_len, span2.period_len):
        return None
    union = Occurrence(
        min(span1.occurrence.start, span2.occurrence.start),
        max(span1.occurrence.end, span2.occurrence.end),
    )
    merged = PeriodicSpan.of(text, union, gcd(span1.period_len, span2.period_len))
    if not merged.holds_in(text):  # cannot happen for genuinely periodic inputs
        raise AssertionError("the gcd period does not hold on the union")
    return merged
