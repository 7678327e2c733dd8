import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from morphic.errors import PreconditionError
from morphic.periodicity import (
    PeriodicSpan,
    PeriodMode,
    cyclic_shift,
    divisor_property_check,
    is_periodic,
    merge_overlapping,
    minimal_period,
    smallest_period,
)
from morphic.words import Occurrence

WL, WR, CO = PeriodMode.WEAK_LEFT, PeriodMode.WEAK_RIGHT, PeriodMode.COMPLETE

ALL_BINARY = [w for n in range(1, 13) for w in itertools.product("ab", repeat=n)]


# -- brute-force oracles, written straight from the definitions ---------------------


def brute_is_periodic(word, lam, mode):
    n, p = len(word), len(lam)
    if p == 0 or n < 2 * p:
        return False
    if mode is CO and n % p:
        return False
    if mode is WR:
        tiled = (tuple(lam) * (n // p + 2))
        tiled = tiled[len(tiled) - n:]
    else:
        tiled = (tuple(lam) * (n // p + 2))[:n]
    return tuple(word) == tiled


def brute_minimal(word, mode):
    n = len(word)
    for p in range(1, n // 2 + 1):
        lam = tuple(word[:p]) if mode is not WR else tuple(word[n - p:])
        if brute_is_periodic(word, lam, mode):
            return lam
    return None


def brute_weak1(word):
    n = len(word)
    return any(all(word[i] == word[i + p] for i in range(n - p)) for p in range(1, n // 2 + 1) if 2 * p <= n)


# -- examples ------------------------------------------------------------------------


def test_cyclic_shift():
    assert cyclic_shift("abc", 1) == "bca"
    assert cyclic_shift("abc", 0) == "abc"
    assert cyclic_shift("abc", -1) == "cab"


def test_is_periodic_examples():
    assert is_periodic("ababa", "ab", WL)
    assert not is_periodic("ababa", "ab", CO)
    assert is_periodic("11111111", "1", CO)
    assert is_periodic("babab", "ab", WR)


def test_minimal_period_examples():
    assert minimal_period("ababab", WL) == "ab"
    assert minimal_period("abaab", WL) is None
    assert minimal_period("1111", CO) == "1"


def test_divisor_property_examples():
    assert divisor_property_check("abababab", 4, WL)
    assert divisor_property_check("aaaa", 2, CO)
    assert divisor_property_check("abcabc", 3, WL)


def test_merge_examples():
    text = "ab" * 6
    merged = merge_overlapping(text, PeriodicSpan.of(text, Occurrence(0, 7), 2), PeriodicSpan.of(text, Occurrence(4, 11), 2))
    assert merged.occurrence == Occurrence(0, 11) and merged.period_len == 2
    text = "a" * 8
    merged = merge_overlapping(text, PeriodicSpan.of(text, Occurrence(0, 6), 2), PeriodicSpan.of(text, Occurrence(1, 7), 3))
    assert merged.occurrence == Occurrence(0, 7) and merged.period_len == 1
    # [0..5] and [2..7] share only 4 positions, below 2 * 3
    assert merge_overlapping(text, PeriodicSpan.of(text, Occurrence(0, 5), 2), PeriodicSpan.of(text, Occurrence(2, 7), 3)) is None
    assert merge_overlapping(text, PeriodicSpan.of(text, Occurrence(0, 3), 2), PeriodicSpan.of(text, Occurrence(3, 7), 2)) is None


def test_merge_rejects_spans_that_do_not_hold():
    text = "abababba"
    bad = PeriodicSpan(Occurrence(0, 7), 2, tuple("ab"), tuple("ab"))
    good = PeriodicSpan.of(text, Occurrence(0, 5), 2)
    with pytest.raises(PreconditionError):
        merge_overlapping(text, bad, good)


# -- exhaustive oracle over binary words ---------------------------------------------


def test_exhaustive_binary_oracle():
    cases = 0
    for w in ALL_BINARY:
        n = len(w)
        for p in range(1, n // 2 + 1):
            for lam in itertools.product("ab", repeat=p):
                for mode in (WL, WR, CO):
                    assert is_periodic(w, lam, mode) == brute_is_periodic(w, lam, mode), (w, lam, mode)
                    cases += 1
        for mode in (WL, WR, CO):
            got = minimal_period(w, mode)
            assert (tuple(got) if got is not None else None) == brute_minimal(w, mode), (w, mode)
            cases += 1
        p0 = smallest_period(w)
        assert p0 == min(p for p in range(1, n + 1) if all(w[i] == w[i + p] for i in range(n - p)))
    assert cases >= 20_000


def test_exhaustive_merge_oracle():
    cases = 0
    for w in (x for x in ALL_BINARY if len(x) >= 6):
        n = len(w)
        # every pair of weakly periodic spans with a nontrivial overlap
        spans = []
        for s in range(n):
            for e in range(s + 1, n):
                seg = w[s:e + 1]
                p = smallest_period(seg)
                if 2 * p <= len(seg):
                    spans.append(PeriodicSpan.of(w, Occurrence(s, e), p))
        for a, b in itertools.combinations(spans, 2):
            if not (a.occurrence.start < b.occurrence.start <= a.occurrence.end < b.occurrence.end):
                continue
            overlap = a.occurrence.end - b.occurrence.start + 1
            got = merge_overlapping(w, a, b)
            cases += 1
            if overlap < 2 * max(a.period_len, b.period_len):
                assert got is None
                continue
            union = w[a.occurrence.start:b.occurrence.end + 1]
            q = gcd(a.period_len, b.period_len)
            assert got is not None and got.occurrence == Occurrence(a.occurrence.start, b.occurrence.end)
            assert got.period_len == q
            assert all(union[i] == union[i + q] for i in range(len(union) - q))
            assert brute_weak1(union) or len(union) < 2
        if cases > 60_000:
            break
    assert cases >= 20_000


# -- properties ----------------------------------------------------------------------


words = st.text(alphabet="abc", min_size=1, max_size=40)


@given(words, st.integers(-50, 50))
def test_shift_composes(w, n):
    assert cyclic_shift(cyclic_shift(w, n), -n) == w
    assert cyclic_shift(w, n + len(w)) == cyclic_shift(w, n)


@given(words)
def test_minimal_period_is_minimal(w):
    lam = minimal_period(w, WL)
    if lam is None:
        assert brute_minimal(w, WL) is None
    else:
        assert is_periodic(w, lam, WL)
        assert all(not is_periodic(w, w[:p], WL) for p in range(1, len(lam)))


@given(st.text(alphabet="ab", min_size=1, max_size=6), st.integers(2, 6), st.integers(0, 5))
def test_divisor_property(base, reps, extra):
    w = (base * (reps + 2))[: len(base) * reps + extra]
    p = len(base)
    if is_periodic(w, w[:p], WL):
        assert divisor_property_check(w, p, WL)
