"""Distinct-factor counting, exponent fits and prediction cross-checks."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from .classify import ComplexityClass, ComplexityVerdict
from .errors import InsufficientData, RangeError

GUARD_RATIO = 50


@dataclass(frozen=True)
class ComplexityTable:
    prefix_len: int
    entries: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)


@dataclass(frozen=True)
class ExponentFit:
    range: tuple[int, int]
    slope: float
    intercept: float
    residual: float


class SuffixAutomaton:
    """Generalized suffix automaton over one or more words.

    Every state stands for the substrings of lengths (link.len, len], so the
    number of distinct length-n factors is the number of states whose
    interval contains n.
    """

    def __init__(self) -> None:
        self.length = [0]
        self.link = [-1]
        self.next: list[dict] = [{}]

    def _new(self, length: int, link: int, trans: dict) -> int:
        self.length.append(length)
        self.link.append(link)
        self.next.append(trans)
        return len(self.length) - 1

    def add_word(self, word: Sequence) -> None:
        length, link, nxt = self.length, self.link, self.next
        last = 0
        for ch in word:
            # standard extension, with the generalized-automaton shortcut when the
            # transition already exists (the word was seen before from here)
            if ch in nxt[last]:
                q = nxt[last][ch]
                if length[q] == length[last] + 1:
                    last = q
                    continue
                clone = self._new(length[last] + 1, link[q], dict(nxt[q]))
                p = last
                while p != -1 and nxt[p].get(ch) == q:
                    nxt[p][ch] = clone
                    p = link[p]
                link[q] = clone
                last = clone
                continue
            cur = self._new(length[last] + 1, 0, {})
            p = last
            while p != -1 and ch not in nxt[p]:
                nxt[p][ch] = cur
                p = link[p]
            if p != -1:
                q = nxt[p][ch]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = self._new(length[p] + 1, link[q], dict(nxt[q]))
                    while p != -1 and nxt[p].get(ch) == q:
                        nxt[p][ch] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur

    def counts_up_to(self, max_n: int) -> list[int]:
        """counts[n] = number of distinct factors of length n, for n <= max_n."""
        diff = [0] * (max_n + 2)
        for s in range(1, len(self.length)):
            lo = self.length[self.link[s]] + 1
            hi = min(self.length[s], max_n)
            if lo <= hi:
                diff[lo] += 1
                diff[hi + 1] -= 1
        out = [0] * (max_n + 1)
        run = 0
        for n in range(max_n + 1):
            run += diff[n]
            out[n] = run
        return out


def factor_counts(
    word: Sequence, ns: Sequence[int], allow_short: bool = False, extra: Sequence[Sequence] = ()
) -> ComplexityTable:
    """Exact p_n of the given word (plus optional extra words) for each n in ``ns``.

    ``extra`` words are counted together with ``word`` in one automaton, so
    factors shared between them are counted once.
    """
    ns = sorted(set(ns))
    if not ns or ns[0] < 1:
        raise ValueError("lengths must be positive")
    if not allow_short and ns[-1] * GUARD_RATIO > len(word):
        raise RangeError(
            f"max n = {ns[-1]} needs a word of length >= {ns[-1] * GUARD_RATIO}, got {len(word)}"
        )
    sam = SuffixAutomaton()
    sam.add_word(word)
    for w in extra:
        sam.add_word(w)
    counts = sam.counts_up_to(ns[-1])
    return ComplexityTable(len(word), tuple((n, counts[n]) for n in ns))


def fit_exponent(table: ComplexityTable, range_: tuple[int, int] | None = None) -> ExponentFit:
    lo, hi = range_ or (table.entries[0][0], table.entries[-1][0])
    pts = [(n, p) for n, p in table.entries if lo <= n <= hi]
    if len(pts) < 3:
        raise InsufficientData("need at least 3 entries in range")
    if any(p < 1 for _, p in pts):
        raise InsufficientData("counts must be positive")
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(p) for _, p in pts]
    slope, intercept = statistics.linear_regression(xs, ys)
    residual = math.sqrt(sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys)) / len(xs))
    return ExponentFit((lo, hi), slope, intercept, residual)


@dataclass(frozen=True)
class Tolerances:
    slope: float = 0.2
    log: float = 0.2


@dataclass
class CheckReport:
    verdict: str
    fit: ExponentFit | None
    criteria: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.criteria)


def cross_check(verdict: ComplexityVerdict, table: ComplexityTable, tolerances: Tolerances = Tolerances()) -> CheckReport:
    counts = [p for _, p in table.entries]
    label = verdict.cls.value + (f" {verdict.exponent_text()}" if verdict.exponent else "")
    if verdict.cls is ComplexityClass.CONSTANT:
        flat = len(set(counts)) == 1
        report = CheckReport(label, None)
        report.criteria.append(("p_n constant over the tested range", flat, f"counts {counts}"))
        return report
    fit = fit_exponent(table)
    report = CheckReport(label, fit)
    if verdict.cls is ComplexityClass.POLY_EXPONENT:
        e = float(verdict.exponent)
        ok = abs(fit.slope - e) <= tolerances.slope
        report.criteria.append((f"|slope - {e:g}| <= {tolerances.slope:g}", ok, f"slope {fit.slope:.3f}"))
    else:
        ok = fit.slope <= 1 + tolerances.log
        report.criteria.append((f"slope <= {1 + tolerances.log:g}", ok, f"slope {fit.slope:.3f}"))
        ratios = [p / n for n, p in table.entries]
        mono = all(b >= a for a, b in zip(ratios, ratios[1:]))
        report.criteria.append(
            ("p_n/n nondecreasing", mono, "ratios " + ", ".join(f"{r:.2f}" for r in ratios))
        )
    return report
