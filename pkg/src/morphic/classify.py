"""Bounding sequences, continuous periodicity and the complexity decision tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .blocks import Anatomy, BlockAnalyzer, Case, Lineage, origin_windows, reachable_letters
from .errors import CaseIError, MorphicError, PrefixTooShort, WindowTooSmall
from .normalize import FinalPeriodSet, compute_final_periods
from .orders import INF, LetterProfile, Side, boundary_letter, growth_count, letter_profiles
from .periodicity import PeriodMode, is_periodic
from .words import MorphicSystem, Occurrence, apply_coding, apply_morphism, generate_prefix


class ComplexityClass(Enum):
    CONSTANT = "Constant"
    POLY_EXPONENT = "PolyExponent"
    NLOGN = "NLogN"


class Rule(Enum):
    PROP1_2 = "Prop1_2"
    PROP1_3 = "Prop1_3"
    PROP1_4 = "Prop1_4"
    PROP1_5 = "Prop1_5"
    PROP1_6 = "Prop1_6"


@dataclass(frozen=True)
class Params:
    window: int = 5
    horizon: int = 512
    prefix_len: int = 200_000

    def __post_init__(self) -> None:
        if self.window < 3:
            raise WindowTooSmall("window must hold at least 3 stable members")
        if self.horizon < 1 or self.prefix_len < 1:
            raise ValueError("horizon and prefix length must be positive")


@dataclass(frozen=True)
class PeriodWitness:
    index: int
    left_period: tuple
    right_period: tuple
    residues: tuple[int, int]
    horizons: tuple[int, int]


@dataclass(frozen=True)
class LevelSummary:
    k: int
    evolutions: int
    continuously_periodic: int
    failing: tuple[str, ...]


@dataclass(frozen=True)
class ComplexityVerdict:
    cls: ComplexityClass
    fired_rule: tuple[Rule, ...]
    k_star: int | None
    exponent: Fraction | None
    heuristic_horizons: dict
    counterexample: tuple[str, int] | None = None
    levels: tuple[LevelSummary, ...] = field(default=())
    notes: tuple[str, ...] = ()

    @property
    def rule_label(self) -> str:
        return "+".join(r.value for r in self.fired_rule)

    def exponent_text(self) -> str | None:
        if self.exponent is None:
            return None
        return f"{self.exponent.numerator}/{self.exponent.denominator}"


class Evolution:
    """A k-block evolution followed from its origin through a lineage."""

    def __init__(self, system: MorphicSystem, profiles: Sequence[LetterProfile], k: int, window: Sequence[int]) -> None:
        self.system = system
        self.k = k
        self.lineage = Lineage(system, profiles, k, window)
        self.analyzer = BlockAnalyzer()

    @property
    def label(self) -> str:
        return self.system.render(self.lineage.origin_word)

    def member(self, l: int):
        return self.lineage.member(l)

    def anatomy(self, l: int) -> Anatomy:
        return self.analyzer.anatomy(self.member(l))

    def cases(self) -> tuple[Case, Case]:
        return self.analyzer.cases(self.member(2))

    @property
    def case_left(self) -> Case:
        return self.cases()[0]

    @property
    def case_right(self) -> Case:
        return self.cases()[1]

    @property
    def left_border(self) -> int:
        return self.member(1).left_border

    @property
    def right_border(self) -> int:
        return self.member(1).right_border

    def coded(self, l: int, occ: Occurrence) -> tuple:
        text = self.member(l).frame.text
        return apply_coding(self.system, text[occ.start:occ.end + 1])


def bounding_prefix(evolution: Evolution, side: Side, length: int) -> tuple:
    """The first (right side) or last (left side) ``length`` letters of the bounding sequence."""
    left, right = evolution.cases()
    if (side is Side.RIGHT and right is Case.I) or (side is Side.LEFT and left is Case.I):
        raise CaseIError(f"Case I holds at the {side.value}")
    system = evolution.system
    k = evolution.k
    orders = [p.order for p in evolution.lineage.profiles]
    if side is Side.RIGHT:
        rb = evolution.right_border
        img = system.phi[rb]
        seed = img[boundary_letter(img, k, Side.LEFT, orders) + 1:]
        delta = seed
        while seed and 1 + len(delta) < length:
            delta = seed + apply_morphism(system, delta)
        return ((rb,) + delta)[:length]
    lb = evolution.left_border
    img = system.phi[lb]
    seed = img[:boundary_letter(img, k, Side.RIGHT, orders)]
    gamma = seed
    while seed and len(gamma) + 1 < length:
        gamma = apply_morphism(system, gamma) + seed
    word = gamma + (lb,)
    return word[max(len(word) - length, 0):]


def weak_evolutional_period(words: Sequence[tuple], lam: tuple, side: Side) -> bool:
    """Both window conditions: weak periodicity and a constant length residue."""
    if len(words) < 3:
        raise WindowTooSmall("need at least 3 members")
    mode = PeriodMode.WEAK_LEFT if side is Side.LEFT else PeriodMode.WEAK_RIGHT
    # an empty part is compatible with every period
    if not all(not w or is_periodic(w, lam, mode) for w in words):
        return False
    return len({len(w) % len(lam) for w in words}) == 1


def continuous_period_check(
    evolution: Evolution, m: int, params: Params, finals: FinalPeriodSet
) -> PeriodWitness | None:
    k = evolution.k
    window = range(3 * k, 3 * k + params.window)
    anatomies = [evolution.anatomy(l) for l in window]
    ncker = anatomies[0].ncker
    if any(a.ncker != ncker for a in anatomies):
        raise AssertionError("central kernel count changed along the evolution")
    lefts = [evolution.coded(l, a.left_pseudoregular(m)) for l, a in zip(window, anatomies)]
    rights = [evolution.coded(l, a.right_pseudoregular(m)) for l, a in zip(window, anatomies)]
    case_left, case_right = evolution.cases()
    periods = finals.sorted()

    lam = None
    lbs = None
    for cand in periods:
        if not weak_evolutional_period(lefts, cand, Side.LEFT):
            continue
        if case_left is Case.II and m > 1:
            if lbs is None:
                lbs = apply_coding(evolution.system, bounding_prefix(evolution, Side.LEFT, params.horizon))
            if len(lbs) < params.horizon or not is_periodic(lbs, cand, PeriodMode.WEAK_RIGHT):
                continue
        lam = cand
        break
    if lam is None:
        return None

    mu = None
    rbs = None
    for cand in periods:
        if not weak_evolutional_period(rights, cand, Side.RIGHT):
            continue
        if case_right is Case.II and m < ncker:
            if rbs is None:
                rbs = apply_coding(evolution.system, bounding_prefix(evolution, Side.RIGHT, params.horizon))
            if len(rbs) < params.horizon or not is_periodic(rbs, cand, PeriodMode.WEAK_LEFT):
                continue
        mu = cand
        break
    if mu is None:
        return None
    return PeriodWitness(
        m, lam, mu, (len(lefts[0]) % len(lam), len(rights[0]) % len(mu)), (params.window, params.horizon)
    )


def is_continuously_periodic(
    evolution: Evolution, params: Params, finals: FinalPeriodSet
) -> tuple[bool, PeriodWitness | None]:
    ncker = evolution.anatomy(3 * evolution.k).ncker
    for m in range(1, ncker + 1):
        witness = continuous_period_check(evolution, m, params, finals)
        if witness is not None:
            return True, witness
    return False, None


def finite_order_terminal_test(
    system: MorphicSystem, k: int, finals: FinalPeriodSet, profiles: Sequence[LetterProfile] | None = None
) -> tuple[bool, tuple]:
    """True (bounded complexity) iff the coded stretch is completely periodic with a final period.

    Also returns the coded stretch for reporting.
    """
    profiles = profiles or letter_profiles(system)
    a = system.axiom
    n1 = growth_count(system, a, 3 * k + 1)
    n2 = growth_count(system, a, 3 * k + 2)
    text = generate_prefix(system, n2).text
    if len(text) < n2:
        raise PrefixTooShort("prefix shorter than the second image")
    orders = [p.order for p in profiles]

    def rightmost(limit: int) -> int:
        for i in range(limit - 1, -1, -1):
            if orders[text[i]] == k + 1:
                return i
        raise PrefixTooShort(f"no letter of order {k + 1} in the image")

    i, j = rightmost(n1), rightmost(n2)
    stretch = apply_coding(system, text[i + 1:j + 1])
    bounded = any(is_periodic(stretch, lam, PeriodMode.COMPLETE) for lam in finals.sorted())
    return bounded, stretch


def evolutions_at(system: MorphicSystem, profiles: Sequence[LetterProfile], k: int) -> list[Evolution]:
    return [Evolution(system, profiles, k, w) for w in origin_windows(system, profiles, k)]


def classify(system: MorphicSystem, params: Params = Params()) -> ComplexityVerdict:
    """Decision tree over the axiom's order; ``system`` must already be normalized."""
    profiles = letter_profiles(system)
    finals = compute_final_periods(system, profiles)
    horizons = {"window": params.window, "horizon": params.horizon, "prefix_len": params.prefix_len}
    K = profiles[system.axiom].order

    if K == 2:
        return ComplexityVerdict(ComplexityClass.CONSTANT, (Rule.PROP1_5,), None, None, horizons)

    notes: tuple[str, ...] = ()
    if K == INF:
        occurring = reachable_letters(system)
        top = int(max([profiles[b].order for b in occurring if profiles[b].order != INF], default=0))
        if top == 0:
            notes = ("boundary case: no letter of finite order occurs, K taken as 0",)
        ks = range(1, top + 2)
    else:
        ks = range(1, int(K) - 1)

    levels = []
    failing_by_k: dict[int, str] = {}
    passing = []
    for k in ks:
        evs = evolutions_at(system, profiles, k)
        bad = [ev.label for ev in evs if not is_continuously_periodic(ev, params, finals)[0]]
        levels.append(LevelSummary(k, len(evs), len(evs) - len(bad), tuple(bad)))
        if bad:
            failing_by_k[k] = bad[0]
        else:
            passing.append(k)
    if not passing:
        raise MorphicError("no level has all evolutions continuously periodic")
    k_star = max(passing)
    levels_t = tuple(levels)
    last = ks[-1]

    if k_star < last:
        # the next level up must have a failing evolution
        bad_k = k_star + 1
        counter = (failing_by_k[bad_k], bad_k) if bad_k in failing_by_k else None
        return ComplexityVerdict(
            ComplexityClass.POLY_EXPONENT,
            (Rule.PROP1_2, Rule.PROP1_3),
            k_star,
            Fraction(k_star + 1, k_star),
            horizons,
            counter,
            levels_t,
            notes,
        )
    if K == INF:
        return ComplexityVerdict(ComplexityClass.NLOGN, (Rule.PROP1_6,), k_star, None, horizons, None, levels_t, notes)
    bounded, _ = finite_order_terminal_test(system, k_star, finals, profiles)
    if bounded:
        return ComplexityVerdict(ComplexityClass.CONSTANT, (Rule.PROP1_4,), None, None, horizons, None, levels_t)
    return ComplexityVerdict(
        ComplexityClass.POLY_EXPONENT, (Rule.PROP1_4,), k_star, Fraction(k_star + 1, k_star), horizons, None, levels_t
    )
