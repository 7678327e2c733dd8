"""Alphabet augmentation, the 1-periodicity predicates, final periods and power search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import MissingMinimalPeriod, SearchBudgetExceeded
from .orders import INF, LetterProfile, Periodicity, Side, boundary_letter, letter_profiles
from .periodicity import PeriodMode, cyclic_shift, minimal_period
from .words import MorphicSystem, apply_coding, apply_morphism

_SPARE_NAMES = "ΩΨΞΦΘΛΠΣΓΔ"


@dataclass(frozen=True)
class Flags:
    weakly_1_periodic: bool
    strongly_1_periodic: bool
    long_images: bool

    @property
    def all(self) -> bool:
        return self.weakly_1_periodic and self.strongly_1_periodic and self.long_images


@dataclass(frozen=True)
class FinalPeriodSet:
    periods: frozenset  # of tuples of coded letter ids
    L: int

    def sorted(self) -> list[tuple]:
        return sorted(self.periods, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class NormalizationReport:
    power: int
    added_letters: tuple[tuple[int, str], ...]
    flags: Flags
    final_periods: FinalPeriodSet = field(compare=False)


def _fresh_name(taken: Sequence[str]) -> str:
    for ch in _SPARE_NAMES:
        if ch not in taken:
            return ch
    i = 0
    while f"x{i}" in taken:
        i += 1
    return f"x{i}"


def augment_alphabet(
    system: MorphicSystem, profiles: Sequence[LetterProfile]
) -> tuple[MorphicSystem, tuple[tuple[int, str], ...]]:
    """Add a periodic order-1 and/or order-2 letter when none exists."""
    names = list(system.names)
    phi = list(system.phi)
    psi = list(system.psi)
    added: list[tuple[int, str]] = []

    def has(order: int) -> bool:
        return any(p.order == order and p.periodicity is Periodicity.PERIODIC for p in profiles)

    one = next((p.letter for p in profiles if p.order == 1 and p.periodicity is Periodicity.PERIODIC), None)
    if one is None:
        one = len(names)
        names.append(_fresh_name(names))
        phi.append((one,))
        psi.append(one)
        added.append((one, "order1"))
    if not has(2):
        two = len(names)
        names.append(_fresh_name(names))
        phi.append((one, two))
        psi.append(two)
        added.append((two, "order2"))
    if not added:
        return system, ()
    return MorphicSystem(tuple(names), tuple(phi), tuple(psi), system.axiom), tuple(added)


def _orders(profiles: Sequence[LetterProfile]) -> list[float]:
    return [p.order for p in profiles]


def is_weakly_1_periodic(system: MorphicSystem, profiles: Sequence[LetterProfile]) -> bool:
    for p in profiles:
        if p.order == INF:
            continue
        same = [c for c in system.phi[p.letter] if profiles[c].order == p.order]
        if p.periodicity is Periodicity.PREPERIODIC:
            if any(profiles[c].periodicity is not Periodicity.PERIODIC for c in same):
                return False
        elif same != [p.letter]:
            return False
    return True


def is_strongly_1_periodic(system: MorphicSystem, profiles: Sequence[LetterProfile]) -> bool:
    """Exact test: the LL_k / RL_k trajectory is constant from the first step.

    Since LL_k(φ^n(b)) = LL_k(φ(LL_k(φ^{n-1}(b)))), the trajectory is constant
    as soon as x = LL_k(φ(b)) satisfies LL_k(φ(x)) = x. Orders above the
    largest finite order all behave like that largest one, so k stops there.
    """
    orders = _orders(profiles)
    top = max([o for o in orders if o != INF], default=0)
    for k in range(1, max(int(top), 1) + 1):
        for b in range(system.size):
            if orders[b] <= k:
                continue
            for side in (Side.LEFT, Side.RIGHT):
                img = system.phi[b]
                x = img[boundary_letter(img, k, side, orders)]
                ximg = system.phi[x]
                if ximg[boundary_letter(ximg, k, side, orders)] != x:
                    return False
    return True


def _fringes(system: MorphicSystem, profiles: Sequence[LetterProfile]):
    """Yield (side, γ) for every letter whose border LL_1/RL_1 is itself."""
    orders = _orders(profiles)
    for b in range(system.size):
        if orders[b] <= 1:
            continue
        img = system.phi[b]
        left = boundary_letter(img, 1, Side.LEFT, orders)
        if img[left] == b and left > 0:
            yield Side.LEFT, img[:left]
        right = boundary_letter(img, 1, Side.RIGHT, orders)
        if img[right] == b and right < len(img) - 1:
            yield Side.RIGHT, img[right + 1:]


def compute_final_periods(system: MorphicSystem, profiles: Sequence[LetterProfile] | None = None) -> FinalPeriodSet:
    profiles = profiles or letter_profiles(system)
    periods: set[tuple] = set()
    for _, gamma in _fringes(system, profiles):
        coded = apply_coding(system, apply_morphism(system, gamma))
        lam = minimal_period(coded + coded, PeriodMode.COMPLETE)
        if lam is None:
            raise MissingMinimalPeriod("doubled word without a complete period")
        periods.update(cyclic_shift(lam, r) for r in range(len(lam)))
    return FinalPeriodSet(frozenset(periods), max((len(p) for p in periods), default=0))


def has_long_images(system: MorphicSystem, profiles: Sequence[LetterProfile], L: int) -> bool:
    return all(len(gamma) >= 2 * L for _, gamma in _fringes(system, profiles))


def check_level(system: MorphicSystem, profiles: Sequence[LetterProfile] | None = None) -> Flags:
    profiles = profiles or letter_profiles(system)
    L = compute_final_periods(system, profiles).L
    return Flags(
        is_weakly_1_periodic(system, profiles),
        is_strongly_1_periodic(system, profiles),
        has_long_images(system, profiles, L),
    )


def normalize(
    system: MorphicSystem, max_power: int = 64, max_image_len: int = 2_000_000
) -> tuple[MorphicSystem, NormalizationReport]:
    """Augment, then find the smallest power of φ satisfying all three predicates."""
    base, added = augment_alphabet(system, letter_profiles(system))
    profiles = letter_profiles(base)  # orders and periodicity are power-invariant
    current = base
    for n in range(1, max_power + 1):
        if n > 1:
            current = MorphicSystem(
                base.names,
                tuple(apply_morphism(base, img) for img in current.phi),
                base.psi,
                base.axiom,
            )
        if current.max_image_len > max_image_len:
            break
        flags = check_level(current, profiles)
        if flags.all:
            return current, NormalizationReport(n, added, flags, compute_final_periods(current, profiles))
    raise SearchBudgetExceeded(f"no normalizing power found up to {n}")
