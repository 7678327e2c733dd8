"""k-blocks, multiblocks, descendants, evolutions, atoms, anatomy and kernels.

Everything here works on *frames*. A frame is a word together with the map
sending each position q to the start of φ(text[q]) in the next frame and the
inverse ``parent`` map into the previous frame. The fixed-point prefix is a
single frame linked to itself (α = φ(α)); a lineage is a chain of small frames
following one evolution from its origin (see :class:`Lineage`).

Delimiters are integer *gaps*. At level j ≥ 1 the items of a frame alternate
high letter, block, high letter, ... where the high letters are the
positions of order > j; item g is the high letter ``H[g // 2]`` for even g and
the (possibly empty) block after ``H[g // 2]`` for odd g. Gap g sits just
before item g, so a multiblock is a pair of gaps ``g1 <= g2``. At level 0 the
items are the letters and gaps are plain positions. This keeps the distinction
between "just before an empty block" and "just after it" exact.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .errors import NotStable, NotStableMultiblock, PrefixTooShort, UnboundedTailError
from .orders import INF, LetterProfile, Periodicity
from .words import MorphicSystem, Occurrence, ProvenancePrefix


class DelimiterSide(Enum):
    BEFORE = "before"  # before the block that starts here
    AFTER = "after"  # after the block that ends just before here


@dataclass(frozen=True)
class Delimiter:
    position: int
    side: DelimiterSide


class ItemKind(Enum):
    BLOCK = "block"
    HIGH = "high"


class Case(Enum):
    I = "I"
    II = "II"


class Frame:
    """A word with its links to the previous and next frame under φ."""

    def __init__(
        self,
        system: MorphicSystem,
        profiles: Sequence[LetterProfile],
        text: Sequence[int],
        img: Sequence[int],
        parent: Sequence[int],
        prev: "Frame | None" = None,
    ) -> None:
        self.system = system
        self.profiles = profiles
        self.orders = [p.order for p in profiles]
        self.text = text
        self.img = img  # img[q] for q <= n_images
        self.parent = parent  # -1 where unknown
        self.prev = prev
        self._next: Frame | None = None
        self._make_next: Callable[[], Frame] | None = None
        self._high: dict[int, list[int]] = {}
        self._bounds = _ImageBounds.for_system(system, self.orders)

    @classmethod
    def from_prefix(cls, prefix: ProvenancePrefix, profiles: Sequence[LetterProfile]) -> "Frame":
        frame = cls(prefix.system, profiles, prefix.text, prefix.img, prefix.parent)
        frame.prev = frame
        frame._next = frame
        return frame

    @property
    def next(self) -> "Frame":
        if self._next is None:
            if self._make_next is None:
                raise PrefixTooShort("frame has no successor")
            self._next = self._make_next()
        return self._next

    @property
    def n_images(self) -> int:
        return len(self.img) - 1

    # -- level structure -------------------------------------------------
    def high(self, j: int) -> list[int]:
        """Positions whose letter has order > j."""
        h = self._high.get(j)
        if h is None:
            orders = self.orders
            h = [p for p, x in enumerate(self.text) if orders[x] > j]
            self._high[j] = h
        return h

    def rank(self, j: int, pos: int) -> int:
        h = self.high(j)
        r = bisect_left(h, pos)
        if r == len(h) or h[r] != pos:
            raise PrefixTooShort(f"position {pos} is not a high letter at level {j}")
        return r

    def n_gaps(self, j: int) -> int:
        return len(self.text) + 1 if j == 0 else 2 * len(self.high(j))

    def pos(self, j: int, g: int) -> int:
        """Text position of gap g."""
        if j == 0:
            return g
        h = self.high(j)
        if g < 0 or g > 2 * len(h) - 1:
            raise PrefixTooShort(f"gap {g} outside level {j}")
        return h[g // 2] + (g & 1)

    def gap_after(self, j: int, p: int) -> int:
        return p + 1 if j == 0 else 2 * self.rank(j, p) + 1

    def gap_before(self, j: int, p: int) -> int:
        return p if j == 0 else 2 * self.rank(j, p)

    def image_start(self, q: int) -> int:
        if q < 0 or q >= self.n_images:
            raise PrefixTooShort(f"image of position {q} is not generated")
        return self.img[q]

    def descend(self, j: int, g: int) -> int:
        """The gap in the next frame that gap g maps to under φ."""
        nxt = self.next
        if j == 0:
            if g < 0 or g > self.n_images:
                raise PrefixTooShort(f"gap {g} has no image")
            return self.img[g]
        p = self.pos(j, g) - (g & 1)
        letter = self.text[p]
        if g & 1:
            target = self.image_start(p) + self._bounds.hi[j][letter]
            if target < 0 or target >= len(nxt.text):
                raise PrefixTooShort("image runs past the frame")
            return 2 * nxt.rank(j, target) + 1
        target = self.image_start(p) + self._bounds.lo[j][letter]
        if target < 0 or target >= len(nxt.text):
            raise PrefixTooShort("image runs past the frame")
        return 2 * nxt.rank(j, target)

    def item_occurrence(self, j: int, g: int) -> tuple[Occurrence, ItemKind]:
        if j == 0:
            return Occurrence(g, g), ItemKind.HIGH
        h = self.high(j)
        if g & 1:
            return Occurrence(h[g // 2] + 1, h[g // 2 + 1] - 1), ItemKind.BLOCK
        return Occurrence(h[g // 2], h[g // 2]), ItemKind.HIGH


class _ImageBounds:
    """lo[j][b] / hi[j][b]: first / last index in φ(b) of a letter of order > j."""

    _cache: dict = {}

    def __init__(self, lo: dict[int, list[int]], hi: dict[int, list[int]]) -> None:
        self.lo = lo
        self.hi = hi

    @classmethod
    def for_system(cls, system: MorphicSystem, orders: Sequence[float]) -> "_ImageBounds":
        key = (system, tuple(orders))
        found = cls._cache.get(key)
        if found is None:
            top = int(max([o for o in orders if o != INF], default=0)) + 1
            lo: dict[int, list[int]] = {}
            hi: dict[int, list[int]] = {}
            missing = -(10**9)  # never reached: letters of order > j keep one in their image
            for j in range(1, top + 1):
                lo[j], hi[j] = [], []
                for img in system.phi:
                    idx = [i for i, x in enumerate(img) if orders[x] > j]
                    lo[j].append(idx[0] if idx else missing)
                    hi[j].append(idx[-1] if idx else missing)
            found = cls(lo, hi)
            cls._cache[key] = found
        return found


@dataclass(frozen=True)
class Multiblock:
    frame: Frame = field(repr=False, compare=True)
    level: int
    g1: int
    g2: int

    def __post_init__(self) -> None:
        if self.g2 < self.g1:
            raise ValueError("multiblock gaps out of order")

    @property
    def k(self) -> int:
        return self.level

    @property
    def is_empty(self) -> bool:
        return self.g1 == self.g2

    def forgetful(self) -> Occurrence:
        f = self.frame
        return Occurrence(f.pos(self.level, self.g1), f.pos(self.level, self.g2) - 1)

    def _delimiter(self, g: int) -> Delimiter:
        side = DelimiterSide.BEFORE if (self.level == 0 or g & 1) else DelimiterSide.AFTER
        return Delimiter(self.frame.pos(self.level, g), side)

    @property
    def left(self) -> Delimiter:
        return self._delimiter(self.g1)

    @property
    def right(self) -> Delimiter:
        return self._delimiter(self.g2)

    @property
    def members(self) -> list[tuple[Occurrence, ItemKind]]:
        return [self.frame.item_occurrence(self.level, g) for g in range(self.g1, self.g2)]

    def word(self) -> tuple:
        occ = self.forgetful()
        return tuple(self.frame.text[occ.start:occ.end + 1])

    def descendant(self) -> "Multiblock":
        f = self.frame
        return Multiblock(f.next, self.level, f.descend(self.level, self.g1), f.descend(self.level, self.g2))


@dataclass(frozen=True)
class BlockRef:
    """The k-block following the r-th letter of order > k in a frame."""

    frame: Frame = field(repr=False)
    k: int
    r: int

    @property
    def borders(self) -> tuple[int, int]:
        h = self.frame.high(self.k)
        if self.r < 0 or self.r + 1 >= len(h):
            raise PrefixTooShort(f"block {self.r} at level {self.k} is not complete")
        return h[self.r], h[self.r + 1]

    @property
    def occurrence(self) -> Occurrence:
        lb, rb = self.borders
        return Occurrence(lb + 1, rb - 1)

    def word(self) -> tuple:
        lb, rb = self.borders
        return tuple(self.frame.text[lb + 1:rb])

    @property
    def left_border(self) -> int:
        return self.frame.text[self.borders[0]]

    @property
    def right_border(self) -> int:
        return self.frame.text[self.borders[1]]

    def maximal(self) -> Multiblock:
        """The block as a (k-1)-multiblock of everything between its borders."""
        lb, rb = self.borders
        j = self.k - 1
        return Multiblock(self.frame, j, self.frame.gap_after(j, lb), self.frame.gap_before(j, rb))

    def as_multiblock(self) -> Multiblock:
        return Multiblock(self.frame, self.k, 2 * self.r + 1, 2 * self.r + 2)

    def descendant(self) -> "BlockRef":
        g = self.frame.descend(self.k, 2 * self.r + 1)
        return BlockRef(self.frame.next, self.k, (g - 1) // 2)

    def ancestor(self) -> "BlockRef | None":
        lb, rb = self.borders
        q1, q2 = self.frame.parent[lb], self.frame.parent[rb]
        if q1 < 0 or q2 < 0 or q1 == q2:
            return None
        prev = self.frame.prev
        s = prev.rank(self.k, q1)
        if prev.high(self.k)[s + 1] != q2:
            raise AssertionError("ancestor borders are not consecutive")
        return BlockRef(prev, self.k, s)


# -- decomposition -------------------------------------------------------------


def decompose(frame: Frame, k: int) -> list[tuple[Occurrence, ItemKind]]:
    """Letters of order > k and the k-blocks between them, up to the last complete item."""
    if k < 1:
        raise ValueError("k must be >= 1")
    h = frame.high(k)
    if len(h) < 2 or h[0] != 0:
        raise UnboundedTailError(f"fewer than two letters of order > {k} in the generated region")
    return [frame.item_occurrence(k, g) for g in range(2 * len(h) - 1)]


# -- atoms, anatomy, kernels -----------------------------------------------------

Gaps = tuple[int, int]


@dataclass(frozen=True)
class Atoms:
    """Gap pairs at level k-1 in the member's frame; ``left[i]`` is the (i+1)th left atom."""

    frame: Frame = field(repr=False)
    level: int
    left: tuple[Gaps, ...]
    zero: Gaps
    right: tuple[Gaps, ...]

    def mb(self, gaps: Gaps) -> Multiblock:
        return Multiblock(self.frame, self.level, *gaps)

    def left_atom(self, m: int) -> Multiblock:
        return self.mb(self.left[m - 1])

    def right_atom(self, m: int) -> Multiblock:
        return self.mb(self.right[m - 1])

    def zeroth(self) -> Multiblock:
        return self.mb(self.zero)


@dataclass(frozen=True)
class Anatomy:
    seq_no: int
    left_preperiod: Multiblock
    left_regular: Occurrence
    core: Multiblock
    right_regular: Occurrence
    right_preperiod: Multiblock
    atoms: Atoms = field(repr=False)
    case_left: Case
    case_right: Case
    prime_kernels: tuple[Occurrence, ...]
    composite_kernels: tuple[Occurrence, ...]
    pseudoregular_parts: tuple[Occurrence, ...]
    central_kernels: tuple[Occurrence, ...]

    @property
    def ncker(self) -> int:
        return len(self.central_kernels)

    def left_pseudoregular(self, m: int) -> Occurrence:
        return Occurrence(self.left_preperiod.forgetful().end + 1, self.central_kernels[m - 1].start - 1)

    def right_pseudoregular(self, m: int) -> Occurrence:
        return Occurrence(self.central_kernels[m - 1].end + 1, self.right_preperiod.forgetful().start - 1)


def composite(prime: Sequence[Occurrence]) -> list[Occurrence]:
    """Merge runs of consecutive kernels (each starting right after the previous one)."""
    out: list[Occurrence] = []
    for occ in prime:
        if out and out[-1].end + 1 == occ.start:
            out[-1] = Occurrence(out[-1].start, occ.end)
        else:
            out.append(occ)
    return out


def pseudoregular(span: Occurrence, kernels: Sequence[Occurrence]) -> list[Occurrence]:
    """The stretches around and between kernels; there is one more part than kernels."""
    parts = []
    cursor = span.start
    for occ in kernels:
        parts.append(Occurrence(cursor, occ.start - 1))
        cursor = occ.end + 1
    parts.append(Occurrence(cursor, span.end))
    return parts


class BlockAnalyzer:
    """Memoized member chains, atoms, cases and anatomies."""

    def __init__(self) -> None:
        self._chains: dict[BlockRef, list[BlockRef]] = {}
        self._atoms: dict[BlockRef, Atoms] = {}
        self._anatomy: dict[BlockRef, Anatomy] = {}

    def chain(self, block: BlockRef) -> list[BlockRef]:
        """E_0, E_1, ..., block: the ancestors of a block, origin first."""
        if block in self._chains:
            return self._chains[block]
        path = []
        cur: BlockRef | None = block
        while cur is not None and cur not in self._chains:
            path.append(cur)
            cur = cur.ancestor()
        acc = list(self._chains[cur]) if cur is not None else []
        for b in reversed(path):
            acc = acc + [b]
            self._chains[b] = acc
        return self._chains[block]

    def seq_no(self, block: BlockRef) -> int:
        return len(self.chain(block)) - 1

    def atoms(self, block: BlockRef) -> Atoms:
        found = self._atoms.get(block)
        if found is not None:
            return found
        chain = self.chain(block)
        j = block.k - 1
        start = max((i for i, b in enumerate(chain) if b in self._atoms), default=None)
        if start is None:
            m0 = chain[0].maximal()
            cur = Atoms(chain[0].frame, j, (), (m0.g1, m0.g2), ())
            self._atoms[chain[0]] = cur
            start = 0
        cur = self._atoms[chain[start]]
        for prev, nxt in zip(chain[start:], chain[start + 1:]):
            f = prev.frame.descend
            left = tuple((f(j, a), f(j, b)) for a, b in cur.left)
            right = tuple((f(j, a), f(j, b)) for a, b in cur.right)
            zero = (f(j, cur.zero[0]), f(j, cur.zero[1]))
            mp = prev.maximal()
            d1, d2 = f(j, mp.g1), f(j, mp.g2)
            m = nxt.maximal()
            if not (m.g1 <= d1 <= d2 <= m.g2):
                raise AssertionError("descendant escapes the maximal multiblock")
            cur = Atoms(nxt.frame, j, left + ((m.g1, d1),), zero, right + ((d2, m.g2),))
            self._atoms[nxt] = cur
        return cur

    def cases(self, block: BlockRef) -> tuple[Case, Case]:
        """Case I / II at the left and right, read off the second member."""
        chain = self.chain(block)
        if len(chain) < 3:
            raise PrefixTooShort("side cases need a member with sequence number >= 2")
        a = self.atoms(chain[2])
        la, ra = a.left[1], a.right[1]
        return (Case.I if la[0] < la[1] else Case.II, Case.I if ra[0] < ra[1] else Case.II)

    def anatomy(self, block: BlockRef) -> Anatomy:
        found = self._anatomy.get(block)
        if found is not None:
            return found
        k = block.k
        l = self.seq_no(block)
        if l < 3 * k:
            raise NotStable(f"sequence number {l} < {3 * k}")
        a = self.atoms(block)
        LA = lambda n: a.left[n - 1]  # noqa: E731
        RA = lambda n: a.right[n - 1]  # noqa: E731
        lprep = a.mb((LA(l)[0], LA(l - 3 * k + 3)[1]))
        lr = a.mb((LA(l - 3 * k + 2)[0], LA(2)[1]))
        core = a.mb((LA(1)[0], RA(1)[1]))
        rr = a.mb((RA(2)[0], RA(l - 3 * k + 2)[1]))
        rprep = a.mb((RA(l - 3 * k + 3)[0], RA(l)[1]))
        case_left, case_right = self.cases(block)
        central_prime = self.kernels(core)
        prime = (
            ([lprep.forgetful()] if case_left is Case.I else [])
            + central_prime
            + ([rprep.forgetful()] if case_right is Case.I else [])
        )
        comp = composite(prime)
        result = Anatomy(
            seq_no=l,
            left_preperiod=lprep,
            left_regular=lr.forgetful(),
            core=core,
            right_regular=rr.forgetful(),
            right_preperiod=rprep,
            atoms=a,
            case_left=case_left,
            case_right=case_right,
            prime_kernels=tuple(prime),
            composite_kernels=tuple(comp),
            pseudoregular_parts=tuple(pseudoregular(block.occurrence, comp)),
            central_kernels=tuple(composite(central_prime)),
        )
        self._anatomy[block] = result
        return result

    def kernels(self, mb: Multiblock) -> list[Occurrence]:
        """Prime kernels of a stable multiblock, left to right."""
        j = mb.level
        if j == 0:
            return [mb.forgetful()]
        frame = mb.frame
        out: list[Occurrence] = []
        for g in range(mb.g1, mb.g2):
            if g & 1:
                inner = BlockRef(frame, j, g // 2)
                if self.seq_no(inner) < 3 * j:
                    raise NotStableMultiblock(f"contains a {j}-block that is not stable")
                out.extend(self.anatomy(inner).prime_kernels)
            else:
                p = frame.high(j)[g // 2]
                prof = frame.profiles[frame.text[p]]
                if prof.order != j + 1 or prof.periodicity is not Periodicity.PERIODIC:
                    raise NotStableMultiblock(f"letter at {p} is not a periodic letter of order {j + 1}")
                out.append(Occurrence(p, p))
        return out

    def kernels_of(self, mb: Multiblock) -> tuple[list[Occurrence], list[Occurrence], list[Occurrence]]:
        prime = self.kernels(mb)
        comp = composite(prime)
        return prime, comp, pseudoregular(mb.forgetful(), comp)


# -- evolutions -------------------------------------------------------------------


@dataclass(frozen=True)
class BlockRecord:
    occurrence: Occurrence
    k: int
    evolution_id: int
    seq_no: int
    left_border: int
    right_border: int


@dataclass
class EvolutionRecord:
    """An evolution as observed: members keyed by sequence number."""

    id: int
    k: int
    origin: BlockRecord
    members: dict[int, BlockRecord]
    abstract_members: dict[int, tuple]
    refs: dict[int, BlockRef] = field(repr=False)
    analyzer: BlockAnalyzer = field(repr=False)

    @property
    def case_left(self) -> Case | None:
        cases = self._cases()
        return cases[0] if cases else None

    @property
    def case_right(self) -> Case | None:
        cases = self._cases()
        return cases[1] if cases else None

    def _cases(self) -> tuple[Case, Case] | None:
        if max(self.refs) < 2:
            return None
        return self.analyzer.cases(self.refs[max(self.refs)])

    def member(self, l: int) -> BlockRef:
        try:
            return self.refs[l]
        except KeyError:
            raise PrefixTooShort(f"member {l} not observed") from None

    def atoms(self, l: int) -> Atoms:
        return self.analyzer.atoms(self.member(l))

    def anatomy(self, l: int) -> Anatomy:
        return self.analyzer.anatomy(self.member(l))

    @property
    def stable_anatomy(self) -> Anatomy | None:
        top = max(self.refs)
        return self.anatomy(top) if top >= 3 * self.k else None

    @property
    def abstract_key(self) -> tuple:
        o = self.origin
        return (o.left_border, self.abstract_members[0], o.right_border)


def collect_evolutions(frame: Frame, k: int, analyzer: BlockAnalyzer | None = None) -> list[EvolutionRecord]:
    """Group every complete k-block of a fixed-point frame into its evolution."""
    analyzer = analyzer or BlockAnalyzer()
    h = frame.high(k)
    text = frame.text
    origin_of: list[int] = []
    seq: list[int] = []
    evolutions: dict[int, EvolutionRecord] = {}
    for r in range(len(h) - 1):
        ref = BlockRef(frame, k, r)
        anc = ref.ancestor()
        if anc is None:
            oid, s = r, 0
        else:
            oid, s = origin_of[anc.r], seq[anc.r] + 1
        origin_of.append(oid)
        seq.append(s)
        record = BlockRecord(ref.occurrence, k, oid, s, text[h[r]], text[h[r + 1]])
        if s == 0:
            evolutions[oid] = EvolutionRecord(oid, k, record, {}, {}, {}, analyzer)
        ev = evolutions[oid]
        ev.members[s] = record
        ev.abstract_members[s] = tuple(text[h[r] + 1:h[r + 1]])
        ev.refs[s] = ref
    return list(evolutions.values())


# -- lineages ---------------------------------------------------------------------


class Lineage:
    """One evolution followed through small frames W_0, W_1, ...

    W_0 is ``LB E_0 RB`` cut out of the image of a letter. W_{l+1} is the part
    of φ(W_l) from the rightmost order->k letter of φ(LB) to the leftmost one of
    φ(RB), which is exactly ``LB' E_{l+1} RB'``. Lower-level structure inside
    these frames carries full ancestry, so anatomy and kernels work unchanged.
    """

    def __init__(self, system: MorphicSystem, profiles: Sequence[LetterProfile], k: int, window: Sequence[int]) -> None:
        self.system = system
        self.profiles = profiles
        self.k = k
        self.origin_word = tuple(window)
        first = Frame(system, profiles, tuple(window), (), [-1] * len(window))
        first._make_next = lambda: self._grow(first)
        self.frames = [first]

    def _grow(self, frame: Frame) -> Frame:
        phi = self.system.phi
        w = frame.text
        cum = [0]
        for x in w:
            cum.append(cum[-1] + len(phi[x]))
        bounds = frame._bounds
        cut = bounds.hi[self.k][w[0]]
        end = cum[-2] + bounds.lo[self.k][w[-1]] + 1
        full: list[int] = []
        for x in w:
            full.extend(phi[x])
        text = tuple(full[cut:end])
        parent = []
        for q in range(len(w)):
            lo, hi = max(cum[q] - cut, 0), min(cum[q + 1] - cut, len(text))
            parent.extend([q] * max(hi - lo, 0))
        frame.img = [c - cut for c in cum]
        nxt = Frame(self.system, self.profiles, text, (), parent, prev=frame)
        nxt._make_next = lambda: self._grow(nxt)
        self.frames.append(nxt)
        return nxt

    def frame(self, l: int) -> Frame:
        while len(self.frames) <= l:
            self.frames[-1].next
        return self.frames[l]

    def member(self, l: int) -> BlockRef:
        return BlockRef(self.frame(l), self.k, 0)


def reachable_letters(system: MorphicSystem) -> list[int]:
    seen = {system.axiom}
    stack = [system.axiom]
    while stack:
        for c in system.phi[stack.pop()]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return sorted(seen)


def origin_windows(system: MorphicSystem, profiles: Sequence[LetterProfile], k: int) -> list[tuple]:
    """Distinct abstract origins ``LB E_0 RB`` of k-block evolutions occurring in α."""
    orders = [p.order for p in profiles]
    seen: dict[tuple, None] = {}
    for x in reachable_letters(system):
        img = system.phi[x]
        high = [i for i, c in enumerate(img) if orders[c] > k]
        for i, j in zip(high, high[1:]):
            seen.setdefault(tuple(img[i:j + 1]), None)
    return list(seen)
