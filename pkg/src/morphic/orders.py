"""Letter graph, letter orders, periodic/preperiodic letters and growth counts."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import networkx as nx

from .words import MorphicSystem

INF = math.inf


class Periodicity(Enum):
    PERIODIC = "periodic"
    PREPERIODIC = "preperiodic"
    NOT_APPLICABLE = "n/a"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LetterProfile:
    letter: int
    order: float  # a positive int, or INF
    periodicity: Periodicity

    @property
    def finite(self) -> bool:
        return self.order != INF


def format_order(order: float) -> str:
    return "inf" if order == INF else str(int(order))


@dataclass
class LetterGraph:
    size: int
    edges: Counter  # (b, c) -> number of occurrences of c in φ(b)
    scc_of: list[int]
    condensation: nx.DiGraph

    def members(self, comp: int) -> set[int]:
        return self.condensation.nodes[comp]["members"]

    def internal_outdegree(self, v: int) -> int:
        comp = self.scc_of[v]
        return sum(m for (b, c), m in self.edges.items() if b == v and self.scc_of[c] == comp)

    def in_g_prime(self, comp: int) -> bool:
        """Every vertex has at most one edge back into its own component."""
        return all(self.internal_outdegree(v) <= 1 for v in self.members(comp))

    def in_g_second(self, comp: int) -> bool:
        """A single vertex without a self-loop."""
        (v, *rest) = self.members(comp)
        return not rest and self.edges[(v, v)] == 0


def build_letter_graph(system: MorphicSystem) -> LetterGraph:
    edges: Counter = Counter()
    g = nx.DiGraph()
    g.add_nodes_from(range(system.size))
    for b, img in enumerate(system.phi):
        for c in img:
            edges[(b, c)] += 1
            g.add_edge(b, c)
    cond = nx.condensation(g)
    mapping = cond.graph["mapping"]
    return LetterGraph(system.size, edges, [mapping[v] for v in range(system.size)], cond)


def assign_orders(graph: LetterGraph) -> dict[int, float]:
    cond = graph.condensation
    prime = {c for c in cond.nodes if graph.in_g_prime(c)}
    second = {c for c in prime if graph.in_g_second(c)}
    comp_order: dict[int, int] = {}

    def below(c: int, bound: int) -> bool:
        return all(s in comp_order and comp_order[s] <= bound for s in cond.successors(c))

    k = 0
    while True:
        k += 1
        new = [c for c in prime if c not in comp_order and below(c, k - 1)]
        for c in new:
            comp_order[c] = k
        grew = True
        while grew:
            grew = False
            for c in second:
                if c not in comp_order and below(c, k):
                    comp_order[c] = k
                    new.append(c)
                    grew = True
        if not new:
            break
    return {v: comp_order.get(graph.scc_of[v], INF) for v in range(graph.size)}


def classify_periodicity(system: MorphicSystem, orders: Mapping[int, float] | Sequence[float]) -> tuple[LetterProfile, ...]:
    graph = build_letter_graph(system)
    out = []
    for v in range(system.size):
        order = orders[v]
        if order == INF:
            kind = Periodicity.NOT_APPLICABLE
        elif graph.in_g_second(graph.scc_of[v]):
            kind = Periodicity.PREPERIODIC
        else:
            kind = Periodicity.PERIODIC
        out.append(LetterProfile(v, order, kind))
    return tuple(out)


def letter_profiles(system: MorphicSystem) -> tuple[LetterProfile, ...]:
    return classify_periodicity(system, assign_orders(build_letter_graph(system)))


def growth_count(system: MorphicSystem, letter: int, n: int) -> int:
    """|φ^n(letter)| from letter-count vectors, exact for any n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    counts = [0] * system.size
    counts[letter] = 1
    rows = [Counter(img) for img in system.phi]
    for _ in range(n):
        nxt = [0] * system.size
        for b, m in enumerate(counts):
            if m:
                for c, mult in rows[b].items():
                    nxt[c] += m * mult
        counts = nxt
    return sum(counts)


def boundary_letter(word: Sequence[int], k: float, side: Side, orders: Sequence[float]) -> int | None:
    """Position of the leftmost or rightmost letter of order greater than k."""
    positions = range(len(word)) if side is Side.LEFT else range(len(word) - 1, -1, -1)
    for i in positions:
        if orders[word[i]] > k:
            return i
    return None
