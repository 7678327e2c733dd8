"""Letters, words, morphic systems, the system-file parser and fixed-point prefixes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DivergenceError, ParseError, ValidationError

Word = tuple  # tuple[int, ...] of letter ids


@dataclass(frozen=True)
class Letter:
    id: int
    name: str


@dataclass(frozen=True)
class Occurrence:
    """Inclusive index range; ``end == start - 1`` is the empty occurrence at ``start``."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start - 1:
            raise ValueError(f"bad occurrence [{self.start}..{self.end}]")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def is_empty(self) -> bool:
        return self.end < self.start

    def slice(self, text: Sequence) -> Sequence:
        return text[self.start:self.end + 1]


@dataclass(frozen=True)
class MorphicSystem:
    names: tuple[str, ...]
    phi: tuple[Word, ...]
    psi: tuple[int, ...]
    axiom: int

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def alphabet(self) -> list[Letter]:
        return [Letter(i, n) for i, n in enumerate(self.names)]

    @property
    def max_image_len(self) -> int:
        return max(len(img) for img in self.phi)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError("unknown letter", name) from None

    def encode(self, text: str) -> Word:
        """Turn display text into a word.

        Whitespace-separated tokens are looked up one by one; without
        whitespace every character is a token, which works whenever all
        display names are single characters.
        """
        tokens = text.split() if any(ch.isspace() for ch in text) else list(text)
        return tuple(self.index(t) for t in tokens)

    def render(self, word: Iterable[int]) -> str:
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[x] for x in word)

    def validate(self) -> None:
        n = len(self.names)
        if n == 0:
            raise ValidationError("nonempty alphabet")
        if len(set(self.names)) != n:
            raise ValidationError("unique display names")
        if len(self.phi) != n or len(self.psi) != n:
            raise ValidationError("complete tables")
        for b, img in enumerate(self.phi):
            if not img:
                raise ValidationError("nonerasing", f"image of {self.names[b]} is empty")
            if any(not 0 <= x < n for x in img):
                raise ValidationError("valid letters", f"image of {self.names[b]}")
        if any(not 0 <= x < n for x in self.psi):
            raise ValidationError("valid letters", "coding")
        if not 0 <= self.axiom < n:
            raise ValidationError("valid letters", "axiom")
        img = self.phi[self.axiom]
        if img[0] != self.axiom or len(img) < 2:
            raise ValidationError(
                "axiom image starts with axiom and has length >= 2",
                f"got {self.render(img)}",
            )

    def to_source(self) -> str:
        lines = [
            "alphabet: " + " ".join(self.names),
            "axiom: " + self.names[self.axiom],
            "morphism:",
        ]
        for b, img in enumerate(self.phi):
            lines.append(f"  {self.names[b]} -> " + " ".join(self.names[x] for x in img))
        lines.append("coding:")
        for b, c in enumerate(self.psi):
            lines.append(f"  {self.names[b]} -> {self.names[c]}")
        return "\n".join(lines) + "\n"


def make_system(rules: dict[str, str], axiom: str, coding: dict[str, str] | None = None) -> MorphicSystem:
    """Build a system from compact single-character rules such as ``{"a": "ab"}``."""
    names = tuple(rules)
    idx = {n: i for i, n in enumerate(names)}
    try:
        phi = tuple(tuple(idx[ch] for ch in rules[n]) for n in names)
        psi = tuple(idx[(coding or {}).get(n, n)] for n in names)
        ax = idx[axiom]
    except KeyError as exc:
        raise ValidationError("unknown letter", str(exc)) from None
    system = MorphicSystem(names, phi, psi, ax)
    system.validate()
    return system


_SECTION = re.compile(r"^(alphabet|axiom|morphism|coding)\s*:(.*)$")


def _tokens(line: str, offset: int) -> list[tuple[str, int]]:
    return [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", line)]


def parse_system(source: str) -> MorphicSystem:
    alphabet: list[str] | None = None
    axiom: tuple[str, int, int] | None = None
    rules: dict[str, dict[str, tuple[list[tuple[str, int]], int]]] = {"morphism": {}, "coding": {}}
    section: str | None = None

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        m = _SECTION.match(stripped)
        if m:
            section = m.group(1)
            rest_col = indent + m.start(2)
            rest = _tokens(m.group(2), rest_col)
            if section == "alphabet":
                if alphabet is not None:
                    raise ParseError("duplicate alphabet line", lineno, indent + 1)
                if not rest:
                    raise ParseError("empty alphabet", lineno, indent + 1)
                alphabet = [t for t, _ in rest]
            elif section == "axiom":
                if len(rest) != 1:
                    raise ParseError("axiom takes exactly one letter", lineno, indent + 1)
                axiom = (rest[0][0], lineno, rest[0][1])
            elif rest:
                raise ParseError(f"unexpected text after '{section}:'", lineno, rest[0][1])
            continue
        if section not in ("morphism", "coding"):
            raise ParseError("rule outside a morphism or coding section", lineno, indent + 1)
        toks = _tokens(line, 0)
        if len(toks) < 2 or toks[1][0] != "->":
            arrow = line.find("->")
            col = arrow + 1 if arrow >= 0 else indent + 1
            raise ParseError("expected '<letter> -> <letters>'", lineno, col)
        head, col = toks[0]
        if head in rules[section]:
            raise ParseError(f"duplicate {section} rule for '{head}'", lineno, col)
        rules[section][head] = (toks[2:], lineno)

    if alphabet is None:
        raise ValidationError("alphabet declared")
    if axiom is None:
        raise ValidationError("axiom declared")
    if len(set(alphabet)) != len(alphabet):
        raise ValidationError("unique display names")
    idx = {n: i for i, n in enumerate(alphabet)}

    def lookup(tok: str, line: int, col: int) -> int:
        if tok not in idx:
            raise ValidationError("unknown letter", f"'{tok}' at line {line}, column {col}")
        return idx[tok]

    for section in ("morphism", "coding"):
        for head, (_, line) in rules[section].items():
            if head not in idx:
                raise ValidationError("unknown letter", f"'{head}' at line {line}")
        missing = [n for n in alphabet if n not in rules[section]]
        if missing:
            raise ValidationError(f"every letter has a {section} rule", ", ".join(missing))

    phi = []
    psi = []
    for n in alphabet:
        body, line = rules["morphism"][n]
        if not body:
            raise ValidationError("nonerasing", f"image of {n} is empty (line {line})")
        phi.append(tuple(lookup(t, line, c) for t, c in body))
        cbody, cline = rules["coding"][n]
        if len(cbody) != 1:
            raise ValidationError("coding maps each letter to one letter", f"line {cline}")
        psi.append(lookup(cbody[0][0], cline, cbody[0][1]))

    system = MorphicSystem(tuple(alphabet), tuple(phi), tuple(psi), lookup(*axiom))
    system.validate()
    return system


def apply_morphism(system: MorphicSystem, word: Iterable[int]) -> Word:
    out: list[int] = []
    phi = system.phi
    for x in word:
        out.extend(phi[x])
    return tuple(out)


def apply_coding(system: MorphicSystem, word: Iterable[int]) -> Word:
    psi = system.psi
    return tuple(psi[x] for x in word)


def morphism_power(system: MorphicSystem, n: int) -> MorphicSystem:
    if n < 1:
        raise ValueError("power must be >= 1")
    images = list(system.phi)
    for _ in range(n - 1):
        images = [apply_morphism(system, img) for img in images]
    return MorphicSystem(system.names, tuple(images), system.psi, system.axiom)


@dataclass(frozen=True)
class ProvenancePrefix:
    """A prefix of the fixed point together with its factorization ``α = φ(α_0)φ(α_1)…``.

    ``img[q]`` is where φ(α_q) starts, for ``q <= n_images``; ``img[n_images]``
    equals ``len(text)``, so the images of ``α_0 … α_{n_images-1}`` tile the text.
    ``parent[p]`` is the q whose image contains position p.
    """

    system: MorphicSystem
    text: Word
    parent: tuple[int, ...]
    img: tuple[int, ...] = field(repr=False)

    @property
    def n_images(self) -> int:
        return len(self.img) - 1

    def image_span(self, q: int) -> Occurrence | None:
        if 0 <= q < self.n_images:
            return Occurrence(self.img[q], self.img[q + 1] - 1)
        return None


def generate_prefix(system: MorphicSystem, min_len: int) -> ProvenancePrefix:
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    phi = system.phi
    first = phi[system.axiom]
    if first[0] != system.axiom or len(first) < 2:
        raise DivergenceError("axiom image does not start with the axiom")
    out = list(first)
    parent = [0] * len(out)
    img = [0]
    i = 1
    while len(out) < min_len:
        if i >= len(out):
            raise DivergenceError("prefix stopped growing")
        img.append(len(out))
        image = phi[out[i]]
        out.extend(image)
        parent.extend([i] * len(image))
        i += 1
    img.append(len(out))
    return ProvenancePrefix(system, tuple(out), tuple(parent), tuple(img))
