"""Words with exponents and finite presentations, plus their text format.

A word is a sequence of syllables (generator, exponent).  Words are kept
as given; ``reduce_word`` merges adjacent syllables and cancels until the
word is freely reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

GEN_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_SYLLABLE_RE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Word:
    """A word over opaque generator symbols, syllables ``(gen, exponent)``."""

    syllables: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for gen, exp in self.syllables:
            if exp == 0:
                raise ValueError(f"zero exponent on generator {gen!r}")

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[str, int]]) -> "Word":
        return Word(tuple((g, int(e)) for g, e in pairs))

    @staticmethod
    def empty() -> "Word":
        return Word(())

    @staticmethod
    def gen(name: str, exp: int = 1) -> "Word":
        return Word(((name, exp),))

    def __mul__(self, other: "Word") -> "Word":
        return reduce_word(Word(self.syllables + other.syllables))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k == 0:
            return Word.empty()
        base = self if k > 0 else self.inverse()
        return reduce_word(Word(base.syllables * abs(k)))

    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def letter_count(self) -> int:
        """Length as a plain word: the sum of |exponent| over syllables."""
        return sum(abs(e) for _, e in self.syllables)

    def is_empty(self) -> bool:
        return not self.syllables

    def __str__(self) -> str:
        return format_word(self)


def reduce_word(w: Word) -> Word:
    """Freely reduce: merge adjacent equal-generator syllables, drop zeros."""
    stack: list[tuple[str, int]] = []
    for gen, exp in w.syllables:
        stack.append((gen, exp))
        while len(stack) >= 2 and stack[-1][0] == stack[-2][0]:
            g, e2 = stack.pop()
            _, e1 = stack.pop()
            if e1 + e2 != 0:
                stack.append((g, e1 + e2))
    return Word(tuple(stack))


def commutator(x: Word, y: Word) -> Word:
    """[x, y] = x y x^-1 y^-1, freely reduced."""
    return x * y * x.inverse() * y.inverse()


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group data: ordered generators and relator words."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = field(default_factory=tuple)

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if not GEN_NAME_RE.fullmatch(g):
                raise ValueError(f"bad generator name {g!r}")
            if g in seen:
                raise ValueError(f"duplicate generator {g!r}")
            seen.add(g)
        for r in self.relators:
            missing = r.generators() - seen
            if missing:
                raise ValueError(f"relator uses unknown generators {sorted(missing)}")


def format_word(w: Word) -> str:
    if not w.syllables:
        return ""
    parts = []
    for g, e in w.syllables:
        parts.append(g if e == 1 else f"{g}^{e}")
    return " ".join(parts)


def parse_word(text: str) -> Word:
    syllables = []
    for token in text.split():
        m = _SYLLABLE_RE.fullmatch(token)
        if not m:
            raise ValueError(f"bad syllable {token!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        syllables.append((m.group(1), exp))
    return Word(tuple(syllables))


def format_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generators)]
    for r in p.relators:
        lines.append("rel: " + format_word(r))
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    generators: Sequence[str] | None = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens:"):
            if generators is not None:
                raise ValueError(f"line {lineno}: repeated gens line")
            generators = line[len("gens:"):].split()
        elif line.startswith("rel:"):
            relators.append(parse_word(line[len("rel:"):]))
        else:
            raise ValueError(f"line {lineno}: expected 'gens:' or 'rel:'")
    if generators is None:
        raise ValueError("missing gens line")
    return Presentation(tuple(generators), tuple(relators))
