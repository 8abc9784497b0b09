"""Free words and marked presentations, plus their JSON file format.

A word is a tuple of ``(generator, ±1)`` letters.  In files each letter is a
signed 1-based integer, so ``x0 x3^-1`` is ``[1, -4]``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

Letter = tuple[int, int]
Word = tuple[Letter, ...]

PRESENTATION_FORMAT = "morsebranch-presentation"
PRESENTATION_VERSION = 1


def reduce_word(letters: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i] != (w[i + 1][0], -w[i + 1][1]) for i in range(len(w) - 1))


def inverse_word(w: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def exponent_sums(w: Iterable[Letter]) -> Counter:
    sums: Counter = Counter()
    for g, e in w:
        sums[g] += e
    return Counter({g: s for g, s in sums.items() if s})


def word_to_ints(w: Sequence[Letter]) -> list[int]:
    return [(g + 1) * e for g, e in w]


def word_from_ints(xs: Iterable[int]) -> Word:
    out = []
    for x in xs:
        if x == 0:
            raise ValueError("0 is not a letter")
        out.append((abs(x) - 1, 1 if x > 0 else -1))
    return tuple(out)


def format_word(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(f"x{g}" if e > 0 else f"x{g}^-1" for g, e in w)


@dataclass(frozen=True)
class Relator:
    name: str
    word: Word
    flagged: bool = False
    level: Optional[int] = None  # branch level, if this is a branch relator


@dataclass(frozen=True)
class MarkedPresentation:
    """Generators ``0..generator_count-1``; each relator stands for
    ``word`` or, when flagged, ``word**p``."""

    generator_count: int
    relators: tuple[Relator, ...]
    p: int
    W: frozenset = frozenset()
    t: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        for r in self.relators:
            for g, e in r.word:
                if not 0 <= g < self.generator_count or e not in (1, -1):
                    raise ValueError(f"relator {r.name} has a bad letter {(g, e)}")
            if r.flagged and r.level not in self.W:
                raise ValueError(f"relator {r.name} is flagged but its level is not in W")
            if r.level is not None and r.level in self.W and not r.flagged:
                raise ValueError(f"branch relator {r.name} at level {r.level} must be flagged")

    @property
    def branch_relators(self) -> list[Relator]:
        return [r for r in self.relators if r.level is not None]

    @property
    def flag_count(self) -> int:
        return sum(r.flagged for r in self.relators)

    def exponent_matrix(self) -> list[list[int]]:
        """Exponent-sum rows; flagged rows are multiplied by ``p``."""
        rows = []
        for r in self.relators:
            row = [0] * self.generator_count
            for g, e in r.word:
                row[g] += e
            if r.flagged:
                row = [self.p * x for x in row]
            rows.append(row)
        return rows

    def to_json(self) -> dict:
        return {
            "format": PRESENTATION_FORMAT,
            "version": PRESENTATION_VERSION,
            "generators": self.generator_count,
            "p": self.p,
            "W": sorted(self.W),
            "t": self.t,
            "relators": [word_to_ints(r.word) for r in self.relators],
            "power_flags": [r.flagged for r in self.relators],
            "branch_levels": [r.level for r in self.relators],
            "names": [r.name for r in self.relators],
            "meta": dict(sorted(self.meta.items())),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MarkedPresentation":
        if data.get("format") != PRESENTATION_FORMAT:
            raise ValueError("not a morsebranch presentation")
        if data.get("version") != PRESENTATION_VERSION:
            raise ValueError(f"unsupported presentation version {data.get('version')}")
        n = len(data["relators"])
        names = data.get("names") or [f"r{i}" for i in range(n)]
        levels = data.get("branch_levels") or [None] * n
        relators = tuple(
            Relator(names[i], word_from_ints(data["relators"][i]), bool(data["power_flags"][i]), levels[i])
            for i in range(n)
        )
        return cls(
            data["generators"], relators, data["p"], frozenset(data["W"]), data.get("t"), data.get("meta", {})
        )


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
