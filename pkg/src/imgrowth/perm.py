"""Permutations of a finite alphabet.

Letters are 0-based internally and 1-based in every textual form.
Composition follows the right-action convention used throughout the
package: in ``p * q`` the permutation ``p`` is applied first.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images!r}")

    @classmethod
    def identity(cls, d: int) -> "Perm":
        return cls(tuple(range(d)))

    @classmethod
    def from_cycles(cls, cycles, d: int) -> "Perm":
        """Build from 1-based disjoint cycles."""
        images = list(range(d))
        seen = set()
        for cycle in cycles:
            for x in cycle:
                if not 1 <= x <= d:
                    raise ValueError(f"letter {x} outside 1..{d}")
                if x in seen:
                    raise ValueError(f"letter {x} repeated; cycles are not a bijection")
                seen.add(x)
            for i, x in enumerate(cycle):
                images[x - 1] = cycle[(i + 1) % len(cycle)] - 1
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, d: int) -> "Perm":
        """Parse cycle notation such as ``(1 3)(2 5)(4 6)`` or ``()``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text):
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            letters = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if letters:
                cycles.append(letters)
        return cls.from_cycles(cycles, d)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(other.images[y] for y in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest letter."""
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(c + 1 for c in cycle))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)
