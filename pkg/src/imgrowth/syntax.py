"""Text formats: recursion sources and group-element expressions.

Recursion source, one generator per line::

    # comment
    degree: 6                      (optional; needed only if every line uses <>)
    a = <b', 1, b, c', 1, c> (1 3)(2 5)(4 6)
    c = <> (1 2)                   (<> means every section is trivial)

Element expressions::

    a*b^4   ab4   a b^-1   b'   (ab)^2   [c, b^4]   b^c   1

Generator names are matched longest first; digits directly after a name
are an exponent (``ab12`` is ``a*b^12``); ``'`` inverts; ``x^y`` with a
name or bracketed group after ``^`` is the conjugate ``y^-1 x y``;
``[x, y]`` is ``x^-1 y^-1 x y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .perm import Perm
from .selfsim import GroupElement, PresentationError, WreathPresentation, free_reduce

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(PresentationError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


def _inverse(letters):
    return tuple(-s for s in reversed(letters))


@dataclass
class _ElementParser:
    text: str
    names: Sequence[str]
    line: int = 1
    offset: int = 0  # column offset of ``text`` within its line
    pos: int = 0

    def __post_init__(self):
        self._by_length = sorted(self.names, key=len, reverse=True)
        self._index = {n: i + 1 for i, n in enumerate(self.names)}

    def error(self, message):
        raise ParseError(message, self.line, self.offset + self.pos + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        letters = self.product(stop="")
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return free_reduce(letters)

    def product(self, stop):
        out: list[int] = []
        seen_factor = False
        while True:
            ch = self.peek()
            if ch == "" or ch in stop:
                break
            if ch == "*":
                if not seen_factor:
                    self.error("'*' without a left factor")
                self.pos += 1
                if self.peek() in ("", *stop):
                    self.error("'*' without a right factor")
                continue
            out.extend(self.factor())
            seen_factor = True
        if not seen_factor:
            self.error("empty expression")
        return out

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            letters = self.product(stop=")")
            self.expect(")")
            return tuple(letters), False
        if ch == "[":
            self.pos += 1
            x = tuple(self.product(stop=","))
            self.expect(",")
            y = tuple(self.product(stop="]"))
            self.expect("]")
            return _inverse(x) + _inverse(y) + x + y, False
        if ch == "1" and not self._digit_follows():
            self.pos += 1
            return (), False
        for name in self._by_length:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return (self._index[name],), True
        m = _NAME.match(self.text, self.pos)
        if m:
            self.error(f"undeclared generator {m.group(0)!r}")
        self.error(f"unexpected {ch!r}")

    def _digit_follows(self):
        return self.pos + 1 < len(self.text) and self.text[self.pos + 1].isdigit()

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self):
        m = re.compile(r"-?\d+").match(self.text, self.pos)
        if not m:
            self.error("expected an integer exponent")
        self.pos = m.end()
        return int(m.group(0))

    def factor(self):
        letters, named = self.atom()
        # compact exponent directly after a generator name
        if named and self.pos < len(self.text) and self.text[self.pos].isdigit():
            letters = _power(letters, self.integer())
        while True:
            ch = self.peek()
            if ch == "'":
                self.pos += 1
                letters = _inverse(letters)
            elif ch == "^":
                self.pos += 1
                nxt = self.peek()
                if nxt == "-" or nxt.isdigit():
                    letters = _power(letters, self.integer())
                else:
                    conj, _ = self.atom()
                    letters = _inverse(conj) + letters + conj
            else:
                return letters


def _power(letters, k):
    base = letters if k >= 0 else _inverse(letters)
    return tuple(base) * abs(k)


def parse_letters(text: str, names: Sequence[str], line: int = 1, offset: int = 0) -> tuple[int, ...]:
    """Parse an element expression into signed generator letters."""
    return _ElementParser(text, names, line, offset).parse()


def parse_element(text: str, presentation: WreathPresentation) -> GroupElement:
    return GroupElement(presentation, parse_letters(text, presentation.names))


_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*<(.*)>\s*(.*?)\s*$")
_DEGREE = re.compile(r"^\s*degree\s*:\s*(\d+)\s*$")


def parse_presentation(text: str, degree: int | None = None) -> WreathPresentation:
    """Parse a recursion source; see the module docstring for the grammar."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DEGREE.match(line)
        if m:
            declared = int(m.group(1))
            if degree is not None and degree != declared:
                raise ParseError(f"degree {declared} conflicts with {degree}", lineno, 1)
            degree = declared
            continue
        m = _LINE.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'name = <sections> (cycles)'", lineno, col)
        rows.append((lineno, m))
    if not rows:
        raise ParseError("no generators declared", 1, 1)

    names = [m.group(1) for _, m in rows]
    seen = set()
    for lineno, m in rows:
        if m.group(1) in seen:
            raise ParseError(f"generator {m.group(1)!r} declared twice", lineno, m.start(1) + 1)
        seen.add(m.group(1))

    raw_sections = []
    for lineno, m in rows:
        body = m.group(2)
        if not body.strip():
            raw_sections.append(None)
            continue
        parts, start = [], m.start(2)
        depth = 0
        last = 0
        for i, ch in enumerate(body + ","):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append((body[last:i], start + last))
                last = i + 1
        raw_sections.append(parts)
        if degree is None:
            degree = len(parts)
    if degree is None:
        raise ParseError("cannot infer the alphabet size; add a 'degree: N' line", rows[0][0], 1)

    roots, sections = [], []
    for (lineno, m), parts in zip(rows, raw_sections):
        if parts is None:
            secs = [()] * degree
        else:
            if len(parts) != degree:
                raise ParseError(f"{m.group(1)} has {len(parts)} sections, expected {degree}",
                                 lineno, m.start(2) + 1)
            secs = [parse_letters(p, names, lineno, col) for p, col in parts]
        try:
            root = Perm.parse(m.group(3) or "()", degree)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, m.start(3) + 1) from None
        roots.append(root)
        sections.append(secs)
    return WreathPresentation(degree, names, roots, sections)
