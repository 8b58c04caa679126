"""Self-similar groups given by wreath recursions.

Elements are freely reduced words over named generators. Nothing beyond
free reduction is ever applied to a word: relations such as ``c^3 = 1``
must be discovered through :func:`is_trivial`, which decides the word
problem by exploring the finite set of sections of a word.

Conventions
-----------
* The group acts on the right: ``(x v)^g = x^(root g) v^(g|x)``.
* In a product ``g * h`` the left factor acts first, so
  ``(g h)|x = g|x * h|(x^g)``.
* Tree words are tuples of 0-based letters. Their text form is 1-based
  (``"13"``; dotted, ``"1.11.3"``, once the alphabet has more than nine
  letters).
* Level actions index the ``d**n`` words of level ``n`` lexicographically
  with the first letter most significant.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .perm import Perm

DEFAULT_MAX_STATES = 1_000_000
DEFAULT_MAX_POINTS = 2**21


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured resource budget."""


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Limits:
    max_states: int = DEFAULT_MAX_STATES
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self):
        if self.max_states < 1 or self.max_points < 1:
            raise ValueError("budgets must be positive")


DEFAULT_LIMITS = Limits()


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in letters:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def format_word(v: Sequence[int], d: int) -> str:
    if d <= 9:
        return "".join(str(x + 1) for x in v)
    return ".".join(str(x + 1) for x in v)


def parse_word(text: str, d: int) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    parts = text.split(".") if "." in text or d > 9 else list(text)
    try:
        word = tuple(int(p) - 1 for p in parts)
    except ValueError:
        raise ValueError(f"malformed tree word {text!r}") from None
    for x in word:
        if not 0 <= x < d:
            raise ValueError(f"letter {x + 1} outside 1..{d} in {text!r}")
    return word


def words_of_level(d: int, n: int):
    """All level-``n`` words in index order."""
    return itertools.product(range(d), repeat=n)


def word_index(v: Sequence[int], d: int) -> int:
    i = 0
    for x in v:
        i = i * d + x
    return i


def index_word(i: int, d: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        i, out[k] = divmod(i, d)
    return tuple(out)


class WreathPresentation:
    """Generators with root permutations and per-letter section words.

    Sections are stored as signed letter tuples: generator ``i`` is ``i+1``
    and its inverse ``-(i+1)``.
    """

    def __init__(self, degree: int, names: Sequence[str], roots: Sequence[Perm],
                 sections: Sequence[Sequence[Sequence[int]]]):
        if degree < 2:
            raise PresentationError("alphabet must have at least 2 letters")
        if len(set(names)) != len(names):
            raise PresentationError("duplicate generator name")
        if not (len(names) == len(roots) == len(sections)):
            raise PresentationError("names, roots and sections differ in length")
        self.degree = degree
        self.names = tuple(names)
        self._index = {name: i for i, name in enumerate(self.names)}
        k = len(self.names)
        for name, root, secs in zip(self.names, roots, sections):
            if root.degree != degree:
                raise PresentationError(f"root permutation of {name} has degree {root.degree}, expected {degree}")
            if len(secs) != degree:
                raise PresentationError(f"{name} has {len(secs)} sections, expected {degree}")
            for word in secs:
                for s in word:
                    if s == 0 or abs(s) > k:
                        raise PresentationError(f"section of {name} uses an undeclared generator")
        self.roots = tuple(roots)
        self.sections = tuple(tuple(free_reduce(w) for w in secs) for secs in sections)
        # signed letter -> (root images, section per letter)
        self._root: dict[int, tuple[int, ...]] = {}
        self._sec: dict[int, tuple[tuple[int, ...], ...]] = {}
        for i in range(k):
            root = self.roots[i]
            inv = root.inverse()
            self._root[i + 1] = root.images
            self._sec[i + 1] = self.sections[i]
            self._root[-(i + 1)] = inv.images
            # (g^-1)|y = (g|(y^(root^-1)))^-1
            self._sec[-(i + 1)] = tuple(
                tuple(-s for s in reversed(self.sections[i][inv.images[y]])) for y in range(degree))
        self._level_cache: dict[int, dict[int, np.ndarray]] = {}

    # -- construction helpers -------------------------------------------------

    def __repr__(self):
        return f"WreathPresentation(degree={self.degree}, generators={self.names!r})"

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, ())

    def generator(self, name: str) -> "GroupElement":
        try:
            return GroupElement(self, (self._index[name] + 1,))
        except KeyError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def generators(self) -> list["GroupElement"]:
        return [GroupElement(self, (i + 1,)) for i in range(len(self.names))]

    def element(self, text: str) -> "GroupElement":
        from .syntax import parse_element

        return parse_element(text, self)

    def letter_name(self, s: int) -> str:
        return self.names[abs(s) - 1]

    def to_source(self) -> str:
        """Render in the recursion source grammar."""
        lines = [f"degree: {self.degree}"]
        for i, name in enumerate(self.names):
            secs = ", ".join(str(GroupElement(self, w)) for w in self.sections[i])
            root = self.roots[i]
            lines.append(f"{name} = <{secs}> {root if not root.is_identity() else '()'}")
        return "\n".join(lines) + "\n"

    # -- core recursion on letter tuples ----------------------------------------

    def _section_and_image(self, letters: Sequence[int], x: int) -> tuple[tuple[int, ...], int]:
        out: list[int] = []
        for s in letters:
            sec = self._sec[s][x]
            for t in sec:
                if out and out[-1] == -t:
                    out.pop()
                else:
                    out.append(t)
            x = self._root[s][x]
        return tuple(out), x

    def _root_images(self, letters: Sequence[int]) -> tuple[int, ...]:
        images = list(range(self.degree))
        for s in letters:
            r = self._root[s]
            images = [r[y] for y in images]
        return tuple(images)

    def _letter_arrays(self, n: int, max_points: int) -> dict[int, np.ndarray]:
        if self.degree**n > max_points:
            raise BudgetExceeded(f"level {n} has {self.degree**n} words, budget is {max_points}")
        if n in self._level_cache:
            return self._level_cache[n]
        dtype = np.int32 if self.degree**n < 2**31 else np.int64
        if n == 0:
            arrays = {s: np.zeros(1, dtype=dtype) for s in self._root}
        else:
            prev = self._letter_arrays(n - 1, max_points)
            block = self.degree ** (n - 1)
            base = np.arange(block, dtype=dtype)
            arrays = {}
            for i in range(len(self.names)):
                arr = np.empty(self.degree * block, dtype=dtype)
                for x in range(self.degree):
                    sub = base
                    for s in self.sections[i][x]:
                        sub = prev[s][sub]
                    arr[x * block:(x + 1) * block] = self.roots[i].images[x] * block + sub
                inv = np.empty_like(arr)
                inv[arr] = np.arange(arr.size, dtype=dtype)
                arrays[i + 1] = arr
                arrays[-(i + 1)] = inv
        self._level_cache[n] = arrays
        return arrays


@dataclass(frozen=True)
class GroupElement:
    """A freely reduced word; compare group equality with :func:`equal`."""

    presentation: WreathPresentation = field(repr=False)
    letters: tuple[int, ...]

    def __post_init__(self):
        reduced = free_reduce(self.letters)
        if reduced != self.letters:
            object.__setattr__(self, "letters", reduced)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.presentation, tuple(-s for s in reversed(self.letters)))

    def __invert__(self) -> "GroupElement":
        return self.inverse()

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        return GroupElement(self.presentation, base.letters * abs(k))

    def conjugate(self, g: "GroupElement") -> "GroupElement":
        """``self^g = g^-1 self g``."""
        return g.inverse() * self * g

    def commutator(self, other: "GroupElement") -> "GroupElement":
        """``[self, other] = self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    def __len__(self):
        return len(self.letters)

    def is_identity_word(self) -> bool:
        return not self.letters

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for s, run in itertools.groupby(self.letters):
            k = len(list(run))
            name = self.presentation.letter_name(s)
            e = k if s > 0 else -k
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.presentation is not h.presentation:
        raise PresentationError("elements belong to different presentations")
    return GroupElement(g.presentation, g.letters + h.letters)


def root_perm(g: GroupElement) -> Perm:
    return Perm(g.presentation._root_images(g.letters))


def section(g: GroupElement, x: int) -> GroupElement:
    """Section of ``g`` at the 0-based letter ``x``."""
    pres = g.presentation
    if not 0 <= x < pres.degree:
        raise ValueError(f"letter {x + 1} outside 1..{pres.degree}")
    sec, _ = pres._section_and_image(g.letters, x)
    return GroupElement(pres, sec)


def section_at(g: GroupElement, v: Sequence[int]) -> GroupElement:
    for x in v:
        g = section(g, x)
    return g


def act(g: GroupElement, v: Sequence[int]) -> tuple[int, ...]:
    """Image ``v^g`` of a tree word."""
    pres = g.presentation
    letters = g.letters
    out = []
    for x in v:
        if not 0 <= x < pres.degree:
            raise ValueError(f"letter {x + 1} outside 1..{pres.degree}")
        letters, y = pres._section_and_image(letters, x)
        out.append(y)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class LevelAction:
    """Permutation of the level-``n`` words as an index array."""

    level: int
    degree: int
    images: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, LevelAction):
            return NotImplemented
        return (self.level, self.degree) == (other.level, other.degree) and np.array_equal(self.images, other.images)

    __hash__ = None

    def __len__(self):
        return self.images.size

    def image(self, v: Sequence[int]) -> tuple[int, ...]:
        return index_word(int(self.images[word_index(v, self.degree)]), self.degree, self.level)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.images.size)))

    def then(self, other: "LevelAction") -> "LevelAction":
        """Apply ``self`` first, then ``other``."""
        return LevelAction(self.level, self.degree, other.images[self.images])

    def fingerprint(self) -> str:
        return fingerprint(self.images)

    def cycle_lengths(self) -> list[int]:
        seen = np.zeros(self.images.size, dtype=bool)
        images = self.images.tolist()
        lengths = []
        for start in range(len(images)):
            if seen[start]:
                continue
            k = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = images[x]
                k += 1
            lengths.append(k)
        return lengths

    def order(self) -> int:
        return math.lcm(1, *set(self.cycle_lengths()))

    def prefix_action(self) -> "LevelAction":
        """Induced action on level ``n - 1``."""
        if self.level == 0:
            raise ValueError("level 0 has no parent level")
        parents = self.images[:: self.degree] // self.degree
        return LevelAction(self.level - 1, self.degree, parents)


def fingerprint(images: np.ndarray) -> str:
    """128-bit BLAKE2b digest of the little-endian uint32 image array."""
    data = np.ascontiguousarray(images, dtype="<u4").tobytes()
    return hashlib.blake2b(data, digest_size=16).hexdigest()


def _level_images(pres: WreathPresentation, letters: Sequence[int], n: int, max_points: int) -> np.ndarray:
    arrays = pres._letter_arrays(n, max_points)
    idx = np.arange(pres.degree**n, dtype=arrays[next(iter(arrays))].dtype if arrays else np.int64)
    for s in letters:
        idx = arrays[s][idx]
    return idx


def level_action(g: GroupElement, n: int, limits: Limits = DEFAULT_LIMITS) -> LevelAction:
    if n < 0:
        raise ValueError("level must be non-negative")
    pres = g.presentation
    if not pres.names:
        if pres.degree**n > limits.max_points:
            raise BudgetExceeded(f"level {n} exceeds point budget {limits.max_points}")
        return LevelAction(n, pres.degree, np.arange(pres.degree**n))
    return LevelAction(n, pres.degree, _level_images(pres, g.letters, n, limits.max_points))


# -- word problem --------------------------------------------------------------

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
EQUAL = "equal"
DISTINCT = "distinct"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Decision:
    """Outcome of a triviality or equality test.

    ``witness`` is a tree word moved by the element (or on which two
    elements differ); it is only set for a negative answer.
    """

    status: str
    witness: tuple[int, ...] | None = None
    states: int = 0

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE


def is_trivial(g: GroupElement, limits: Limits = DEFAULT_LIMITS) -> Decision:
    """Decide ``g == 1`` by breadth-first closure under sections.

    The element is trivial exactly when every reachable section has the
    identity root permutation. Breadth-first order makes the returned
    witness a moved word of the least level discovered.
    """
    pres = g.presentation
    if not g.letters:
        return Decision(TRIVIAL, states=1)
    d = pres.degree
    seen = {g.letters}
    queue = deque([(g.letters, ())])
    while queue:
        word, path = queue.popleft()
        children = []
        for x in range(d):
            sec, y = pres._section_and_image(word, x)
            if y != x:
                return Decision(NONTRIVIAL, path + (x,), len(seen))
            children.append(sec)
        for x, sec in enumerate(children):
            if sec and sec not in seen:
                if len(seen) >= limits.max_states:
                    return Decision(INCONCLUSIVE, states=len(seen))
                seen.add(sec)
                queue.append((sec, path + (x,)))
    return Decision(TRIVIAL, states=len(seen))


def equal(g: GroupElement, h: GroupElement, limits: Limits = DEFAULT_LIMITS) -> Decision:
    res = is_trivial(g * h.inverse(), limits)
    status = {TRIVIAL: EQUAL, NONTRIVIAL: DISTINCT}.get(res.status, INCONCLUSIVE)
    return Decision(status, res.witness, res.states)


# -- order ---------------------------------------------------------------------


@dataclass(frozen=True)
class InfiniteOrderCertificate:
    """``element**exponent`` fixes ``word`` and its section there is ``target``.

    In the direct form ``target`` equals ``element`` and the action of
    ``element`` on ``parity_level`` has an order sharing a prime factor
    with ``exponent``; then no finite order is possible. In the chained
    form ``via`` certifies that ``target`` has infinite order, which
    forces the same for ``element``.
    """

    element: GroupElement
    exponent: int
    word: tuple[int, ...]
    target: GroupElement
    parity_level: int | None = None
    parity_order: int | None = None
    via: "InfiniteOrderCertificate | None" = None

    def to_dict(self) -> dict:
        d = self.element.presentation.degree
        out = {
            "element": str(self.element),
            "exponent": self.exponent,
            "word": format_word(self.word, d),
            "section": str(self.target),
        }
        if self.via is None:
            out["parity_level"] = self.parity_level
            out["parity_order"] = self.parity_order
        else:
            out["via"] = self.via.to_dict()
        return out


@dataclass(frozen=True)
class OrderResult:
    status: str  # "finite", "infinite" or "unknown"
    order: int | None = None
    certificate: InfiniteOrderCertificate | None = None
    note: str = ""


def _probe_level(d: int, points: int) -> int:
    n = 1
    while d ** (n + 1) <= points:
        n += 1
    return n


def order(g: GroupElement, k_max: int = 64, limits: Limits = DEFAULT_LIMITS,
          e_max: int = 4, depth_max: int = 2) -> OrderResult:
    """Least ``k <= k_max`` with ``g**k == 1``, else try an infinite-order certificate.

    Exponents that are not multiples of the order of a small level action
    are skipped; such powers move a word of that level.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    pres = g.presentation
    level = _probe_level(pres.degree, min(limits.max_points, 5000))
    step = level_action(g, level, limits).order()
    inconclusive = False
    for k in range(step, k_max + 1, step):
        res = is_trivial(g**k, limits)
        if res.status == TRIVIAL:
            if inconclusive:
                return OrderResult("unknown", note=f"g^{k} is trivial but a smaller power was inconclusive")
            return OrderResult("finite", k)
        if res.status == INCONCLUSIVE:
            inconclusive = True
    cert = infinite_order_certificate(g, e_max, depth_max, limits)
    if cert is not None:
        return OrderResult("infinite", certificate=cert)
    return OrderResult("unknown", note=f"no power up to {k_max} is trivial and no certificate was found")


def _parity_witness(g: GroupElement, e: int, limits: Limits, max_level: int = 4) -> tuple[int, int] | None:
    pres = g.presentation
    top = min(max_level, _probe_level(pres.degree, min(limits.max_points, 50_000)))
    for n in range(1, top + 1):
        r = level_action(g, n, limits).order()
        if math.gcd(r, e) > 1:
            return n, r
    return None


def _same_element(g: GroupElement, h: GroupElement, limits: Limits) -> bool:
    if g.letters == h.letters:
        return True
    pres = g.presentation
    n = _probe_level(pres.degree, min(limits.max_points, 2000))
    if level_action(g, n, limits) != level_action(h, n, limits):
        return False
    return equal(g, h, limits).status == EQUAL


def _direct_certificate(g: GroupElement, e_max: int, depth_max: int, limits: Limits):
    d = g.presentation.degree
    for e in range(2, e_max + 1):
        power = g**e
        parity = None
        for n in range(1, depth_max + 1):
            for v in words_of_level(d, n):
                if act(power, v) != v:
                    continue
                target = section_at(power, v)
                if not _same_element(target, g, limits):
                    continue
                if parity is None:
                    parity = _parity_witness(g, e, limits) or ()
                if parity:
                    return InfiniteOrderCertificate(g, e, v, target, parity[0], parity[1])
    return None


def infinite_order_certificate(g: GroupElement, e_max: int = 4, depth_max: int = 2,
                               limits: Limits = DEFAULT_LIMITS) -> InfiniteOrderCertificate | None:
    """Search for a section-fixpoint proof that ``g`` has infinite order.

    Returns ``None`` when ``g`` is trivial (or not provably nontrivial) or
    no certificate exists within the search bounds.
    """
    if is_trivial(g, limits).status != NONTRIVIAL:
        return None
    cert = _direct_certificate(g, e_max, depth_max, limits)
    if cert is not None:
        return cert
    d = g.presentation.degree
    for e in range(1, e_max + 1):
        power = g**e
        for n in range(1, depth_max + 1):
            for v in words_of_level(d, n):
                if act(power, v) != v:
                    continue
                target = section_at(power, v)
                if not target.letters or _same_element(target, g, limits):
                    continue
                if is_trivial(target, limits).status != NONTRIVIAL:
                    continue
                sub = _direct_certificate(target, e_max, depth_max, limits)
                if sub is not None:
                    return InfiniteOrderCertificate(g, e, v, target, via=sub)
    return None


def check_certificate(cert: InfiniteOrderCertificate, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Re-verify a certificate from scratch."""
    g = cert.element
    if is_trivial(g, limits).status != NONTRIVIAL:
        return False
    power = g**cert.exponent
    if act(power, cert.word) != tuple(cert.word):
        return False
    if equal(section_at(power, cert.word), cert.target, limits).status != EQUAL:
        return False
    if cert.via is None:
        if cert.exponent < 2 or equal(cert.target, g, limits).status != EQUAL:
            return False
        if cert.parity_level is None:
            return False
        r = level_action(g, cert.parity_level, limits).order()
        return r == cert.parity_order and math.gcd(r, cert.exponent) > 1
    if cert.via.element.letters != cert.target.letters and \
            equal(cert.via.element, cert.target, limits).status != EQUAL:
        return False
    return check_certificate(cert.via, limits)
