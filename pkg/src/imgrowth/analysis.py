"""Schreier graphs, growth census, free-semigroup certificates, identities."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .perm import Perm
from .selfsim import (
    DEFAULT_LIMITS,
    EQUAL,
    NONTRIVIAL,
    BudgetExceeded,
    GroupElement,
    Limits,
    act,
    equal,
    fingerprint,
    format_word,
    index_word,
    infinite_order_certificate,
    is_trivial,
    level_action,
    root_perm,
    section,
    section_at,
    words_of_level,
)


def _named(gens) -> list[tuple[str, GroupElement]]:
    if isinstance(gens, Mapping):
        return list(gens.items())
    return [(str(g), g) for g in gens]


# -- Schreier graphs -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SchreierGraph:
    level: int
    degree: int
    labels: tuple[str, ...]
    images: tuple[np.ndarray, ...]  # one index array per label

    @property
    def size(self) -> int:
        return self.degree**self.level

    def vertices(self) -> list[str]:
        return [format_word(v, self.degree) for v in words_of_level(self.degree, self.level)]

    def edges(self):
        """``(source, label, target)`` triples in vertex-then-label order."""
        names = self.vertices()
        for i in range(self.size):
            for label, arr in zip(self.labels, self.images):
                yield names[i], label, names[int(arr[i])]

    def components(self) -> int:
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for arr in self.images:
            for i, j in enumerate(arr.tolist()):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
        return sum(1 for i in range(self.size) if find(i) == i)

    def quotient(self) -> "SchreierGraph":
        """The graph one level up, via the prefix map."""
        if self.level == 0:
            raise ValueError("level 0 has no parent")
        return SchreierGraph(self.level - 1, self.degree, self.labels,
                             tuple(arr[:: self.degree] // self.degree for arr in self.images))


def schreier_graph(gens, n: int, limits: Limits = DEFAULT_LIMITS, degree: int | None = None) -> SchreierGraph:
    named = _named(gens)
    if not named and degree is None:
        raise ValueError("degree is required for an empty generator list")
    d = degree if degree is not None else named[0][1].presentation.degree
    if n < 0:
        raise ValueError("level must be non-negative")
    if d**n > limits.max_points:
        raise BudgetExceeded(f"level {n} has {d ** n} vertices, budget is {limits.max_points}")
    return SchreierGraph(n, d, tuple(name for name, _ in named),
                         tuple(level_action(g, n, limits).images for _, g in named))


def export_dot(graph: SchreierGraph, name: str = "schreier") -> str:
    lines = [f"digraph {name} {{"]
    for v in graph.vertices():
        lines.append(f'  "{v}";')
    for src, label, dst in graph.edges():
        lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(graph: SchreierGraph) -> dict:
    return {
        "level": graph.level,
        "degree": graph.degree,
        "vertices": graph.vertices(),
        "edges": [list(e) for e in graph.edges()],
    }


def level_transitive(gens, n: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    return schreier_graph(gens, n, limits).components() == 1


# -- recurrence ----------------------------------------------------------------


@dataclass(frozen=True)
class RecurrenceReport:
    letter: int
    sections: tuple[GroupElement, ...]
    expressed: dict  # generator name -> expression over the sections, or None
    generates: bool

    def to_dict(self) -> dict:
        return {
            "letter": self.letter + 1,
            "sections": [str(s) for s in self.sections],
            "expressed": {k: (None if v is None else str(v)) for k, v in self.expressed.items()},
            "generates": self.generates,
        }


def recurrence_witness(presentation, x: int, witnesses: Sequence[GroupElement], max_length: int = 4,
                       limits: Limits = DEFAULT_LIMITS) -> RecurrenceReport:
    """Sections at letter ``x`` (0-based) of stabilizer elements, and whether
    short products of them and their inverses reach every generator."""
    for w in witnesses:
        if act(w, (x,)) != (x,):
            raise ValueError(f"{w} moves letter {x + 1}")
    secs = tuple(section(w, x) for w in witnesses)
    alphabet = [s for s in secs if s.letters]
    alphabet += [s.inverse() for s in alphabet]
    probe = 2
    targets = {name: g for name, g in zip(presentation.names, presentation.generators())}
    target_fp = {name: level_action(g, probe, limits).fingerprint() for name, g in targets.items()}
    expressed: dict = {name: None for name in targets}
    frontier = [presentation.identity]
    for _ in range(max_length):
        if all(v is not None for v in expressed.values()):
            break
        nxt = []
        for word in frontier:
            for s in alphabet:
                prod = word * s
                fp = level_action(prod, probe, limits).fingerprint()
                for name, g in targets.items():
                    if expressed[name] is None and fp == target_fp[name] \
                            and equal(prod, g, limits).status == EQUAL:
                        expressed[name] = prod
                nxt.append(prod)
        frontier = nxt
    return RecurrenceReport(x, secs, expressed, all(v is not None for v in expressed.values()))


# -- growth census ---------------------------------------------------------------


@dataclass(frozen=True)
class BallCensusReport:
    generators: tuple[str, ...]
    level: int
    radius: int  # radius actually reached
    counts: tuple[int, ...]
    complete: bool = True

    def to_dict(self) -> dict:
        return {"generators": list(self.generators), "level": self.level, "radius": self.radius,
                "counts": list(self.counts), "complete": self.complete}


def ball_census(S: Sequence[GroupElement], n: int, R: int, max_elements: int = 1_000_000,
                limits: Limits = DEFAULT_LIMITS) -> BallCensusReport:
    """Sizes of the balls of radius ``r <= R`` in the level-``n`` quotient,
    for the symmetrized generating set ``S ∪ S^-1``."""
    if not S:
        raise ValueError("generator set must be nonempty")
    sym = []
    for g in S:
        sym.append(level_action(g, n, limits).images)
        sym.append(level_action(g.inverse(), n, limits).images)
    ident = np.arange(S[0].presentation.degree**n, dtype=sym[0].dtype)
    seen = {fingerprint(ident)}
    frontier = [ident]
    counts = [1]
    for r in range(1, R + 1):
        nxt = []
        for arr in frontier:
            for s in sym:
                prod = s[arr]  # arr first, then s
                fp = fingerprint(prod)
                if fp not in seen:
                    seen.add(fp)
                    nxt.append(prod)
            if len(seen) > max_elements:
                return BallCensusReport(tuple(map(str, S)), n, r - 1, tuple(counts), complete=False)
        counts.append(len(seen))
        frontier = nxt
    return BallCensusReport(tuple(map(str, S)), n, R, tuple(counts))


# -- free semigroups ---------------------------------------------------------------


def semigroup_words(k: int, N: int):
    """Nonempty words of length <= N over ``range(k)``, shortlex order."""
    for length in range(1, N + 1):
        yield from itertools.product(range(k), repeat=length)


def _product(S, word):
    g = S[0].presentation.identity
    for i in word:
        g = g * S[i]
    return g


@dataclass(frozen=True)
class FreeSemigroupCertificate:
    generators: tuple[GroupElement, ...]
    max_length: int
    level: int
    fingerprints: dict  # semigroup word (tuple of indices) -> hex digest
    probes: tuple[tuple[int, ...], ...]  # level-n tree words separating all words and the identity

    @property
    def word_count(self) -> int:
        return len(self.fingerprints)

    def to_dict(self) -> dict:
        d = self.generators[0].presentation.degree
        return {
            "status": "certified",
            "generators": [str(g) for g in self.generators],
            "max_length": self.max_length,
            "level": self.level,
            "words": self.word_count,
            "probes": [format_word(v, d) for v in self.probes],
        }


@dataclass(frozen=True)
class CounterexamplePair:
    generators: tuple[GroupElement, ...]
    first: tuple[int, ...]
    second: tuple[int, ...]  # may be empty: the identity

    def to_dict(self) -> dict:
        def show(w):
            return "*".join(f"({self.generators[i]})" for i in w) or "1"

        return {"status": "counterexample", "first": show(self.first), "second": show(self.second)}


@dataclass(frozen=True)
class FreeSemigroupInconclusive:
    reason: str

    def to_dict(self) -> dict:
        return {"status": "inconclusive", "reason": self.reason}


def default_start_level(N: int) -> int:
    """Least ``n`` with ``2**(n - 3) > N``."""
    n = 3
    while 2 ** (n - 3) <= N:
        n += 1
    return n


def _level_arrays(S, n, limits):
    return [level_action(g, n, limits).images for g in S]


def _enumerate(gens_arrays, N):
    """Depth-first (word, array) pairs over the prefix tree."""
    ident = np.arange(gens_arrays[0].size, dtype=gens_arrays[0].dtype)
    stack = [((), ident)]
    while stack:
        word, arr = stack.pop()
        if word:
            yield word, arr
        if len(word) < N:
            for i in reversed(range(len(gens_arrays))):
                stack.append((word + (i,), gens_arrays[i][arr]))


def _array_of(gens_arrays, word):
    arr = np.arange(gens_arrays[0].size, dtype=gens_arrays[0].dtype)
    for i in word:
        arr = gens_arrays[i][arr]
    return arr


def certify_free_semigroup(S: Sequence[GroupElement], N: int, n_start: int | None = None,
                           n_max: int = 10, limits: Limits = DEFAULT_LIMITS, seed: int = 0,
                           candidates: int = 256):
    """Prove that all nonempty positive words of length <= N over ``S`` are
    pairwise distinct and nontrivial, using one finite level of the tree."""
    if not S or N < 1:
        raise ValueError("need a nonempty generator list and N >= 1")
    S = tuple(S)
    d = S[0].presentation.degree
    n = default_start_level(N) if n_start is None else n_start
    top = n_max
    while top > 0 and d**top > limits.max_points:
        top -= 1
    if n > top:
        # too big to start where the heuristic says; use what the budget allows
        n = top
    last_reason = "no level tried"
    while n <= top:
        arrays = _level_arrays(S, n, limits)
        ident = np.arange(d**n, dtype=arrays[0].dtype)
        id_fp = fingerprint(ident)
        seen: dict[str, tuple[int, ...]] = {id_fp: ()}
        clash = None
        for word, arr in _enumerate(arrays, N):
            fp = fingerprint(arr)
            other = seen.get(fp)
            if other is not None and np.array_equal(_array_of(arrays, other), arr):
                clash = (other, word)
                break
            seen.setdefault(fp, word)
        if clash is None:
            del seen[id_fp]
            fps = {w: f for f, w in seen.items()}
            if len(fps) == _word_count(len(S), N):
                probes = _separating_probes(arrays, list(fps), d, n, seed, candidates)
                return FreeSemigroupCertificate(S, N, n, dict(sorted(fps.items(), key=lambda kv: (len(kv[0]), kv[0]))), probes)
            last_reason = "hash collision between distinct arrays"  # pragma: no cover
        else:
            first, second = clash
            res = equal(_product(S, second), _product(S, first), limits)
            if res.status == EQUAL:
                return CounterexamplePair(S, second, first)
            last_reason = f"words agree up to level {n}"
        n += 1
    return FreeSemigroupInconclusive(f"{last_reason}; level budget {top} exhausted")


def _word_count(k, N):
    return sum(k**m for m in range(1, N + 1))


def _separating_probes(arrays, words, d, n, seed, candidates):
    """A small set of level-n vertices on which the images separate every
    word from every other word and from the identity."""
    size = d**n
    rng = random.Random(seed)
    cand = sorted(rng.sample(range(size), min(candidates, size)))
    idx = np.array(cand, dtype=np.int64)
    table = np.empty((len(words) + 1, len(cand)), dtype=np.int64)
    table[0] = idx
    for row, w in enumerate(words, start=1):
        table[row] = _array_of(arrays, w)[idx]
    classes = [list(range(len(words) + 1))]
    chosen: list[int] = []
    while any(len(c) > 1 for c in classes):
        best, best_classes = None, None
        for j in range(len(cand)):
            refined = []
            for c in classes:
                groups: dict[int, list[int]] = {}
                for r in c:
                    groups.setdefault(int(table[r, j]), []).append(r)
                refined.extend(groups.values())
            if best_classes is None or len(refined) > len(best_classes):
                best, best_classes = j, refined
        if best is None or len(best_classes) == len(classes):
            break
        chosen.append(cand[best])
        classes = best_classes
    probes = set(chosen)
    # fallback: pairs still together get the first vertex where they differ
    for c in classes:
        for r1, r2 in itertools.combinations(c, 2):
            a1 = np.arange(size) if r1 == 0 else _array_of(arrays, words[r1 - 1])
            a2 = _array_of(arrays, words[r2 - 1])
            probes.add(int(np.flatnonzero(a1 != a2)[0]))
    return tuple(index_word(i, d, n) for i in sorted(probes))


def check_free_semigroup_certificate(cert: FreeSemigroupCertificate) -> bool:
    """Recompute probe images with the tree action and check separation."""
    S = cert.generators
    seen = {tuple(cert.probes)}
    for word in semigroup_words(len(S), cert.max_length):
        g = _product(S, word)
        key = tuple(act(g, v) for v in cert.probes)
        if key in seen:
            return False
        seen.add(key)
    return len(seen) == _word_count(len(S), cert.max_length) + 1


# -- identities ------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCheck:
    description: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class IdentityReport:
    lhs: str
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "passed": self.passed,
                "checks": [{"check": c.description, "passed": c.passed, **({"detail": c.detail} if c.detail else {})}
                           for c in self.checks]}


def verify_identity(lhs: GroupElement, root: Perm | None = None,
                    sections: Mapping[int, GroupElement] | None = None,
                    limits: Limits = DEFAULT_LIMITS) -> IdentityReport:
    """Check ``lhs`` against a partial pattern ``<s_1, ..., s_d> root``.

    ``sections`` maps 0-based letters to expected sections; letters not
    listed are unconstrained.
    """
    checks = []
    d = lhs.presentation.degree
    if root is not None:
        actual = root_perm(lhs)
        checks.append(IdentityCheck(f"root = {root}", actual == root, "" if actual == root else f"root is {actual}"))
    for x, expected in sorted((sections or {}).items()):
        res = equal(section(lhs, x), expected, limits)
        detail = "" if res.status == EQUAL else res.status
        checks.append(IdentityCheck(f"section at {format_word((x,), d)} = {expected}", res.status == EQUAL, detail))
    return IdentityReport(str(lhs), tuple(checks))


def check_named_identity(pres, record: Mapping, limits: Limits = DEFAULT_LIMITS) -> IdentityReport:
    """Evaluate one identity record.

    Record forms: ``{"lhs", "equals"}``, ``{"lhs", "at", "section"}``,
    ``{"lhs", "root", "sections": {letter: word}}`` and
    ``{"lhs", "infinite_order": true}``.
    """
    from .syntax import parse_element
    from .selfsim import check_certificate, parse_word

    lhs = parse_element(record["lhs"], pres)
    name = record.get("name", record["lhs"])
    if "equals" in record:
        rhs = parse_element(record["equals"], pres)
        res = equal(lhs, rhs, limits)
        detail = "" if res.status == EQUAL else res.status
        return IdentityReport(name, (IdentityCheck(f"{lhs} = {rhs}", res.status == EQUAL, detail),))
    if "at" in record:
        v = parse_word(record["at"], pres.degree)
        rhs = parse_element(record["section"], pres)
        checks = []
        if record.get("fixes", True):
            fixed = act(lhs, v) == v
            checks.append(IdentityCheck(f"fixes {record['at']}", fixed))
        res = equal(section_at(lhs, v), rhs, limits)
        checks.append(IdentityCheck(f"section at {record['at']} = {rhs}", res.status == EQUAL,
                                    "" if res.status == EQUAL else res.status))
        return IdentityReport(name, tuple(checks))
    if "sections" in record:
        root = Perm.parse(record.get("root", "()"), pres.degree) if "root" in record else None
        secs = {int(k) - 1: parse_element(v, pres) for k, v in record["sections"].items()}
        rep = verify_identity(lhs, root, secs, limits)
        return IdentityReport(name, rep.checks)
    if record.get("infinite_order"):
        cert = infinite_order_certificate(lhs, limits=limits)
        ok = cert is not None and check_certificate(cert, limits)
        return IdentityReport(name, (IdentityCheck("infinite order", ok, "" if ok else "no certificate"),))
    raise ValueError(f"unrecognized identity record: {record!r}")
