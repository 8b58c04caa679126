"""Two-tile subdivision rules as combinatorial cell complexes.

A rule describes the 1-complex of a Thurston map on the sphere: the
invariant curve splits the sphere into a white and a black 0-tile, both
``m``-gons with corners ``p_0 .. p_{m-1}`` (counter-clockwise around the
white 0-tile). Each 0-tile is cut into 1-tiles; every 1-tile is an
``m``-gon whose corner ``i`` maps to ``p_i``.

Internally each tile lists its corners in *p-order*: corner ``i`` is the
vertex of type ``p_i``. Counter-clockwise order is p-order for white tiles
and reversed p-order for black tiles. Side ``i`` joins corners ``i`` and
``i+1``; every edge keeps the same side index in both adjacent tiles, and
is directed from its ``p_i`` end to its ``p_{i+1}`` end.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

WHITE = "white"
BLACK = "black"


class RuleError(ValueError):
    """A subdivision rule violates one or more structural invariants."""

    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)


@dataclass(frozen=True)
class RuleTile:
    name: str
    color: str
    face: str  # color of the 0-tile that contains this 1-tile
    corners: tuple[str, ...]  # counter-clockwise, as given


@dataclass
class SubdivisionRule:
    post_labels: tuple[str, ...]
    degree: int
    gluing: tuple[tuple[str, ...], ...]  # vertices along 0-edge i, from p_i to p_{i+1}
    vertex_images: dict
    white_tiles: tuple[RuleTile, ...]
    black_tiles: tuple[RuleTile, ...]
    invariant_edges: tuple[tuple[str, str], ...] = ()
    generators: dict = field(default_factory=dict)  # generator name -> post label
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.post_labels)

    @property
    def tiles(self) -> tuple[RuleTile, ...]:
        return self.white_tiles + self.black_tiles

    def post_index(self, label: str) -> int:
        return self.post_labels.index(label)

    def edge_index(self, p: str, q: str) -> int:
        """Index ``i`` of the 0-edge joining ``p`` and ``q``."""
        i, j = self.post_index(p), self.post_index(q)
        m = self.m
        if (i + 1) % m == j:
            return i
        if (j + 1) % m == i:
            return j
        raise ValueError(f"{p} and {q} are not adjacent on the invariant curve")

    # -- serialization --------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping) -> "SubdivisionRule":
        labels = tuple(data["post_labels"])
        gluing = data["gluing"]
        if isinstance(gluing, Mapping):
            gluing = [gluing[f"{labels[i]}|{labels[(i + 1) % len(labels)]}"] for i in range(len(labels))]

        def tiles(key, color):
            return tuple(RuleTile(t["name"], color, t["face"], tuple(t["corners"])) for t in data.get(key, []))

        return cls(
            post_labels=labels,
            degree=int(data["degree"]),
            gluing=tuple(tuple(g) for g in gluing),
            vertex_images=dict(data["vertex_images"]),
            white_tiles=tiles("white_tiles", WHITE),
            black_tiles=tiles("black_tiles", BLACK),
            invariant_edges=tuple(tuple(e) for e in data.get("invariant_edges", [])),
            generators=dict(data.get("generators", {})),
            name=data.get("name", ""),
        )

    def to_dict(self) -> dict:
        def tiles(ts):
            return [{"name": t.name, "face": t.face, "corners": list(t.corners)} for t in ts]

        m = self.m
        return {
            "name": self.name,
            "post_labels": list(self.post_labels),
            "degree": self.degree,
            "gluing": {f"{self.post_labels[i]}|{self.post_labels[(i + 1) % m]}": list(self.gluing[i])
                       for i in range(m)},
            "vertex_images": dict(self.vertex_images),
            "white_tiles": tiles(self.white_tiles),
            "black_tiles": tiles(self.black_tiles),
            "invariant_edges": [list(e) for e in self.invariant_edges],
            "generators": dict(self.generators),
        }

    @classmethod
    def load(cls, path) -> "SubdivisionRule":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# -- face patterns -----------------------------------------------------------------


@dataclass
class _Pattern:
    """The 1-tiles inside one 0-tile, in p-order, with classified sides."""

    tiles: list  # (RuleTile, p-ordered corners, side keys)
    boundary: dict  # vertex -> (edge index, position) for non-corner boundary vertices
    corners: dict  # post label -> index


def _p_order(tile: RuleTile, images: Mapping[str, str], labels: Sequence[str]) -> tuple[str, ...] | None:
    ccw = list(tile.corners)
    seq = ccw if tile.color == WHITE else ccw[::-1]
    try:
        start = next(k for k, v in enumerate(seq) if images.get(v) == labels[0])
    except StopIteration:
        return None
    seq = seq[start:] + seq[:start]
    if [images.get(v) for v in seq] != list(labels):
        return None
    return tuple(seq)


def _build_patterns(rule: SubdivisionRule) -> tuple[dict, list[str]]:
    problems: list[str] = []
    m = rule.m
    labels = rule.post_labels
    corners = {p: i for i, p in enumerate(labels)}
    boundary: dict[str, tuple[int, int]] = {}
    position: dict[tuple[int, str], int] = {}
    if len(rule.gluing) != m:
        problems.append(f"gluing lists {len(rule.gluing)} 0-edges, expected {m}")
    for i, seq in enumerate(rule.gluing[:m]):
        if not seq or seq[0] != labels[i] or seq[-1] != labels[(i + 1) % m]:
            problems.append(f"0-edge {i} must run from {labels[i]} to {labels[(i + 1) % m]}")
            continue
        for k, v in enumerate(seq):
            position[(i, v)] = k
            if 0 < k < len(seq) - 1:
                if v in boundary or v in corners:
                    problems.append(f"vertex {v} appears twice on the invariant curve")
                boundary[v] = (i, k)
    for p in labels:
        if rule.vertex_images.get(p) not in labels:
            problems.append(f"postcritical point {p} must map to a postcritical point")
    patterns = {}
    for face in (WHITE, BLACK):
        entries = []
        for t in rule.tiles:
            if t.face != face:
                continue
            if t.color not in (WHITE, BLACK):
                problems.append(f"tile {t.name} has unknown color {t.color!r}")
                continue
            if len(t.corners) != m:
                problems.append(f"tile {t.name} has {len(t.corners)} corners, expected {m}")
                continue
            order = _p_order(t, rule.vertex_images, labels)
            if order is None:
                problems.append(f"tile {t.name}: corner images do not follow the "
                                f"{'counter-clockwise' if t.color == WHITE else 'reversed'} postcritical order")
                continue
            sides = []
            for j in range(m):
                u, v = order[j], order[(j + 1) % m]
                sides.append(_side_key(u, v, position, m))
            entries.append((t, order, tuple(sides)))
        patterns[face] = _Pattern(entries, boundary, corners)
    return patterns, problems


def _side_key(u, v, position, m):
    for i in range(m):
        ku, kv = position.get((i, u)), position.get((i, v))
        if ku is not None and kv is not None and abs(ku - kv) == 1:
            return ("b", i, min(ku, kv))
    return ("i", frozenset((u, v)))


def validate_rule(rule: SubdivisionRule) -> "RuleReport":
    """Check the structural invariants and report the induced portrait."""
    patterns, problems = _build_patterns(rule)
    whites = [t for t in rule.tiles if t.color == WHITE]
    blacks = [t for t in rule.tiles if t.color == BLACK]
    if len(whites) != rule.degree or len(blacks) != rule.degree:
        problems.append(f"expected {rule.degree} white and {rule.degree} black 1-tiles, "
                        f"found {len(whites)} and {len(blacks)}")
    names = [t.name for t in rule.tiles]
    if len(set(names)) != len(names):
        problems.append("tile names are not unique")
    for face, pat in patterns.items():
        uses: dict = {}
        for t, _, sides in pat.tiles:
            for s in sides:
                uses.setdefault(s, []).append(t)
        for s, ts in uses.items():
            expected = 1 if s[0] == "b" else 2
            if len(ts) != expected:
                problems.append(f"edge {_show_side(s, rule)} in the {face} 0-tile is used by "
                                f"{len(ts)} tiles, expected {expected}")
            elif expected == 2 and ts[0].color == ts[1].color:
                problems.append(f"tiles {ts[0].name} and {ts[1].name} share an edge and are both "
                                f"{ts[0].color}: color alternation fails")
        for i, seq in enumerate(rule.gluing):
            for k in range(len(seq) - 1):
                if ("b", i, k) not in uses:
                    problems.append(f"boundary segment {seq[k]}-{seq[k + 1]} has no tile in the {face} 0-tile")
    for t in rule.tiles:
        if t.face not in (WHITE, BLACK):
            problems.append(f"tile {t.name} has unknown face {t.face!r}")
    portrait = None
    if not problems:
        try:
            cx = subdivide(rule, 1)
        except RuleError as exc:
            problems.extend(exc.problems)
        else:
            problems.extend(cx.check())
            portrait = {v: (rule.vertex_images[v], cx.flower(v).degree) for v in sorted(cx.vertices, key=str)}
            for p in rule.post_labels:
                if p not in cx.vertices:
                    problems.append(f"postcritical point {p} is not a 1-vertex")
            total = {}
            for v, (img, deg) in portrait.items():
                total[img] = total.get(img, 0) + deg
            for p in rule.post_labels:
                if total.get(p, 0) != rule.degree:
                    problems.append(f"local degrees over {p} sum to {total.get(p, 0)}, expected {rule.degree}")
    for gname, label in rule.generators.items():
        if label not in rule.post_labels:
            problems.append(f"generator {gname} is attached to unknown point {label}")
    return RuleReport(not problems, tuple(problems), portrait)


def _show_side(s, rule):
    if s[0] == "b":
        seq = rule.gluing[s[1]]
        return f"{seq[s[2]]}-{seq[s[2] + 1]}"
    return "-".join(sorted(s[1]))


@dataclass(frozen=True)
class RuleReport:
    valid: bool
    problems: tuple[str, ...]
    portrait: dict | None  # 1-vertex -> (image, local degree)

    def to_dict(self) -> dict:
        out = {"valid": self.valid, "problems": list(self.problems)}
        if self.portrait is not None:
            out["portrait"] = {v: {"to": img, "deg": deg} for v, (img, deg) in self.portrait.items()}
        return out


# -- complexes -------------------------------------------------------------------


@dataclass(frozen=True)
class Tile:
    key: tuple  # (color of the level-0 ancestor, path of rule-tile names)
    color: str
    corners: tuple  # vertex ids in p-order
    sides: tuple  # edge ids; side i joins corners i and i+1

    @property
    def path(self) -> tuple[str, ...]:
        return self.key[1]

    @property
    def level(self) -> int:
        return len(self.key[1])

    def label(self) -> str:
        return "/".join(self.path) if self.path else self.key[0]

    def ccw_corners(self) -> tuple:
        return self.corners if self.color == WHITE else self.corners[::-1]

    def outgoing(self, j: int):
        """Edge leaving corner ``j`` along the counter-clockwise boundary."""
        m = len(self.corners)
        return self.sides[j] if self.color == WHITE else self.sides[(j - 1) % m]

    def incoming(self, j: int):
        m = len(self.corners)
        return self.sides[(j - 1) % m] if self.color == WHITE else self.sides[j]


@dataclass(frozen=True)
class Flower:
    center: object
    tiles: tuple  # tile keys, counter-clockwise
    edges: tuple  # edge ids leaving the center, edges[k] = outgoing edge of tiles[k]

    @property
    def degree(self) -> int:
        return len(self.tiles) // 2


def vertex_name(v) -> str:
    if isinstance(v, str):
        return v
    if v[0] == "v":  # vertex inside an edge
        return f"{_edge_name(v[1])}.{v[2]}"
    key, local = v
    return f"{_tile_key_name(key)}:{local}"


def _tile_key_name(key) -> str:
    return "/".join(key[1]) if key[1] else key[0]


def _edge_name(e) -> str:
    if isinstance(e, str):
        return e
    if e[0] == "e":
        return f"{_edge_name(e[1])}.{e[2]}"
    key, pair = e[1], e[2]
    return f"{_tile_key_name(key)}:{'~'.join(sorted(pair))}"


class CellComplex:
    """Level-``n`` tiling with a rotation system derived from tile boundaries."""

    def __init__(self, rule: SubdivisionRule, level: int, tiles: dict, vertices: dict, edges: dict, lineage: dict):
        self.rule = rule
        self.level = level
        self.tiles = tiles  # key -> Tile
        self.vertices = vertices  # id -> post label (image under the level-th iterate)
        self.edges = edges  # id -> (start, end, side index)
        self.lineage = lineage  # edge id -> parent edge id (None at level 0)
        self._out = None

    # counts -------------------------------------------------------------------
    def counts(self) -> dict:
        return {"V": len(self.vertices), "E": len(self.edges), "F": len(self.tiles)}

    def euler(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.tiles)

    def white_tiles(self) -> list[Tile]:
        return sorted((t for t in self.tiles.values() if t.color == WHITE), key=lambda t: t.key)

    # rotation system ------------------------------------------------------------
    def _outgoing_map(self):
        if self._out is None:
            out = {}
            for t in self.tiles.values():
                for j, v in enumerate(t.corners):
                    out[(v, t.outgoing(j))] = (t.key, j)
            self._out = out
        return self._out

    def next_ccw(self, key, v):
        t = self.tiles[key]
        j = t.corners.index(v)
        return self._outgoing_map()[(v, t.incoming(j))][0]

    def flower(self, v) -> Flower:
        if v not in self.vertices:
            raise KeyError(f"unknown vertex {vertex_name(v)}")
        out = self._outgoing_map()
        self._index_stars()
        start = self._star[v]
        keys, edges = [], []
        key, j = start
        while True:
            t = self.tiles[key]
            keys.append(key)
            edges.append(t.outgoing(j))
            key, j = out[(v, t.incoming(j))]
            if key == start[0] and j == start[1]:
                break
            if len(keys) > 4 * len(self.tiles):  # pragma: no cover - malformed complex
                raise RuntimeError("rotation system does not close")
        return Flower(v, tuple(keys), tuple(edges))

    def _index_stars(self):
        if not hasattr(self, "_star"):
            star = {}
            for (v, _), k in self._outgoing_map().items():
                star.setdefault(v, k)
            self._star = star

    def flowers(self) -> dict:
        return {v: self.flower(v) for v in self.vertices}

    def check(self) -> list[str]:
        """Structural invariants: Euler characteristic, edge usage, alternation."""
        problems = []
        if self.euler() != 2:
            problems.append(f"Euler characteristic is {self.euler()}, expected 2")
        expected = 2 * self.rule.degree**self.level
        if len(self.tiles) != expected:
            problems.append(f"{len(self.tiles)} tiles, expected {expected}")
        uses: dict = {}
        for t in self.tiles.values():
            for e in t.sides:
                uses.setdefault(e, []).append(t)
        for e, ts in uses.items():
            if len(ts) != 2:
                problems.append(f"edge {_edge_name(e)} borders {len(ts)} tiles")
            elif ts[0].color == ts[1].color:
                problems.append(f"edge {_edge_name(e)} separates two {ts[0].color} tiles")
        if problems:
            return problems
        seen = 0
        for v, fl in self.flowers().items():
            colors = [self.tiles[k].color for k in fl.tiles]
            seen += len(colors)
            if len(colors) % 2 or any(colors[i] == colors[(i + 1) % len(colors)] for i in range(len(colors))):
                problems.append(f"colors do not alternate around {vertex_name(v)}")
        corners = sum(len(t.corners) for t in self.tiles.values())
        if seen != corners:
            problems.append("some vertex has more than one flower: the complex is not a surface")
        return problems

    def corner_of_type(self, t: Tile, label: str):
        return t.corners[self.rule.post_index(label)]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "counts": self.counts(),
            "tiles": [{"tile": t.label(), "color": t.color,
                       "corners": [vertex_name(v) for v in t.corners]} for t in
                      sorted(self.tiles.values(), key=lambda t: t.key)],
        }


def _zero_complex(rule: SubdivisionRule) -> CellComplex:
    m = rule.m
    labels = rule.post_labels
    edges = {f"E{i}": (labels[i], labels[(i + 1) % m], i) for i in range(m)}
    sides = tuple(f"E{i}" for i in range(m))
    tiles = {(c, ()): Tile((c, ()), c, labels, sides) for c in (WHITE, BLACK)}
    return CellComplex(rule, 0, tiles, {p: p for p in labels}, edges, {e: None for e in edges})


def _refine(cx: CellComplex, patterns: dict) -> CellComplex:
    rule = cx.rule
    images = rule.vertex_images
    tiles, vertices, edges, lineage = {}, {}, {}, {}
    first = cx.level == 0
    for t in cx.tiles.values():
        # the level-0 ancestor's color picks the face at level 0 only; below
        # that each tile is cut by the pattern of its own color
        pat = patterns[t.color]

        def vmap(u, t=t, pat=pat):
            if first:
                return u
            if u in pat.corners:
                return t.corners[pat.corners[u]]
            if u in pat.boundary:
                i, k = pat.boundary[u]
                return ("v", t.sides[i], k)
            return (t.key, u)

        def emap(s, t=t):
            if s[0] == "b":
                _, i, k = s
                return ("e", t.sides[i], k), t.sides[i]
            return ("e", t.key, s[1]), None

        for rt, order, sides in pat.tiles:
            corners = tuple(vmap(u) for u in order)
            side_ids = []
            for j, s in enumerate(sides):
                eid, parent = emap(s)
                side_ids.append(eid)
                if eid not in edges:
                    edges[eid] = (corners[j], corners[(j + 1) % rule.m], j)
                    lineage[eid] = parent
            for u, w in zip(order, corners):
                vertices[w] = images[u]
            key = (t.key[0], t.path + (rt.name,))
            tiles[key] = Tile(key, rt.color, corners, tuple(side_ids))
    return CellComplex(rule, cx.level + 1, tiles, vertices, edges, lineage)


def subdivide(rule: SubdivisionRule, n: int, max_tiles: int = 200_000) -> CellComplex:
    """Level-``n`` complex: ``2 * d**n`` tiles glued along shared edges."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if 2 * rule.degree**n > max_tiles:
        from .selfsim import BudgetExceeded

        raise BudgetExceeded(f"level {n} has {2 * rule.degree ** n} tiles, budget is {max_tiles}")
    patterns, problems = _build_patterns(rule)
    if problems:
        raise RuleError(problems)
    cx = _zero_complex(rule)
    for _ in range(n):
        cx = _refine(cx, patterns)
    return cx


# -- generator action and the invariant edge --------------------------------------


def generator_action(rule: SubdivisionRule, n: int, complex: CellComplex | None = None) -> dict:
    """For each generator, the map on white ``n``-tiles rotating each tile
    to the next white tile counter-clockwise around its corner of the
    generator's type."""
    cx = complex if complex is not None else subdivide(rule, n)
    out = {}
    for gname, label in rule.generators.items():
        mapping = {}
        for t in cx.white_tiles():
            v = cx.corner_of_type(t, label)
            mapping[t.key] = cx.next_ccw(cx.next_ccw(t.key, v), v)
        out[gname] = mapping
    return out


@dataclass(frozen=True)
class EdgeVertex:
    vertex: object
    type: str
    degree: int
    sectors: tuple[int, int] | None  # tile counts on either side, for interior vertices

    def to_dict(self) -> dict:
        out = {"vertex": vertex_name(self.vertex), "type": self.type, "degree": self.degree}
        if self.sectors is not None:
            out["sectors"] = list(self.sectors)
        return out


@dataclass(frozen=True)
class EdgeReport:
    endpoints: tuple[str, str]
    level: int
    vertices: tuple[EdgeVertex, ...]
    alternating: bool
    balanced: bool

    def to_dict(self) -> dict:
        return {
            "edge": list(self.endpoints),
            "level": self.level,
            "count": len(self.vertices),
            "alternating": self.alternating,
            "balanced": self.balanced,
            "vertices": [v.to_dict() for v in self.vertices],
        }


class EdgeNotInvariant(ValueError):
    pass


def is_invariant_edge(rule: SubdivisionRule, p: str, q: str, complex: CellComplex | None = None) -> bool:
    """True when every 1-edge on the 0-edge ``[p, q]`` maps onto it."""
    i = rule.edge_index(p, q)
    cx = complex if complex is not None and complex.level == 1 else subdivide(rule, 1)
    on_e = [e for e, parent in cx.lineage.items() if parent == f"E{i}"]
    return all(cx.edges[e][2] == i for e in on_e)


def edge_vertices(cx: CellComplex, p: str, q: str) -> list:
    """Vertices of ``cx`` on the 0-edge ``[p, q]``, ordered from ``p`` to ``q``."""
    rule = cx.rule
    i = rule.edge_index(p, q)
    segs = [e for e in cx.edges if _edge_on(e, i)]
    adj: dict = {}
    for e in segs:
        a, b, _ = cx.edges[e]
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    path = [p]
    prev = None
    while path[-1] != q:
        nxt = [w for w in adj.get(path[-1], []) if w != prev]
        if len(nxt) != 1:
            raise RuntimeError("edge does not subdivide into a path")
        prev = path[-1]
        path.append(nxt[0])
    return path


def _edge_on(e, i) -> bool:
    """Whether edge id ``e`` descends from the 0-edge ``E{i}``."""
    while isinstance(e, tuple):
        if e[0] != "e" or not isinstance(e[1], (str, tuple)) or (isinstance(e[1], tuple) and e[1][0] != "e"):
            return False
        e = e[1]
    return e == f"E{i}"


def invariant_edge_report(rule: SubdivisionRule, p: str, q: str, n: int,
                          complex: CellComplex | None = None) -> EdgeReport:
    if not is_invariant_edge(rule, p, q):
        raise EdgeNotInvariant(f"the 0-edge [{p},{q}] is not mapped onto itself")
    cx = complex if complex is not None and complex.level == n else subdivide(rule, n)
    path = edge_vertices(cx, p, q)
    on_e = {e for e in cx.edges if _edge_on(e, rule.edge_index(p, q))}
    verts = []
    for k, v in enumerate(path):
        fl = cx.flower(v)
        sectors = None
        if 0 < k < len(path) - 1:
            pos = [j for j, e in enumerate(fl.edges) if e in on_e]
            if len(pos) == 2:
                a = (pos[1] - pos[0]) % len(fl.edges)
                sectors = (a, len(fl.edges) - a)
        verts.append(EdgeVertex(v, cx.vertices[v], fl.degree, sectors))
    types = [v.type for v in verts]
    alternating = all(types[k] != types[k + 1] for k in range(len(types) - 1)) and set(types) <= {p, q}
    balanced = all(v.sectors is None or v.sectors[0] == v.sectors[1] for v in verts)
    return EdgeReport((p, q), n, tuple(verts), alternating, balanced)


# -- intertwining -------------------------------------------------------------------


@dataclass(frozen=True)
class IntertwineResult:
    ok: bool
    mapping: dict  # tile key -> tree word
    conflict: tuple | None = None  # (tile, generator, word, expected, found)
    unreached: tuple = ()

    def to_dict(self, degree: int | None = None) -> dict:
        from .selfsim import format_word

        show = (lambda w: format_word(w, degree)) if degree else str
        out = {"status": "isomorphic" if self.ok else "failed", "size": len(self.mapping)}
        if self.conflict is not None:
            tile, g, word, expected, found = self.conflict
            out["conflict"] = {"tile": _tile_key_name(tile), "generator": g, "word": show(word),
                               "expected": str(expected), "found": str(found)}
        if self.unreached:
            out["unreached"] = [_tile_key_name(k) for k in self.unreached]
        return out


def intertwine(tile_graph: Mapping[str, Mapping], word_graph: Mapping[str, Mapping], base_tile, base_word) -> IntertwineResult:
    """Grow the label-preserving bijection from ``base_tile -> base_word``.

    Both graphs map generator name -> {vertex: image}.
    """
    if set(tile_graph) != set(word_graph):
        raise ValueError("graphs use different generator names")
    fwd = {base_tile: base_word}
    back = {base_word: base_tile}
    queue = deque([base_tile])
    gens = sorted(tile_graph)
    while queue:
        t = queue.popleft()
        w = fwd[t]
        for g in gens:
            t2, w2 = tile_graph[g][t], word_graph[g][w]
            if t2 in fwd:
                if fwd[t2] != w2:
                    return IntertwineResult(False, fwd, (t, g, w, fwd[t2], w2))
                continue
            if w2 in back:
                return IntertwineResult(False, fwd, (t, g, w, back[w2], t2))
            fwd[t2] = w2
            back[w2] = t2
            queue.append(t2)
    tiles_all = set(tile_graph[gens[0]]) if gens else {base_tile}
    words_all = set(word_graph[gens[0]]) if gens else {base_word}
    unreached = tuple(sorted(tiles_all - set(fwd), key=str))
    ok = not unreached and len(tiles_all) == len(words_all)
    return IntertwineResult(ok, fwd, None, unreached)


def word_graph(presentation, n: int) -> dict:
    """Generator name -> {tree word: image} on level ``n``."""
    from .selfsim import index_word, level_action

    d = presentation.degree
    out = {}
    for name, g in zip(presentation.names, presentation.generators()):
        images = level_action(g, n).images.tolist()
        out[name] = {index_word(i, d, n): index_word(j, d, n) for i, j in enumerate(images)}
    return out


def intertwine_rule(rule: SubdivisionRule, presentation, n: int, base_label: str = "1") -> IntertwineResult:
    """Compare the flower-rotation action on white ``n``-tiles with the tree
    action, starting from the white tile ``(Y, Y, ..., Y)`` for the white
    1-tile ``Y`` named ``base_label`` and the word ``1...1``."""
    tile = next(t for t in rule.white_tiles if t.name == base_label)
    base = (tile.face, (base_label,) * n) if n else (WHITE, ())
    tiles = generator_action(rule, n)
    words = word_graph(presentation, n)
    missing = set(tiles) ^ set(words)
    if missing:
        raise ValueError(f"generator names differ: {sorted(missing)}")
    return intertwine(tiles, words, base, (0,) * n)
