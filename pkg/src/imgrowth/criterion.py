"""Ramification portraits, orbifolds, the exponential-growth criterion and
Thurston's obstruction coefficient. All arithmetic is exact."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence


class PortraitError(ValueError):
    pass


class _Infinity:
    """The value of the ramification function at a periodic critical orbit."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


INFINITY = _Infinity()


def _lcm(a, b):
    if a is INFINITY or b is INFINITY:
        return INFINITY
    return math.lcm(a, b)


def _mul(a, b):
    if a is INFINITY or b is INFINITY:
        return INFINITY
    return a * b


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class RamPortrait:
    """Marked points, each with its image and local degree."""

    image: dict  # vertex -> image vertex
    degree: dict  # vertex -> local degree
    post: frozenset  # postcritical vertices
    order: tuple = ()  # vertex order for deterministic searches

    def __post_init__(self):
        if not self.order:
            self.order = tuple(self.image)

    @classmethod
    def from_edges(cls, edges: Sequence[tuple], post: Sequence[str] = ()) -> "RamPortrait":
        image, degree = {}, {}
        for src, dst, deg in edges:
            if src in image:
                raise PortraitError(f"{src} has two images")
            image[src] = dst
            degree[src] = int(deg)
        return cls(image, degree, frozenset(post), tuple(image))

    @classmethod
    def from_dict(cls, data: Mapping) -> "RamPortrait":
        names = [v["name"] for v in data["vertices"]]
        post = [v["name"] for v in data["vertices"] if v.get("post")]
        edges = [(e["from"], e["to"], e.get("deg", 1)) for e in data["edges"]]
        p = cls.from_edges(edges, post)
        missing = [n for n in names if n not in p.image]
        if missing:
            raise PortraitError(f"vertices without an image: {', '.join(missing)}")
        p.order = tuple(names)
        return p

    def to_dict(self) -> dict:
        return {
            "vertices": [{"name": v, "post": v in self.post} for v in self.order],
            "edges": [{"from": v, "to": self.image[v], "deg": self.degree[v]} for v in self.order],
        }

    def validate(self) -> list[str]:
        problems = []
        for v, w in self.image.items():
            if w not in self.image:
                problems.append(f"image {w} of {v} is not a vertex")
            if self.degree[v] < 1:
                problems.append(f"{v} has local degree {self.degree[v]}")
        for v in self.post:
            if v not in self.image:
                problems.append(f"postcritical point {v} is not a vertex")
            elif self.image[v] not in self.post:
                problems.append(f"postcritical set is not forward invariant at {v}")
        if problems:
            return problems
        for v in self.order:
            if self.degree[v] >= 2 and self.image[v] not in self.post:
                problems.append(f"critical point {v} maps outside the postcritical set")
        return problems

    def check(self):
        problems = self.validate()
        if problems:
            raise PortraitError("; ".join(problems))

    def orbit(self, v, steps: int):
        """``[(v, 1), (f v, deg f at v), (f^2 v, deg f^2 at v), ...]``."""
        out = [(v, 1)]
        deg = 1
        for _ in range(steps):
            deg *= self.degree[v]
            v = self.image[v]
            out.append((v, deg))
        return out

    def on_critical_cycle(self) -> set:
        """Vertices lying on a periodic cycle that contains a critical point."""
        res = set()
        for v in self.order:
            w, cyc = self.image[v], [v]
            while w != v and len(cyc) <= len(self.image):
                cyc.append(w)
                w = self.image[w]
            if w == v and any(self.degree[x] >= 2 for x in cyc):
                res.add(v)
        return res


def ramification_function(portrait: RamPortrait) -> dict:
    """Least ``alpha`` with ``deg(f, q) * alpha(q) | alpha(f(q))`` everywhere.

    Points on a periodic critical cycle, and everything they map to, get
    :data:`INFINITY`; elsewhere the fixpoint is reached by iteration.
    """
    portrait.check()
    alpha = {v: 1 for v in portrait.order}
    for v in portrait.on_critical_cycle():
        alpha[v] = INFINITY
    for _ in range(len(alpha) + 2):
        changed = False
        for q in portrait.order:
            p = portrait.image[q]
            new = _lcm(alpha[p], _mul(portrait.degree[q], alpha[q]))
            if new != alpha[p]:
                alpha[p] = new
                changed = True
        if not changed:
            return alpha
    raise AssertionError("ramification function did not stabilize")  # pragma: no cover


@dataclass(frozen=True)
class OrbifoldReport:
    alpha: dict  # postcritical vertex -> int or INFINITY
    chi: Fraction
    classification: str

    def to_dict(self) -> dict:
        return {"alpha": {k: (str(v) if v is INFINITY else v) for k, v in self.alpha.items()},
                "chi": format_rational(self.chi), "classification": self.classification}


def orbifold_from_alpha(alpha: Mapping) -> OrbifoldReport:
    chi = Fraction(2)
    for a in alpha.values():
        chi -= 1 if a is INFINITY else 1 - Fraction(1, a)
    kind = "hyperbolic" if chi < 0 else "parabolic" if chi == 0 else "spherical"
    return OrbifoldReport(dict(alpha), chi, kind)


def orbifold_characteristic(portrait: RamPortrait) -> OrbifoldReport:
    alpha = ramification_function(portrait)
    return orbifold_from_alpha({v: alpha[v] for v in portrait.order if v in portrait.post})


# -- invariant edge data and the criterion ------------------------------------------


@dataclass
class InvariantEdgeData:
    """A 0-edge ``E = [p, q]`` with its interior 1-vertices, ordered from ``p``."""

    p: str
    q: str
    interior: tuple[str, ...]
    sectors: dict = field(default_factory=dict)  # vertex -> (tiles on one side, tiles on the other)
    real_symmetric: bool = False
    name: str = ""

    @property
    def d_E(self) -> int:
        return len(self.interior) + 1

    @classmethod
    def from_dict(cls, data: Mapping) -> "InvariantEdgeData":
        p, q = data["endpoints"]
        return cls(p, q, tuple(data.get("interior", ())),
                   {k: tuple(v) for k, v in data.get("sectors", {}).items()},
                   bool(data.get("real_symmetric", False)), data.get("name", f"[{p},{q}]"))

    def to_dict(self) -> dict:
        out = {"name": self.name or f"[{self.p},{self.q}]", "endpoints": [self.p, self.q],
               "interior": list(self.interior)}
        if self.sectors:
            out["sectors"] = {k: list(v) for k, v in self.sectors.items()}
        if self.real_symmetric:
            out["real_symmetric"] = True
        return out


def restricted_portrait(portrait: RamPortrait, edge: InvariantEdgeData) -> RamPortrait:
    keep = [edge.p, edge.q, *edge.interior]
    missing = [v for v in keep if v not in portrait.image]
    if missing:
        raise PortraitError(f"vertices missing from the portrait: {', '.join(missing)}")
    order = [v for v in portrait.order if v in keep]
    return RamPortrait({v: portrait.image[v] for v in order}, {v: portrait.degree[v] for v in order},
                       frozenset(v for v in order if v in portrait.post), tuple(order))


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    detail: str


@dataclass(frozen=True)
class CriterionReport:
    conditions: tuple[Condition, ...]
    k_p: int | None
    k_q: int | None
    witness: str | None  # a^(k_q/2) b^(k_p/2)
    witness2: str | None  # witness * b^k_p
    certificate_point: str | None
    certificate_degree: int | None
    certificate_steps: int | None
    data_errors: tuple[str, ...] = ()

    def holds(self, name: str) -> bool:
        return next(c.holds for c in self.conditions if c.name == name)

    @property
    def infinite_order(self) -> bool:
        return all(self.holds(n) for n in ("a", "b", "c", "d"))

    @property
    def exponential_growth(self) -> bool:
        return self.infinite_order and self.holds("e")

    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if not c.holds]

    def to_dict(self) -> dict:
        out = {
            "conditions": {c.name: {"holds": c.holds, "detail": c.detail} for c in self.conditions},
            "k_p": self.k_p,
            "k_q": self.k_q,
            "infinite_order_element": self.infinite_order,
            "exponential_growth": self.exponential_growth,
        }
        if self.witness is not None:
            out["witnesses"] = [self.witness, self.witness2]
        if self.certificate_point is not None:
            out["certificate"] = {"point": self.certificate_point, "degree": self.certificate_degree,
                                  "steps": self.certificate_steps}
        if self.data_errors:
            out["data_errors"] = list(self.data_errors)
        return out


def _power(name, k):
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def witness_words(k_p: int, k_q: int, a: str = "a", b: str = "b") -> tuple[str, str]:
    w1 = "*".join(x for x in (_power(a, k_q // 2), _power(b, k_p // 2)) if x) or "1"
    w2 = "*".join(x for x in (_power(a, k_q // 2), _power(b, k_p // 2 + k_p)) if x)
    return w1, w2


def check_conditions(portrait: RamPortrait, edge: InvariantEdgeData, a: str = "a", b: str = "b") -> CriterionReport:
    """Evaluate conditions (a)-(e) for the edge ``[p, q]``; ``a`` and ``b``
    name the generators around ``q`` and ``p`` in the witness words."""
    portrait.check()
    p, q = edge.p, edge.q
    conds: list[Condition] = []
    errors: list[str] = []
    for v in (p, q, *edge.interior):
        if v not in portrait.image:
            raise PortraitError(f"{v} is not in the portrait")
    img, deg = portrait.image, portrait.degree

    # (a) invariance: 1-vertex types alternate along E and lie in {p, q}
    types = [img[p], *(img[v] for v in edge.interior), img[q]]
    in_pq = all(t in (p, q) for t in types)
    alternate = all(types[i] != types[i + 1] for i in range(len(types) - 1))
    a_ok = in_pq and alternate and edge.d_E >= 2
    detail = f"d_E = {edge.d_E}; types along E: {', '.join(types)}"
    if not in_pq:
        detail += "; some 1-vertex leaves E"
    elif not alternate:
        detail += "; types do not alternate"
    conds.append(Condition("a", a_ok, detail))

    # (b)
    conds.append(Condition("b", img[p] == p, f"{p} -> {img[p]}"))

    # (c) via (c1)-(c4)
    V_p = [v for v in edge.interior if img[v] == p]
    V_q = [v for v in edge.interior if img[v] == q]
    parts = []
    c_ok = True
    degs_p = {deg[v] for v in V_p}
    degs_q = {deg[v] for v in V_q}
    c1 = len(degs_p) <= 1 and len(degs_q) <= 1
    k_p = degs_p.pop() if len(degs_p) == 1 else None
    k_q = degs_q.pop() if len(degs_q) == 1 else None
    parts.append(f"(c1) {'holds' if c1 else 'fails: unequal degrees on V_p or V_q'}")
    c_ok &= c1
    c2 = deg[p] == 1
    parts.append(f"(c2) deg at {p} = {deg[p]}")
    c_ok &= c2
    if img[q] == q:
        c3 = deg[q] == 1
        parts.append(f"(c3) deg at {q} = {deg[q]}")
        c_ok &= c3
    elif img[q] == p:
        if k_q is not None:
            implied = k_q * deg[q]
            if k_p is None:
                k_p = implied
                parts.append(f"(c4) k_p = k_q * deg at {q} = {k_q} * {deg[q]} = {implied}")
            else:
                c4 = k_p == implied
                parts.append(f"(c4) k_p = {k_p} {'=' if c4 else '!='} k_q * deg at {q} = {implied}")
                c_ok &= c4
        else:
            parts.append("(c4) no type-q vertices; k_p unconstrained")
    else:
        parts.append(f"{q} leaves E")
        c_ok = False
    conds.append(Condition("c", c_ok and a_ok, "; ".join(parts)))

    # (d) via (d')
    if edge.real_symmetric:
        d_ok, d_detail = True, "E lies on a real-symmetric invariant curve"
    else:
        unbalanced = [v for v in edge.interior if v not in edge.sectors
                      or edge.sectors[v][0] != edge.sectors[v][1]]
        d_ok = not unbalanced
        d_detail = "sectors balanced at every interior 1-vertex" if d_ok else \
            f"unbalanced or missing sectors at {', '.join(unbalanced)}"
    conds.append(Condition("d", d_ok, d_detail))

    if a_ok and d_ok and c_ok:
        for name, k in (("k_p", k_p), ("k_q", k_q)):
            if k is not None and k % 2:
                errors.append(f"{name} = {k} is odd although (a) and (d) hold")

    # (e)
    e_point = e_deg = e_steps = None
    if k_p is not None:
        best = None
        for pos, v in enumerate(portrait.order):
            for steps, (w, dg) in enumerate(portrait.orbit(v, len(portrait.order) + 1)):
                if steps >= 1 and w == p:
                    if k_p % dg:
                        cand = (steps, pos, v, dg)
                        if best is None or cand < best:
                            best = cand
                    break
        if best is not None:
            e_steps, _, e_point, e_deg = best
    e_ok = e_point is not None
    conds.append(Condition("e", e_ok, f"{e_point} reaches {p} after {e_steps} step(s) with degree {e_deg}, "
                                      f"not dividing k_p = {k_p}" if e_ok else
                           f"no marked point reaches {p} with a degree that does not divide k_p = {k_p}"))

    w1 = w2 = None
    if all(c.holds for c in conds[:4]) and k_p is not None and k_q is not None:
        w1, w2 = witness_words(k_p, k_q, a, b)
    return CriterionReport(tuple(conds), k_p, k_q, w1, w2, e_point, e_deg, e_steps, tuple(errors))


def pullback_degrees(portrait: RamPortrait, edge: InvariantEdgeData, n: int) -> list[tuple[str, int]]:
    """``(type, deg g^n)`` for the ``n``-vertices on ``E``, ordered from ``p``.

    Computed by pulling ``E`` back through the 1-edges of ``E``; each
    1-edge maps homeomorphically onto ``E``. Independent of (c1)-(c4).
    """
    chain = [edge.p, *edge.interior, edge.q]
    img, deg = portrait.image, portrait.degree
    level = [(edge.p, 1), (edge.q, 1)]
    for _ in range(n):
        new = []
        for j in range(len(chain) - 1):
            seg = level if img[chain[j]] == edge.p else level[::-1]
            for k, (t, dg) in enumerate(seg):
                if j > 0 and k == 0:
                    continue  # shared with the previous 1-edge
                local = deg[chain[j]] if k == 0 else deg[chain[j + 1]] if k == len(seg) - 1 else 1
                new.append((t, local * dg))
        level = new
    return level


# -- Thurston obstructions -------------------------------------------------------


@dataclass(frozen=True)
class CurveComponent:
    degree: int
    peripheral: bool = False
    homotopic: bool = True

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("mapping degree must be at least 1")


@dataclass(frozen=True)
class ObstructionInput:
    curve: str
    components: tuple[CurveComponent, ...]

    @classmethod
    def from_dict(cls, data: Mapping) -> "ObstructionInput":
        comps = tuple(CurveComponent(int(c["degree"]), bool(c.get("peripheral", False)),
                                     bool(c.get("homotopic", True))) for c in data["components"])
        return cls(data.get("curve", "gamma"), comps)

    def to_dict(self) -> dict:
        return {"curve": self.curve, "components": [
            {"degree": c.degree, "peripheral": c.peripheral, "homotopic": c.homotopic} for c in self.components]}


@dataclass(frozen=True)
class ObstructionReport:
    curve: str
    lam: Fraction
    invariant: bool
    obstruction: bool

    def to_dict(self) -> dict:
        return {"curve": self.curve, "lambda": format_rational(self.lam), "invariant": self.invariant,
                "obstruction": self.obstruction}


def thurston_lambda(data: ObstructionInput) -> ObstructionReport:
    """``lambda = sum 1/d_j`` over non-peripheral preimage components."""
    essential = [c for c in data.components if not c.peripheral]
    lam = sum((Fraction(1, c.degree) for c in essential if c.homotopic), Fraction(0))
    invariant = bool(essential) and all(c.homotopic for c in essential)
    return ObstructionReport(data.curve, lam, invariant, invariant and lam >= 1)
