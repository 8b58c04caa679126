"""Built-in maps: recursions, subdivision rules, portraits and edge data.

Each entry is described by ``data/<name>.json``; the recursion and the
subdivision rule live in separate files referenced from it. The
``sierpinski-n`` and ``obstructed-n`` families are generated on demand for
odd ``n >= 3``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from ..criterion import InvariantEdgeData, ObstructionInput, RamPortrait
from ..selfsim import WreathPresentation
from ..subdivision import SubdivisionRule, invariant_edge_report, subdivide, validate_rule
from ..syntax import parse_presentation
from . import families

BASE_ENTRIES = ("f1", "sierpinski-3", "obstructed-3", "poly-P")


class CatalogError(LookupError):
    pass


@dataclass
class CatalogEntry:
    name: str
    description: str
    presentation: WreathPresentation | None = None
    rule: SubdivisionRule | None = None
    portrait: RamPortrait | None = None
    edge: InvariantEdgeData | None = None
    obstruction: ObstructionInput | None = None
    identities: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    claims: dict = field(default_factory=dict)

    def capabilities(self) -> dict:
        return {
            "presentation": self.presentation is not None,
            "rule": self.rule is not None,
            "portrait": self.portrait is not None,
            "edge": self.edge is not None,
            "obstruction": self.obstruction is not None,
        }

    def summary(self) -> dict:
        out = {"name": self.name, "description": self.description, "capabilities": self.capabilities(),
               "notes": list(self.notes)}
        if self.claims:
            out["claims"] = dict(self.claims)
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_source()
        if self.portrait is not None:
            out["portrait"] = self.portrait.to_dict()
        if self.edge is not None:
            out["edge"] = self.edge.to_dict()
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction.to_dict()
        return out


def _data(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


def portrait_from_rule(rule: SubdivisionRule) -> RamPortrait:
    report = validate_rule(rule)
    if not report.valid:
        raise CatalogError(f"rule {rule.name} is invalid: {'; '.join(report.problems)}")
    edges = [(v, img, deg) for v, (img, deg) in report.portrait.items()]
    return RamPortrait.from_edges(edges, rule.post_labels)


def edge_from_rule(rule: SubdivisionRule, p: str, q: str) -> InvariantEdgeData:
    rep = invariant_edge_report(rule, p, q, 1)
    interior = rep.vertices[1:-1]
    return InvariantEdgeData(p, q, tuple(v.vertex for v in interior),
                             {v.vertex: v.sectors for v in interior}, name=f"[{p},{q}]")


def _from_json(name: str) -> CatalogEntry:
    data = json.loads(_data(f"{name}.json"))
    entry = CatalogEntry(name, data["description"], notes=list(data.get("notes", [])),
                         identities=list(data.get("identities", [])), claims=dict(data.get("claims", {})))
    if "presentation" in data:
        entry.presentation = parse_presentation(_data(data["presentation"]))
    if "rule" in data:
        entry.rule = SubdivisionRule.from_dict(json.loads(_data(data["rule"])))
    if "portrait" in data:
        entry.portrait = RamPortrait.from_dict(data["portrait"])
    elif entry.rule is not None:
        entry.portrait = portrait_from_rule(entry.rule)
    if "edge" in data:
        entry.edge = InvariantEdgeData.from_dict(data["edge"])
    elif entry.rule is not None and entry.rule.invariant_edges:
        entry.edge = edge_from_rule(entry.rule, *entry.rule.invariant_edges[0])
    if "obstruction" in data:
        entry.obstruction = ObstructionInput.from_dict(data["obstruction"])
    return entry


def _family(kind: str, n: int) -> CatalogEntry:
    if n < 3:
        raise CatalogError(f"{kind}-{n}: the grid size must be at least 3")
    if n % 2 == 0:
        raise CatalogError(
            f"{kind}-{n}: even grid sizes give hyperbolic maps for which condition (c) of the "
            f"growth criterion is not satisfied; only odd n is supported")
    if kind == "sierpinski":
        rule = families.sierpinski_rule(n)
        desc = (f"Square-tiled map with an {n}x{n} grid on each face and two flaps; "
                f"its Julia set is a Sierpinski carpet")
        notes = ["post-critical points 0, 1, inf, -1 are the corners of the pillow",
                 f"degree {n * n + 2}", "the corner 0 is a periodic critical point"]
        obstruction = None
    else:
        rule = families.obstructed_rule(n)
        desc = f"Square-tiled map with an {n}x{n} grid on each face and one flap; Thurston-obstructed"
        notes = [f"degree {n * n + 1}",
                 "the horizontal curve separating {0, 1} from {inf, -1} is an obstruction with lambda = 1",
                 "component degrees of the obstruction are derived from the square tiling "
                 "(n horizontal curves of degree n, one peripheral curve in the flap)"]
        obstruction = ObstructionInput.from_dict(families.obstructed_curve(n))
    entry = CatalogEntry(rule.name, desc, rule=rule, notes=notes, obstruction=obstruction)
    entry.portrait = portrait_from_rule(rule)
    entry.edge = edge_from_rule(rule, "1", "inf")
    if obstruction is not None:
        entry.claims["lambda"] = "1"
    return entry


_cache: dict[str, CatalogEntry] = {}


def get(name: str) -> CatalogEntry:
    """Return a validated catalog entry."""
    if name in _cache:
        return _cache[name]
    m = re.fullmatch(r"(sierpinski|obstructed)-(\d+)", name)
    if m:
        entry = _family(m.group(1), int(m.group(2)))
    elif name in BASE_ENTRIES:
        entry = _from_json(name)
    else:
        raise CatalogError(f"unknown map {name!r}; available: {', '.join(BASE_ENTRIES)}, "
                           f"sierpinski-<odd n>, obstructed-<odd n>")
    problems = validate_entry(entry)
    if problems:
        raise CatalogError(f"{name} failed validation: {'; '.join(problems)}")
    _cache[name] = entry
    return entry


def names() -> list[str]:
    return list(BASE_ENTRIES)


def capability_matrix() -> list[dict]:
    return [{"name": n, **get(n).capabilities()} for n in BASE_ENTRIES]


def validate_entry(entry: CatalogEntry) -> list[str]:
    problems = []
    if entry.rule is not None:
        rep = validate_rule(entry.rule)
        problems += [f"rule: {p}" for p in rep.problems]
    if entry.portrait is not None:
        problems += [f"portrait: {p}" for p in entry.portrait.validate()]
        if entry.rule is not None and not problems:
            induced = validate_rule(entry.rule).portrait
            for v, (img, deg) in induced.items():
                if deg > 1 or v in entry.rule.post_labels:
                    if entry.portrait.image.get(v) != img or entry.portrait.degree.get(v) != deg:
                        problems.append(f"portrait disagrees with the rule at {v}")
    if entry.edge is not None and entry.portrait is not None:
        for v in (entry.edge.p, entry.edge.q, *entry.edge.interior):
            if v not in entry.portrait.image:
                problems.append(f"edge vertex {v} missing from the portrait")
    if entry.presentation is not None and entry.rule is not None and not problems:
        from ..subdivision import intertwine_rule

        res = intertwine_rule(entry.rule, entry.presentation, 1)
        if not res.ok:
            problems.append("recursion and subdivision rule disagree on level 1")
    return problems


def rule_file(name: str) -> SubdivisionRule:
    """Load one of the shipped rule files (``f1``, ``sierpinski-3``, ``obstructed-3``)."""
    return SubdivisionRule.from_dict(json.loads(_data(f"{name}.rule.json")))
