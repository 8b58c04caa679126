"""Command-line interface.

Exit codes: 0 the property holds / success, 1 the property fails (a
witness is printed), 2 inconclusive within budget, 64 usage error,
65 malformed input data, 66 unreadable input file.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, catalog, criterion, selfsim, subdivision
from .perm import Perm
from .selfsim import BudgetExceeded, Limits, format_word, parse_word
from .syntax import ParseError, parse_element, parse_presentation

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# -- inputs --------------------------------------------------------------------


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc.strerror}") from exc


def _json_file(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON: {exc}") from exc


def _entry(args):
    if not getattr(args, "map", None):
        return None
    try:
        return catalog.get(args.map)
    except catalog.CatalogError as exc:
        raise DataError(str(exc)) from exc


def _presentation(args):
    if getattr(args, "recursion_file", None):
        return parse_presentation(_read(args.recursion_file))
    entry = _entry(args)
    if entry is None or entry.presentation is None:
        raise UsageError("a wreath recursion is required: use --map f1 or --recursion-file")
    return entry.presentation


def _rule(args):
    if getattr(args, "rule_file", None):
        try:
            return subdivision.SubdivisionRule.from_dict(_json_file(args.rule_file))
        except (KeyError, TypeError) as exc:
            raise DataError(f"{args.rule_file}: malformed rule ({exc})") from exc
    entry = _entry(args)
    if entry is None or entry.rule is None:
        raise UsageError("a subdivision rule is required: use --map or --rule-file")
    return entry.rule


def _portrait(args):
    if getattr(args, "portrait_file", None):
        try:
            return criterion.RamPortrait.from_dict(_json_file(args.portrait_file))
        except (KeyError, TypeError) as exc:
            raise DataError(f"{args.portrait_file}: malformed portrait ({exc})") from exc
    entry = _entry(args)
    if entry is None or entry.portrait is None:
        raise UsageError("a ramification portrait is required: use --map or --portrait-file")
    return entry.portrait


def _edge(args):
    if getattr(args, "edge_file", None):
        try:
            return criterion.InvariantEdgeData.from_dict(_json_file(args.edge_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"{args.edge_file}: malformed edge data ({exc})") from exc
    entry = _entry(args)
    if entry is None or entry.edge is None:
        raise UsageError("invariant edge data is required: use --map or --edge-file")
    return entry.edge


def _limits(args):
    try:
        return Limits(max_states=args.budget_states, max_points=args.budget_points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _element(args, pres, text):
    if text is None:
        raise UsageError("--element is required")
    return parse_element(text, pres)


def _gens(args, pres):
    if args.gens:
        return [parse_element(t.strip(), pres) for t in args.gens.split(",") if t.strip()]
    return pres.generators()


def _word(args, pres):
    if args.word is None:
        raise UsageError("--word is required")
    try:
        return parse_word(args.word, pres.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _edge_endpoints(args, rule):
    if args.edge:
        parts = [p.strip() for p in args.edge.split(",")]
        if len(parts) != 2:
            raise UsageError("--edge takes two post-critical labels, e.g. 1,inf")
        return parts
    if rule.invariant_edges:
        return list(rule.invariant_edges[0])
    raise UsageError("--edge is required")


# -- commands --------------------------------------------------------------------


def cmd_act(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    v = _word(args, pres)
    img = format_word(selfsim.act(g, v), pres.degree)
    return EXIT_OK, {"element": str(g), "word": args.word, "image": img}, img


def cmd_mul(args):
    pres = _presentation(args)
    elems = [parse_element(t, pres) for t in (args.element_list or [])]
    if not elems:
        raise UsageError("give at least one --element")
    prod = pres.identity
    for g in elems:
        prod = prod * g
    return EXIT_OK, {"product": str(prod)}, str(prod)


def cmd_section(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    v = _word(args, pres)
    s = selfsim.section_at(g, v)
    return EXIT_OK, {"element": str(g), "word": args.word, "section": str(s)}, str(s)


def _decision_exit(status):
    return {selfsim.TRIVIAL: EXIT_OK, selfsim.EQUAL: EXIT_OK, selfsim.NONTRIVIAL: EXIT_FAIL,
            selfsim.DISTINCT: EXIT_FAIL}.get(status, EXIT_INCONCLUSIVE)


def _decision_dict(res, d):
    out = {"status": res.status, "states": res.states}
    if res.witness is not None:
        out["witness"] = format_word(res.witness, d)
    return out


def cmd_trivial(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    res = selfsim.is_trivial(g, _limits(args))
    return _decision_exit(res.status), _decision_dict(res, pres.degree), res.status


def cmd_equal(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    if args.other is None:
        raise UsageError("--other is required")
    h = parse_element(args.other, pres)
    res = selfsim.equal(g, h, _limits(args))
    return _decision_exit(res.status), _decision_dict(res, pres.degree), res.status


def cmd_order(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    res = selfsim.order(g, args.k_max, _limits(args), args.e_max, args.depth_max)
    if res.status == "finite":
        return EXIT_OK, {"status": "finite", "order": res.order}, str(res.order)
    if res.status == "infinite":
        return EXIT_OK, {"status": "infinite", "certificate": res.certificate.to_dict()}, "infinite"
    return EXIT_INCONCLUSIVE, {"status": "unknown", "note": res.note}, "unknown"


def cmd_inf_order(args):
    pres = _presentation(args)
    g = _element(args, pres, args.element)
    limits = _limits(args)
    triv = selfsim.is_trivial(g, limits)
    if triv.status == selfsim.TRIVIAL:
        return EXIT_FAIL, {"status": "trivial"}, "trivial"
    cert = selfsim.infinite_order_certificate(g, args.e_max, args.depth_max, limits)
    if cert is None:
        return EXIT_INCONCLUSIVE, {"status": "not-found"}, "not found"
    ok = selfsim.check_certificate(cert, limits)
    return (EXIT_OK if ok else EXIT_FAIL), {"status": "certified" if ok else "invalid",
                                             "certificate": cert.to_dict()}, json.dumps(cert.to_dict())


def cmd_schreier(args):
    pres = _presentation(args)
    gens = _gens(args, pres)
    named = dict(zip(args.gens.split(","), gens)) if args.gens else dict(zip(pres.names, gens))
    graph = analysis.schreier_graph(named, args.level, _limits(args), degree=pres.degree)
    data = analysis.export_json(graph)
    data["connected"] = graph.components() == 1
    return EXIT_OK, data, analysis.export_dot(graph)


def cmd_census(args):
    pres = _presentation(args)
    gens = _gens(args, pres)
    rep = analysis.ball_census(gens, args.level, args.radius, args.max_elements, _limits(args))
    code = EXIT_OK if rep.complete else EXIT_INCONCLUSIVE
    return code, rep.to_dict(), " ".join(map(str, rep.counts))


def cmd_free_semigroup(args):
    pres = _presentation(args)
    if not args.gens:
        raise UsageError("--gens is required")
    gens = _gens(args, pres)
    res = analysis.certify_free_semigroup(gens, args.maxlen, args.level, args.level_max, _limits(args),
                                          seed=args.seed)
    if isinstance(res, analysis.FreeSemigroupCertificate):
        ok = analysis.check_free_semigroup_certificate(res)
        return (EXIT_OK if ok else EXIT_FAIL), {**res.to_dict(), "rechecked": ok}, "certified"
    if isinstance(res, analysis.CounterexamplePair):
        return EXIT_FAIL, res.to_dict(), "counterexample"
    return EXIT_INCONCLUSIVE, res.to_dict(), "inconclusive"


def cmd_verify_identities(args):
    pres = _presentation(args)
    entry = _entry(args)
    records = []
    if args.identities_file:
        records = _json_file(args.identities_file)
    elif entry is not None:
        records = entry.identities
    if not records:
        raise UsageError("no identities: use --map with a catalog entry that lists them, or --identities-file")
    reports = [analysis.check_named_identity(pres, r, _limits(args)) for r in records]
    passed = all(r.passed for r in reports)
    text = "\n".join(f"{'PASS' if r.passed else 'FAIL'} {r.lhs}" for r in reports)
    return (EXIT_OK if passed else EXIT_FAIL), {"status": "passed" if passed else "failed",
                                                 "identities": [r.to_dict() for r in reports]}, text


def cmd_subdivide(args):
    rule = _rule(args)
    cx = subdivision.subdivide(rule, args.level)
    problems = cx.check()
    data = {"level": args.level, "counts": cx.counts(), "euler": cx.euler(), "valid": not problems,
            "problems": problems}
    if args.dump:
        data["complex"] = cx.to_dict()
    return (EXIT_OK if not problems else EXIT_FAIL), data, json.dumps(cx.counts())


def cmd_flowers(args):
    rule = _rule(args)
    cx = subdivision.subdivide(rule, args.level)
    flowers = cx.flowers()
    if args.vertex:
        match = [v for v in flowers if subdivision.vertex_name(v) == args.vertex]
        if not match:
            raise UsageError(f"no vertex named {args.vertex} at level {args.level}")
        flowers = {match[0]: flowers[match[0]]}
    rows = [{"vertex": subdivision.vertex_name(v), "type": cx.vertices[v], "degree": fl.degree}
            for v, fl in sorted(flowers.items(), key=lambda kv: subdivision.vertex_name(kv[0]))]
    text = "\n".join(f"{r['vertex']} {r['type']} {r['degree']}" for r in rows)
    return EXIT_OK, {"level": args.level, "flowers": rows}, text


def cmd_edge_report(args):
    rule = _rule(args)
    p, q = _edge_endpoints(args, rule)
    try:
        rep = subdivision.invariant_edge_report(rule, p, q, args.level)
    except subdivision.EdgeNotInvariant as exc:
        return EXIT_FAIL, {"status": "not-invariant", "reason": str(exc)}, str(exc)
    ok = rep.alternating
    return (EXIT_OK if ok else EXIT_FAIL), rep.to_dict(), json.dumps(rep.to_dict())


def cmd_tile_action(args):
    rule = _rule(args)
    cx = subdivision.subdivide(rule, args.level)
    action = subdivision.generator_action(rule, args.level, cx)
    whites = cx.white_tiles()
    index = {t.key: i for i, t in enumerate(whites)}
    perms = {g: str(Perm(tuple(index[m[t.key]] for t in whites))) for g, m in action.items()}
    data = {"level": args.level, "tiles": [t.label() for t in whites], "generators": perms}
    return EXIT_OK, data, "\n".join(f"{g} {p}" for g, p in perms.items())


def cmd_intertwine(args):
    rule = _rule(args)
    pres = _presentation(args)
    res = subdivision.intertwine_rule(rule, pres, args.level, args.base_tile)
    data = res.to_dict(pres.degree)
    data["level"] = args.level
    return (EXIT_OK if res.ok else EXIT_FAIL), data, data["status"]


def cmd_alpha(args):
    portrait = _portrait(args)
    alpha = criterion.ramification_function(portrait)
    data = {v: (str(a) if a is criterion.INFINITY else a) for v, a in alpha.items() if v in portrait.post}
    return EXIT_OK, {"alpha": data}, " ".join(f"{k}={v}" for k, v in data.items())


def cmd_orbifold(args):
    rep = criterion.orbifold_characteristic(_portrait(args))
    return EXIT_OK, rep.to_dict(), f"chi={criterion.format_rational(rep.chi)} {rep.classification}"


def cmd_check_criterion(args):
    try:
        portrait, edge = _portrait(args), _edge(args)
    except DataError as exc:
        return EXIT_FAIL, {"status": "rejected", "reason": str(exc)}, str(exc)
    rep = criterion.check_conditions(portrait, edge)
    data = rep.to_dict()
    entry = _entry(args) if not args.portrait_file else None
    if rep.witness is not None:
        if entry is not None and entry.presentation is not None:
            g = parse_element(rep.witness, entry.presentation)
            cert = selfsim.infinite_order_certificate(g, limits=_limits(args))
            data["witness_certificate"] = cert.to_dict() if cert and selfsim.check_certificate(cert) else None
        else:
            data["witness_certificate"] = "criterion verdict only"
    code = EXIT_OK if rep.exponential_growth and not rep.data_errors else EXIT_FAIL
    return code, data, "exponential growth" if code == EXIT_OK else f"fails: {', '.join(rep.failed())}"


def cmd_obstruction(args):
    if args.obstruction_file:
        try:
            data = criterion.ObstructionInput.from_dict(_json_file(args.obstruction_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"{args.obstruction_file}: malformed obstruction input ({exc})") from exc
    else:
        entry = _entry(args)
        if entry is None or entry.obstruction is None:
            raise UsageError("obstruction input is required: use --map obstructed-<n> or --obstruction-file")
        data = entry.obstruction
    rep = criterion.thurston_lambda(data)
    return (EXIT_OK if rep.obstruction else EXIT_FAIL), rep.to_dict(), f"lambda={criterion.format_rational(rep.lam)}"


def cmd_catalog(args):
    if args.action == "list":
        rows = catalog.capability_matrix()
        text = "\n".join(f"{r['name']}: " + ", ".join(k for k, v in r.items() if v is True) for r in rows)
        return EXIT_OK, {"entries": rows}, text
    if not args.name:
        raise UsageError("catalog show needs a map name")
    try:
        entry = catalog.get(args.name)
    except catalog.CatalogError as exc:
        raise DataError(str(exc)) from exc
    summary = entry.summary()
    return EXIT_OK, summary, json.dumps(summary, indent=2)


COMMANDS = {
    "act": (cmd_act, "image of a tree word"),
    "mul": (cmd_mul, "product of elements"),
    "section": (cmd_section, "section of an element at a tree word"),
    "trivial": (cmd_trivial, "decide whether an element is trivial"),
    "equal": (cmd_equal, "decide whether two elements are equal"),
    "order": (cmd_order, "order of an element"),
    "inf-order": (cmd_inf_order, "search for an infinite-order certificate"),
    "schreier": (cmd_schreier, "Schreier graph on one level"),
    "census": (cmd_census, "ball sizes in a level quotient"),
    "free-semigroup": (cmd_free_semigroup, "certify a free semigroup"),
    "verify-identities": (cmd_verify_identities, "check the catalog identities"),
    "subdivide": (cmd_subdivide, "build the level-n tiling"),
    "flowers": (cmd_flowers, "flower degrees of the level-n vertices"),
    "edge-report": (cmd_edge_report, "vertices along an invariant 0-edge"),
    "tile-action": (cmd_tile_action, "generator action on white tiles"),
    "intertwine": (cmd_intertwine, "compare tile rotation with the tree action"),
    "alpha": (cmd_alpha, "ramification function"),
    "orbifold": (cmd_orbifold, "orbifold Euler characteristic"),
    "check-criterion": (cmd_check_criterion, "exponential-growth criterion"),
    "obstruction": (cmd_obstruction, "Thurston obstruction coefficient"),
    "catalog": (cmd_catalog, "list or show built-in maps"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--map", help="catalog entry (f1, sierpinski-3, obstructed-3, poly-P, ...)")
    common.add_argument("--recursion-file", help="wreath recursion source")
    common.add_argument("--rule-file", help="subdivision rule JSON")
    common.add_argument("--portrait-file", help="ramification portrait JSON")
    common.add_argument("--edge-file", help="invariant edge JSON")
    common.add_argument("--obstruction-file", help="curve preimage data JSON")
    common.add_argument("--identities-file", help="identity records JSON")
    common.add_argument("--element", help="group element, e.g. a*b^4 or ab4")
    common.add_argument("--other", help="second element for equal")
    common.add_argument("--word", help="tree word, e.g. 13")
    common.add_argument("--gens", help="comma-separated elements")
    common.add_argument("--level", type=int, default=None)
    common.add_argument("--level-max", type=int, default=10)
    common.add_argument("--radius", type=int, default=3)
    common.add_argument("--maxlen", type=int, default=3)
    common.add_argument("--k-max", type=int, default=64)
    common.add_argument("--e-max", type=int, default=4)
    common.add_argument("--depth-max", type=int, default=2)
    common.add_argument("--max-elements", type=int, default=1_000_000)
    common.add_argument("--budget-states", type=int, default=selfsim.DEFAULT_MAX_STATES)
    common.add_argument("--budget-points", type=int, default=selfsim.DEFAULT_MAX_POINTS)
    common.add_argument("--edge", help="invariant 0-edge as p,q")
    common.add_argument("--vertex", help="restrict flowers to one vertex")
    common.add_argument("--base-tile", default="1", help="white 1-tile paired with the word 1...1")
    common.add_argument("--dump", action="store_true", help="include the full complex")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized choices")

    parser = _Parser(prog="imgrowth", description="Iterated monodromy groups of Thurston maps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "mul":
            p.set_defaults(element_list=None)
            p.add_argument("elements", nargs="*", help="elements to multiply")
        if name == "catalog":
            p.add_argument("action", choices=("list", "show"))
            p.add_argument("name", nargs="?")
    return parser


_LEVEL_DEFAULTS = {"free-semigroup": None, "census": 6}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_USAGE
    if args.command == "mul":
        args.element_list = list(args.elements) + ([args.element] if args.element else [])
    if args.level is None:
        args.level = _LEVEL_DEFAULTS.get(args.command, 1)
    elif args.level < 0:
        print("imgrowth: error: --level must be non-negative", file=err)
        return EXIT_USAGE
    func = COMMANDS[args.command][0]
    try:
        code, data, text = func(args)
    except UsageError as exc:
        print(f"imgrowth: error: {exc}", file=err)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"imgrowth: error: {exc}", file=err)
        return EXIT_NOINPUT
    except (ParseError, DataError, selfsim.PresentationError, subdivision.RuleError,
            criterion.PortraitError) as exc:
        print(f"imgrowth: error: {exc}", file=err)
        return EXIT_DATA
    except BudgetExceeded as exc:
        print(f"imgrowth: budget exceeded: {exc}", file=err)
        out.write(json.dumps({"status": "inconclusive", "reason": str(exc)}) + "\n")
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"imgrowth: error: {exc}", file=err)
        return EXIT_USAGE
    if args.format == "json":
        out.write(json.dumps(data) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
