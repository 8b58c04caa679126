"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its runtime. Run with
``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import combinations

import pytest

from imgrowth import analysis, catalog, criterion, selfsim, subdivision
from imgrowth.perm import Perm

F1 = catalog.get("f1")
G = F1.presentation


def el(text):
    return G.element(text)


@pytest.fixture
def report(request, capsys):
    @contextmanager
    def run(label, limit):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            ok = ok and elapsed < limit
            with capsys.disabled():
                print(f"\n{'PASS' if ok else 'FAIL'} {label} ({elapsed:.2f}s, limit {limit}s)")
        assert elapsed < limit, f"{label} took {elapsed:.1f}s"

    return run


def test_01_generator_orders(report):
    with report("1 generator orders a, b, c = 2, 24, 3", 10):
        got = [selfsim.order(el(g)) for g in "abc"]
        assert [(r.status, r.order) for r in got] == [("finite", 2), ("finite", 24), ("finite", 3)]


def test_02_relations(report):
    with report("2 relations and section patterns", 30):
        for text in ("acb", "(bc)^2", "c^3"):
            assert selfsim.is_trivial(el(text)).status == selfsim.TRIVIAL, text
        ident = Perm.identity(6)
        one = G.identity
        pattern = analysis.verify_identity(el("b^-8"), ident, {0: el("b^-8"), 1: one, 2: one, 3: el("c"),
                                                               4: one, 5: one})
        assert pattern.passed, pattern.to_dict()
        comm = analysis.verify_identity(el("[(b^8 c' b^-4 c)^2, b^-8]"), ident,
                                        {0: one, 1: one, 2: one, 3: el("[b^2, c]"), 4: one, 5: one})
        assert comm.passed, comm.to_dict()


def test_03_infinite_order_certificates(report):
    with report("3 ab4, ab12, ab20 certified with e = 2 and pairwise distinct", 10):
        xs = [el(t) for t in ("ab4", "ab12", "ab20")]
        for x in xs:
            cert = selfsim.infinite_order_certificate(x)
            assert cert is not None and cert.exponent == 2 and len(cert.word) <= 2
            assert cert.word == (0,) and cert.via is None
            assert selfsim.equal(selfsim.section_at(x**2, cert.word), x).status == selfsim.EQUAL
            assert selfsim.check_certificate(cert)
        for x, y in combinations(xs, 2):
            assert selfsim.equal(x, y).status == selfsim.DISTINCT


def test_04_free_semigroup(report):
    with report("4 free semigroup N = 5 over ab4, ab12, ab20 and census growth bound", 120):
        xs = [el(t) for t in ("ab4", "ab12", "ab20")]
        start = analysis.default_start_level(5)
        assert 2 ** (start - 3) > 5 and 2 ** (start - 4) <= 5
        cert = analysis.certify_free_semigroup(xs, 5, n_start=start, n_max=8)
        assert isinstance(cert, analysis.FreeSemigroupCertificate), cert
        assert cert.word_count == 363 and cert.level <= 8
        assert analysis.check_free_semigroup_certificate(cert)
        counts = analysis.ball_census(xs, cert.level, 5).counts
        for r, c in enumerate(counts):
            assert c >= (3 ** (r + 1) - 1) // 2 - 1


def test_05_tiling_structure(report):
    with report("5 f1 tilings at levels 1-4 and the invariant edge [1,inf]", 60):
        b_type, a_type = F1.rule.generators["b"], F1.rule.generators["a"]
        for n in range(1, 5):
            cx = subdivision.subdivide(F1.rule, n)
            assert cx.euler() == 2 and len(cx.tiles) == 2 * 6**n
            assert cx.check() == []
            rep = subdivision.invariant_edge_report(F1.rule, "1", "inf", n, cx)
            assert len(rep.vertices) == 2**n + 1 and rep.alternating
            interior = rep.vertices[1:-1]
            assert {v.degree for v in interior if v.type == b_type} <= {8}
            assert {v.degree for v in interior if v.type == a_type} == {2}
            if n >= 2:
                assert {v.degree for v in interior if v.type == b_type} == {8}


def test_06_intertwining(report):
    with report("6 tile rotations match the tree action on levels 1-3", 60):
        for n in (1, 2, 3):
            res = subdivision.intertwine_rule(F1.rule, G, n)
            assert res.ok, res.to_dict(6)
            assert len(res.mapping) == 6**n


def test_07_criterion(report):
    with report("7 criterion verdicts for f1, sierpinski-3, poly-P; sierpinski-4 rejected", 10):
        expected = {"f1": (8, 2, "a*b^4"), "sierpinski-3": (2, 2, "a*b"), "poly-P": (4, 4, "a^2*b^2")}
        for name, (kp, kq, w) in expected.items():
            entry = catalog.get(name)
            rep = criterion.check_conditions(entry.portrait, entry.edge)
            assert rep.exponential_growth and not rep.failed(), (name, rep.failed())
            assert (rep.k_p, rep.k_q, rep.witness) == (kp, kq, w), name
        poly = catalog.get("poly-P")
        for n in range(1, 6):
            verts = criterion.pullback_degrees(poly.portrait, poly.edge, n)[1:-1]
            assert {d for t, d in verts if t == poly.edge.q} == {4}
            assert {d for t, d in verts if t == poly.edge.p} <= {4}
        with pytest.raises(catalog.CatalogError, match=r"condition \(c\)"):
            catalog.get("sierpinski-4")


def test_08_ramification(report):
    with report("8 alpha_f1 = (24, 3, 2), hyperbolic, equal to generator orders", 1):
        orb = criterion.orbifold_characteristic(F1.portrait)
        assert (orb.alpha["1"], orb.alpha["-1"], orb.alpha["inf"]) == (24, 3, 2)
        assert orb.classification == "hyperbolic" and orb.chi < 0
        for g, label in F1.rule.generators.items():
            assert selfsim.order(el(g)).order == orb.alpha[label]


def test_09_obstruction(report):
    with report("9 lambda arithmetic on random lists; obstructed map gives lambda = 1", 1):
        rnd = random.Random(2024)
        for _ in range(25):
            comps = [criterion.CurveComponent(rnd.randint(1, 10), rnd.random() < 0.25, rnd.random() < 0.8)
                     for _ in range(rnd.randint(1, 8))]
            lam = criterion.thurston_lambda(criterion.ObstructionInput("g", tuple(comps))).lam
            assert lam == sum((Fraction(1, c.degree) for c in comps if c.homotopic and not c.peripheral),
                              Fraction(0))
            rnd.shuffle(comps)
            assert criterion.thurston_lambda(criterion.ObstructionInput("g", tuple(comps))).lam == lam
            extra = comps + [criterion.CurveComponent(rnd.randint(1, 10))]
            assert criterion.thurston_lambda(criterion.ObstructionInput("g", tuple(extra))).lam > lam
        rep = criterion.thurston_lambda(catalog.get("obstructed-3").obstruction)
        assert rep.lam == 1 and rep.obstruction


def test_10_recurrence(report):
    with report("10 sections of b and (b^4)^c at letter 1; transitive on levels 1-5", 30):
        assert selfsim.equal(selfsim.section(el("b"), 0), el("b")).status == selfsim.EQUAL
        assert selfsim.equal(selfsim.section(el("(b^4)^c"), 0), el("c' b'")).status == selfsim.EQUAL
        for n in range(1, 6):
            assert analysis.level_transitive(G.generators(), n)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
