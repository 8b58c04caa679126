import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imgrowth import analysis, catalog, selfsim
from imgrowth.analysis import (CounterexamplePair, FreeSemigroupCertificate, ball_census, certify_free_semigroup,
                               check_free_semigroup_certificate, default_start_level, export_dot, export_json,
                               level_transitive, recurrence_witness, schreier_graph, verify_identity)
from imgrowth.perm import Perm

F1 = catalog.get("f1").presentation
X = [F1.element(t) for t in ("ab4", "ab12", "ab20")]


def el(text):
    return F1.element(text)


def test_schreier_level_one():
    g = schreier_graph(dict(zip("abc", F1.generators())), 1)
    assert g.vertices() == ["1", "2", "3", "4", "5", "6"]
    assert ("1", "a", "3") in list(g.edges())
    assert g.components() == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_level_transitive(n):
    assert level_transitive(F1.generators(), n)


def test_single_generator_not_transitive():
    assert not level_transitive([el("c")], 1)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["a", "b", "c", "ab4", "b'", "cb"]), min_size=1, max_size=3), st.integers(1, 4))
def test_schreier_quotient_functorial(texts, n):
    gens = {t: el(t) for t in texts}
    upper = schreier_graph(gens, n)
    lower = schreier_graph(gens, n - 1)
    q = upper.quotient()
    assert all(np.array_equal(x, y) for x, y in zip(q.images, lower.images))
    assert upper.components() >= lower.components()


def test_exports():
    g = schreier_graph({"a": el("a")}, 1)
    dot = export_dot(g)
    assert dot.startswith("digraph schreier {") and '"1" -> "3" [label="a"];' in dot
    data = export_json(g)
    assert data["level"] == 1 and len(data["edges"]) == 6


def test_census_small():
    assert ball_census(F1.generators(), 1, 1).counts == (1, 6)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_census_monotone(n, R):
    counts = ball_census(X, n, R).counts
    assert all(x <= y for x, y in zip(counts, counts[1:]))
    if n > 1:
        lower = ball_census(X, n - 1, R).counts
        assert all(x <= y for x, y in zip(lower, counts))


def test_census_exact_values():
    assert ball_census(X, 6, 3).counts == (1, 7, 29, 107)


def test_default_start_level():
    assert default_start_level(1) == 4
    assert default_start_level(3) == 5
    assert default_start_level(5) == 6


def test_free_semigroup_certificate():
    cert = certify_free_semigroup(X, 3)
    assert isinstance(cert, FreeSemigroupCertificate)
    assert cert.word_count == 3 + 9 + 27
    assert check_free_semigroup_certificate(cert)


def test_free_semigroup_counterexample():
    res = certify_free_semigroup([el("c")], 3)
    assert isinstance(res, CounterexamplePair)
    assert selfsim.is_trivial(el("c^3")).status == selfsim.TRIVIAL


def test_free_semigroup_counterexample_between_words():
    res = certify_free_semigroup([el("a"), el("a'")], 2)
    assert isinstance(res, CounterexamplePair)


def test_tampered_semigroup_certificate():
    cert = certify_free_semigroup(X, 2)
    bad = FreeSemigroupCertificate((el("c"),) + cert.generators[1:], cert.max_length, cert.level,
                                   cert.fingerprints, cert.probes)
    assert not check_free_semigroup_certificate(bad)


def test_budget_reports_inconclusive():
    res = certify_free_semigroup(X, 5, n_max=2)
    assert isinstance(res, analysis.FreeSemigroupInconclusive)


def test_recurrence_sections():
    rep = recurrence_witness(F1, 0, [el("b"), el("(b^4)^c")])
    assert selfsim.equal(rep.sections[0], el("b")).status == selfsim.EQUAL
    assert selfsim.equal(rep.sections[1], el("c' b'")).status == selfsim.EQUAL
    assert rep.generates


def test_identity_patterns():
    ident = Perm.identity(6)
    rep = verify_identity(el("b^-8"), ident, {0: el("b^-8"), 3: el("c"), 1: F1.identity})
    assert rep.passed
    wrong = verify_identity(el("b^-8"), ident, {3: el("b")})
    assert not wrong.passed


def test_catalog_identities_all_pass():
    entry = catalog.get("f1")
    for record in entry.identities:
        assert analysis.check_named_identity(F1, record).passed, record
