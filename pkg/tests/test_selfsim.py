import pytest
from hypothesis import given, settings, strategies as st

from imgrowth import catalog, selfsim
from imgrowth.selfsim import (GroupElement, Limits, act, check_certificate, equal, format_word,
                              infinite_order_certificate, is_trivial, level_action, order, parse_word,
                              section, section_at)

F1 = catalog.get("f1").presentation
letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=10)
elements = letters.map(lambda ls: GroupElement(F1, tuple(ls)))
words = st.integers(0, 4).flatmap(lambda n: st.tuples(*[st.integers(0, 5)] * n))


def el(text):
    return F1.element(text)


# -- elementary operations ---------------------------------------------------------


def test_generator_action_on_first_level():
    assert format_word(act(el("a"), parse_word("1", 6)), 6) == "3"
    assert [act(el("b"), (x,))[0] + 1 for x in range(6)] == [1, 3, 5, 4, 6, 2]


def test_sections_of_generators():
    assert section(el("a"), 0) == el("b'")
    assert section(el("b"), 3) == el("c")
    assert equal(section_at(el("b^-8"), parse_word("4", 6)), el("c")).status == selfsim.EQUAL


def test_word_text_round_trip():
    assert parse_word("13", 6) == (0, 2)
    assert format_word((0, 2), 6) == "13"
    assert format_word((0, 10), 12) == "1.11"
    assert parse_word("1.11", 12) == (0, 10)


def test_free_reduction():
    assert el("b b' c c'").letters == ()
    assert str(el("b b' c")) == "c"


# -- word problem -------------------------------------------------------------------


@pytest.mark.parametrize("text", ["acb", "(bc)^2", "c^3", "a^2", "b^24", "1"])
def test_trivial_relations(text):
    assert is_trivial(el(text)).status == selfsim.TRIVIAL


@pytest.mark.parametrize("text", ["b^12", "a", "ab4", "[c, b^4]"])
def test_nontrivial_with_witness(text):
    res = is_trivial(el(text))
    assert res.status == selfsim.NONTRIVIAL
    assert act(el(text), res.witness) != res.witness


def test_budget_gives_inconclusive():
    res = is_trivial(el("[(b^8 c' b^-4 c)^2, b^-8]"), Limits(max_states=1))
    assert res.status in (selfsim.INCONCLUSIVE, selfsim.NONTRIVIAL)
    if res.status == selfsim.INCONCLUSIVE:
        assert res.witness is None


def test_equal_decisions():
    assert equal(el("b^-8"), el("b^16")).status == selfsim.EQUAL
    assert equal(el("ab4"), el("ab12")).status == selfsim.DISTINCT


# -- orders and certificates --------------------------------------------------------------


@pytest.mark.parametrize("name, k", [("a", 2), ("b", 24), ("c", 3)])
def test_generator_orders(name, k):
    res = order(el(name))
    assert res.status == "finite" and res.order == k


@pytest.mark.parametrize("text", ["ab4", "ab12", "ab20"])
def test_direct_certificates(text):
    cert = infinite_order_certificate(el(text))
    assert cert is not None and cert.exponent == 2 and cert.via is None
    assert len(cert.word) <= 2
    assert check_certificate(cert)
    assert order(el(text)).status == "infinite"


def test_chained_certificate():
    cert = infinite_order_certificate(el("[c, b^4]"))
    assert cert is not None and check_certificate(cert)


def test_no_certificate_for_torsion():
    assert infinite_order_certificate(el("c")) is None


def test_tampered_certificate_rejected():
    cert = infinite_order_certificate(el("ab4"))
    bad = selfsim.InfiniteOrderCertificate(el("c"), cert.exponent, cert.word, cert.target,
                                           cert.parity_level, cert.parity_order, cert.via)
    assert not check_certificate(bad)


# -- properties -------------------------------------------------------------------------


@given(elements, elements, words)
def test_right_action(g, h, v):
    assert act(g * h, v) == act(h, act(g, v))


@given(elements, elements, st.integers(0, 5))
def test_cocycle(g, h, x):
    lhs = section(g * h, x)
    rhs = section(g, x) * section(h, act(g, (x,))[0])
    assert lhs == rhs


@given(elements, st.integers(0, 5))
def test_inverse_section(g, x):
    y = act(g, (x,))[0]
    assert section(g.inverse(), y) == section(g, x).inverse()


@settings(max_examples=40, deadline=None)
@given(elements, st.integers(1, 4))
def test_level_compatibility(g, n):
    upper = level_action(g, n)
    lower = level_action(g, n - 1)
    assert upper.prefix_action() == lower
    for idx in range(0, 6 ** n, max(1, 6 ** n // 50)):
        v = selfsim.index_word(idx, 6, n)
        assert upper.image(v) == act(g, v)


@settings(max_examples=60, deadline=None)
@given(elements)
def test_decision_soundness(g):
    res = is_trivial(g)
    if res.status == selfsim.NONTRIVIAL:
        assert act(g, res.witness) != res.witness
    elif res.status == selfsim.TRIVIAL:
        for n in range(1, 5):
            assert level_action(g, n).is_identity()


@settings(max_examples=30, deadline=None)
@given(elements)
def test_certificates_recheck(g):
    cert = infinite_order_certificate(g, e_max=2, depth_max=1)
    if cert is not None:
        assert check_certificate(cert)
        assert is_trivial(g).status == selfsim.NONTRIVIAL


def test_fingerprint_stable():
    assert level_action(el("ab4"), 3).fingerprint() == level_action(el("b^-4 a'")
                                                                    .inverse(), 3).fingerprint()
