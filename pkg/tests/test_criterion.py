from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from imgrowth import catalog
from imgrowth.criterion import (INFINITY, CurveComponent, InvariantEdgeData, ObstructionInput, PortraitError,
                                RamPortrait, check_conditions, orbifold_characteristic, pullback_degrees,
                                ramification_function, thurston_lambda, witness_words)


def portrait(edges, post):
    return RamPortrait.from_edges(edges, post)


# -- ramification and orbifolds ----------------------------------------------------


def test_alpha_f1():
    alpha = ramification_function(catalog.get("f1").portrait)
    assert (alpha["1"], alpha["-1"], alpha["inf"]) == (24, 3, 2)


def test_alpha_matches_generator_orders():
    entry = catalog.get("f1")
    alpha = ramification_function(entry.portrait)
    for gen, label in entry.rule.generators.items():
        assert entry.claims["orders"][gen] == alpha[label]


def test_f1_hyperbolic():
    rep = orbifold_characteristic(catalog.get("f1").portrait)
    assert rep.chi == Fraction(-1, 8)
    assert rep.classification == "hyperbolic"


def test_chebyshev_is_parabolic():
    p = portrait([("0", "-2", 2), ("-2", "2", 1), ("2", "2", 1), ("inf", "inf", 2)], ["-2", "2", "inf"])
    rep = orbifold_characteristic(p)
    assert rep.alpha["-2"] == 2 and rep.alpha["2"] == 2 and rep.alpha["inf"] is INFINITY
    assert rep.chi == 0 and rep.classification == "parabolic"


def test_periodic_critical_cycle_gives_infinity():
    p = portrait([("0", "-1", 2), ("-1", "0", 1), ("inf", "inf", 2)], ["0", "-1", "inf"])
    alpha = ramification_function(p)
    assert all(alpha[v] is INFINITY for v in ("0", "-1", "inf"))
    assert orbifold_characteristic(p).chi == -1


def test_square_map_parabolic():
    p = portrait([("0", "0", 2), ("inf", "inf", 2)], ["0", "inf"])
    rep = orbifold_characteristic(p)
    assert rep.chi == 0


def test_inconsistent_portrait_rejected():
    p = portrait([("0", "x", 2), ("inf", "inf", 2)], ["0", "inf"])
    with pytest.raises(PortraitError):
        ramification_function(p)


# -- growth criterion ----------------------------------------------------------------


def test_f1_criterion():
    entry = catalog.get("f1")
    rep = check_conditions(entry.portrait, entry.edge)
    assert rep.exponential_growth and rep.failed() == []
    assert (rep.k_p, rep.k_q) == (8, 2)
    assert rep.witness == "a*b^4" and rep.witness2 == "a*b^12"
    assert rep.certificate_degree % 2 == 1 or rep.k_p % rep.certificate_degree != 0


@pytest.mark.parametrize("name, kp, kq, w", [
    ("sierpinski-3", 2, 2, "a*b"),
    ("obstructed-3", 2, 2, "a*b"),
    ("sierpinski-5", 2, 2, "a*b"),
    ("poly-P", 4, 4, "a^2*b^2"),
])
def test_catalog_criteria(name, kp, kq, w):
    entry = catalog.get(name)
    rep = check_conditions(entry.portrait, entry.edge)
    assert rep.exponential_growth, rep.failed()
    assert (rep.k_p, rep.k_q, rep.witness) == (kp, kq, w)


def test_even_grid_rejected_for_condition_c():
    with pytest.raises(catalog.CatalogError, match=r"condition \(c\)"):
        catalog.get("sierpinski-4")


def test_condition_c_failure_detected():
    # an edge [p, q] whose interior type-q vertices have unequal degrees
    p = portrait([("p", "p", 1), ("q", "p", 1), ("u", "q", 2), ("v", "p", 1), ("w", "q", 3)], ["p", "q"])
    edge = InvariantEdgeData("p", "q", ("u", "v", "w"))
    rep = check_conditions(p, edge)
    assert "c" in rep.failed()
    assert not rep.exponential_growth


def test_witness_words():
    assert witness_words(8, 2) == ("a*b^4", "a*b^12")
    assert witness_words(2, 2) == ("a*b", "a*b^3")


@pytest.mark.parametrize("name", ["f1", "poly-P", "sierpinski-3", "obstructed-3"])
def test_pullback_oracle_agrees_with_k_values(name):
    entry = catalog.get(name)
    rep = check_conditions(entry.portrait, entry.edge)
    p, q = entry.edge.p, entry.edge.q
    for n in range(1, 6):
        verts = pullback_degrees(entry.portrait, entry.edge, n)
        assert len(verts) == entry.edge.d_E**n + 1
        interior = verts[1:-1]
        kp = {d for t, d in interior if t == p}
        kq = {d for t, d in interior if t == q}
        assert kp <= {rep.k_p} and kq == {rep.k_q}
        if n >= 2:
            assert kp == {rep.k_p}
        types = [t for t, _ in verts]
        assert all(types[i] != types[i + 1] for i in range(len(types) - 1))


# -- obstructions ----------------------------------------------------------------------

components = st.builds(CurveComponent, st.integers(1, 12), st.booleans(), st.booleans())


def hand_lambda(comps):
    total = Fraction(0)
    for c in comps:
        if not c.peripheral and c.homotopic:
            total += Fraction(1, c.degree)
    return total


@settings(max_examples=60)
@given(st.lists(components, max_size=8), st.randoms())
def test_lambda_matches_hand_arithmetic(comps, rnd):
    data = ObstructionInput("g", tuple(comps))
    assert thurston_lambda(data).lam == hand_lambda(comps)
    shuffled = list(comps)
    rnd.shuffle(shuffled)
    assert thurston_lambda(ObstructionInput("g", tuple(shuffled))).lam == thurston_lambda(data).lam


@given(st.lists(components, max_size=8), st.integers(1, 12))
def test_lambda_monotone(comps, d):
    base = thurston_lambda(ObstructionInput("g", tuple(comps))).lam
    more = thurston_lambda(ObstructionInput("g", tuple(comps) + (CurveComponent(d),))).lam
    assert more == base + Fraction(1, d) > base


def test_lambda_twenty_fixed_lists():
    import random

    rnd = random.Random(7)
    for _ in range(25):
        comps = [CurveComponent(rnd.randint(1, 9), rnd.random() < 0.3, rnd.random() < 0.8)
                 for _ in range(rnd.randint(0, 7))]
        assert thurston_lambda(ObstructionInput("g", tuple(comps))).lam == hand_lambda(comps)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_obstructed_family_lambda_one(n):
    rep = thurston_lambda(catalog.get(f"obstructed-{n}").obstruction)
    assert rep.lam == 1 and rep.invariant and rep.obstruction


def test_non_invariant_curve_is_not_obstruction():
    data = ObstructionInput("g", (CurveComponent(1, homotopic=False), CurveComponent(1)))
    assert not thurston_lambda(data).obstruction


def test_invalid_degree():
    with pytest.raises(ValueError):
        CurveComponent(0)
