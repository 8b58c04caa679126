from hypothesis import given, strategies as st

from imgrowth.perm import Perm

perms = st.integers(1, 7).flatmap(lambda d: st.permutations(range(d)).map(lambda p: Perm(tuple(p))))


def test_parse_and_format():
    p = Perm.parse("(1 3)(2 5)(4 6)", 6)
    assert p(0) == 2 and p(2) == 0
    assert str(p) == "(1 3)(2 5)(4 6)"
    assert Perm.parse("()", 3).is_identity()


def test_product_applies_left_factor_first():
    p = Perm.parse("(1 2)", 3)
    q = Perm.parse("(2 3)", 3)
    assert (p * q)(0) == q(p(0)) == 2


def test_order_and_cycle_type():
    p = Perm.parse("(2 3 5 6)", 6)
    assert p.order() == 4
    assert p.cycle_type() == (4,)


@given(perms)
def test_inverse_roundtrip(p):
    assert (p * p.inverse()).is_identity()
    assert Perm.parse(str(p), p.degree) == p
