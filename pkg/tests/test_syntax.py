import pytest

from imgrowth import ParseError, parse_element, parse_presentation


def test_f1_recursion_parses(f1):
    assert f1.degree == 6
    assert f1.names == ("a", "b", "c") or list(f1.names) == ["a", "b", "c"]


@pytest.mark.parametrize("text, expected", [
    ("ab4", "a*b^4"),
    ("a*b^4", "a*b^4"),
    ("b'", "b^-1"),
    ("b^-3", "b^-3"),
    ("(bc)^2", "b*c*b*c"),
    ("1", "1"),
    ("a a'", "1"), ("a a", "a^2"),
    ("[c, b^4]", "c^-1*b^-4*c*b^4"),
    ("b^c", "c^-1*b*c"),
])
def test_element_forms(f1, text, expected):
    assert str(parse_element(text, f1)) == expected


def test_compact_and_explicit_agree(f1):
    assert parse_element("ab12", f1) == parse_element("a b^12", f1)


@pytest.mark.parametrize("source, line", [
    ("a = <a, 1> (1 2)\nb = <a, q> ()", 2),
    ("a = <a, 1> (1 2)\na = <1, 1> ()", 2),
    ("a = <a, 1, 1> (1 2)\nb = <a, 1> ()", 2),
    ("a = <a, 1> (1 9)", 1),
    ("nonsense", 1),
])
def test_malformed_presentation_reports_line(source, line):
    with pytest.raises(ParseError) as exc:
        parse_presentation(source)
    assert exc.value.line == line


def test_degree_directive():
    pres = parse_presentation("degree: 2\na = <> (1 2)\nb = <a, b> ()")
    assert pres.degree == 2


def test_bad_element_position(f1):
    with pytest.raises(ParseError) as exc:
        parse_element("a*q", f1)
    assert exc.value.column == 3
