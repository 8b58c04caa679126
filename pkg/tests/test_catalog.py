import pytest

from imgrowth import catalog


@pytest.mark.parametrize("name", catalog.BASE_ENTRIES)
def test_entries_load_and_validate(name):
    entry = catalog.get(name)
    assert catalog.validate_entry(entry) == []
    assert entry.portrait is not None and entry.edge is not None


def test_capability_matrix():
    rows = {r["name"]: r for r in catalog.capability_matrix()}
    assert rows["f1"]["presentation"] and rows["f1"]["rule"]
    assert rows["poly-P"]["portrait"] and not rows["poly-P"]["rule"]
    assert rows["obstructed-3"]["obstruction"]


def test_f1_claims_recorded():
    claims = catalog.get("f1").claims
    assert claims["orders"] == {"a": 2, "b": 24, "c": 3}


@pytest.mark.parametrize("name", ["sierpinski-7", "obstructed-5"])
def test_family_members(name):
    entry = catalog.get(name)
    n = int(name.split("-")[1])
    assert entry.rule.degree == n * n + (2 if name.startswith("s") else 1)


@pytest.mark.parametrize("name, msg", [("sierpinski-4", "condition"), ("obstructed-1", "at least 3"),
                                       ("nope", "unknown map")])
def test_rejections(name, msg):
    with pytest.raises(catalog.CatalogError, match=msg):
        catalog.get(name)


def test_summary_is_serializable():
    import json

    for name in catalog.BASE_ENTRIES:
        json.dumps(catalog.get(name).summary())
