import pytest

from lepg.catalog import (
    ASSERTED,
    PLACEHOLDERS,
    CatalogError,
    check_entry,
    format_report,
    get,
    names,
    separation_report,
    separation_rows,
)
from lepg.graph import Graph
from lepg.grid import Shape, verify

LA, LB, LD = Shape.LA, Shape.LB, Shape.LD


def test_lookup_examples():
    k23 = get("k23")
    assert (k23.graph.n, k23.graph.edge_count()) == (5, 6)
    facts = {(f.shapes, f.member) for f in k23.facts}
    assert (frozenset({LA, LD}), True) in facts and (frozenset({LA, LB}), False) in facts
    assert all(f.source == ASSERTED for f in k23.facts)
    assert get("K23").graph == k23.graph


def test_sun_family():
    assert get("ksun(3)").graph == get("3sun").graph
    assert get("5sun").graph.n == 10
    with pytest.raises(CatalogError):
        get("ksun(2)")


@pytest.mark.parametrize("name", ["c4", "k23", "3sun", "w4", "gem", "bull"])
def test_stored_representations_verify(name):
    e = get(name)
    assert e.representations
    for r in e.representations:
        assert verify(r, e.graph).ok


@pytest.mark.parametrize("name", ["c4", "k23", "3sun", "w4"])
def test_facts_agree_with_oracle(name):
    assert check_entry(get(name)) == []


def test_entry_text_is_a_graph_file():
    e = get("3sun")
    assert Graph.loads(e.dumps()) == e.graph
    assert "# fact LA,LD non-member literature" in e.dumps()


@pytest.mark.parametrize("name", PLACEHOLDERS)
def test_placeholders_are_refused(name):
    with pytest.raises(CatalogError, match="figure-only"):
        get(name)


def test_unknown_name():
    with pytest.raises(CatalogError, match="known:"):
        get("petersen")
    assert "w4" in names()


def test_separation_report():
    rows = separation_report()
    assert [r.status for r in rows[:-1]] == ["verified"] * 4
    assert rows[-1].status.startswith("asserted") and not rows[-1].witnesses
    text = format_report(rows)
    assert "k23 in [LA,LB]: expected no, oracle no" in text
    assert all(w.observed is None for r in separation_rows() for w in r.witnesses)
