import random

import networkx as nx
import pytest

from helpers import brute_force_representable
from lepg.catalog import get
from lepg.graph import Graph, from_edges, generate
from lepg.grid import Shape, verify
from lepg.oracle import OracleLimitError, decide, verify_non_membership

LA, LB, LC, LD = Shape.LA, Shape.LB, Shape.LC, Shape.LD


@pytest.mark.parametrize(
    "name,shapes,member",
    [
        ("c4", {LA}, True),
        ("k23", {LA, LB}, False),
        ("k23", {LA, LD}, True),
        ("3sun", {LA, LD}, False),
        ("3sun", {LA, LB}, True),
        ("w4", {LA, LB, LD}, True),
        ("w4", {LA, LB}, False),
        ("w4", {LA, LD}, False),
    ],
)
def test_decide_examples(name, shapes, member):
    g = get(name).graph
    d = decide(g, shapes)
    assert d.member == member
    if member:
        assert verify(d.representation, g).ok
        assert all(p.owned_by(shapes) for p in d.representation.paths.values())
    else:
        assert d.describe().startswith("no")


def test_negative_answer_names_bound():
    d = decide(get("k23").graph, {LA, LB})
    assert d.describe() == "no (exhausted grid 10x10)"
    assert decide(get("k23").graph, {LA, LB}, grid_bound=6).grid_bound == 6


def test_pruned_and_plain_search_agree():
    for name, shapes in [("c4", {LA}), ("k23", {LA, LB}), ("k23", {LA, LD}), ("3sun", {LA})]:
        g = get(name).graph
        assert decide(g, shapes).member == decide(g, shapes, prune=False).member


def test_verify_non_membership_examples():
    sun = get("3sun").graph
    big = Graph(8, [*sun.edges(), (5, 6), (6, 7)])
    assert verify_non_membership(big, range(6), {LA})
    c4 = generate("cycle", 4)
    host = Graph(6, [*c4.edges(), (3, 4), (4, 5)])
    assert not verify_non_membership(host, range(4), {LA})
    assert verify_non_membership(generate("k_sun", 4), range(8), {LA})


def test_disconnected_and_empty_graphs():
    g = Graph(5, [(0, 1), (2, 3), (3, 4)])
    d = decide(g, {LA})
    assert d.member and verify(d.representation, g).ok
    assert decide(Graph(0), {LA}).member


def test_vertex_limit(monkeypatch):
    g = generate("cycle", 13)
    with pytest.raises(OracleLimitError):
        decide(g, {LA})
    monkeypatch.setenv("EPG_ORACLE_LIMIT", "3")
    with pytest.raises(OracleLimitError):
        decide(generate("cycle", 4), {LA})
    with pytest.raises(ValueError):
        decide(g, set())


@pytest.mark.parametrize("shapes", [{LA}, {LA, LB}, {LA, LD}], ids=["LA", "LA-LB", "LA-LD"])
def test_matches_naive_enumerator_up_to_four_vertices(shapes):
    for atlas in nx.graph_atlas_g()[1:19]:
        g = Graph(atlas.number_of_nodes(), atlas.edges())
        assert decide(g, shapes).member == brute_force_representable(g, shapes, 3), list(atlas.edges())


def test_naive_enumerator_finds_nothing_for_k23_without_opposite_shapes():
    g = generate("complete_bipartite", 2, 3)
    assert not brute_force_representable(g, {LA, LB}, 3)
    assert brute_force_representable(g, {LA, LD}, 3)


def test_universal_at_filter():
    g = from_edges(
        [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2), (0, 4), (1, 5), (2, 6), (3, 4), (3, 5), (3, 6)], 7
    )
    d = decide(g, set(Shape))
    assert not d.member and "asteroidal" in d.describe()


def test_monotone_in_shape_set():
    for name in ("c4", "k23", "3sun"):
        g = get(name).graph
        for small, big in [({LA}, {LA, LB}), ({LA}, {LA, LD}), ({LA, LB}, {LA, LB, LD})]:
            if decide(g, small).member:
                assert decide(g, big).member


def test_hereditary_on_random_subsets():
    rng = random.Random(4)
    g = get("w4").graph
    for _ in range(8):
        keep = sorted(rng.sample(range(g.n), rng.randint(1, g.n - 1)))
        h, _ = g.induced(keep)
        assert decide(h, {LA, LB, LD}).member
