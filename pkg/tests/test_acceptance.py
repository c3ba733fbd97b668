"""Acceptance criteria.  Each test records one PASS/FAIL line, shown in the terminal summary."""

import itertools
import random
import time

import networkx as nx

from conftest import ACCEPTANCE_LINES
from lepg.catalog import get
from lepg.graph import Graph, comparable, find_structure, random_interval, random_split, split_partition
from lepg.grid import (
    CLAW_CLIQUE,
    EDGE_CLIQUE,
    Shape,
    classify_maximal_cliques,
    interval_representation,
    random_layout,
    realize_layout,
    split_layout_of,
    verify,
)
from lepg.oracle import decide, verify_non_membership
from lepg.recognition import check_certificate, recognize_gemfree, recognize_sbullfree
from lepg.reduction import CnfFormula, build_gphi, embed_from_assignment, sat_solve

LA, LB, LC, LD = Shape.LA, Shape.LB, Shape.LC, Shape.LD
ALL_SUBSETS = [frozenset(c) for r in range(1, 5) for c in itertools.combinations(Shape, r)]


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    assert ok, detail


def test_criterion_1_separation_table():
    table = [
        ("c4", {LA}, True),
        ("k23", {LA, LD}, True),
        ("k23", {LA, LB}, False),
        ("3sun", {LA, LB}, True),
        ("3sun", {LA, LD}, False),
        ("3sun", {LA}, False),
        ("4sun", {LA}, False),
        ("w4", {LA, LB, LD}, True),
        ("w4", {LA, LB}, False),
        ("w4", {LA, LD}, False),
    ]
    wrong, slowest = [], 0.0
    for name, shapes, expected in table:
        g = get(name).graph
        t = time.perf_counter()
        d = decide(g, shapes)
        slowest = max(slowest, time.perf_counter() - t)
        if d.member != expected or (d.member and not verify(d.representation, g).ok):
            wrong.append(f"{name} {sorted(s.name for s in shapes)}")
    ok = not wrong and slowest <= 300
    record(1, ok, f"{len(table) - len(wrong)}/{len(table)} decisions agree, slowest {slowest:.2f}s (limit 300s)")


def test_criterion_2_cliques_are_edge_or_claw():
    rng = random.Random(2)
    graphs = violations = 0
    while graphs < 100:
        n = rng.randint(3, 6)
        nxg = nx.gnp_random_graph(n, rng.choice([0.3, 0.5, 0.7]), seed=rng.randrange(10**9))
        g = Graph(n, nxg.edges())
        reps = [d.representation for d in (decide(g, s) for s in ALL_SUBSETS) if d.member]
        if not reps:
            continue
        graphs += 1
        for r in reps:
            violations += sum(kind not in (EDGE_CLIQUE, CLAW_CLIQUE) for _, kind in classify_maximal_cliques(r))
    record(2, violations == 0, f"{graphs} graphs with a Yes answer, {violations} clique violations")


def planted_universal_at(rng):
    while True:
        m = rng.randint(5, 6)
        h = nx.gnp_random_graph(m, rng.choice([0.3, 0.4, 0.5]), seed=rng.randrange(10**9))
        if nx.find_asteroidal_triple(h) is not None:
            u = m
            return Graph(m + 1, [*h.edges(), *((u, v) for v in range(m))])


def test_criterion_3_universal_at_is_rejected():
    rng = random.Random(3)
    exceptions = 0
    graphs = [planted_universal_at(rng) for _ in range(50)]
    for g in graphs:
        assert find_structure(g, "universal-at") is not None
        exceptions += sum(decide(g, s).member for s in ALL_SUBSETS)
    record(3, exceptions == 0, f"{len(graphs)} planted graphs x {len(ALL_SUBSETS)} shape sets, {exceptions} Yes answers")


def planted_non_members():
    gem_pairs = Graph.loads(
        "n 10\n"
        + "".join(f"e {a} {b}\n" for a, b in itertools.combinations(range(6), 2))
        + "e 6 0\ne 6 1\ne 7 0\ne 7 2\ne 8 3\ne 8 4\ne 9 3\ne 9 5\n"
    )
    uat = Graph(7, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)] + [(6, v) for v in range(6)])
    return [gem_pairs, uat]


def check_recognizer(rec, seed):
    rng = random.Random(seed)
    stats = {"member": 0, "non-member": 0, "disagree": 0, "bad-rep": 0, "bad-cert": 0, "oracle-confirmed": 0}
    pool = iter(planted_non_members())
    seen = 0
    while seen < 200:
        g = next(pool, None)
        if g is None:
            n = rng.randint(3, 10)
            g = random_split(n, rng.randrange(10**9), rng.choice([0.3, 0.5, 0.7]))
        r = rec(g)
        if r.verdict == "precondition-failed":
            continue
        seen += 1
        stats[r.verdict] += 1
        if (r.verdict == "member") != decide(g, {LA}).member:
            stats["disagree"] += 1
        if r.verdict == "member":
            stats["bad-rep"] += not verify(r.representation, g).ok
        else:
            stats["bad-cert"] += not check_certificate(g, r.certificate)
            span = r.certificate.span(g)
            if len(span) <= 10:
                stats["oracle-confirmed"] += verify_non_membership(g, span, {LA})
    return seen, stats


def test_criterion_4_recognizers_match_oracle():
    parts, ok = [], True
    for rec, seed in [(recognize_sbullfree, 41), (recognize_gemfree, 42)]:
        seen, s = check_recognizer(rec, seed)
        ok &= s["disagree"] == s["bad-rep"] == s["bad-cert"] == 0 and s["oracle-confirmed"] == s["non-member"]
        parts.append(
            f"{rec.__name__}: {seen} graphs ({s['member']} member, {s['non-member']} non-member), "
            f"{s['disagree']} disagreements, {s['oracle-confirmed']} spans oracle-confirmed"
        )
    record(4, ok, "; ".join(parts))


def gem_and_sbull_free(rng, count):
    out = []
    while len(out) < count:
        n = rng.randint(6, 12)
        g = random_split(n, rng.randrange(10**9), rng.choice([0.2, 0.3, 0.5]))
        p = split_partition(g)
        if find_structure(g, "gem") is None and find_structure(g, "s-bull", p) is None:
            out.append(g)
    return out


def test_criterion_5_free_graphs_are_accepted():
    graphs = gem_and_sbull_free(random.Random(5), 100)
    accepted = 0
    for g in graphs:
        for rec in (recognize_sbullfree, recognize_gemfree):
            r = rec(g)
            accepted += r.verdict == "member" and verify(r.representation, g).ok
    record(5, accepted == 2 * len(graphs), f"{accepted}/{2 * len(graphs)} recognizer runs accepted with verified representations")


def test_criterion_6_interval_graphs():
    rng = random.Random(6)
    oracle_yes = direct_ok = 0
    for _ in range(50):
        g, intervals = random_interval(rng.randint(1, 10), rng.randrange(10**9))
        oracle_yes += decide(g, {LA}).member
        direct_ok += verify(interval_representation(intervals), g).ok
    record(6, oracle_yes == direct_ok == 50, f"oracle Yes on {oracle_yes}/50, direct degenerate construction verifies on {direct_ok}/50")


def random_formula(rng):
    k = rng.randint(3, 4)
    clauses = [tuple(v * rng.choice((1, -1)) for v in rng.sample(range(1, k + 1), 3)) for _ in range(rng.randint(1, 3))]
    return CnfFormula(k, clauses)


def test_criterion_7_reduction_round_trip():
    rng = random.Random(7)
    done = good = 0
    slowest = 0.0
    while done < 20:
        f = random_formula(rng)
        t = time.perf_counter()
        a = sat_solve(f)
        if a is None:
            continue
        done += 1
        r = embed_from_assignment(f, a)
        g, _ = build_gphi(f, "la")
        fine = verify(r, g).ok and r.shapes == frozenset({LA})
        slowest = max(slowest, time.perf_counter() - t)
        good += fine
    ok = good == done and slowest <= 10
    record(7, ok, f"{good}/{done} satisfiable instances embed and verify, slowest {slowest:.2f}s (limit 10s)")


def chains_comparable(g, layout):
    return all(
        comparable(g, a, b)
        for chain in (layout.crown, layout.trunk, *layout.branches)
        for a, b in itertools.combinations(chain, 2)
    )


def test_criterion_8_layout_round_trip():
    rng = random.Random(8)
    same = compared = 0
    for _ in range(60):
        lay, g, p = random_layout(rng.randint(1, 5), rng.randint(0, 7), rng.randrange(10**9))
        same += split_layout_of(realize_layout(lay, g, p), p) == lay
        compared += chains_comparable(g, lay)
    analysed = analysed_ok = 0
    for g in gem_and_sbull_free(random.Random(80), 30):
        r = recognize_gemfree(g)
        lay = split_layout_of(r.representation, split_partition(g))
        analysed += 1
        analysed_ok += chains_comparable(g, lay)
    ok = same == compared == 60 and analysed_ok == analysed
    record(
        8,
        ok,
        f"{same}/60 generated layouts round-trip, comparability holds on {compared}/60 generated "
        f"and {analysed_ok}/{analysed} analysed recognizer layouts",
    )
