import itertools
import random

import pytest

from lepg.graph import Graph, SplitPartition, from_edges, from_named_edges, random_split, split_partition
from lepg.grid import Shape, split_layout_of, verify
from lepg.oracle import decide
from lepg.recognition import (
    Certificate,
    CertificateError,
    build_no_trunk,
    check_certificate,
    parse_report,
    preprocess,
    recognize_gemfree,
    recognize_sbullfree,
)


def cluster_graph(m):
    """Clique {a_i, b_i}; cluster i adds u_i ~ a_i, v_i ~ b_i, w_i ~ a_i, b_i."""
    clique = [f"{x}{i}" for i in range(1, m + 1) for x in "ab"]
    stable = [(f"{s}{i}", [f"{x}{i}" for x in ns]) for i in range(1, m + 1) for s, ns in [("u", "a"), ("v", "b"), ("w", "ab")]]
    names = clique + [s for s, _ in stable]
    ix = {v: k for k, v in enumerate(names)}
    edges = [(ix[a], ix[b]) for a, b in itertools.combinations(clique, 2)]
    edges += [(ix[s], ix[c]) for s, ns in stable for c in ns]
    return from_edges(edges, len(names), names), SplitPartition(frozenset(range(len(clique))), frozenset(range(len(clique), len(names))))


def universal_at_graph():
    return from_named_edges("abcxyzu", ["ab", "bc", "ca", "ax", "by", "cz", "ua", "ub", "uc", "ux", "uy", "uz"])


def gem_pairs_graph():
    names = ["y1", "x1", "x2", "y2", "w1", "w2", "s1", "s2", "t1", "t2"]
    ix = {v: k for k, v in enumerate(names)}
    edges = [(ix[a], ix[b]) for a, b in itertools.combinations(names[:6], 2)]
    for s, ns in [("s1", ["y1", "x1"]), ("s2", ["y1", "x2"]), ("t1", ["y2", "w1"]), ("t2", ["y2", "w2"])]:
        edges += [(ix[s], ix[n]) for n in ns]
    return from_edges(edges, 10, names)


def test_preprocess_twins():
    # 2 and 3 both see only clique vertex 0; nobody is universal
    g = from_edges([(0, 1), (0, 2), (0, 3), (1, 4)], 5)
    h, q, log = preprocess(g, SplitPartition(frozenset({0, 1}), frozenset({2, 3, 4})))
    assert log[0].rule == "twins" and log[0].removed() == (3,) and log[0].twin == 2


def test_preprocess_single_clique_vertex_with_twins():
    g = from_edges([(0, 1), (0, 2)], 3)
    h, q, log = preprocess(g, SplitPartition(frozenset({0}), frozenset({1, 2})))
    removed = [v for e in log for v in e.removed()]
    assert {1, 2} & set(removed) and h.n == 0


def test_preprocess_k4_and_threshold():
    k4 = from_edges(list(itertools.combinations(range(4), 2)))
    h, _, log = preprocess(k4, split_partition(k4))
    assert h.n == 0 and [e.rule for e in log] == ["universal"] * 4
    # three-level domination chain
    th = from_edges([(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (4, 0), (5, 0), (6, 1)], 7)
    h, _, log = preprocess(th, SplitPartition(frozenset({0, 1, 2}), frozenset({3, 4, 5, 6})))
    assert h.n == 0 and len(log) >= 1


def test_universal_at_certificate():
    g = universal_at_graph()
    r = recognize_sbullfree(g)
    assert r.verdict == "non-member"
    cert = r.certificate
    assert cert.reason == "universal-at"
    roles = dict(cert.witness)
    assert [g.label(v) for v in roles["u"]] == ["u"]
    assert sorted(g.label(v) for v in roles["at"]) == ["x", "y", "z"]
    assert check_certificate(g, cert) and cert.oracle_checked
    assert not decide(g, {Shape.LA}).member


def test_gem_pairs_certificate():
    g = gem_pairs_graph()
    r = recognize_sbullfree(g)
    assert r.verdict == "non-member" and r.certificate.reason == "two-incomparable-gem-pairs"
    assert check_certificate(g, r.certificate) and r.certificate.oracle_checked
    # making t1 dominate s1 breaks the cross-incomparability requirement
    ix = {g.label(v): v for v in g.vertices()}
    extra = [(ix["t1"], ix["y1"]), (ix["t1"], ix["x1"])]
    h = Graph(g.n, [*g.edges(), *extra], g.labels)
    assert not check_certificate(h, r.certificate)


def test_certificate_errors():
    g = universal_at_graph()
    with pytest.raises(CertificateError):
        check_certificate(g, Certificate("nonsense", ()))
    with pytest.raises(CertificateError):
        check_certificate(g, Certificate("universal-at", (("u", (99,)), ("at", (0, 1, 2)))))


def test_two_cluster_member():
    g, _ = cluster_graph(2)
    r = recognize_gemfree(g)
    assert r.verdict == "member"
    assert verify(r.representation, g).ok
    assert decide(g, {Shape.LA}).member


def test_three_cluster_non_member():
    g, _ = cluster_graph(3)
    assert g.n == 15
    r = recognize_gemfree(g)
    assert r.verdict == "non-member" and r.certificate.reason == "three-incomparable-s-bulls"
    assert check_certificate(g, r.certificate)


def test_threshold_member_fully_reduced():
    th = from_edges([(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (4, 0)], 5)
    for rec in (recognize_gemfree, recognize_sbullfree):
        r = rec(th)
        assert r.verdict == "member" and verify(r.representation, th).ok


def test_preconditions():
    assert recognize_sbullfree(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])).verdict == "precondition-failed"
    sun = from_named_edges("abcdef", ["ab", "bc", "ca", "da", "dc", "ea", "eb", "fb", "fc"])
    r = recognize_sbullfree(sun)
    assert r.verdict == "precondition-failed" and r.obstruction.kind == "s-bull"
    gem = from_named_edges("abcde", ["ab", "bc", "cd", "ea", "eb", "ec", "ed"])
    assert recognize_gemfree(gem).verdict == "precondition-failed"


def test_build_no_trunk():
    g, p = cluster_graph(1)
    rep = build_no_trunk(g, p)
    assert verify(rep, g).ok and split_layout_of(rep, p).trunk == ()
    tiny = from_edges([(0, 1)])
    assert len(build_no_trunk(tiny, SplitPartition(frozenset({0}), frozenset({1})))) == 2
    g2, p2 = cluster_graph(2)
    with pytest.raises(ValueError, match="incomparable S-bulls"):
        build_no_trunk(g2, p2)


def test_report_round_trip():
    for g, rec in [(universal_at_graph(), recognize_sbullfree), (cluster_graph(2)[0], recognize_gemfree)]:
        r = rec(g)
        verdict, rep, cert = parse_report(r.report())
        assert verdict == r.verdict
        if rep is not None:
            assert rep == r.representation
        if cert is not None:
            assert cert.reason == r.certificate.reason and check_certificate(g, cert)


@pytest.mark.parametrize("rec,kind", [(recognize_sbullfree, "s-bull"), (recognize_gemfree, "gem")])
def test_random_agreement_with_oracle(rec, kind):
    rng = random.Random(7)
    seen = 0
    while seen < 25:
        n = rng.randint(3, 9)
        g = random_split(n, rng.randrange(10**6), rng.choice([0.3, 0.5]))
        r = rec(g)
        if r.verdict == "precondition-failed":
            continue
        seen += 1
        assert (r.verdict == "member") == decide(g, {Shape.LA}).member
        if r.verdict == "member":
            assert verify(r.representation, g).ok
        else:
            assert check_certificate(g, r.certificate)
