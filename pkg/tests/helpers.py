"""Independent reference routines used only by the tests."""

from __future__ import annotations

import itertools

import networkx as nx

from lepg.graph import Graph
from lepg.grid import LPath


def all_paths(shapes, size):
    """Every single-bend path with all points inside [0, size]^2."""
    out = []
    for s in shapes:
        for x, y in itertools.product(range(size + 1), repeat=2):
            for vlen, hlen in itertools.product(range(size + 1), repeat=2):
                if vlen + hlen == 0:
                    continue
                ex, ey = x + s.hdir * hlen, y + s.vdir * vlen
                if 0 <= ex <= size and 0 <= ey <= size:
                    out.append(LPath(s, x, y, vlen, hlen))
    # degenerate segments show up once per shape; keep one copy by edge set
    seen, uniq = set(), []
    for p in out:
        key = p.edges()
        if key not in seen:
            seen.add(key)
            uniq.append(p)
    return uniq


def brute_force_representable(g: Graph, shapes, size: int) -> bool:
    """Naive backtracking over explicit paths in a small box."""
    pool = [(p, p.edges()) for p in all_paths(shapes, size)]
    chosen = []

    def place(v):
        if v == g.n:
            return True
        for p, e in pool:
            if all(bool(e & chosen[u][1]) == g.has_edge(u, v) for u in range(v)):
                chosen.append((p, e))
                if place(v + 1):
                    return True
                chosen.pop()
        return False

    return place(0)


GEM = nx.Graph([(0, 1), (1, 2), (2, 3), (4, 0), (4, 1), (4, 2), (4, 3)])


def has_induced(g: Graph, pattern: nx.Graph) -> bool:
    h = g.to_networkx()
    k = pattern.number_of_nodes()
    return any(nx.is_isomorphic(h.subgraph(c), pattern) for c in itertools.combinations(h.nodes, k))


def is_split_brute(g: Graph) -> bool:
    verts = list(g.vertices())
    for r in range(len(verts) + 1):
        for c in itertools.combinations(verts, r):
            rest = [v for v in verts if v not in c]
            if g.is_clique(c) and g.is_stable(rest):
                return True
    return False
