"""Simple undirected graphs, split partitions, fixed-pattern search and generators.

Vertices are dense integers ``0..n-1``.  Graphs are immutable once built.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import networkx as nx


class GraphFormatError(ValueError):
    """Malformed graph text; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class Graph:
    """Immutable simple graph on vertices ``0..n-1`` with optional labels."""

    __slots__ = ("_n", "_adj", "_labels")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._adj = tuple(frozenset(s) for s in adj)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("label count does not match vertex count")
        self._labels = labels

    @property
    def n(self) -> int:
        return self._n

    @property
    def labels(self) -> tuple[str, ...] | None:
        return self._labels

    def __len__(self) -> int:
        return self._n

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self._n) for v in sorted(self._adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj) // 2

    def label(self, v: int) -> str:
        return self._labels[v] if self._labels else str(v)

    def neighborhood(self, vs: Iterable[int]) -> set[int]:
        """N(X): vertices outside X with a neighbor in X."""
        vs = set(vs)
        out: set[int] = set()
        for v in vs:
            out |= self._adj[v]
        return out - vs

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns it with the new->old vertex map."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u in keep for v in self._adj[u] if v in index and u < v]
        labels = [self.label(v) for v in keep] if self._labels else None
        return Graph(len(keep), edges, labels), keep

    def remove(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self._n) if v not in drop)

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(b in self._adj[a] for a, b in itertools.combinations(vs, 2))

    def is_stable(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return not any(b in self._adj[a] for a, b in itertools.combinations(vs, 2))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self.edges())
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, edges={self.edges()})"

    # text format ---------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"n {self._n}"]
        lines += [f"e {u} {v}" for u, v in self.edges()]
        if self._labels:
            lines += [f"l {v} {lab}" for v, lab in enumerate(self._labels)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Graph":
        n = None
        edges: list[tuple[int, int]] = []
        labels: dict[int, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if n is None:
                    if parts[0] != "n" or len(parts) != 2:
                        raise GraphFormatError("expected 'n <vertexCount>' as first data line", lineno)
                    n = int(parts[1])
                    if n < 0:
                        raise GraphFormatError("negative vertex count", lineno)
                elif parts[0] == "e" and len(parts) == 3:
                    u, v = int(parts[1]), int(parts[2])
                    if not (0 <= u < n and 0 <= v < n) or u == v:
                        raise GraphFormatError(f"bad edge {u} {v}", lineno)
                    edges.append((u, v))
                elif parts[0] == "l" and len(parts) >= 3:
                    v = int(parts[1])
                    if not 0 <= v < n:
                        raise GraphFormatError(f"label for unknown vertex {v}", lineno)
                    labels[v] = " ".join(parts[2:])
                else:
                    raise GraphFormatError(f"unrecognized line {line!r}", lineno)
            except ValueError as exc:
                if isinstance(exc, GraphFormatError):
                    raise
                raise GraphFormatError(str(exc), lineno) from None
        if n is None:
            raise GraphFormatError("missing 'n <vertexCount>' line")
        lab = [labels.get(v, str(v)) for v in range(n)] if labels else None
        return cls(n, edges, lab)


def from_edges(edges: Iterable[tuple[int, int]], n: int | None = None, labels=None) -> Graph:
    edges = list(edges)
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges, labels)


def from_named_edges(names: Sequence[str], edges: Iterable[str]) -> Graph:
    """Build a labelled graph from two-letter edge names such as ``"ab"``."""
    index = {name: i for i, name in enumerate(names)}
    return Graph(len(names), [(index[e[0]], index[e[1]]) for e in edges], names)


# split partitions --------------------------------------------------------


@dataclass(frozen=True)
class SplitPartition:
    clique: frozenset[int]
    stable: frozenset[int]

    def is_valid_for(self, g: Graph) -> bool:
        return (
            self.clique | self.stable == set(g.vertices())
            and not (self.clique & self.stable)
            and g.is_clique(self.clique)
            and g.is_stable(self.stable)
        )

    def restrict(self, keep: Sequence[int]) -> "SplitPartition":
        """Partition of ``g.induced(keep)`` (vertices renumbered as ``induced`` does)."""
        index = {v: i for i, v in enumerate(sorted(keep))}
        return SplitPartition(
            frozenset(index[v] for v in self.clique if v in index),
            frozenset(index[v] for v in self.stable if v in index),
        )


def split_partition(g: Graph) -> Optional[SplitPartition]:
    """Canonical split partition: maximum clique side, lexicographically smallest."""
    if g.n == 0:
        return SplitPartition(frozenset(), frozenset())
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx())]
    omega = max(len(c) for c in cliques)
    for c in sorted(c for c in cliques if len(c) == omega):
        rest = [v for v in g.vertices() if v not in c]
        if g.is_stable(rest):
            return SplitPartition(frozenset(c), frozenset(rest))
    # a split graph always admits a partition whose clique side is maximum
    return None


def dominates(g: Graph, x: int, y: int) -> bool:
    """x dominates y iff N(y) is contained in N(x) plus x."""
    if x == y:
        raise ValueError("dominates needs two distinct vertices")
    return g.neighbors(y) <= g.neighbors(x) | {x}


def comparable(g: Graph, x: int, y: int) -> bool:
    return dominates(g, x, y) or dominates(g, y, x)


# pattern search ----------------------------------------------------------

STRUCTURE_KINDS = ("gem", "bull", "s-bull", "asteroidal-triple", "universal-at", "twins", "induced-c4")

# role-ordered templates: vertex i of the tuple plays role ROLES[kind][i]
_GEM_EDGES = {(0, 1), (1, 2), (2, 3), (4, 0), (4, 1), (4, 2), (4, 3)}
_BULL_EDGES = {(0, 1), (1, 2), (2, 3), (4, 1), (4, 2)}
_C4_EDGES = {(0, 1), (1, 2), (2, 3), (3, 0)}
ROLES = {
    "gem": ("a", "b", "c", "d", "e"),
    "bull": ("a", "b", "c", "d", "e"),
    "s-bull": ("a", "b", "c", "d", "e"),
    "induced-c4": ("a", "b", "c", "d"),
    "asteroidal-triple": ("x", "y", "z"),
    "universal-at": ("u", "x", "y", "z"),
    "twins": ("a", "b"),
}


@dataclass(frozen=True)
class StructureWitness:
    kind: str
    vertices: tuple[int, ...]
    roles: tuple[str, ...]
    # twins: "true" or "false"; universal-at / asteroidal-triple: connecting paths
    tag: str = ""
    paths: tuple[tuple[int, ...], ...] = field(default=())

    def span(self) -> frozenset[int]:
        out = set(self.vertices)
        for p in self.paths:
            out.update(p)
        return frozenset(out)


def _matches(g: Graph, verts: Sequence[int], template: set[tuple[int, int]]) -> bool:
    k = len(verts)
    for i in range(k):
        for j in range(i + 1, k):
            want = (i, j) in template or (j, i) in template
            if g.has_edge(verts[i], verts[j]) != want:
                return False
    return True


def _template_search(g: Graph, template, size: int, accept=None):
    for subset in itertools.combinations(range(g.n), size):
        for perm in itertools.permutations(subset):
            if _matches(g, perm, template) and (accept is None or accept(perm)):
                return perm
    return None


def _avoiding_path(g: Graph, allowed: set[int], a: int, b: int) -> Optional[tuple[int, ...]]:
    """Shortest a-b path inside ``allowed`` (BFS, smallest-index tie-break)."""
    if a not in allowed or b not in allowed:
        return None
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(g.neighbors(v)):
                if w in allowed and w not in prev:
                    prev[w] = v
                    nxt.append(w)
        frontier = nxt
    if b not in prev:
        return None
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return tuple(reversed(path))


def asteroidal_paths(g: Graph, triple: Sequence[int], within: Optional[set[int]] = None):
    """Connecting paths if ``triple`` is an AT of g[within], else None."""
    pool = set(g.vertices()) if within is None else set(within)
    if not set(triple) <= pool:
        return None
    paths = []
    for i in range(3):
        a, b = triple[i], triple[(i + 1) % 3]
        c = triple[(i + 2) % 3]
        p = _avoiding_path(g, pool - g.neighbors(c) - {c}, a, b)
        if p is None:
            return None
        paths.append(p)
    return tuple(paths)


def find_structure(g: Graph, kind: str, partition: Optional[SplitPartition] = None) -> Optional[StructureWitness]:
    """Lexicographically first induced occurrence of ``kind`` or None."""
    if kind not in STRUCTURE_KINDS:
        raise ValueError(f"unknown structure kind {kind!r}")
    roles = ROLES[kind]
    if kind == "s-bull":
        if partition is None:
            raise ValueError("partition required")
        stable = partition.stable
        hit = _template_search(g, _BULL_EDGES, 5, lambda p: p[0] in stable and p[3] in stable and p[4] in stable)
        return StructureWitness(kind, hit, roles) if hit else None
    if kind in ("gem", "bull", "induced-c4"):
        template = {"gem": _GEM_EDGES, "bull": _BULL_EDGES, "induced-c4": _C4_EDGES}[kind]
        hit = _template_search(g, template, len(roles))
        return StructureWitness(kind, hit, roles) if hit else None
    if kind == "twins":
        for a, b in itertools.combinations(range(g.n), 2):
            if g.neighbors(a) | {a} == g.neighbors(b) | {b}:
                return StructureWitness(kind, (a, b), roles, tag="true")
            if g.neighbors(a) == g.neighbors(b):
                return StructureWitness(kind, (a, b), roles, tag="false")
        return None
    if kind == "asteroidal-triple":
        for t in itertools.combinations(range(g.n), 3):
            paths = asteroidal_paths(g, t)
            if paths:
                return StructureWitness(kind, t, roles, paths=paths)
        return None
    # universal-at
    for u in range(g.n):
        nbrs = g.neighbors(u)
        for t in itertools.combinations(sorted(nbrs), 3):
            paths = asteroidal_paths(g, t, within=set(nbrs))
            if paths:
                return StructureWitness(kind, (u,) + t, roles, paths=paths)
    return None


def check_witness(g: Graph, w: StructureWitness, partition: Optional[SplitPartition] = None) -> bool:
    """Re-check that a witness satisfies the defining pattern of its kind."""
    v = w.vertices
    if len(set(v)) != len(v) or any(not 0 <= x < g.n for x in v):
        return False
    if w.kind == "gem":
        return len(v) == 5 and _matches(g, v, _GEM_EDGES)
    if w.kind in ("bull", "s-bull"):
        if len(v) != 5 or not _matches(g, v, _BULL_EDGES):
            return False
        if w.kind == "s-bull":
            if partition is None:
                raise ValueError("partition required")
            return {v[0], v[3], v[4]} <= partition.stable
        return True
    if w.kind == "induced-c4":
        return len(v) == 4 and _matches(g, v, _C4_EDGES)
    if w.kind == "twins":
        a, b = v
        if w.tag == "true":
            return g.neighbors(a) | {a} == g.neighbors(b) | {b}
        return g.neighbors(a) == g.neighbors(b)
    if w.kind == "asteroidal-triple":
        return asteroidal_paths(g, v) is not None
    if w.kind == "universal-at":
        u, t = v[0], v[1:]
        return asteroidal_paths(g, t, within=set(g.neighbors(u))) is not None
    raise ValueError(f"unknown structure kind {w.kind!r}")


# generators --------------------------------------------------------------


def generate(kind: str, *params) -> Graph:
    """Deterministic generator: cycle, complete_bipartite, wheel, k_sun, random_split, random_interval."""
    if kind == "cycle":
        (n,) = params
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "complete_bipartite":
        a, b = params
        if a < 0 or b < 0:
            raise ValueError("part sizes must be non-negative")
        return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if kind == "wheel":
        (n,) = params
        if n < 3:
            raise ValueError("wheel needs a rim of at least 3 vertices")
        rim = [(i, (i + 1) % n) for i in range(n)]
        return Graph(n + 1, rim + [(n, i) for i in range(n)])
    if kind == "k_sun":
        (k,) = params
        if k < 3:
            raise ValueError("k_sun needs k >= 3")
        edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
        edges += [(k + i, i) for i in range(k)] + [(k + i, (i + 1) % k) for i in range(k)]
        labels = [f"c{i + 1}" for i in range(k)] + [f"s{i + 1}" for i in range(k)]
        return Graph(2 * k, edges, labels)
    if kind == "random_split":
        n, seed = params[:2]
        p = params[2] if len(params) > 2 else 0.5
        return random_split(n, seed, p)
    if kind == "random_interval":
        n, seed = params
        return random_interval(n, seed)[0]
    raise ValueError(f"unknown generator {kind!r}")


def random_split(n: int, seed: int, p: float = 0.5, clique_size: int | None = None) -> Graph:
    """Random split graph: clique on the first vertices, stable rest, C-S edges with prob p."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = random.Random(seed)
    k = clique_size if clique_size is not None else rng.randint(min(1, n), n)
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges += [(s, c) for s in range(k, n) for c in range(k) if rng.random() < p]
    return Graph(n, edges)


def random_interval(n: int, seed: int, span: int | None = None) -> tuple[Graph, list[tuple[int, int]]]:
    """Random interval graph with its integer intervals (positive length, open overlap)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = random.Random(seed)
    span = span or 2 * n + 2
    intervals = []
    for _ in range(n):
        a = rng.randint(0, span - 1)
        b = rng.randint(a + 1, min(span, a + max(2, span // 3)))
        intervals.append((a, b))
    edges = [
        (i, j)
        for i, j in itertools.combinations(range(n), 2)
        if max(intervals[i][0], intervals[j][0]) < min(intervals[i][1], intervals[j][1])
    ]
    return Graph(n, edges), intervals
