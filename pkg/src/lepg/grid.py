"""Single-bend grid paths, their edge-intersection graphs, and split layouts.

Coordinates are signed integers, x to the right and y up.  A unit grid edge
is stored as a sorted pair of its two end points.
"""

from __future__ import annotations

import enum
import functools
import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .graph import Graph, GraphFormatError, SplitPartition, dominates

Point = tuple[int, int]
GridEdge = tuple[Point, Point]


class Shape(enum.Enum):
    """Arm directions as (horizontal, vertical) unit steps."""

    LA = (1, 1)  # up + right
    LB = (-1, 1)  # up + left
    LC = (1, -1)  # down + right
    LD = (-1, -1)  # down + left

    @property
    def hdir(self) -> int:
        return self.value[0]

    @property
    def vdir(self) -> int:
        return self.value[1]

    @classmethod
    def from_dirs(cls, hdir: int, vdir: int) -> "Shape":
        return cls((hdir, vdir))

    def directions(self) -> frozenset[str]:
        return frozenset({"right" if self.hdir > 0 else "left", "up" if self.vdir > 0 else "down"})


ALL_SHAPES = frozenset(Shape)


def parse_shapes(text: str) -> frozenset[Shape]:
    names = [t.strip().upper() for t in text.replace(" ", ",").split(",") if t.strip()]
    if not names:
        raise ValueError("empty shape set")
    try:
        return frozenset(Shape[n] for n in names)
    except KeyError as exc:
        raise ValueError(f"unknown shape {exc.args[0]!r}") from None


def format_shapes(shapes: Iterable[Shape]) -> str:
    return ",".join(s.name for s in sorted(shapes, key=lambda s: s.name))


def unit_edge(a: Point, b: Point) -> GridEdge:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class LPath:
    shape: Shape
    x: int
    y: int
    vlen: int
    hlen: int

    def __post_init__(self):
        if self.vlen < 0 or self.hlen < 0:
            raise ValueError("arm lengths must be non-negative")
        if self.vlen + self.hlen < 1:
            raise ValueError("path must contain at least one grid edge")

    @property
    def bend(self) -> Point:
        return (self.x, self.y)

    @property
    def degenerate(self) -> bool:
        return self.vlen == 0 or self.hlen == 0

    def vertical_span(self) -> Optional[tuple[int, int]]:
        if not self.vlen:
            return None
        end = self.y + self.shape.vdir * self.vlen
        return (min(self.y, end), max(self.y, end))

    def horizontal_span(self) -> Optional[tuple[int, int]]:
        if not self.hlen:
            return None
        end = self.x + self.shape.hdir * self.hlen
        return (min(self.x, end), max(self.x, end))

    def vertical_end(self) -> Point:
        return (self.x, self.y + self.shape.vdir * self.vlen)

    def horizontal_end(self) -> Point:
        return (self.x + self.shape.hdir * self.hlen, self.y)

    def edges(self) -> frozenset[GridEdge]:
        return path_edges(self)

    def translate(self, dx: int, dy: int) -> "LPath":
        return replace(self, x=self.x + dx, y=self.y + dy)

    def transform(self, m: tuple[int, int, int, int]) -> "LPath":
        """Apply the integer orthogonal matrix ``(a, b, c, d)`` = [[a, b], [c, d]]."""
        a, b, c, d = m

        def apply(vx, vy):
            return (a * vx + b * vy, c * vx + d * vy)

        bx, by = apply(self.x, self.y)
        # images of the horizontal and vertical arm direction vectors
        h = apply(self.shape.hdir, 0)
        v = apply(0, self.shape.vdir)
        if h[1] == 0:  # horizontal arm stays horizontal
            shape = Shape.from_dirs(h[0], v[1])
            return LPath(shape, bx, by, self.vlen, self.hlen)
        shape = Shape.from_dirs(v[0], h[1])
        return LPath(shape, bx, by, self.hlen, self.vlen)

    def owned_by(self, shapes: Iterable[Shape]) -> bool:
        # straight segments belong to every shape class
        return self.degenerate or self.shape in set(shapes)


@functools.lru_cache(maxsize=1 << 16)
def path_edges(p: LPath) -> frozenset[GridEdge]:
    out = set()
    for i in range(p.vlen):
        a = (p.x, p.y + p.shape.vdir * i)
        b = (p.x, p.y + p.shape.vdir * (i + 1))
        out.add(unit_edge(a, b))
    for i in range(p.hlen):
        a = (p.x + p.shape.hdir * i, p.y)
        b = (p.x + p.shape.hdir * (i + 1), p.y)
        out.add(unit_edge(a, b))
    return frozenset(out)


# the eight symmetries of the square as [[a, b], [c, d]]
SQUARE_SYMMETRIES = (
    (1, 0, 0, 1),
    (0, -1, 1, 0),
    (-1, 0, 0, -1),
    (0, 1, -1, 0),
    (-1, 0, 0, 1),
    (1, 0, 0, -1),
    (0, 1, 1, 0),
    (0, -1, -1, 0),
)
TRANSPOSE = (0, 1, 1, 0)


@dataclass(frozen=True)
class Representation:
    paths: Mapping[int, LPath]
    shapes: frozenset[Shape] = ALL_SHAPES

    def __post_init__(self):
        object.__setattr__(self, "paths", dict(sorted(self.paths.items())))
        object.__setattr__(self, "shapes", frozenset(self.shapes))

    def __len__(self):
        return len(self.paths)

    def vertices(self) -> list[int]:
        return list(self.paths)

    def translate(self, dx: int, dy: int) -> "Representation":
        return Representation({v: p.translate(dx, dy) for v, p in self.paths.items()}, self.shapes)

    def transform(self, m) -> "Representation":
        paths = {v: p.transform(m) for v, p in self.paths.items()}
        shapes = {LPath(s, 0, 0, 1, 1).transform(m).shape for s in self.shapes}
        return Representation(paths, frozenset(shapes))

    def normalized(self) -> "Representation":
        """Translate so the smallest used coordinates are 1."""
        if not self.paths:
            return self
        pts = [pt for p in self.paths.values() for e in p.edges() for pt in e]
        return self.translate(1 - min(x for x, _ in pts), 1 - min(y for _, y in pts))

    def dumps(self) -> str:
        lines = [f"shapes {format_shapes(self.shapes)}"]
        for v, p in self.paths.items():
            lines.append(f"p {v} {p.shape.name} {p.x} {p.y} {p.vlen} {p.hlen}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Representation":
        shapes = None
        paths: dict[int, LPath] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                if parts[0] == "shapes" and len(parts) == 2:
                    shapes = parse_shapes(parts[1])
                elif parts[0] == "p" and len(parts) == 7:
                    v = int(parts[1])
                    if v in paths:
                        raise GraphFormatError(f"duplicate path for vertex {v}", lineno)
                    if parts[2] not in Shape.__members__:
                        raise GraphFormatError(f"unknown shape {parts[2]!r}", lineno)
                    paths[v] = LPath(Shape[parts[2]], *map(int, parts[3:]))
                else:
                    raise GraphFormatError(f"unrecognized line {line!r}", lineno)
            except ValueError as exc:
                if isinstance(exc, GraphFormatError):
                    raise
                raise GraphFormatError(str(exc), lineno) from None
        if shapes is None:
            raise GraphFormatError("missing 'shapes <list>' header")
        return cls(paths, shapes)


def extract_graph(r: Representation, labels: Sequence[str] | None = None) -> Graph:
    """Edge-intersection graph; vertex keys must be exactly 0..n-1."""
    n = len(r.paths)
    if sorted(r.paths) != list(range(n)):
        raise ValueError("representation vertices must be 0..n-1")
    holders: dict[GridEdge, list[int]] = {}
    for v, p in r.paths.items():
        for e in p.edges():
            holders.setdefault(e, []).append(v)
    edges = set()
    for vs in holders.values():
        for a, b in itertools.combinations(vs, 2):
            edges.add((a, b))
    return Graph(n, edges, labels)


@dataclass
class VerifyReport:
    missing: list[tuple[int, int]] = field(default_factory=list)
    extra: list[tuple[int, int]] = field(default_factory=list)
    shape_violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.shape_violations)

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        lines = ["mismatch"]
        lines += [f"missing edge {u} {v}" for u, v in self.missing]
        lines += [f"extra edge {u} {v}" for u, v in self.extra]
        lines += [f"shape violation {v}" for v in self.shape_violations]
        return "\n".join(lines)


def verify(r: Representation, g: Graph) -> VerifyReport:
    if sorted(r.paths) != list(g.vertices()):
        raise ValueError("representation and graph have different vertex sets")
    h = extract_graph(r)
    want, got = set(g.edges()), set(h.edges())
    return VerifyReport(
        missing=sorted(want - got),
        extra=sorted(got - want),
        shape_violations=[v for v, p in r.paths.items() if not p.owned_by(r.shapes)],
    )


# cliques -------------------------------------------------------------------

EDGE_CLIQUE = "edge-clique"
CLAW_CLIQUE = "claw-clique"
VIOLATION = "violation"


def _point_edges(pt: Point) -> list[GridEdge]:
    x, y = pt
    return [unit_edge(pt, q) for q in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))]


def classify_clique(r: Representation, clique: Sequence[int]) -> str:
    edge_sets = [r.paths[v].edges() for v in clique]
    if frozenset.intersection(*edge_sets):
        return EDGE_CLIQUE
    points = sorted({pt for es in edge_sets for e in es for pt in e})
    for pt in points:
        for claw in itertools.combinations(_point_edges(pt), 3):
            if all(len(es.intersection(claw)) >= 2 for es in edge_sets):
                return CLAW_CLIQUE
    return VIOLATION


def classify_maximal_cliques(r: Representation) -> list[tuple[tuple[int, ...], str]]:
    g = extract_graph(r)
    cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx())) if g.n else []
    return [(c, classify_clique(r, c)) for c in cliques]


# split layouts ---------------------------------------------------------------


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class SplitLayout:
    """Placement of a split graph's stable side around its clique column.

    ``levels[i]`` holds the clique vertices bending on the i-th branch row,
    counted from the top; ``branches[i]`` the stable vertices on that row from
    left to right.  ``trunk`` runs top to bottom and ``crown`` bottom to top.
    """

    levels: tuple[tuple[int, ...], ...]
    branches: tuple[tuple[int, ...], ...]
    trunk: tuple[int, ...] = ()
    crown: tuple[int, ...] = ()
    common_edge: Optional[GridEdge] = field(default=None, compare=False)

    def stable_vertices(self) -> list[int]:
        return [*self.trunk, *itertools.chain.from_iterable(self.branches), *self.crown]

    def level_of(self) -> dict[int, int]:
        return {c: i for i, lev in enumerate(self.levels) for c in lev}

    def relabel(self, mapping: Mapping[int, int]) -> "SplitLayout":
        def m(seq):
            return tuple(mapping[v] for v in seq)

        return SplitLayout(
            tuple(tuple(sorted(m(lv))) for lv in self.levels),
            tuple(m(b) for b in self.branches),
            m(self.trunk),
            m(self.crown),
        )


def _common_edges(paths: Sequence[LPath]) -> list[GridEdge]:
    return sorted(frozenset.intersection(*(p.edges() for p in paths)))


def split_layout_of(r: Representation, p: SplitPartition) -> SplitLayout:
    """Read the trunk/branch/crown anatomy off an all-LA representation."""
    g = extract_graph(r)
    if not p.is_valid_for(g):
        raise LayoutError("precondition: partition is not a split partition of the represented graph")
    if any(not q.owned_by({Shape.LA}) for q in r.paths.values()):
        raise LayoutError("precondition: representation must use LA paths only")
    clique = sorted(p.clique)
    stable = sorted(p.stable)
    if not clique:
        crown = sorted(stable, key=lambda s: (_low_y(r.paths[s]), r.paths[s].x, s))
        return SplitLayout((), (), (), tuple(crown))

    common = _common_edges([r.paths[c] for c in clique])
    vertical = [e for e in common if e[0][0] == e[1][0]]
    if not common:
        raise LayoutError("not an edge-clique layout")
    if not vertical:
        # transposing keeps LA paths LA and turns the shared edge vertical
        return split_layout_of(r.transform(TRANSPOSE), p)
    edge = vertical[0]
    x0 = edge[0][0]
    rows = sorted({r.paths[c].y for c in clique}, reverse=True)
    top = rows[0]
    row_index = {y: i for i, y in enumerate(rows)}
    levels = [[] for _ in rows]
    for c in clique:
        levels[row_index[r.paths[c].y]].append(c)

    branches = [[] for _ in rows]
    trunk, crown = [], []
    for s in stable:
        q = r.paths[s]
        vs, hs = q.vertical_span(), q.horizontal_span()
        on_column = vs is not None and q.x == x0
        on_branch = hs is not None and q.y in row_index and hs[1] > x0
        if on_column and on_branch:
            raise LayoutError(f"ambiguous placement of stable vertex {s}: on the clique column and on a branch")
        if on_column:
            (crown if vs[0] >= top else trunk).append(s)
        elif on_branch:
            branches[row_index[q.y]].append(s)
        else:
            raise LayoutError(f"ambiguous placement of stable vertex {s}: touches neither column nor branch row")
    trunk.sort(key=lambda s: (-_low_y(r.paths[s]), s))
    crown.sort(key=lambda s: (_low_y(r.paths[s]), s))
    for b in branches:
        b.sort(key=lambda s: (r.paths[s].horizontal_span()[0], s))
    return SplitLayout(
        tuple(tuple(sorted(lv)) for lv in levels),
        tuple(tuple(b) for b in branches),
        tuple(trunk),
        tuple(crown),
        common_edge=edge,
    )


def _low_y(q: LPath) -> int:
    vs = q.vertical_span()
    return vs[0] if vs else q.y


def _check_chain(g: Graph, seq: Sequence[int], where: str):
    # earlier entries must dominate later ones
    for i, j in itertools.combinations(range(len(seq)), 2):
        a, b = seq[i], seq[j]
        if not dominates(g, a, b):
            raise LayoutError(f"{where}: {a} does not dominate {b} (pair {a},{b} violates the ordering)")


def realize_layout(layout: SplitLayout, g: Graph, p: SplitPartition) -> Representation:
    """Emit an all-LA representation of g whose anatomy is ``layout``."""
    clique = set(p.clique)
    levels = [tuple(lv) for lv in layout.levels]
    if sorted(itertools.chain.from_iterable(levels)) != sorted(clique):
        raise LayoutError("layout levels do not cover the clique side exactly")
    if any(not lv for lv in levels):
        raise LayoutError("empty clique level")
    if len(layout.branches) != len(levels):
        raise LayoutError("one branch per level required")
    placed = layout.stable_vertices()
    if sorted(placed) != sorted(p.stable) or len(set(placed)) != len(placed):
        raise LayoutError("every stable vertex must be placed exactly once")
    level_of = {c: i for i, lv in enumerate(levels) for c in lv}

    _check_chain(g, layout.crown, "crown")
    _check_chain(g, layout.trunk, "trunk")
    for i, b in enumerate(layout.branches):
        _check_chain(g, b, f"branch {i}")
        for s in b:
            off = g.neighbors(s) - set(levels[i])
            if off:
                raise LayoutError(f"branch {i}: {s} is adjacent to {min(off)} which does not bend on that row")

    depth = {}
    for t in layout.trunk:
        nb = g.neighbors(t)
        if not nb:
            raise LayoutError(f"trunk vertex {t} has no neighbors")
        d = min(level_of[c] for c in nb)
        expect = {c for c in clique if level_of[c] >= d}
        if nb != expect:
            bad = min(nb ^ expect)
            raise LayoutError(f"trunk vertex {t} and clique vertex {bad} violate the trunk nesting")
        if d == 0:
            raise LayoutError(f"trunk vertex {t} sees the whole clique and belongs on the crown")
        depth[t] = d

    paths: dict[int, LPath] = {}
    rows = {}
    cur = 0
    for d in range(len(levels) - 1, -1, -1):
        rows[d] = cur
        for t in reversed([t for t in layout.trunk if depth[t] == d]):
            paths[t] = LPath(Shape.LA, 0, cur, 1, 0)
            cur += 1
        cur = max(cur, rows[d] + 1)
    top = rows[0] if levels else 0

    tops = {c: top + 1 for c in clique}
    for j, s in enumerate(layout.crown):
        paths[s] = LPath(Shape.LA, 0, top + 1 + j, 1, 0)
        for c in g.neighbors(s):
            if c in clique:
                tops[c] = max(tops[c], top + 2 + j)
    for i, lv in enumerate(levels):
        arms = {c: 0 for c in lv}
        for k, s in enumerate(layout.branches[i]):
            paths[s] = LPath(Shape.LA, k, rows[i], 0, 1)
            for c in g.neighbors(s):
                arms[c] = max(arms[c], k + 1)
        for c in lv:
            paths[c] = LPath(Shape.LA, 0, rows[i], tops[c] - rows[i], arms[c])

    rep = Representation(paths, {Shape.LA})
    report = verify(rep, g)
    if not report.ok:
        pair = (report.missing or report.extra)[0]
        raise LayoutError(f"layout inconsistent with adjacency at pair {pair[0]},{pair[1]}")
    return rep


def random_layout(clique_size: int, stable_size: int, seed: int) -> tuple[SplitLayout, Graph, SplitPartition]:
    """Seeded random split layout together with the graph it encodes."""
    rng = random.Random(seed)
    clique = list(range(clique_size))
    rng.shuffle(clique)
    cuts = sorted(rng.sample(range(1, clique_size), rng.randint(0, clique_size - 1))) if clique_size > 1 else []
    bounds = [0, *cuts, clique_size]
    levels = [tuple(sorted(clique[a:b])) for a, b in zip(bounds, bounds[1:]) if a < b]
    below = [set(itertools.chain.from_iterable(levels[d:])) for d in range(len(levels))]

    def shrink(pool):
        keep = [c for c in sorted(pool) if rng.random() < 0.7]
        return set(keep or [min(pool)])

    spots = ["crown"] + (["trunk"] if len(levels) > 1 else []) + [i for i in range(len(levels))]
    crown, trunk, branches = [], [], [[] for _ in levels]
    nbhd: dict[int, set[int]] = {}
    for s in range(clique_size, clique_size + stable_size):
        spot = rng.choice(spots) if levels else "crown"
        if spot == "trunk":
            d = rng.randint(1, len(levels) - 1)
            nbhd[s] = set(below[d])
            trunk.append(s)
        elif spot == "crown":
            crown.append(s)
        else:
            branches[spot].append(s)
    # crown and branches are domination chains: shrink neighbourhoods along them
    pool = set(clique)
    for s in crown:
        pool = shrink(pool) if pool else pool
        nbhd[s] = set(pool)
    for i, b in enumerate(branches):
        pool = set(levels[i])
        for s in b:
            pool = shrink(pool)
            nbhd[s] = set(pool)
    trunk.sort(key=lambda t: (-len(nbhd[t]), t))
    edges = [(a, b) for a, b in itertools.combinations(range(clique_size), 2)]
    edges += [(s, c) for s, cs in nbhd.items() for c in cs]
    g = Graph(clique_size + stable_size, edges)
    p = SplitPartition(frozenset(range(clique_size)), frozenset(range(clique_size, clique_size + stable_size)))
    layout = SplitLayout(tuple(levels), tuple(tuple(b) for b in branches), tuple(trunk), tuple(crown))
    return layout, g, p


def interval_representation(intervals: Sequence[tuple[int, int]]) -> Representation:
    """Degenerate horizontal paths, one per interval."""
    return Representation(
        {v: LPath(Shape.LA, a, 0, 0, b - a) for v, (a, b) in enumerate(intervals)}, frozenset({Shape.LA})
    )


# rendering -----------------------------------------------------------------


def render(r: Representation, fmt: str = "ascii", labels: Sequence[str] | None = None) -> str:
    if fmt == "ascii":
        return _render_ascii(r)
    if fmt == "svg":
        return _render_svg(r, labels)
    raise ValueError(f"unknown render format {fmt!r}")


def _render_ascii(r: Representation) -> str:
    if not r.paths:
        return ""
    pts = [pt for q in r.paths.values() for e in q.edges() for pt in e]
    x0, x1 = min(x for x, _ in pts), max(x for x, _ in pts)
    y0, y1 = min(y for _, y in pts), max(y for _, y in pts)
    w, h = 2 * (x1 - x0) + 1, 2 * (y1 - y0) + 1
    canvas = [[" "] * w for _ in range(h)]
    count: dict[GridEdge, int] = {}
    for q in r.paths.values():
        for e in q.edges():
            count[e] = count.get(e, 0) + 1

    def cell(x2, y2):  # doubled coordinates
        return h - 1 - (y2 - 2 * y0), x2 - 2 * x0

    for (a, b), k in count.items():
        row, col = cell(a[0] + b[0], a[1] + b[1])
        if a[1] == b[1]:
            canvas[row][col] = "-" if k == 1 else "="
        else:
            canvas[row][col] = "|" if k == 1 else "H"
        for pt in (a, b):
            rr, cc = cell(2 * pt[0], 2 * pt[1])
            if canvas[rr][cc] == " ":
                canvas[rr][cc] = "."
    for q in r.paths.values():
        rr, cc = cell(2 * q.x, 2 * q.y)
        if not q.degenerate:
            canvas[rr][cc] = "+"
    return "\n".join("".join(row) for row in canvas) + "\n"


def _render_svg(r: Representation, labels: Sequence[str] | None, unit: int = 24) -> str:
    pts = [pt for q in r.paths.values() for e in q.edges() for pt in e] or [(0, 0)]
    x0, x1 = min(x for x, _ in pts), max(x for x, _ in pts)
    y0, y1 = min(y for _, y in pts), max(y for _, y in pts)
    margin = unit

    def sx(x):
        return margin + (x - x0) * unit

    def sy(y):
        return margin + (y1 - y) * unit

    width = 2 * margin + (x1 - x0) * unit
    height = 2 * margin + (y1 - y0) * unit
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for v, q in r.paths.items():
        corners = []
        if q.vlen:
            corners.append(q.vertical_end())
        corners.append(q.bend)
        if q.hlen:
            corners.append(q.horizontal_end())
        points = " ".join(f"{sx(x)},{sy(y)}" for x, y in corners)
        out.append(f'<polyline data-vertex="{v}" points="{points}" fill="none" stroke="black" stroke-width="2"/>')
        name = labels[v] if labels else str(v)
        out.append(f'<text x="{sx(q.x) + 3}" y="{sy(q.y) - 3}" font-size="10">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
