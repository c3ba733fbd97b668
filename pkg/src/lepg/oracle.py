"""Exact membership test for shape-restricted single-bend path classes.

Whether two paths share a grid edge depends only on which grid lines carry
their arms and on the relative order of arm end points along a shared line.
The search therefore assigns each path a row line and a column line (either
may be empty, giving a straight segment) and records the implied strict and
non-strict order constraints per axis.  Disjoint arms on a common line give a
two-way choice that is kept open and propagated until one side is forced.
A finished placement is compacted by longest-path layering, and the result
must fit the ``B x B`` grid.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, find_structure
from .grid import SQUARE_SYMMETRIES, TRANSPOSE, LPath, Representation, Shape, verify

DEFAULT_LIMIT = 12


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    member: bool
    representation: Optional[Representation] = None
    grid_bound: int = 0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.member

    def describe(self) -> str:
        if self.member:
            return "yes"
        if self.reason:
            return f"no ({self.reason})"
        return f"no (exhausted grid {self.grid_bound}x{self.grid_bound})"


def vertex_limit() -> int:
    return int(os.environ.get("EPG_ORACLE_LIMIT", DEFAULT_LIMIT))


class _OrderSystem:
    """Strict / non-strict order constraints between coordinates on one axis.

    Feasible iff no cycle uses a strict edge and no cycle of non-strict edges
    forces two distinct grid lines onto the same coordinate.
    """

    def __init__(self):
        self.out: dict = {}
        self.inc: dict = {}
        self.log: list = []

    def _reach(self, start, adj, within=None):
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b, _ in adj.get(a, ()):
                if b not in seen and (within is None or b in within):
                    seen.add(b)
                    stack.append(b)
        return seen

    def allows(self, a, b, strict: bool) -> bool:
        fwd = self._reach(b, self.out)
        if a not in fwd:
            return True
        if strict:
            return False
        cycle = self._reach(a, self.inc, within=fwd)
        if sum(1 for x in cycle if x[0] == "line") > 1:
            return False
        for x in cycle:
            for y, s in self.out.get(x, ()):
                if s and y in cycle:
                    return False
        return True

    def add(self, a, b, strict: bool):
        self.out.setdefault(a, []).append((b, strict))
        self.inc.setdefault(b, []).append((a, strict))
        self.log.append((a, b))

    def mark(self) -> int:
        return len(self.log)

    def undo(self, mark: int):
        while len(self.log) > mark:
            a, b = self.log.pop()
            self.out[a].pop()
            self.inc[b].pop()

    def nodes(self) -> set:
        return {a for a, l in self.out.items() if l} | {b for b, l in self.inc.items() if l}

    def ranks(self, extra=()) -> dict:
        """Compact coordinates: longest-path layering with distinct lines split apart."""
        nodes = sorted(self.nodes() | set(extra), key=repr)
        comp = _scc(nodes, self.out)
        order = _topo_components(nodes, comp, self.out)
        layer = {c: 0 for c in order}
        for v in sorted(nodes, key=lambda v: order.index(comp[v])):
            for w, _ in self.out.get(v, ()):
                if comp[w] != comp[v]:
                    layer[comp[w]] = max(layer[comp[w]], layer[comp[v]] + 1)
        lines = {comp[v] for v in nodes if v[0] == "line"}
        coord, base = {}, 0
        for lv in range(max(layer.values(), default=-1) + 1):
            at = [c for c in order if layer[c] == lv]
            k = 0
            for c in at:
                if c in lines:
                    coord[c] = base + k
                    k += 1
            for c in at:
                if c not in lines:
                    coord[c] = base
            base += max(1, k)
        return {v: coord[comp[v]] for v in nodes}


def _scc(nodes, out) -> dict:
    index, low, comp = {}, {}, {}
    stack, on = [], set()
    counter = [0]

    def visit(v):
        # iterative Tarjan
        work = [(v, iter(out.get(v, ())))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on.add(v)
        while work:
            node, it = work[-1]
            advanced = False
            for w, _ in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(out.get(w, ()))))
                    advanced = True
                    break
                if w in on:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp[w] = node
                    if w == node:
                        break

    for v in nodes:
        if v not in index:
            visit(v)
    return comp


def _topo_components(nodes, comp, out) -> list:
    succ = {comp[v]: set() for v in nodes}
    indeg = {c: 0 for c in succ}
    for v in nodes:
        for w, _ in out.get(v, ()):
            a, b = comp[v], comp[w]
            if a != b and b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    ready = sorted((c for c, d in indeg.items() if d == 0), key=repr)
    order = []
    while ready:
        c = ready.pop(0)
        order.append(c)
        for d in sorted(succ[c], key=repr):
            indeg[d] -= 1
            if indeg[d] == 0:
                ready.append(d)
        ready.sort(key=repr)
    return order


def _symmetry_group(shapes: frozenset[Shape]):
    group = []
    for m in SQUARE_SYMMETRIES:
        if {LPath(s, 0, 0, 1, 1).transform(m).shape for s in shapes} == set(shapes):
            group.append(m)
    return group


def _first_shapes(shapes: frozenset[Shape], group) -> list[Shape]:
    reps = set()
    for s in shapes:
        orbit = {LPath(s, 0, 0, 1, 1).transform(m).shape for m in group}
        reps.add(min(orbit, key=lambda t: t.name))
    return sorted(reps, key=lambda t: t.name)


def _order(g: Graph, component: list[int]) -> list[int]:
    first = min(component, key=lambda v: (-g.degree(v), v))
    order = [first]
    rest = set(component) - {first}
    while rest:
        placed = set(order)
        v = min(rest, key=lambda w: (-len(g.neighbors(w) & placed), -g.degree(w), w))
        order.append(v)
        rest.remove(v)
    return order


# A placement assigns each path the horizontal grid line ("row") carrying its
# horizontal arm and the vertical line ("column") carrying its vertical arm;
# None means that arm is empty.  Lines are numbered canonically in order of
# first use, so relabelings are never enumerated twice.
class _Search:
    def __init__(self, g: Graph, order: list[int], shapes: frozenset[Shape], bound: int, prune: bool):
        self.g = g
        self.order = order
        self.bound = bound
        self.prune = prune
        self.shapes = sorted(shapes, key=lambda s: s.name)
        self.first_shapes = self.shapes
        self.transpose_rule = False
        if prune:
            group = _symmetry_group(frozenset(shapes))
            self.first_shapes = _first_shapes(frozenset(shapes), group)
            allowed = set(self.first_shapes)
            if TRANSPOSE in group and all(LPath(s, 0, 0, 1, 1).transform(TRANSPOSE).shape in allowed for s in allowed):
                self.transpose_rule = True
        self.assign: dict[int, tuple] = {}
        self.xs = _OrderSystem()  # horizontal arms live on rows, ordered along x
        self.ys = _OrderSystem()
        self.rows = 0
        self.cols = 0
        self.nodes = 0
        self.result: Optional[dict[int, LPath]] = None
        self.pending: list = []

    # interval end points of a path's arms as order-system nodes
    def _h_interval(self, v, a):
        row, col, shape = a
        if col is None:
            return ("end", v, "h0"), ("end", v, "h1")
        bend, end = ("line", "col", col), ("end", v, "h")
        return (bend, end) if shape.hdir > 0 else (end, bend)

    def _v_interval(self, v, a):
        row, col, shape = a
        if row is None:
            return ("end", v, "v0"), ("end", v, "v1")
        bend, end = ("line", "row", row), ("end", v, "v")
        return (bend, end) if shape.vdir > 0 else (end, bend)

    def run(self) -> bool:
        return self._place(0)

    def _options(self, v: int):
        depth = len(self.assign)
        nbrs = [u for u in self.assign if self.g.has_edge(v, u)]
        rows = list(range(self.rows + 1)) + [None]
        cols = list(range(self.cols + 1)) + [None]
        for row in rows:
            for col in cols:
                if row is None and col is None:
                    continue
                if depth == 0 and self.transpose_rule and row is None:
                    continue
                ok = True
                for u in nbrs:
                    r, c, _ = self.assign[u]
                    if not ((row is not None and row == r) or (col is not None and col == c)):
                        ok = False
                        break
                if not ok:
                    continue
                if row is not None and col is not None:
                    for shape in self.first_shapes if depth == 0 else self.shapes:
                        yield (row, col, shape)
                else:
                    yield (row, col, self.shapes[0])

    def _constraints(self, v: int, a: tuple):
        """Order constraints implied by placing v at a, or None if impossible outright."""
        row, col, shape = a
        required: list = []  # (system, lo, hi, strict)
        choices: list = []  # pairs of alternatives
        if row is not None:
            lo, hi = self._h_interval(v, a)
            required.append((self.xs, lo, hi, True))
        if col is not None:
            lo, hi = self._v_interval(v, a)
            required.append((self.ys, lo, hi, True))
        for u, b in self.assign.items():
            adj = self.g.has_edge(u, v)
            same_row = row is not None and row == b[0]
            same_col = col is not None and col == b[1]
            if same_row and same_col:
                # common bend point: arms overlap exactly when they point the same way
                if adj != (shape.hdir == b[2].hdir or shape.vdir == b[2].vdir):
                    return None
                continue
            if same_row or same_col:
                sys_ = self.xs if same_row else self.ys
                iv = self._h_interval if same_row else self._v_interval
                lo_v, hi_v = iv(v, a)
                lo_u, hi_u = iv(u, b)
                if adj:
                    required.append((sys_, lo_v, hi_u, True))
                    required.append((sys_, lo_u, hi_v, True))
                else:
                    choices.append(((sys_, hi_v, lo_u, False), (sys_, hi_u, lo_v, False)))
            elif adj:
                return None
        return required, choices

    def _viable(self, v: int, a: tuple) -> bool:
        cons = self._constraints(v, a)
        if cons is None:
            return False
        required, choices = cons
        if not all(s.allows(p, q, st) for s, p, q, st in required):
            return False
        return all(c1[0].allows(*c1[1:]) or c2[0].allows(*c2[1:]) for c1, c2 in choices)

    def _next(self):
        """Most constrained unplaced vertex with its viable options; None on a dead end."""
        best = None
        for w in self.order:
            if w in self.assign:
                continue
            placed = sum(1 for u in self.g.neighbors(w) if u in self.assign)
            if self.assign and not placed:
                key_opts = None
            else:
                key_opts = [a for a in self._options(w) if not self.prune or self._viable(w, a)]
                if not key_opts:
                    return w, []
            key = (0 if key_opts is not None else 1, len(key_opts) if key_opts else 0, -placed)
            if best is None or key < best[0]:
                best = (key, w, key_opts)
            if not self.prune:
                break
        _, w, opts = best
        if opts is None:
            opts = list(self._options(w))
        return w, opts

    def _place(self, depth: int) -> bool:
        self.nodes += 1
        if depth == len(self.order):
            # the compacted layout must also fit the grid bound
            mx, my = self.xs.mark(), self.ys.mark()
            saved_pending = self.pending
            if self._resolve():
                self.result = self.representation()
                if self.result is not None:
                    return True
            self.pending = saved_pending
            self.xs.undo(mx)
            self.ys.undo(my)
            return False
        if depth == 0:
            v = self.order[0]
            opts = list(self._options(v))
        else:
            v, opts = self._next()
        for a in opts:
            row, col, shape = a
            cons = self._constraints(v, a)
            feasible = cons is not None
            if feasible:
                required, choices = cons
            if not feasible:
                continue
            mx, my = self.xs.mark(), self.ys.mark()
            saved_pending = self.pending
            ok = True
            for sys_, p, q, strict in required:
                if not sys_.allows(p, q, strict):
                    ok = False
                    break
                sys_.add(p, q, strict)
            if ok:
                self.pending = saved_pending + choices
                ok = self._propagate()
            if ok:
                saved = (self.rows, self.cols)
                if row == self.rows:
                    self.rows += 1
                if col == self.cols:
                    self.cols += 1
                self.assign[v] = a
                if self._place(depth + 1):
                    return True
                del self.assign[v]
                self.rows, self.cols = saved
            self.pending = saved_pending
            self.xs.undo(mx)
            self.ys.undo(my)
        return False

    def _propagate(self) -> bool:
        """Commit every separation choice with a single open side; False on conflict."""
        changed = True
        while changed:
            changed = False
            keep = []
            for c1, c2 in self.pending:
                ok1 = c1[0].allows(c1[1], c1[2], c1[3])
                ok2 = c2[0].allows(c2[1], c2[2], c2[3])
                if not ok1 and not ok2:
                    return False
                if ok1 and ok2:
                    keep.append((c1, c2))
                    continue
                c = c1 if ok1 else c2
                c[0].add(c[1], c[2], c[3])
                changed = True
            self.pending = keep
        return True

    def _resolve(self) -> bool:
        """Branch on the separation choices still open once every path is placed."""
        if not self.pending:
            return True
        (c1, c2), rest = self.pending[0], self.pending[1:]
        for c in (c1, c2):
            mx, my = self.xs.mark(), self.ys.mark()
            self.pending = rest
            c[0].add(c[1], c[2], c[3])
            if self._propagate() and self._resolve():
                return True
            self.xs.undo(mx)
            self.ys.undo(my)
        self.pending = [(c1, c2)] + rest
        return False

    def representation(self) -> Optional[dict[int, LPath]]:
        xnodes = [("line", "col", c) for c in range(self.cols)]
        ynodes = [("line", "row", r) for r in range(self.rows)]
        xr = self.xs.ranks(xnodes)
        yr = self.ys.ranks(ynodes)
        if max(xr.values(), default=0) >= self.bound or max(yr.values(), default=0) >= self.bound:
            return None
        out = {}
        for v, a in self.assign.items():
            row, col, shape = a
            if row is not None and col is not None:
                bx, by = xr[("line", "col", col)], yr[("line", "row", row)]
                hlen = abs(xr[("end", v, "h")] - bx)
                vlen = abs(yr[("end", v, "v")] - by)
                out[v] = LPath(shape, bx, by, vlen, hlen)
                continue
            base = self.shapes[0]
            if col is None:  # horizontal segment on its row
                a0, a1 = xr[("end", v, "h0")], xr[("end", v, "h1")]
                y = yr.get(("line", "row", row))
                bx = a0 if base.hdir > 0 else a1
                out[v] = LPath(base, bx, y, 0, a1 - a0)
            else:
                b0, b1 = yr[("end", v, "v0")], yr[("end", v, "v1")]
                x = xr[("line", "col", col)]
                by = b0 if base.vdir > 0 else b1
                out[v] = LPath(base, x, by, b1 - b0, 0)
        return out


def components(g: Graph) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in g.vertices():
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def decide(
    g: Graph,
    shapes: Iterable[Shape],
    grid_bound: Optional[int] = None,
    prune: bool = True,
    limit: Optional[int] = None,
) -> Decision:
    """Does g admit a representation using only ``shapes``?

    A negative answer means no representation exists on a
    ``grid_bound x grid_bound`` grid (default ``2n``).
    """
    shapes = frozenset(shapes)
    if not shapes:
        raise ValueError("shape set must be nonempty")
    limit = vertex_limit() if limit is None else limit
    if g.n > limit:
        raise OracleLimitError(f"instance too large for oracle ({g.n} > {limit} vertices)")
    bound = grid_bound if grid_bound is not None else max(2 * g.n, 1)
    if prune:
        w = find_structure(g, "universal-at")
        if w is not None:
            u, *at = w.vertices
            return Decision(False, grid_bound=bound, reason=f"vertex {u} has asteroidal triple {at[0]} {at[1]} {at[2]}")
        parts = components(g)
    else:
        parts = [list(g.vertices())]
    paths: dict[int, LPath] = {}
    offset = 0
    for comp in parts:
        if not comp:
            continue
        search = _Search(g, _order(g, comp) if prune else list(comp), shapes, bound, prune)
        if not search.run():
            return Decision(False, grid_bound=bound)
        part = {v: q.translate(offset, 0) for v, q in search.result.items()}
        offset = max(max(q.x, q.x + q.shape.hdir * q.hlen) for q in part.values()) + 2
        paths.update(part)
    rep = Representation(paths, shapes)
    report = verify(rep, g)
    if not report.ok:
        raise AssertionError(f"oracle produced an invalid representation: {report.describe()}")
    return Decision(True, rep, grid_bound=bound)


def verify_non_membership(g: Graph, vertices: Iterable[int], shapes: Iterable[Shape], **kw) -> bool:
    h, _ = g.induced(vertices)
    return not decide(h, shapes, **kw).member
