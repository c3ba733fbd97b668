"""3-CNF to gadget graph compiler, a small SAT solver, and the constructive
embedder turning a satisfying assignment into an all-LA representation.

Vertex roles are named strings (``X``, ``C``, ``x3``, ``~x3``, ``z3``,
``z'3``, ``c2``, ``d2``, ``a2.1``, ``y2.1`` and ``<host>.att<m>.<r>`` for
the r-th vertex of the m-th forcing gadget hung on ``host``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx

from .graph import Graph, GraphFormatError
from .grid import LPath, Representation, Shape, verify

VARIANTS = ("la", "lalb", "lald")


class CnfFormatError(GraphFormatError):
    """Malformed DIMACS input."""


class EmbeddingError(ValueError):
    pass


# formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    k: int
    clauses: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.k < 0:
            raise ValueError("variable count must be non-negative")
        for i, c in enumerate(self.clauses, 1):
            if len(c) != 3:
                raise ValueError(f"clause {i} has {len(c)} literals, expected 3")
            for lit in c:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.k:
                    raise ValueError(f"clause {i}: literal {lit} outside 1..{self.k}")

    @property
    def t(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(literal_value(l, assignment) for l in c) for c in self.clauses)

    def dumps(self) -> str:
        lines = [f"p cnf {self.k} {self.t}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CnfFormula":
        header = None
        clauses: list[tuple[int, ...]] = []
        cur: list[int] = []
        cur_line = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if header is not None:
                    raise CnfFormatError("duplicate problem line", lineno)
                if len(parts) != 4 or parts[1] != "cnf":
                    raise CnfFormatError("expected 'p cnf <k> <t>'", lineno)
                try:
                    header = (int(parts[2]), int(parts[3]))
                except ValueError:
                    raise CnfFormatError("non-integer counts in problem line", lineno) from None
                continue
            if header is None:
                raise CnfFormatError("clause before problem line", lineno)
            for tok in line.split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise CnfFormatError(f"bad literal {tok!r}", lineno) from None
                if lit == 0:
                    if len(cur) != 3:
                        raise CnfFormatError(f"clause has {len(cur)} literals, expected 3", lineno)
                    clauses.append(tuple(cur))
                    cur = []
                    continue
                if abs(lit) > header[0]:
                    raise CnfFormatError(f"literal {lit} outside 1..{header[0]}", lineno)
                cur.append(lit)
                cur_line = lineno
        if header is None:
            raise CnfFormatError("missing problem line")
        if cur:
            raise CnfFormatError("last clause is not 0-terminated", cur_line)
        if len(clauses) != header[1]:
            raise CnfFormatError(f"problem line announces {header[1]} clauses, found {len(clauses)}")
        return cls(header[0], tuple(clauses))


def literal_value(lit: int, assignment: Mapping[int, bool]) -> bool:
    v = bool(assignment.get(abs(lit), False))
    return v if lit > 0 else not v


def sat_solve(f: CnfFormula) -> Optional[dict[int, bool]]:
    """DPLL with unit propagation; branches on the lowest free variable, True first."""
    clauses = [frozenset(c) for c in f.clauses]

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = c - {-lit}
                if not c:
                    return None
            out.append(c)
        return out

    def solve(cls, assign):
        while True:
            unit = next((c for c in cls if len(c) == 1), None)
            if unit is None:
                break
            (lit,) = unit
            assign = {**assign, abs(lit): lit > 0}
            cls = simplify(cls, lit)
            if cls is None:
                return None
        if not cls:
            return assign
        var = min(abs(l) for c in cls for l in c)
        for lit in (var, -var):
            nxt = simplify(cls, lit)
            if nxt is not None:
                res = solve(nxt, {**assign, var: lit > 0})
                if res is not None:
                    return res
        return None

    res = solve(clauses, {})
    if res is None:
        return None
    return {v: res.get(v, False) for v in range(1, f.k + 1)}


def brute_force_sat(f: CnfFormula) -> bool:
    for bits in itertools.product((False, True), repeat=f.k):
        if f.satisfied_by(dict(enumerate(bits, 1))):
            return True
    return False


# gadget graph --------------------------------------------------------------


def lit_name(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


@dataclass
class GadgetIndex:
    variant: str
    k: int
    t: int
    roles: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, name: str) -> int:
        return self.roles[name]

    def __len__(self) -> int:
        return len(self.roles)

    def name_of(self) -> dict[int, str]:
        return {v: r for r, v in self.roles.items()}

    @property
    def gadget_size(self) -> int:
        return 5 if self.variant == "lald" else 4

    def hosts(self) -> list[tuple[str, int]]:
        """(host role, number of forcing gadgets on it)."""
        out = [("X", 4), ("C", 2)]
        out += [(f"c{i}", 2) for i in range(1, self.t + 1)]
        for j in range(1, self.k + 1):
            out += [(f"x{j}", 2), (f"~x{j}", 2)]
        return out

    def gadget(self, host: str, m: int) -> list[int]:
        return [self.roles[f"{host}.att{m}.{r}"] for r in range(self.gadget_size)]

    def dumps(self) -> str:
        lines = [f"# variant {self.variant} k {self.k} t {self.t}"]
        lines += [f"role {name} {v}" for name, v in self.roles.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "GadgetIndex":
        roles: dict[str, int] = {}
        meta = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if line.startswith("#"):
                if len(parts) == 7 and parts[1] == "variant":
                    meta = (parts[2], int(parts[4]), int(parts[6]))
                continue
            if len(parts) != 3 or parts[0] != "role":
                raise GraphFormatError(f"expected 'role <name> <vertex>', got {line!r}", lineno)
            if parts[1] in roles:
                raise GraphFormatError(f"duplicate role {parts[1]!r}", lineno)
            try:
                roles[parts[1]] = int(parts[2])
            except ValueError:
                raise GraphFormatError(f"bad vertex {parts[2]!r}", lineno) from None
        if meta is None:
            k = sum(1 for r in roles if r.startswith("z") and not r.startswith("z'"))
            t = sum(1 for r in roles if r.startswith("c") and "." not in r)
            meta = ("lald" if any(r.startswith("z'") for r in roles) else "la", k, t)
        return cls(meta[0], meta[1], meta[2], roles)


def expected_size(k: int, t: int, variant: str = "la") -> int:
    core = 2 + 3 * k + 2 * t + 6 * t + (k if variant == "lald" else 0)
    return core + (5 if variant == "lald" else 4) * (6 + 2 * t + 4 * k)


def build_gphi(f: CnfFormula, variant: str = "la") -> tuple[Graph, GadgetIndex]:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    idx = GadgetIndex(variant, f.k, f.t)
    roles = idx.roles
    edges: list[tuple[str, str]] = []

    def add(name):
        roles[name] = len(roles)

    add("X")
    add("C")
    edges.append(("X", "C"))
    for j in range(1, f.k + 1):
        for name in (f"x{j}", f"~x{j}", f"z{j}"):
            add(name)
        edges += [("X", f"x{j}"), ("X", f"~x{j}"), (f"z{j}", f"x{j}"), (f"z{j}", f"~x{j}")]
        if variant == "lald":
            add(f"z'{j}")
            edges += [(f"z'{j}", f"x{j}"), (f"z'{j}", f"~x{j}")]
    for i, clause in enumerate(f.clauses, 1):
        add(f"c{i}")
        add(f"d{i}")
        edges += [("C", f"c{i}"), (f"c{i}", f"d{i}")]
        clique = [f"d{i}"]
        for q in (1, 2, 3):
            add(f"a{i}.{q}")
            clique.append(f"a{i}.{q}")
        edges += list(itertools.combinations(clique, 2))
        for q, lit in enumerate(clause, 1):
            add(f"y{i}.{q}")
            edges += [(f"y{i}.{q}", f"a{i}.{q}"), (f"y{i}.{q}", lit_name(lit))]
    for host, count in idx.hosts():
        for m in range(count):
            names = [f"{host}.att{m}.{r}" for r in range(idx.gadget_size)]
            for nm in names:
                add(nm)
            if variant == "lald":
                # parts {0,1,2} (degree 2) and {3,4}; host touches vertex 0
                edges += [(names[a], names[b]) for a in (0, 1, 2) for b in (3, 4)]
            else:
                edges += [(names[r], names[(r + 1) % 4]) for r in range(4)]
            edges.append((host, names[0]))
    g = Graph(len(roles), [(roles[a], roles[b]) for a, b in edges], labels=list(roles))
    return g, idx


def audit_gphi(g: Graph, idx: GadgetIndex) -> list[str]:
    """Structural checks; returns a list of failures (empty when sound)."""
    bad = []
    if len(g) != expected_size(idx.k, idx.t, idx.variant) or len(idx) != len(g):
        bad.append(f"vertex count {len(g)} differs from {expected_size(idx.k, idx.t, idx.variant)}")
    if sorted(idx.roles.values()) != list(g.vertices()):
        bad.append("roles do not partition the vertex set")
        return bad
    X, C = idx["X"], idx["C"]
    if not g.is_stable(g.neighbors(X)):
        bad.append("neighbourhood of X is not stable")
    if (g.neighbors(X) - {C}) & (g.neighbors(C) - {X}):
        bad.append("X and C share a neighbour")
    want = nx.complete_bipartite_graph(3, 2) if idx.variant == "lald" else nx.cycle_graph(4)
    for host, count in idx.hosts():
        h = idx[host]
        for m in range(count):
            gad = idx.gadget(host, m)
            sub = g.to_networkx().subgraph(gad)
            if not nx.is_isomorphic(sub, want):
                bad.append(f"gadget {host}.att{m} is not an induced {'K23' if idx.variant == 'lald' else 'C4'}")
            touching = [(u, v) for u in gad for v in g.neighbors(u) if v not in gad]
            if touching != [(gad[0], h)]:
                bad.append(f"gadget {host}.att{m} is not joined to its host by exactly one edge")
    return bad


# embedding -----------------------------------------------------------------


def _la(x: int, y: int, vlen: int, hlen: int) -> LPath:
    return LPath(Shape.LA, x, y, vlen, hlen)


def _frame(x0: int, y0: int, h1: int, v1: int) -> list[LPath]:
    """Four LA paths whose intersection graph is the cycle 0-1-2-3.

    Path 0 bends at (x0, y0) with arms h1 and v1; only its stretch outside
    the unit square at its bend is free for a host to overlap.
    """
    return [
        _la(x0, y0, v1, h1),
        _la(x0, y0 + 1, 1, 2),
        _la(x0 + 1, y0 + 1, 1, 1),
        _la(x0 + 1, y0, 2, 1),
    ]


def _from_left(x, y):  # host's horizontal arm starts at (x, y)
    return _frame(x - 3, y, 4, 2)


def _from_below(x, y):  # host's vertical arm starts at (x, y)
    return _frame(x, y - 3, 2, 4)


def _at_right(x, y):  # host's horizontal arm ends at (x, y)
    return _frame(x - 1, y, 2, 2)


def _at_top(x, y):  # host's vertical arm ends at (x, y)
    return _frame(x, y - 1, 2, 2)


SPACING = 3


def clause_templates(f: CnfFormula, assignment: Mapping[int, bool]) -> list[tuple[str, tuple[int, int, int]]]:
    """Per clause: template name and slot order (slot -> literal position)."""
    out = []
    for i, clause in enumerate(f.clauses, 1):
        false = [q for q, lit in enumerate(clause, 1) if not literal_value(lit, assignment)]
        true = [q for q in (1, 2, 3) if q not in false]
        if len(false) == 3:
            raise EmbeddingError(f"clause {i} has three false literals")
        if len(false) == 2:
            a, b = false
            la, lb = clause[a - 1], clause[b - 1]
            if la == lb:
                raise EmbeddingError(f"clause {i} repeats the false literal {lit_name(la)}")
            # slot 1 takes the false literal placed higher (larger variable index)
            hi, lo = (a, b) if abs(la) > abs(lb) else (b, a)
            out.append(("iii", (hi, true[0], lo)))
        elif len(false) == 1:
            out.append(("ii", (false[0], true[0], true[1])))
        else:
            out.append(("i", (1, 2, 3)))
    return out


def embed_from_assignment(f: CnfFormula, assignment: Mapping[int, bool], index: GadgetIndex | None = None) -> Representation:
    """All-LA representation of the la gadget graph of ``f``.

    True literals become internal horizontal neighbours of X, false ones
    internal vertical neighbours.  The result is verified before return.
    """
    g, built = build_gphi(f, "la")
    if index is None:
        index = built
    if index.variant not in ("la", "lalb") or index.roles != built.roles:
        raise EmbeddingError("index does not describe the la gadget graph of this formula")
    if any(v not in assignment for v in range(1, f.k + 1)):
        missing = [v for v in range(1, f.k + 1) if v not in assignment]
        raise EmbeddingError(f"assignment leaves variable {missing[0]} unset")
    templates = clause_templates(f, assignment)

    def true_lit(j):
        return j if assignment[j] else -j

    # rows: false literals in variable order; clause blocks spliced in
    false_vars = list(range(1, f.k + 1))
    tokens: list[tuple] = [("F", j) for j in false_vars]
    front: list[tuple] = []
    after: dict[int, list[tuple]] = {}
    for i, (kind, slots) in enumerate(templates, 1):
        block = []
        if kind == "iii":
            block.append(("B", i, 3))
        block.append(("h", i))
        block += [("B", i, s) for s in (1, 2, 3) if not (kind == "iii" and s == 3)]
        block.append(("top", i))
        if kind == "iii":
            lo_var = abs(f.clauses[i - 1][slots[2] - 1])
            after.setdefault(lo_var, []).extend(block)
        else:
            front.extend(block)
    order = list(front)
    for tok in tokens:
        order.append(tok)
        order += after.get(tok[1], [])
    row = {tok: 6 + SPACING * n for n, tok in enumerate(order)}
    top = 6 + SPACING * len(order) + SPACING

    col = {j: 6 + 6 * (j - 1) for j in range(1, f.k + 1)}
    pc = 6 + 6 * f.k + 3
    hx = pc + 4
    ecol = {i: hx + 4 + 4 * (i - 1) for i in range(1, f.t + 1)}
    right = hx + 4 + 4 * f.t + 2

    paths: dict[str, LPath] = {}

    def hang(host, m, frame):
        for r, p in enumerate(frame):
            paths[f"{host}.att{m}.{r}"] = p

    paths["X"] = _la(0, 0, top, hx)
    hang("X", 0, _from_left(0, 0))
    hang("X", 1, _from_below(0, 0))
    hang("X", 2, _at_right(hx, 0))
    hang("X", 3, _at_top(0, top))
    paths["C"] = _la(pc, 0, top, 1)
    hang("C", 0, _from_below(pc, 0))
    hang("C", 1, _at_top(pc, top))

    for j in range(1, f.k + 1):
        t_name, f_name = lit_name(true_lit(j)), lit_name(-true_lit(j))
        p, q = col[j], row[("F", j)]
        paths[t_name] = _la(p, 0, top, 1)
        hang(t_name, 0, _from_below(p, 0))
        hang(t_name, 1, _at_top(p, top))
        paths[f_name] = _la(0, q, 1, right)
        hang(f_name, 0, _from_left(0, q))
        hang(f_name, 1, _at_right(right, q))
        paths[f"z{j}"] = _la(p, q, 1, 1)

    for i, (kind, slots) in enumerate(templates, 1):
        clause = f.clauses[i - 1]
        e, h, ctop = ecol[i], row[("h", i)], row[("top", i)]
        paths[f"c{i}"] = _la(pc, h, 1, right - pc)
        hang(f"c{i}", 0, _from_left(pc, h))
        hang(f"c{i}", 1, _at_right(right, h))
        paths[f"d{i}"] = _la(e, h, ctop - h, 1)
        for s, q in enumerate(slots, 1):
            lit = clause[q - 1]
            b = row[("B", i, s)]
            a_top = ctop
            if literal_value(lit, assignment):
                paths[f"y{i}.{q}"] = _la(col[abs(lit)], b, 1, e + 1 - col[abs(lit)])
            elif s == 1:
                fq = row[("F", abs(lit))]
                a_top = fq + 1
                paths[f"y{i}.{q}"] = _la(e, fq, 1, 1)
            else:  # slot 3 of template iii: below the clause row
                fq = row[("F", abs(lit))]
                paths[f"y{i}.{q}"] = _la(e, fq, b + 1 - fq, 1)
            paths[f"a{i}.{q}"] = _la(e, b, a_top - b, 1)

    rep = Representation({index[name]: p for name, p in paths.items()}, frozenset({Shape.LA}))
    report = verify(rep, g)
    if not report.ok:
        raise AssertionError("embedding failed to verify:\n" + report.describe())
    return rep


# layout inspection ---------------------------------------------------------


def _points(p: LPath) -> set[tuple[int, int]]:
    return {pt for e in p.edges() for pt in e} | {p.bend}


def _contains(outer: Optional[tuple[int, int]], inner: Optional[tuple[int, int]]) -> bool:
    return inner is not None and outer is not None and outer[0] <= inner[0] and inner[1] <= outer[1]


def is_internal_neighbor(pu: LPath, pv: LPath) -> bool:
    """Whether pv sits inside one arm of pu without touching pu's bend."""
    if not (pu.edges() & pv.edges()) or pu.bend in _points(pv):
        return False
    if pu.y == pv.y and _contains(pu.horizontal_span(), pv.horizontal_span()):
        return True
    return pu.x == pv.x and _contains(pu.vertical_span(), pv.vertical_span())


def external_neighbors(r: Representation, u: int) -> list[int]:
    pu = r.paths[u]
    mine = pu.edges()
    return [
        v
        for v, pv in r.paths.items()
        if v != u and not mine.isdisjoint(pv.edges()) and not is_internal_neighbor(pu, pv)
    ]


def max_stable_external(r: Representation, g: Graph, u: int) -> int:
    ext = external_neighbors(r, u)
    comp = nx.complement(g.to_networkx().subgraph(ext))
    return max((len(c) for c in nx.find_cliques(comp)), default=0) if ext else 0
