"""Certifying recognizers for split graphs with all-LA single-bend paths.

Both recognizers work on a split partition (C, S).  A positive answer comes
with a representation produced through :func:`realize_layout`, a negative
one with a :class:`Certificate` whose predicate is re-checkable in
polynomial time by :func:`check_certificate`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .graph import Graph, GraphFormatError, SplitPartition, StructureWitness, asteroidal_paths, check_witness, comparable
from .graph import dominates, find_structure, split_partition
from .grid import LayoutError, Representation, Shape, SplitLayout, realize_layout
from .oracle import verify_non_membership, vertex_limit

RULES = ("universal", "twins", "degree-one", "threshold")
REASONS = ("universal-at", "two-incomparable-gem-pairs", "three-incomparable-s-bulls")
VERDICTS = ("member", "non-member", "precondition-failed")


class CertificateError(ValueError):
    pass


# preprocessing ------------------------------------------------------------


@dataclass(frozen=True)
class LogEntry:
    """One applied reduction; ``twin`` is the surviving partner of a twin pair."""

    rule: str
    clique: tuple[int, ...] = ()
    stable: tuple[int, ...] = ()
    twin: Optional[int] = None

    def removed(self) -> tuple[int, ...]:
        return self.clique + self.stable

    def line(self) -> str:
        if self.rule in ("universal", "twins"):
            (v,) = self.removed()
            return f"{self.rule} {v}" + (f" {self.twin}" if self.twin is not None else "")
        return f"{self.rule} C {' '.join(map(str, self.clique))} S {' '.join(map(str, self.stable))}".rstrip()

    def relabel(self, m: Sequence[int]) -> "LogEntry":
        return LogEntry(
            self.rule,
            tuple(m[v] for v in self.clique),
            tuple(m[v] for v in self.stable),
            None if self.twin is None else m[self.twin],
        )


class PreprocessLog(list):
    """Applied reductions in order; ``kept`` maps reduced vertex ids to input ids."""

    def __init__(self, entries=(), kept=()):
        super().__init__(entries)
        self.kept = list(kept)


def _chain(g: Graph, vs) -> list[int]:
    # dominating vertices first; inside a chain this is degree order
    return sorted(vs, key=lambda v: (-g.degree(v), v))


def _incidence_components(g: Graph, clique: set[int], stable: set[int]) -> list[tuple[list[int], list[int]]]:
    """Connected components of the C-S edges, as (clique part, stable part)."""
    seen: set[int] = set()
    out = []
    for start in sorted(clique | stable):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            other = stable if v in clique else clique
            for w in g.neighbors(v) & other:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append((sorted(c for c in comp if c in clique), sorted(s for s in comp if s in stable)))
    return out


def _next_rule(g: Graph, alive: set[int], clique: set[int], stable: set[int]) -> Optional[LogEntry]:
    nb = {v: g.neighbors(v) & alive for v in alive}
    for v in sorted(alive):
        if nb[v] == clique - {v}:
            return LogEntry("universal", (v,) if v in clique else (), (v,) if v in stable else ())
    for side in (clique, stable):
        for a, b in itertools.combinations(sorted(side), 2):
            if nb[a] - {b} == nb[b] - {a}:
                return LogEntry("twins", (b,) if side is clique else (), (b,) if side is stable else (), twin=a)
    for c in sorted(clique):
        pend = nb[c] & stable
        if pend and all(len(nb[s]) == 1 for s in pend):
            return LogEntry("degree-one", (c,), tuple(sorted(pend)))
    for cs, ss in _incidence_components(g, clique, stable):
        if cs and ss and all(nb[a] <= nb[b] or nb[b] <= nb[a] for a, b in itertools.combinations(ss, 2)):
            return LogEntry("threshold", tuple(cs), tuple(ss))
    return None


def preprocess(g: Graph, p: SplitPartition) -> tuple[Graph, SplitPartition, PreprocessLog]:
    """Apply the four membership-preserving reductions until none fires."""
    if not p.is_valid_for(g):
        raise ValueError("partition is not a split partition of the graph")
    alive = set(g.vertices())
    clique, stable = set(p.clique), set(p.stable)
    entries = []
    while True:
        e = _next_rule(g, alive, clique & alive, stable & alive)
        if e is None:
            break
        entries.append(e)
        alive -= set(e.removed())
    h, keep = g.induced(alive)
    return h, p.restrict(keep), PreprocessLog(entries, keep)


# results ------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Polytime-checkable reason for non-membership.

    ``witness`` is a tuple of (role, vertices) pairs: ``("u", (y,))`` and
    ``("at", (x, y, z))`` for universal-at, two ``("pair", (s, s2, common))``
    entries for gem pairs, three ``("bull", (a, b, c, d, e))`` entries for
    S-bulls.
    """

    reason: str
    witness: tuple[tuple[str, tuple[int, ...]], ...]
    oracle_checked: bool = False

    def relabel(self, m: Sequence[int]) -> "Certificate":
        return Certificate(self.reason, tuple((r, tuple(m[v] for v in vs)) for r, vs in self.witness), self.oracle_checked)

    def span(self, g: Graph) -> frozenset[int]:
        """Vertices of the obstruction the certificate exhibits."""
        out: set[int] = set()
        for role, vs in self.witness:
            out.update(vs)
        if self.reason == "universal-at":
            (u,) = self._role("u")[0]
            paths = asteroidal_paths(g, self._role("at")[0], within=set(g.neighbors(u)))
            for path in paths or ():
                out.update(path)
        elif self.reason == "two-incomparable-gem-pairs":
            for s, t, _ in self._role("pair"):
                out.add(min(g.neighbors(s) - g.neighbors(t)))
                out.add(min(g.neighbors(t) - g.neighbors(s)))
        return frozenset(out)

    def _role(self, name: str) -> list[tuple[int, ...]]:
        return [vs for r, vs in self.witness if r == name]

    def lines(self) -> list[str]:
        out = [f"cert {self.reason}"]
        out += [f"role {r} {' '.join(map(str, vs))}" for r, vs in self.witness]
        out.append(f"oracle-checked {'yes' if self.oracle_checked else 'no'}")
        return out


@dataclass(frozen=True)
class RecognitionResult:
    verdict: str
    representation: Optional[Representation] = None
    certificate: Optional[Certificate] = None
    log: tuple[LogEntry, ...] = ()
    layout: Optional[SplitLayout] = None
    obstruction: Optional[StructureWitness] = None
    message: str = ""

    def report(self) -> str:
        out = [f"verdict {self.verdict}"]
        if self.message:
            out.append(f"# {self.message}")
        if self.representation is not None:
            out.append(self.representation.dumps().rstrip("\n"))
        if self.certificate is not None:
            out += self.certificate.lines()
        if self.obstruction is not None:
            w = self.obstruction
            out.append(f"obstruction {w.kind} " + " ".join(f"{r}={v}" for r, v in zip(w.roles, w.vertices)))
        out += [f"log {e.line()}" for e in self.log]
        return "\n".join(out) + "\n"


def parse_report(text: str) -> tuple[str, Optional[Representation], Optional[Certificate]]:
    """Read back the verdict, representation and certificate of a report."""
    verdict, rep_lines, cert, roles, checked = None, [], None, [], False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "verdict":
            if rest not in VERDICTS:
                raise GraphFormatError(f"unknown verdict {rest!r}", lineno)
            verdict = rest
        elif head in ("shapes", "p"):
            rep_lines.append(line)
        elif head == "cert":
            cert = rest
        elif head == "role":
            name, *vs = rest.split()
            try:
                roles.append((name, tuple(int(v) for v in vs)))
            except ValueError:
                raise GraphFormatError("non-integer vertex in role line", lineno) from None
        elif head == "oracle-checked":
            checked = rest == "yes"
        elif head not in ("obstruction", "log"):
            raise GraphFormatError(f"unrecognized report line {line!r}", lineno)
    if verdict is None:
        raise GraphFormatError("missing verdict line")
    rep = Representation.loads("\n".join(rep_lines)) if rep_lines else None
    return verdict, rep, Certificate(cert, tuple(roles), checked) if cert else None


# certificate checking -------------------------------------------------------


def check_certificate(g: Graph, cert: Certificate) -> bool:
    """Re-verify the structural predicate behind a certificate."""
    if cert.reason not in REASONS:
        raise CertificateError(f"unknown certificate reason {cert.reason!r}")
    for role, vs in cert.witness:
        if any(not 0 <= v < g.n for v in vs):
            raise CertificateError(f"role {role}: vertex out of range")
    p = split_partition(g)
    if p is None:
        return False
    if cert.reason == "universal-at":
        us, ats = cert._role("u"), cert._role("at")
        if len(us) != 1 or len(us[0]) != 1 or len(ats) != 1 or len(ats[0]) != 3 or len(cert.witness) != 2:
            raise CertificateError("universal-at needs roles u (1 vertex) and at (3 vertices)")
        u = us[0][0]
        nb = set(g.neighbors(u))
        return set(ats[0]) <= nb and len(set(ats[0])) == 3 and asteroidal_paths(g, ats[0], within=nb) is not None
    if cert.reason == "two-incomparable-gem-pairs":
        pairs = cert._role("pair")
        if len(pairs) != 2 or len(cert.witness) != 2 or any(len(t) != 3 for t in pairs):
            raise CertificateError("gem pairs need two pair roles of 3 vertices each")
        if len(set(pairs[0]) | set(pairs[1])) != 6:
            return False
        for s, t, y in pairs:
            if not {s, t} <= p.stable or not (g.has_edge(s, y) and g.has_edge(t, y)) or comparable(g, s, t):
                return False
        return all(not comparable(g, a, b) for a in pairs[0][:2] for b in pairs[1][:2])
    bulls = cert._role("bull")
    if len(bulls) != 3 or len(cert.witness) != 3 or any(len(b) != 5 for b in bulls):
        raise CertificateError("three-incomparable-s-bulls needs three bull roles of 5 vertices each")
    for b in bulls:
        if not check_witness(g, StructureWitness("s-bull", b, ("a", "b", "c", "d", "e")), p):
            return False
    if len(set(itertools.chain.from_iterable(bulls))) != 15:
        return False
    for b1, b2 in itertools.combinations(bulls, 2):
        for x in (b1[0], b1[3], b1[4]):
            for y in (b2[0], b2[3], b2[4]):
                if comparable(g, x, y):
                    return False
    return True


# layout drafting ------------------------------------------------------------


@dataclass
class _Draft:
    levels: list[list[int]] = field(default_factory=list)
    branches: list[list[int]] = field(default_factory=list)
    trunk: list[int] = field(default_factory=list)
    crown: list[int] = field(default_factory=list)

    @classmethod
    def of(cls, layout: SplitLayout) -> "_Draft":
        return cls([list(x) for x in layout.levels], [list(b) for b in layout.branches], list(layout.trunk), list(layout.crown))

    def freeze(self) -> SplitLayout:
        return SplitLayout(
            tuple(tuple(sorted(x)) for x in self.levels),
            tuple(tuple(b) for b in self.branches),
            tuple(self.trunk),
            tuple(self.crown),
        )

    def add_level(self, index: int, clique, stable):
        self.levels.insert(index, list(clique))
        self.branches.insert(index, list(stable))

    def undo(self, g: Graph, e: LogEntry):
        if e.rule == "universal":
            if e.stable:
                self.crown.insert(0, e.stable[0])
            elif self.levels:
                self.levels[0].append(e.clique[0])
            else:
                self.add_level(0, e.clique, ())
        elif e.rule == "twins":
            if e.clique:
                next(x for x in self.levels if e.twin in x).append(e.clique[0])
            else:
                seq = next(s for s in (self.trunk, self.crown, *self.branches) if e.twin in s)
                seq.insert(seq.index(e.twin) + 1, e.stable[0])
        else:
            self.add_level(min(1, len(self.levels)), e.clique, _chain(g, e.stable))


# laminar structure of a gem-free stable side ---------------------------------


class _Forest:
    """Distinct stable neighbourhoods ordered by inclusion.

    In a gem-free split graph two stable vertices with a common neighbour are
    comparable, so the nonempty neighbourhoods form a laminar family.
    """

    def __init__(self, g: Graph, clique: set[int], stable: set[int]):
        groups: dict[frozenset[int], list[int]] = {}
        for s in sorted(stable):
            nb = frozenset(g.neighbors(s) & clique)
            if nb:
                groups.setdefault(nb, []).append(s)
        self.members = groups
        self.nodes = sorted(groups, key=lambda x: (-len(x), sorted(x)))
        self.parent: dict[frozenset[int], Optional[frozenset[int]]] = {}
        for x in self.nodes:
            sup = [y for y in self.nodes if x < y]
            for y in self.nodes:
                if y != x and x & y and not (x < y or y < x):
                    raise ValueError(f"stable vertices {groups[x][0]} and {groups[y][0]} form a gem")
            self.parent[x] = min(sup, key=len) if sup else None
        self.children = {x: [y for y in self.nodes if self.parent[y] == x] for x in self.nodes}

    def roots(self) -> list[frozenset[int]]:
        return [x for x in self.nodes if self.parent[x] is None]

    def branching(self) -> list[frozenset[int]]:
        return [x for x in self.nodes if len(self.children[x]) >= 2]

    def minimal_branching(self) -> list[frozenset[int]]:
        br = self.branching()
        return [x for x in br if not any(y < x for y in br)]

    def path_to_root(self, x) -> list[frozenset[int]]:
        out = []
        while x is not None:
            out.append(x)
            x = self.parent[x]
        return out[::-1]

    def subtree_chain(self, x) -> list[frozenset[int]]:
        out = [x]
        while self.children[out[-1]]:
            kids = self.children[out[-1]]
            if len(kids) > 1:
                raise ValueError("subtree is not a chain")
            out.append(kids[0])
        return out

    def stable_of(self, nodes) -> list[int]:
        return [s for x in nodes for s in self.members[x]]

    def bull(self, g: Graph, x) -> tuple[int, ...]:
        """An S-bull (role order a,b,c,d,e) centred on branching node x."""
        y1, y2 = self.children[x][:2]
        a, d, e = self.members[y1][0], self.members[y2][0], self.members[x][0]
        return (a, min(y1), min(y2), d, e)


def _forest_layout(g: Graph, clique: set[int], stable: set[int], allow_trunk: bool = True):
    """Layout of a gem-free split graph, or the offending minimal branching nodes."""
    forest = _Forest(g, clique, stable)
    isolated = sorted(s for s in stable if not g.neighbors(s) & clique)
    minimal = sorted(forest.minimal_branching(), key=lambda x: (-len(x), sorted(x)))
    if len(minimal) > (2 if allow_trunk else 1):
        return forest, minimal
    crown_path = forest.path_to_root(minimal[0]) if minimal else []
    trunk_path: list = []
    if len(minimal) == 2:
        on_crown = set(crown_path)
        trunk_path = [x for x in forest.path_to_root(minimal[1]) if x not in on_crown]
    on_path = set(crown_path) | set(trunk_path)
    regions: list[list] = [[] for _ in range(len(trunk_path) + 1)]
    where = {x: i + 1 for i, x in enumerate(trunk_path)}
    covered: set[int] = set()
    for x in forest.nodes:
        if x in on_path or (forest.parent[x] is not None and forest.parent[x] not in on_path):
            continue
        chain = forest.subtree_chain(x)
        regions[where.get(forest.parent[x], 0)].append((sorted(x), forest.stable_of(chain)))
        covered |= x
    for c in sorted(clique - covered):
        deepest = max((where[x] for x in trunk_path if c in x), default=0)
        regions[deepest].append(([c], []))
    draft = _Draft()
    for region in regions:
        loose = [c for cs, ss in region if not ss for c in cs]
        for cs, ss in region:
            if ss:
                draft.add_level(len(draft.levels), cs, ss)
        if loose:
            draft.add_level(len(draft.levels), loose, [])
    draft.crown = forest.stable_of(crown_path) + isolated
    draft.trunk = forest.stable_of(trunk_path)
    return forest, draft


# recognizers ------------------------------------------------------------------


def _core_gemfree(h: Graph, q: SplitPartition) -> Union[_Draft, Certificate]:
    forest, out = _forest_layout(h, set(q.clique), set(q.stable))
    if isinstance(out, _Draft):
        return out
    bulls = tuple(("bull", forest.bull(h, x)) for x in out[:3])
    return Certificate("three-incomparable-s-bulls", bulls)


def _incomparable_pairs(h: Graph, stable: Sequence[int]):
    for s, t in itertools.combinations(sorted(stable), 2):
        if h.neighbors(s) & h.neighbors(t) and not comparable(h, s, t):
            yield s, t


def _core_sbullfree(h: Graph, q: SplitPartition) -> Union[_Draft, Certificate]:
    clique, stable = set(q.clique), set(q.stable)
    pairs = list(_incomparable_pairs(h, stable))
    if not pairs:
        return _core_gemfree(h, q)
    s1, s2 = min(pairs, key=lambda st: (-(h.degree(st[0]) + h.degree(st[1])), st))
    c0 = h.neighbors(s1) | h.neighbors(s2)
    near = sorted(s for s in stable if h.neighbors(s) & c0)
    for s3 in near:
        if s3 in (s1, s2) or comparable(h, s3, s1) or comparable(h, s3, s2):
            continue
        common = h.neighbors(s1) & h.neighbors(s2) & h.neighbors(s3)
        if not common:
            raise RuntimeError(f"vertices {s1},{s2},{s3} expose an S-bull")
        return Certificate("universal-at", (("u", (min(common),)), ("at", (s1, s2, s3))))
    d1 = [s for s in near if s == s1 or dominates(h, s1, s)]
    d2 = [s for s in near if s not in d1]
    for s in near:
        if not h.neighbors(s) <= c0 or (s in d2 and not (s == s2 or dominates(h, s2, s))):
            raise RuntimeError(f"vertex {s} is not dominated by {s1} or {s2}")
    rest_clique = clique - c0
    rest_stable = stable - set(near)
    inner = next(_incomparable_pairs(h, rest_stable), None)
    if inner is not None:
        t1, t2 = inner
        y1 = min(h.neighbors(s1) & h.neighbors(s2))
        y2 = min(h.neighbors(t1) & h.neighbors(t2))
        return Certificate("two-incomparable-gem-pairs", (("pair", (s1, s2, y1)), ("pair", (t1, t2, y2))))
    _, tail = _forest_layout(h, rest_clique, rest_stable, allow_trunk=False)
    if not isinstance(tail, _Draft) or tail.trunk:
        raise RuntimeError("remaining blocks contain an S-bull")
    draft = _Draft([sorted(c0)], [_chain(h, d2)], [], _chain(h, d1) + tail.crown)
    if tail.crown and any(h.neighbors(s) for s in tail.crown):
        raise RuntimeError("remaining blocks need a crown")
    for lv, br in zip(tail.levels, tail.branches):
        draft.add_level(len(draft.levels), lv, br)
    return draft


def _recognize(g: Graph, p: SplitPartition, core: Callable) -> RecognitionResult:
    h, q, log = preprocess(g, p)
    keep = log.kept
    entries = tuple(e for e in log)
    out = core(h, q)
    if isinstance(out, Certificate):
        cert = out.relabel(keep)
        span = cert.span(g)
        if len(span) <= vertex_limit():
            if not verify_non_membership(g, span, {Shape.LA}):
                raise RuntimeError(f"certificate {cert.reason} refuted by the oracle")
            cert = Certificate(cert.reason, cert.witness, True)
        return RecognitionResult("non-member", certificate=cert, log=entries)
    draft = _Draft.of(out.freeze().relabel(dict(enumerate(keep))))
    # relabel keeps level contents but sorts them; branch/trunk/crown order survives
    for e in reversed(entries):
        draft.undo(g, e)
    layout = draft.freeze()
    try:
        rep = realize_layout(layout, g, p)
    except LayoutError as exc:  # would mean a bug in the construction
        raise RuntimeError(f"internal layout error: {exc}") from exc
    return RecognitionResult("member", representation=rep, log=entries, layout=layout)


def _precondition(g: Graph, kind: str) -> tuple[Optional[SplitPartition], Optional[RecognitionResult]]:
    p = split_partition(g)
    if p is None:
        return None, RecognitionResult("precondition-failed", message="graph is not split")
    w = find_structure(g, kind, p)
    if w is not None:
        return p, RecognitionResult("precondition-failed", obstruction=w, message=f"graph contains an induced {kind}")
    return p, None


def recognize_sbullfree(g: Graph) -> RecognitionResult:
    """Decide membership of an S-bull-free split graph, with proof either way."""
    p, fail = _precondition(g, "s-bull")
    return fail if fail else _recognize(g, p, _core_sbullfree)


def recognize_gemfree(g: Graph) -> RecognitionResult:
    """Decide membership of a gem-free split graph, with proof either way."""
    p, fail = _precondition(g, "gem")
    return fail if fail else _recognize(g, p, _core_gemfree)


def build_no_trunk(g: Graph, p: SplitPartition) -> Representation:
    """All-LA representation of a gem-free split graph without stable paths on the trunk.

    Needs at most one minimal branching neighbourhood, i.e. no two
    incomparable S-bulls; otherwise the error names two such bulls.
    """
    if not p.is_valid_for(g):
        raise ValueError("partition is not a split partition of the graph")
    gem = find_structure(g, "gem")
    if gem is not None:
        raise ValueError(f"graph contains a gem: {' '.join(map(str, gem.vertices))}")
    forest, out = _forest_layout(g, set(p.clique), set(p.stable), allow_trunk=False)
    if not isinstance(out, _Draft):
        b1, b2 = forest.bull(g, out[0]), forest.bull(g, out[1])
        raise ValueError(
            f"two incomparable S-bulls: {' '.join(map(str, b1))} and {' '.join(map(str, b2))}"
        )
    return realize_layout(out.freeze(), g, p)
