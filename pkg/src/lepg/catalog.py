"""Named witness graphs, their known class memberships, and the separation table."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graph import Graph, from_named_edges, generate
from .grid import Representation, Shape, format_shapes, verify
from .oracle import decide

LA, LB, LC, LD = Shape.LA, Shape.LB, Shape.LC, Shape.LD

ASSERTED = "literature"
DERIVED = "oracle"


class CatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class Fact:
    shapes: frozenset[Shape]
    member: bool
    source: str = ASSERTED

    def line(self) -> str:
        verdict = "member" if self.member else "non-member"
        return f"fact {format_shapes(self.shapes)} {verdict} {self.source}"


@dataclass
class Entry:
    name: str
    graph: Graph
    facts: list[Fact] = field(default_factory=list)
    representations: list[Representation] = field(default_factory=list)

    def dumps(self) -> str:
        out = [f"# {self.name}", self.graph.dumps().rstrip("\n")]
        out += ["# " + f.line() for f in self.facts]
        for r in self.representations:
            out += ["# representation", *("# " + ln for ln in r.dumps().splitlines())]
        return "\n".join(out) + "\n"


# obstructions known only from drawings; their structure is not recorded
PLACEHOLDERS = ("U1", "U2", "S3", "S4", "S5", "S6", "S7")
PLACEHOLDER_STATUS = "figure-only, structure unknown"

_STORED = {
    "c4": """shapes LA
p 0 LA 1 1 2 2
p 1 LA 2 1 2 1
p 2 LA 2 2 1 1
p 3 LA 1 2 1 2
""",
    "k23": """shapes LA,LD
p 0 LA 1 2 1 2
p 1 LA 2 1 2 1
p 2 LA 2 2 1 1
p 3 LD 2 2 1 1
p 4 LA 1 1 2 2
""",
    "3sun": """shapes LA,LB
p 0 LA 3 1 2 2
p 1 LB 3 1 2 2
p 2 LB 4 1 2 3
p 3 LA 4 1 2 1
p 4 LA 3 2 1 1
p 5 LA 1 1 2 1
""",
    "w4": """shapes LA,LB,LD
p 0 LA 2 2 1 1
p 1 LA 1 2 1 2
p 2 LD 2 2 1 1
p 3 LA 2 1 2 1
p 4 LB 2 2 1 1
""",
    "gem": """shapes LA
p 0 LA 1 3 1 1
p 1 LA 1 1 3 1
p 2 LA 1 1 1 3
p 3 LA 3 1 1 1
p 4 LA 1 1 3 3
""",
    "bull": """shapes LA
p 0 LA 1 1 1 3
p 1 LA 1 1 3 1
p 2 LA 1 1 1 1
p 3 LA 3 1 1 1
p 4 LA 1 3 1 1
""",
}


def _facts(*rows) -> list[Fact]:
    return [Fact(frozenset(s), m, src) for s, m, src in rows]


def _sun(k: int) -> Graph:
    return generate("k_sun", k)


def names() -> list[str]:
    return ["c4", "k23", "3sun", "4sun", "gem", "bull", "w4", "ksun(k)"]


def get(name: str) -> Entry:
    key = name.strip().lower()
    if key == "c4":
        e = Entry("c4", generate("cycle", 4), _facts(({LA}, True, ASSERTED)))
    elif key == "k23":
        e = Entry(
            "k23",
            generate("complete_bipartite", 2, 3),
            _facts(({LA, LD}, True, ASSERTED), ({LA, LB}, False, ASSERTED)),
        )
    elif key == "3sun":
        g = from_named_edges("abcdef", ["ab", "bc", "ca", "da", "dc", "ea", "eb", "fb", "fc"])
        e = Entry(
            "3sun",
            g,
            _facts(({LA, LB}, True, ASSERTED), ({LA, LD}, False, ASSERTED), ({LA}, False, ASSERTED)),
        )
    elif key == "4sun":
        e = Entry("4sun", _sun(4), _facts(({LA}, False, ASSERTED)))
    elif key == "gem":
        e = Entry("gem", from_named_edges("abcde", ["ab", "bc", "cd", "ea", "eb", "ec", "ed"]))
    elif key == "bull":
        e = Entry("bull", from_named_edges("abcde", ["ab", "bc", "ca", "ad", "be"]))
    elif key == "w4":
        e = Entry(
            "w4",
            generate("wheel", 4),
            _facts(({LA, LB, LD}, True, ASSERTED), ({LA, LB}, False, ASSERTED), ({LA, LD}, False, ASSERTED)),
        )
    elif m := re.fullmatch(r"ksun\((\d+)\)|(\d+)sun", key):
        k = int(m.group(1) or m.group(2))
        if k < 3:
            raise CatalogError("ksun needs k >= 3")
        return get("3sun") if k == 3 else get("4sun") if k == 4 else Entry(f"ksun({k})", _sun(k))
    elif name.strip().upper() in PLACEHOLDERS:
        raise CatalogError(f"{name.strip().upper()}: {PLACEHOLDER_STATUS}")
    else:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(names())}")
    if key in _STORED:
        e.representations.append(Representation.loads(_STORED[key]))
    return e


def check_entry(e: Entry, live: bool = True) -> list[str]:
    """Problems with stored representations and (when ``live``) facts."""
    bad = []
    for r in e.representations:
        if not verify(r, e.graph).ok:
            bad.append(f"{e.name}: stored {format_shapes(r.shapes)} representation does not verify")
    if live:
        for f in e.facts:
            if decide(e.graph, f.shapes).member != f.member:
                bad.append(f"{e.name}: oracle disagrees with fact '{f.line()}'")
    return bad


# separations ---------------------------------------------------------------


@dataclass
class Witness:
    graph: str
    shapes: frozenset[Shape]
    expected: bool
    observed: bool | None = None

    def line(self) -> str:
        exp = "yes" if self.expected else "no"
        got = "-" if self.observed is None else "yes" if self.observed else "no"
        return f"  {self.graph} in [{format_shapes(self.shapes)}]: expected {exp}, oracle {got}"


@dataclass
class SeparationRow:
    claim: str
    witnesses: list[Witness]
    status: str = "pending"

    def lines(self) -> list[str]:
        return [f"{self.claim}: {self.status}", *(w.line() for w in self.witnesses)]


def separation_rows() -> list[SeparationRow]:
    W = Witness
    return [
        SeparationRow("[LA] < [LA,LB]", [W("3sun", frozenset({LA, LB}), True), W("3sun", frozenset({LA}), False)]),
        SeparationRow("[LA] < [LA,LD]", [W("k23", frozenset({LA, LD}), True), W("k23", frozenset({LA}), False)]),
        SeparationRow(
            "[LA,LB] vs [LA,LD] incomparable",
            [
                W("k23", frozenset({LA, LD}), True),
                W("k23", frozenset({LA, LB}), False),
                W("3sun", frozenset({LA, LB}), True),
                W("3sun", frozenset({LA, LD}), False),
            ],
        ),
        SeparationRow(
            "[LA,LB],[LA,LD] < [LA,LB,LD]",
            [
                W("w4", frozenset({LA, LB, LD}), True),
                W("w4", frozenset({LA, LB}), False),
                W("w4", frozenset({LA, LD}), False),
            ],
        ),
        SeparationRow("[LA,LB,LD] < B1-EPG", [], "asserted, no witness graph available"),
    ]


def separation_report() -> list[SeparationRow]:
    """Recompute every witness verdict with the oracle; disagreement is fatal."""
    rows = separation_rows()
    for row in rows:
        if not row.witnesses:
            continue
        for w in row.witnesses:
            w.observed = decide(get(w.graph).graph, w.shapes).member
            if w.observed != w.expected:
                raise CatalogError(f"oracle contradicts known fact: {w.line().strip()} ({row.claim})")
        row.status = "verified"
    return rows


def format_report(rows: list[SeparationRow]) -> str:
    return "\n".join(ln for row in rows for ln in row.lines()) + "\n"
