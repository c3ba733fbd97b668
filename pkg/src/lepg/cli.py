"""Command-line front end.  Exit codes: 0 affirmative, 1 negative, 2 usage or input error."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import catalog, reduction
from .graph import Graph, GraphFormatError
from .grid import Representation, extract_graph, parse_shapes, render, verify
from .oracle import OracleLimitError, decide
from .recognition import check_certificate, parse_report, recognize_gemfree, recognize_sbullfree

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, loader):
    try:
        return loader(_read(path))
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(msg: str):
    print(msg)


def _is_report(text: str) -> bool:
    return any(ln.strip().startswith("verdict ") for ln in text.splitlines())


# subcommands ---------------------------------------------------------------


def cmd_verify(a) -> int:
    g = _load(a.graph, Graph.loads)
    text = _read(a.rep)
    if _is_report(text):
        verdict, rep, cert = _load(a.rep, parse_report)
        if verdict == "non-member":
            if cert is None:
                raise UsageError(f"{a.rep}: non-member report without certificate")
            good = check_certificate(g, cert)
            _say("certificate ok" if good else "certificate rejected")
            return OK if good else NEGATIVE
        if rep is None:
            raise UsageError(f"{a.rep}: report carries no representation")
    else:
        rep = _load(a.rep, Representation.loads)
    if sorted(rep.paths) != list(g.vertices()):
        _say("mismatch\nvertex sets differ")
        return NEGATIVE
    report = verify(rep, g)
    _say(report.describe())
    return OK if report.ok else NEGATIVE


def cmd_extract(a) -> int:
    rep = _load(a.rep, Representation.loads)
    try:
        g = extract_graph(rep)
    except ValueError as exc:
        raise UsageError(f"{a.rep}: {exc}") from None
    _emit(g.dumps(), a.out)
    return OK


def _shapes(text: str):
    try:
        return parse_shapes(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_oracle(a) -> int:
    g = _load(a.graph, Graph.loads)
    try:
        d = decide(g, _shapes(a.shapes), grid_bound=a.grid)
    except OracleLimitError as exc:
        raise UsageError(str(exc)) from None
    _say(d.describe())
    if d.member:
        _emit(d.representation.normalized().dumps(), a.out)
        return OK
    return NEGATIVE


def cmd_recognize(a) -> int:
    g = _load(a.graph, Graph.loads)
    rec = recognize_sbullfree if a.cls == "sbullfree" else recognize_gemfree
    res = rec(g)
    _emit(res.report(), a.out)
    if a.out:
        _say(f"verdict {res.verdict}")
    return {"member": OK, "non-member": NEGATIVE}.get(res.verdict, USAGE)


def cmd_reduce(a) -> int:
    f = _load(a.formula, reduction.CnfFormula.loads)
    g, idx = reduction.build_gphi(f, a.variant)
    _emit(g.dumps(), a.out)
    if a.index:
        Path(a.index).write_text(idx.dumps())
    return OK


def _parse_assignment(text: str, k: int) -> dict[int, bool]:
    out: dict[int, bool] = {}
    for tok in text.replace(",", " ").split():
        if tok in ("v", "s", "SAT", "SATISFIABLE"):
            continue
        try:
            lit = int(tok)
        except ValueError:
            raise UsageError(f"bad assignment literal {tok!r}") from None
        if lit == 0:
            continue
        if abs(lit) > k:
            raise UsageError(f"assignment literal {lit} outside 1..{k}")
        out[abs(lit)] = lit > 0
    return {v: out.get(v, False) for v in range(1, k + 1)}


def cmd_embed(a) -> int:
    f = _load(a.formula, reduction.CnfFormula.loads)
    if a.assignment is None:
        asg = reduction.sat_solve(f)
        if asg is None:
            _say("unsat")
            return NEGATIVE
    else:
        text = _read(a.assignment) if os.path.exists(a.assignment) else a.assignment
        asg = _parse_assignment(text, f.k)
    try:
        rep = reduction.embed_from_assignment(f, asg)
    except reduction.EmbeddingError as exc:
        _say(f"error: {exc}")
        return NEGATIVE
    _emit(rep.dumps(), a.out)
    return OK


def cmd_render(a) -> int:
    rep = _load(a.rep, Representation.loads)
    _emit(render(rep, a.format), a.out)
    return OK


def cmd_catalog(a) -> int:
    if a.action == "list":
        for n in catalog.names():
            _say(n)
        for n in catalog.PLACEHOLDERS:
            _say(f"{n} ({catalog.PLACEHOLDER_STATUS})")
        return OK
    if not a.name:
        raise UsageError("catalog get needs a name")
    try:
        e = catalog.get(a.name)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc)) from None
    _emit(e.dumps(), a.out)
    return OK


def cmd_separations(a) -> int:
    try:
        rows = catalog.separation_report()
    except catalog.CatalogError as exc:
        _say(f"error: {exc}")
        return NEGATIVE
    _emit(catalog.format_report(rows), a.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lepg", description="Single-bend grid path representations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a representation or recognition report against a graph")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-r", "--rep", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="intersection graph of a representation")
    p.add_argument("-r", "--rep", required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("oracle", help="exhaustive membership decision for small graphs")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("--shapes", required=True, help="comma list, e.g. LA,LD")
    p.add_argument("--grid", type=int, help="grid bound (default 2n)")
    p.add_argument("-o", "--out", help="where to write the representation")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("recognize", help="polynomial recognizers for split graph subclasses")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("--class", dest="cls", required=True, choices=("sbullfree", "gemfree"))
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("reduce", help="gadget graph of a 3-CNF formula")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--variant", choices=reduction.VARIANTS, default="la")
    p.add_argument("-o", "--out")
    p.add_argument("--index", help="where to write the role index")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("embed", help="representation of the gadget graph from a satisfying assignment")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--assignment", help="file or inline list of signed literals")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("render", help="draw a representation")
    p.add_argument("-r", "--rep", required=True)
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("catalog", help="named witness graphs")
    p.add_argument("action", choices=("list", "get"))
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("separations", help="recompute the class separation table")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_separations)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
