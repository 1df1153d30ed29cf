"""Command-line front end: ``igband <command> (--input FILE | --builtin NAME) ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import free_band as fb
from .errors import IGError, ParseError, UnknownBuiltin
from .groups import GroupPresentation, abelian_invariants, simplify, word_str
from .presentation import (
    find_schreier,
    present_band,
    present_general,
    theta_fast_path,
    verify_schreier,
)
from .semigroup import FiniteSemigroup, biorder, eggbox, format_cay, greens, read_cay
from .singularity import left_action, right_action, singular_rectangles, singular_squares
from .variety import classify, default_table, load_varieties

BUILTIN_HELP = "prop2-fb3, prop2-frb4, fb:<k> (k<=3), vfree:<label>:<n> (n<=3)"


def resolve_builtin(name: str, varieties=None) -> FiniteSemigroup:
    if name == "prop2-fb3":
        return fb.build_prop2_band(fb.Realization.FREE_BAND_3)
    if name == "prop2-frb4":
        return fb.build_prop2_band(fb.Realization.FREE_REGULAR_4)
    parts = name.split(":")
    if parts[0] == "fb" and len(parts) == 2 and parts[1].isdigit() and 1 <= int(parts[1]) <= 3:
        return fb.fb_band(int(parts[1]))
    if parts[0] == "vfree" and len(parts) == 3 and parts[2].isdigit():
        table = varieties or default_table()
        if parts[1] not in table.entries:
            raise UnknownBuiltin(f"no variety labelled {parts[1]!r}")
        return fb.v_free_band(int(parts[2]), tuple(table.entries[parts[1]])).result
    raise UnknownBuiltin(f"{name!r}; expected one of {BUILTIN_HELP}")


class Context:
    def __init__(self, args):
        self.args = args
        self.varieties = load_varieties(args.varieties) if getattr(args, "varieties", None) else None
        if args.builtin:
            self.S = resolve_builtin(args.builtin, self.varieties)
            self.source = args.builtin
        else:
            self.S = read_cay(args.input)
            self.source = str(args.input)
        self._G = None

    @property
    def G(self):
        if self._G is None:
            self._G = greens(self.S)
        return self._G

    def box(self):
        S, G, a = self.S, self.G, self.args
        d = None
        if a.dclass is not None:
            if a.dclass[:1] == "D" and a.dclass[1:].isdigit():
                d = int(a.dclass[1:])
                if d >= G.num_d:
                    raise ParseError(f"no D-class {a.dclass}; there are {G.num_d}")
            else:
                d = G.d_class[S.element(a.dclass)]
        base = S.element(a.base) if a.base is not None else None
        if d is None and base is None:
            d = 0
        return eggbox(S, G, d=d, base=base)


def _emit(args, text_lines, data):
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _count(k, noun):
    return f"{k} {noun}" if k == 1 else f"{k} {noun}s"


def _box_header(S, G, box):
    m, n = box.shape
    return f"D-class {G.d_name(box.d_class)}: {m}x{n}, base {S.label(box.base)}"


def _render_eggbox(S, box) -> list[str]:
    m, n = box.shape
    cells = [[",".join(S.label(x) for x in sorted(box.cells.get((i, j), ()))) +
              ("*" if (i, j) in box.K else "") for j in range(n)] for i in range(m)]
    width = max(len(c) for row in cells for c in row)
    head = "     " + " ".join(f"{j + 1:>{width}}" for j in range(n))
    return [head] + [f"{i + 1:>3}  " + " ".join(f"{c:>{width}}" for c in row)
                     for i, row in enumerate(cells)]


# --- commands -------------------------------------------------------------------


def cmd_verify(ctx: Context) -> int:
    S = ctx.S
    E = S.idempotents()
    bo = biorder(S) if E else None
    data = {
        "source": ctx.source,
        "n": S.n,
        "associative": True,
        "band": S.is_band,
        "idempotents": len(E),
        "basic_pairs": len(bo.basic_pairs) if bo else 0,
    }
    lines = [f"{ctx.source}: n={S.n} associative=yes band={'yes' if S.is_band else 'no'}",
             f"idempotents: {len(E)}, basic pairs: {data['basic_pairs']}"]
    _emit(ctx.args, lines, data)
    return 0


def cmd_greens(ctx: Context) -> int:
    S, G = ctx.S, ctx.G
    classes = []
    lines = [f"{ctx.source}: {G.num_d} D-classes"]
    for c in range(G.num_d):
        members = G.d_members(c)
        above = [G.d_name(x) for x in G.above(c) if x != c]
        rows = len({G.r_class[x] for x in members})
        cols = len({G.l_class[x] for x in members})
        classes.append({"name": G.d_name(c), "size": len(members), "shape": [rows, cols],
                        "above": above, "elements": [S.label(x) for x in members]})
        lines.append(f"{G.d_name(c)}: {_count(len(members), 'element')}, {rows}x{cols}, "
                     f"below {', '.join(above) or 'nothing'}")
    data = {"source": ctx.source, "d_classes": classes}
    if ctx.args.dclass is not None or ctx.args.base is not None:
        box = ctx.box()
        lines += ["", _box_header(S, G, box)] + _render_eggbox(S, box)
        data["eggbox"] = {
            "d_class": G.d_name(box.d_class),
            "base": S.label(box.base),
            "cells": {f"{i + 1},{j + 1}": [S.label(x) for x in sorted(v)]
                      for (i, j), v in sorted(box.cells.items())},
            "K": [[i + 1, j + 1] for i, j in sorted(box.K)],
        }
    _emit(ctx.args, lines, data)
    return 0


def cmd_variety(ctx: Context) -> int:
    table = ctx.varieties or default_table()
    res = classify(ctx.S, table)
    data = {"source": ctx.source, "table": table.source, **res.as_dict()}
    lines = [f"{ctx.source}: satisfies {', '.join(sorted(res.satisfied)) or 'none'}",
             f"minimal: {', '.join(sorted(res.minimal)) or 'none'}"]
    for label, (ident, w) in sorted(res.failures.items()):
        sub = ", ".join(f"{v}={ctx.S.label(x)}" for v, x in w.items())
        lines.append(f"  fails {label}: {ident} at {sub}")
    if table.source == "builtin":
        lines.append("(identities other than tuv=tvtuv and its dual come from a shipped data table)")
    _emit(ctx.args, lines, data)
    return 0


def _diagram(S, G, box, rects) -> list[str]:
    m, n = box.shape
    by_witness: dict[int, list] = {}
    for r in rects:
        for eps, kind in r.witnesses:
            if G.d_class[eps] != box.d_class:
                by_witness.setdefault(eps, []).append((r, kind))
    out = []
    for eps in sorted(by_witness):
        items = by_witness[eps]
        out.append(f"witness {S.label(eps)}:")
        grid = [["" for _ in range(n)] for _ in range(m)]
        for tag, (r, kind) in zip("ABCDEFGHIJKLMNOPQRSTUVWXYZ", items):
            out.append(f"  {tag} = ({r.key[0] + 1},{r.key[1] + 1};{r.key[2] + 1},{r.key[3] + 1}) {kind.value}")
            i, k, j, l = r.key
            for c in ((i, j), (i, l), (k, j), (k, l)):
                grid[c[0]][c[1]] += tag
        width = max(1, max(len(c) for row in grid for c in row))
        out.append("     " + " ".join(f"{j + 1:>{width}}" for j in range(n)))
        for i, row in enumerate(grid):
            out.append(f"  {i + 1:>2} " + " ".join(f"{c or '.':>{width}}" for c in row))
    return out


def cmd_squares(ctx: Context) -> int:
    S, G, a = ctx.S, ctx.G, ctx.args
    box = ctx.box()
    if S.is_band:
        rects = singular_rectangles(S, box, proper_only=a.proper, G=G)
    else:
        rects = singular_squares(S, box, G, proper_only=a.proper)
    lines = [_box_header(S, G, box),
             f"{len(rects)} {'proper ' if a.proper else ''}singular rectangles"]
    for r in rects:
        i, k, j, l = r.key
        lines.append(f"  ({i + 1},{k + 1};{j + 1},{l + 1}) {r.kind.value} witness {S.label(r.witness)}")
    if a.diagram:
        lines += [""] + _diagram(S, G, box, rects)
    data = {"d_class": G.d_name(box.d_class), "base": S.label(box.base),
            "rectangles": [dict(r.to_json(S), rect=[x + 1 for x in r.key]) for r in rects]}
    if S.is_band and a.actions:
        acts = {}
        for eps in range(S.n):
            if G.d_leq[box.d_class, G.d_class[eps]] and G.d_class[eps] != box.d_class:
                s, t = left_action(S, box, eps, G), right_action(S, box, eps, G)
                acts[S.label(eps)] = {"left": s.one_based(), "right": t.one_based()}
                lines.append(f"  sigma {S.label(eps)}: left {s.one_based()} right {t.one_based()}")
        data["actions"] = acts
    _emit(a, lines, data)
    return 0


def _simplify_lines(P, args, lines, data):
    if args.simplify or args.abelian:
        res = simplify(P, args.limit_relator_length)
        Q = res.presentation
        if args.simplify:
            lines.append(f"simplified ({res.status.value}): {_count(len(Q.generators), 'generator')}, "
                         f"{_count(len(Q.relators), 'relator')}")
            lines += ["  " + ln for ln in Q.to_text().splitlines()]
            data["simplified"] = {"status": res.status.value, "presentation": Q.to_json(),
                                  "log": res.log}
    if args.abelian:
        inv = abelian_invariants(P)
        lines.append(str(inv))
        data["abelian"] = {"free_rank": inv.free_rank, "torsion": list(inv.torsion)}


def cmd_present(ctx: Context) -> int:
    S, G, a = ctx.S, ctx.G, ctx.args
    box = ctx.box()
    lines = [_box_header(S, G, box)]
    data: dict = {"d_class": G.d_name(box.d_class), "base": S.label(box.base)}
    if a.fast_path:
        th = theta_fast_path(S, box, G)
        m, _ = box.shape
        classes = [[j + 1 for j in c] for c in th.theta]
        lines.append(f"theta classes: {classes}{' (via opposite band)' if th.dual else ''}")
        lines.append(f"free of rank (|I|-1)(m-1) = ({m}-1)({th.m}-1) = {th.free_rank}")
        lines.append("free generators: " + (" ".join(th.generators) or "none"))
        data["fast_path"] = {"theta": classes, "m": th.m, "free_rank": th.free_rank,
                             "generators": th.generators, "dual": th.dual}
        _emit(a, lines, data)
        return 0
    if a.general or not S.is_band:
        sysm = find_schreier(S, box, a.max_schreier_len, G)
        report = verify_schreier(S, box, sysm, G)
        if not report.ok:
            raise IGError("; ".join(report.failures))
        P = present_general(S, box, sysm, G)
        data["schreier"] = sysm.words(S)
        lines.append("Schreier words: " + ", ".join(
            f"r_{j}={w}" for j, w in sysm.words(S)["r"].items()))
    else:
        P = present_band(S, box, G)
    lines.append(f"presentation: {_count(len(P.generators), 'generator')}, "
                 f"{_count(len(P.relators), 'relator')} ({P.dropped} freely trivial dropped)")
    for r, prov in zip(P.relators, P.provenance):
        lines.append(f"  {prov['tag']:<9} {word_str(r)}")
    data["presentation"] = P.to_json()
    _simplify_lines(P, a, lines, data)
    _emit(a, lines, data)
    return 0


def _load_presentation(path) -> GroupPresentation:
    text = Path(path).read_text()
    try:
        if text.lstrip().startswith("{"):
            return GroupPresentation.from_json(text)
        return GroupPresentation.from_text(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot read presentation {path}: {exc}") from None


def _presentation_from(ctx_or_args):
    a = ctx_or_args
    if a.presentation:
        return _load_presentation(a.presentation)
    ctx = Context(a)
    box = ctx.box()
    if ctx.S.is_band and not a.general:
        return present_band(ctx.S, box, ctx.G)
    sysm = find_schreier(ctx.S, box, a.max_schreier_len, ctx.G)
    return present_general(ctx.S, box, sysm, ctx.G)


def cmd_simplify(args) -> int:
    P = _presentation_from(args)
    res = simplify(P, args.limit_relator_length)
    Q = res.presentation
    lines = [f"status: {res.status.value}", *res.log, Q.to_text().rstrip()]
    data = {"status": res.status.value, "log": res.log, "presentation": Q.to_json()}
    if args.abelian:
        inv = abelian_invariants(Q)
        lines.append(str(inv))
        data["abelian"] = {"free_rank": inv.free_rank, "torsion": list(inv.torsion)}
    _emit(args, lines, data)
    return 0


def cmd_abelian(args) -> int:
    inv = abelian_invariants(_presentation_from(args))
    _emit(args, [str(inv)], {"free_rank": inv.free_rank, "torsion": list(inv.torsion)})
    return 0


def cmd_builtin(args) -> int:
    table = load_varieties(args.varieties) if args.varieties else None
    text = format_cay(resolve_builtin(args.name, table))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="igband", description="Maximal subgroups of free idempotent generated semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp, required=True):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--input", type=Path, help=".cay file")
        g.add_argument("--builtin", help=BUILTIN_HELP)
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.add_argument("--varieties", type=Path, help="variety table overriding the shipped one")

    def selectors(sp):
        sp.add_argument("--dclass", help="D-class as D<k>, or any element of it")
        sp.add_argument("--base", help="base idempotent (label or index)")

    def group_opts(sp):
        sp.add_argument("--general", action="store_true", help="use a searched Schreier system")
        sp.add_argument("--max-schreier-len", type=int, default=None)
        sp.add_argument("--limit-relator-length", type=int, default=100_000)

    for name, help_ in [("verify", "validate a table"), ("greens", "Green's structure"),
                        ("variety", "classify into band varieties")]:
        sp = sub.add_parser(name, help=help_)
        source(sp)
        selectors(sp)

    sp = sub.add_parser("squares", help="singular rectangles of a D-class")
    source(sp)
    selectors(sp)
    sp.add_argument("--proper", action="store_true")
    sp.add_argument("--diagram", action="store_true", help="grid of rectangles per witness")
    sp.add_argument("--actions", action="store_true", help="also print the left/right actions")

    sp = sub.add_parser("present", help="presentation of the subgroup at the base")
    source(sp)
    selectors(sp)
    group_opts(sp)
    sp.add_argument("--simplify", action="store_true")
    sp.add_argument("--abelian", action="store_true")
    sp.add_argument("--fast-path", action="store_true", help="seminormal rank formula")

    helps = {"simplify": "simplify a presentation", "abelian": "abelian invariants of a presentation"}
    for name in ("simplify", "abelian"):
        sp = sub.add_parser(name, help=helps[name])
        source(sp, required=False)
        selectors(sp)
        group_opts(sp)
        sp.add_argument("--presentation", type=Path, help="presentation file (text or JSON)")
        if name == "simplify":
            sp.add_argument("--abelian", action="store_true")

    sp = sub.add_parser("builtin", help="write a built-in band as a .cay table")
    sp.add_argument("name", help=BUILTIN_HELP)
    sp.add_argument("-o", "--output", type=Path)
    sp.add_argument("--varieties", type=Path)
    return p


COMMANDS = {"verify": cmd_verify, "greens": cmd_greens, "variety": cmd_variety,
            "squares": cmd_squares, "present": cmd_present}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in COMMANDS:
            return COMMANDS[args.command](Context(args))
        if args.command in ("simplify", "abelian"):
            if not args.presentation and not (args.input or args.builtin):
                parser.error("need --presentation, --input or --builtin")
            return cmd_simplify(args) if args.command == "simplify" else cmd_abelian(args)
        return cmd_builtin(args)
    except (ParseError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: unknown element {exc}", file=sys.stderr)
        return 2
    except IGError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
