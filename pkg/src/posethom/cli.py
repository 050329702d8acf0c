"""Command line entry point: ``posethom {homology,reduce,khovanov,e2}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ParseError, PosetHomError
from .homology import chain_complex, reduce, relative_chain_complex
from .io import (constant_or_file, functor_to_json, load_map, load_poset,
                 poset_to_json)
from .khovanov import khovanov_homology, parse_pd
from .spectral import collapse_report, e2_page


def _degrees(text, default_top):
    if text is None:
        return range(0, max(default_top, 0) + 1)
    try:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise ParseError(f"degree range {text!r} is not of the form a..b") from None
    if hi < lo:
        raise ParseError(f"degree range {text!r} is empty")
    return range(lo, hi + 1)


def _group_record(n, G, key="n"):
    free, tors = G.invariants
    return {key: n, "group": str(G), "free_rank": free, "torsion": list(tors)}


def cmd_homology(args, out):
    X = load_poset(args.poset)
    F = constant_or_file(X, args.functor, args.constant)
    if args.relative is not None:
        A = [a for a in args.relative.split(",") if a]
        C = relative_chain_complex(X, A, F)
    else:
        C = chain_complex(X, F)
    groups = [(n, C.homology_group(n)) for n in _degrees(args.range, X.height)]
    if args.format == "json":
        json.dump([_group_record(n, G) for n, G in groups], out, indent=2)
        out.write("\n")
    else:
        for n, G in groups:
            out.write(f"H_{n} = {G}\n")


def cmd_reduce(args, out):
    X = load_poset(args.poset)
    F = constant_or_file(X, args.functor, args.constant)
    Xr, Fr, log = reduce(X, F)
    if args.out_poset:
        Path(args.out_poset).write_text(json.dumps(poset_to_json(Xr), indent=2))
    if args.out_functor:
        Path(args.out_functor).write_text(json.dumps(functor_to_json(Fr), indent=2))
    if args.format == "json":
        json.dump({"poset": poset_to_json(Xr), "functor": functor_to_json(Fr),
                   "removed": [{"element": a, "kind": k} for a, k in log]}, out, indent=2)
        out.write("\n")
    else:
        for a, kind in log:
            out.write(f"removed {a} ({kind} beat point)\n")
        out.write(f"{len(X)} -> {len(Xr)} elements: {', '.join(Xr.elements)}\n")


def cmd_khovanov(args, out):
    text = Path(args.file).read_text() if args.file else args.pd
    if text is None:
        raise ParseError("give a PD string or --file")
    D = parse_pd(text)
    K = khovanov_homology(D, graded=args.graded)
    if args.format == "json":
        rows = K.rows(graded=args.graded)
        if args.raw:
            rows = {"rows": rows,
                    "raw": [_group_record(n, G) for n, G in sorted(K.raw.items())]}
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        out.write(f"crossings: {D.r} (n+ = {D.n_plus}, n- = {D.n_minus})\n")
        out.write(K.table(graded=args.graded) + "\n")
        if args.raw:
            for n, G in sorted(K.raw.items()):
                out.write(f"KH_{n} = H_{D.r - n}(B, B-1) = {G}\n")


def cmd_e2(args, out):
    X, Y = load_poset(args.source), load_poset(args.target)
    f = load_map(args.map, X, Y)
    F = constant_or_file(X, args.functor, args.constant)
    page = e2_page(f, F)
    report = collapse_report(page)
    if args.format == "json":
        json.dump({"page": page.to_json(),
                   "collapse": [{"n": r.n, "determined": r.determined,
                                 "group": str(r.group) if r.determined else None,
                                 "reason": r.reason} for r in report]}, out, indent=2)
        out.write("\n")
    else:
        out.write(page.table() + "\n")
        for r in report:
            if r.determined:
                out.write(f"H_{r.n} = {r.group} (determined)\n")
            else:
                out.write(f"H_{r.n} undetermined: {r.reason}\n")


def _coefficients(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--functor", help="functor JSON file")
    g.add_argument("--constant", help="constant coefficients, e.g. Z or Z/2")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="posethom", description="Homology of finite posets with functor coefficients")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="absolute or relative homology")
    p.add_argument("poset")
    _coefficients(p)
    p.add_argument("--relative", metavar="A", help="comma separated ids of the subspace")
    p.add_argument("--range", metavar="a..b", help="degrees to report")
    p.set_defaults(run=cmd_homology)

    p = sub.add_parser("reduce", help="remove homology-preserving beat points")
    p.add_argument("poset")
    _coefficients(p)
    p.add_argument("--out-poset")
    p.add_argument("--out-functor")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("khovanov", help="Khovanov homology of a PD code")
    p.add_argument("pd", nargs="?")
    p.add_argument("--file", help="read the PD code from a file")
    p.add_argument("--graded", action="store_true", help="split by quantum degree")
    p.add_argument("--raw", action="store_true", help="also print unshifted cube groups")
    p.set_defaults(run=cmd_khovanov)

    p = sub.add_parser("e2", help="E2 page of a map and collapse report")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("map")
    _coefficients(p)
    p.set_defaults(run=cmd_e2)

    for name in ("homology", "reduce", "khovanov", "e2"):
        sub.choices[name].add_argument("--format", choices=("text", "json"),
                                       default="text")
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        args.run(args, out)
    except PosetHomError as e:
        err.write(f"error: {type(e).__name__}: {e}\n")
        return e.exit_code
    except OSError as e:
        err.write(f"error: {e}\n")
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
