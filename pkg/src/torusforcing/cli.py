"""Command-line driver: ``torusforcing <command> ...``.

Exit codes: 0 success or PASS, 1 a FAIL/GAP verdict (or a failed check),
2 degenerate parameters or a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .constructions import construct_M1
from .errors import BudgetExceeded, DegenerateInstance, NoPerfectMatching, NotAMatching, OddOrder, TorusError, WrongClass
from .forcing import DEFAULT_BUDGET, forcing_number, max_forcing_number, predicted_max_forcing
from .harness import run_explore, run_verify
from .matching import PerfectMatching
from .torus import (
    ParityClass,
    TorusParams,
    build_torus,
    classify,
    degeneracy,
    format_edge_list,
    is_isomorphism,
    parse_edge_list,
    parse_edge_records,
    star_map,
    star_params,
)

log = logging.getLogger("torusforcing")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_CLASS_ALIASES = {
    "EE": (ParityClass.EE_EVEN, ParityClass.EE_ODD),
    "EO": (ParityClass.EO_EVEN, ParityClass.EO_ODD),
    "OE": (ParityClass.OE_EVEN,),
    "solved": tuple(c for c in ParityClass if c is not ParityClass.OE_ODD),
    "all": tuple(ParityClass),
}


def _classes(names):
    if not names:
        return None
    out = []
    for name in names:
        if name in _CLASS_ALIASES:
            picks = _CLASS_ALIASES[name]
        else:
            try:
                picks = (ParityClass(name),)
            except ValueError:
                raise SystemExit(f"unknown class {name!r}; use one of "
                                 f"{', '.join([c.value for c in ParityClass] + list(_CLASS_ALIASES))}")
        out.extend(p for p in picks if p not in out)
    return tuple(sorted(out, key=list(ParityClass).index))


def _params(args) -> TorusParams:
    return TorusParams(args.n, args.m, args.r)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _edges_json(graph, pairs) -> list[list[int]]:
    return [[*graph.coords(u), *graph.coords(v)] for u, v in sorted(pairs)]


def _witness_json(graph, w) -> dict:
    return {
        "value": w.value,
        "matching": _edges_json(graph, w.matching.edges),
        "witness_set": _edges_json(graph, w.witness_set),
        "lower_bound": len(w.lower_bound_cert),
        "lower_bound_cycles": [[list(graph.coords(v)) for v in c.vertices] for c in w.lower_bound_cert],
    }


# -- commands ----------------------------------------------------------------------


def cmd_gen(args) -> int:
    p = _params(args)
    reason = degeneracy(p)
    if reason is not None:
        print(f"degenerate: {reason}", file=sys.stderr)
        return EXIT_USAGE
    _emit(format_edge_list(build_torus(p)), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    p = _params(args)
    try:
        tag = classify(p)
    except OddOrder as exc:
        print(f"{p}: odd vertex count, no perfect matching ({exc})")
        return EXIT_USAGE
    predicted = predicted_max_forcing(p)
    info = {
        "params": list(p.as_tuple()),
        "class": tag.cls.value,
        "pattern": tag.cls.pattern,
        "normalized": {"n": tag.n, "m": tag.m, "r": tag.r},
        "gcd": p.g,
        "predicted": "Unknown" if predicted is None else predicted,
        "degenerate": degeneracy(p),
    }
    if args.format == "json":
        print(json.dumps(info, indent=2))
    else:
        print(f"{p}: {tag.cls.value} {tag.cls.pattern} with n={tag.n}, m={tag.m}, r={tag.r}")
        print(f"  gcd(r, m) = {p.g}, predicted F = {info['predicted']}")
        if info["degenerate"]:
            print(f"  degenerate: {info['degenerate']}")
    return EXIT_USAGE if info["degenerate"] else EXIT_OK


def _load_graph(args):
    if args.graph:
        return parse_edge_list(Path(args.graph).read_text())
    if args.n is None or args.m is None or args.r is None:
        raise SystemExit("give n m r or --graph FILE")
    return build_torus(_params(args))


def cmd_analyze(args) -> int:
    graph = _load_graph(args)
    doc = {"params": list(graph.params.as_tuple()), "matching_source": args.matching}
    if args.matching == "enumerate-all":
        spectrum = max_forcing_number(graph, budget=args.budget, workers=args.threads)
        doc["spectrum"] = {
            "F": spectrum.max_value,
            "f": spectrum.min_value,
            "pm_count": spectrum.pm_count,
            "histogram": {str(k): v for k, v in spectrum.histogram.items()},
            "max_index": spectrum.max_index,
            "min_index": spectrum.min_index,
        }
        doc["max_witness"] = _witness_json(graph, spectrum.max_witness)
        doc["min_witness"] = _witness_json(graph, spectrum.min_witness)
    else:
        if args.matching == "from-file":
            if not args.matching_file:
                raise SystemExit("--matching from-file needs --matching-file")
            _, _, pairs = parse_edge_records(Path(args.matching_file).read_text(), graph)
            M = PerfectMatching.from_edges(graph, pairs)
        else:
            M = construct_M1(graph, args.matching.split("-", 1)[1])
        doc["witness"] = _witness_json(graph, forcing_number(graph, M))
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _write_manifest(manifest, args) -> None:
    text = manifest.to_json() if args.format == "json" else manifest.to_csv()
    _emit(text, args.out)
    log.info("%s: %s in %.1f s", manifest.command, manifest.counts, manifest.wall_ms / 1000)


def _ranges(args):
    return dict(rows=args.rows, cols=args.cols, torsions=args.torsions)


def cmd_verify(args) -> int:
    manifest = run_verify(args.max_vertices, _classes(args.classes), budget=args.budget,
                          threads=args.threads, marking=not args.no_marking, **_ranges(args))
    _write_manifest(manifest, args)
    return EXIT_OK if manifest.ok else EXIT_FAIL


def cmd_explore_open(args) -> int:
    manifest = run_explore(args.max_vertices, budget=args.budget, threads=args.threads, **_ranges(args))
    _write_manifest(manifest, args)
    return EXIT_OK


def cmd_star(args) -> int:
    p = _params(args)
    reason = degeneracy(p)
    if reason is not None:
        print(f"degenerate: {reason}", file=sys.stderr)
        return EXIT_USAGE
    sp = star_params(p)
    doc = {"source": list(p.as_tuple()), "k": sp.k, "target": list(sp.target.as_tuple())}
    reason = degeneracy(sp.target)
    if reason is not None:
        doc["target_degenerate"] = reason
        print(json.dumps(doc, indent=2))
        return EXIT_USAGE
    fwd = star_map(p)
    iso = is_isomorphism(build_torus(p), build_torus(sp.target), fwd)
    back = star_params(sp.target).target
    doc["isomorphism"] = iso
    doc["star_of_target"] = list(back.as_tuple())
    doc["involution"] = back == p
    if args.show_map:
        g = build_torus(p)
        h = build_torus(sp.target)
        doc["map"] = [[*g.coords(v), *h.coords(w)] for v, w in enumerate(fwd)]
    print(json.dumps(doc, indent=2))
    return EXIT_OK if iso and back == p else EXIT_FAIL


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torusforcing", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def nmr(p, optional=False):
        kw = {"nargs": "?", "default": None} if optional else {}
        p.add_argument("n", type=int, **kw)
        p.add_argument("m", type=int, **kw)
        p.add_argument("r", type=int, **kw)

    def common(p, fmt="json"):
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="vertex budget (default %(default)s)")
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)

    def ranges(p, default_max):
        p.add_argument("--max-vertices", type=int, default=default_max)
        p.add_argument("--rows", type=int, nargs="+", help="only these row counts n")
        p.add_argument("--cols", type=int, nargs="+", help="only these column counts m")
        p.add_argument("--torsions", type=int, nargs="+", help="only these torsions r")

    p = sub.add_parser("gen", help="write the edge list of T(n,m,r)")
    nmr(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("classify", help="parity class and predicted F")
    nmr(p)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("analyze", help="forcing number of one matching, or the full spectrum")
    nmr(p, optional=True)
    p.add_argument("--graph", help="edge-list file instead of n m r")
    p.add_argument("--matching", default="enumerate-all",
                   choices=("enumerate-all", "M1-vertical", "M1-horizontal", "from-file"))
    p.add_argument("--matching-file", help="edge records of the matching (with --matching from-file)")
    # the budget only limits --matching enumerate-all; one matching is solved directly
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check the closed forms and constructions over a sweep")
    p.add_argument("--class", dest="classes", action="append",
                   help="class filter, e.g. EE-even, EO-odd, EE, EO, OE, solved (repeatable)")
    p.add_argument("--no-marking", action="store_true", help="skip the per-matching marking search")
    ranges(p, 24)
    common(p, "csv")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore-open", help="record F and f for the unsolved class T(2n+1,2m,2r-1)")
    ranges(p, 24)
    common(p, "csv")
    p.set_defaults(func=cmd_explore_open)

    p = sub.add_parser("star", help="print the redrawing T* and check the isomorphism")
    nmr(p)
    p.add_argument("--show-map", action="store_true")
    p.set_defaults(func=cmd_star)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DegenerateInstance as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, NoPerfectMatching, NotAMatching, WrongClass, OddOrder, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TorusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return EXIT_USAGE
        return exc.code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
