"""Command-line front end: ``khovanov <command> [input] [options]``.

Exit codes: 0 success, 1 an asserted check failed, 2 parse error, 3 window
error, 4 unsupported move.  The environment variable ``KHOVANOV_WINDOW``
(``lo:hi``) supplies the q-window for Z[c] jobs when ``--window`` is absent.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra import Ring
from .cobordism import EMPTY, Movie, closed_surface_invariant, movie_map
from .cube import twist_chain_reduce
from .diagram import LinkDiagram, make_diagram, parse_braid, parse_pd
from .errors import DegreeWindowTooSmall, KhovanovError, MalformedSyntax, ParseError, UnsupportedMove, WindowError
from .homology import BigradedGroups, all_homology, khovanov_homology
from .invariants import (
    SINGLE_CHECKS,
    format_jones,
    jones,
    kauffman_bracket,
    run_checks,
    scaled_bracket,
)
from .tangle import (
    GradedModulePresentation,
    a_mod_2x,
    free_a_module,
    reduced_a_module,
    tangle_homology,
)

WINDOW_ENV = "KHOVANOV_WINDOW"
BUILTIN_MODULES = {"A": free_a_module, "A/cA": reduced_a_module, "A/2XA": a_mod_2x}


# ---------------------------------------------------------------------------
# input handling
# ---------------------------------------------------------------------------


def parse_window(text: str | None) -> tuple[int, int] | None:
    if text is None or text == "":
        return None
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise MalformedSyntax(f"window must look like lo:hi, got {text!r}") from None
    return lo, hi


def parse_word(text: str) -> list[int]:
    text = text.replace(",", " ").strip()
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise MalformedSyntax(f"braid word must be integers, got {text!r}") from None


def read_diagram(args: argparse.Namespace, tangle: bool = False) -> LinkDiagram:
    sources = [s for s in ("pd", "braid", "file") if getattr(args, s, None) is not None]
    if len(sources) != 1:
        raise MalformedSyntax("give exactly one of --pd, --braid or --file")
    if args.braid is not None:
        if args.strands is None:
            raise MalformedSyntax("--braid needs --strands")
        d = parse_braid(parse_word(args.braid), args.strands)
    elif args.pd is not None:
        d = parse_pd(args.pd, tangle=tangle and getattr(args, "marked", None) is None)
    else:
        path = Path(args.file)
        try:
            text = path.read_text()
        except OSError as exc:
            raise MalformedSyntax(f"cannot read {path}: {exc}") from None
        d = parse_pd(text, tangle=tangle and getattr(args, "marked", None) is None)
    marked = getattr(args, "marked", None)
    if marked is not None:
        d = make_diagram(d.crossings, d.free_loops, d.signs, marked_arc=marked)
    return d


def _window(args: argparse.Namespace, ring: Ring) -> tuple[int, int] | None:
    win = parse_window(getattr(args, "window", None))
    if win is None and ring is Ring.ZC:
        win = parse_window(os.environ.get(WINDOW_ENV))
        if win is None:
            raise DegreeWindowTooSmall(f"Z[c] jobs need --window lo:hi or {WINDOW_ENV}")
    return win


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def relabel_modern(groups: BigradedGroups) -> BigradedGroups:
    """Print-only relabelling ``(i, j) -> (-i, -j)``; the groups are untouched."""
    win = None if groups.window is None else (-groups.window[1], -groups.window[0])
    return BigradedGroups(groups.ring, {(-i, -j): g for (i, j), g in groups.groups.items()}, win)


def render_groups(groups: BigradedGroups, fmt: str, modern: bool = False) -> str:
    if modern:
        groups = relabel_modern(groups)
    if fmt == "json":
        data = groups.to_json()
        data["labels"] = "modern" if modern else "classic"
        return json.dumps(data, sort_keys=True)
    if fmt == "poincare":
        return groups.poincare()
    return groups.table()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_homology(args: argparse.Namespace) -> int:
    d = read_diagram(args)
    ring = Ring.coerce(args.ring)
    window = _window(args, ring)
    if args.twist:
        chain = parse_word(args.twist)
        groups = all_homology(twist_chain_reduce(d, chain, ring, window), args.jobs)
    else:
        groups = khovanov_homology(d, ring, window, jobs=args.jobs)
    print(render_groups(groups, args.format, args.modern))
    return 0


def cmd_jones(args: argparse.Namespace) -> int:
    d = read_diagram(args)
    v = jones(d)
    if args.format == "json":
        print(json.dumps({"schema": 1, "variable": "t^(1/2)", "jones": v.to_json()}, sort_keys=True))
    else:
        print(format_jones(v))
    return 0


def cmd_bracket(args: argparse.Namespace) -> int:
    d = read_diagram(args)
    b, k = kauffman_bracket(d), scaled_bracket(d)
    if args.format == "json":
        print(json.dumps({"schema": 1, "bracket": b.to_json(), "K": k.to_json()}, sort_keys=True))
    else:
        print(f"<D> = {b.format('q')}")
        print(f"K(D) = {k.format('q')}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    d = read_diagram(args)
    names = None if args.all or not args.property else args.property
    unknown = [n for n in names or [] if n not in SINGLE_CHECKS]
    if unknown:
        raise MalformedSyntax(f"unknown properties {unknown}; choose from {sorted(SINGLE_CHECKS)}")
    reports = run_checks(d, names)
    if args.format == "json":
        print(json.dumps({"schema": 1, "reports": [r.to_json() for r in reports]}, sort_keys=True))
    else:
        for r in reports:
            print(f"{r.name}: {r.status}")
    return 0 if all(r.ok for r in reports) else 1


def _module(source: str) -> GradedModulePresentation:
    if source in BUILTIN_MODULES:
        return BUILTIN_MODULES[source]()
    return GradedModulePresentation.load(source)


def cmd_tangle(args: argparse.Namespace) -> int:
    d = read_diagram(args, tangle=True)
    module = _module(args.module)
    groups = tangle_homology(d, module, parse_window(args.window))
    print(render_groups(groups, args.format, args.modern))
    return 0


def cmd_movie(args: argparse.Namespace) -> int:
    movie = Movie.load(args.movie)
    ring = Ring.coerce(args.ring)
    frames = movie.frames()
    if frames[0] == EMPTY and frames[-1] == EMPTY:
        value = closed_surface_invariant(movie, ring)
        if args.format == "json":
            print(json.dumps({"schema": 1, "chi": movie.euler_characteristic, "value": value.to_json()}, sort_keys=True))
        else:
            print(value.format("c"))
        return 0
    cmap = movie_map(movie, ring, parse_window(args.window))
    if args.format == "json":
        print(json.dumps(cmap.to_json(), sort_keys=True))
    else:
        print(f"q-shift {cmap.shift}; chain map: {'yes' if cmap.is_chain_map() else 'no'}")
    return 0


def _table_row(payload: tuple[str, str, str, str, str | None]) -> dict:
    name, pd, command, ring, window = payload
    out: dict = {"name": name}
    try:
        d = parse_pd(pd)
        if command == "homology":
            r = Ring.coerce(ring)
            out["homology"] = khovanov_homology(d, r, parse_window(window)).to_json()
        elif command == "jones":
            out["jones"] = format_jones(jones(d))
        elif command == "check":
            out["reports"] = [rep.to_json() for rep in run_checks(d)]
        else:
            raise MalformedSyntax(f"unknown table command {command!r}")
    except KhovanovError as exc:
        out["error"] = {"type": type(exc).__name__, "message": str(exc), "exit": exit_code(exc)}
    return out


def read_table(path: str | Path) -> list[tuple[str, str]]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise MalformedSyntax(f"cannot read {path}: {exc}") from None
    if rows and not {"name", "pd"} <= set(rows[0]):
        raise MalformedSyntax("knot table needs 'name' and 'pd' columns")
    return [(row["name"], row["pd"]) for row in rows]


def cmd_table(args: argparse.Namespace) -> int:
    rows = read_table(args.table)
    window = args.window
    if args.command == "homology":
        win = _window(args, Ring.coerce(args.ring))
        window = None if win is None else f"{win[0]}:{win[1]}"
    payloads = [(name, pd, args.command, args.ring, window) for name, pd in rows]
    if args.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_table_row, payloads))
    else:
        results = [_table_row(p) for p in payloads]
    for res in results:
        print(json.dumps(res, sort_keys=True))
    codes = [res["error"]["exit"] for res in results if "error" in res]
    if args.command == "check":
        bad = any(
            rep["status"] == "fail" for res in results for rep in res.get("reports", [])
        )
        codes.append(1 if bad else 0)
    return max(codes, default=0)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pd", help="PD code, e.g. 'PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]' or JSON")
    p.add_argument("--braid", help="braid word, e.g. '1 1 1' (letters ±i)")
    p.add_argument("--strands", type=int, help="number of braid strands")
    p.add_argument("--file", help="file holding a PD code or a JSON diagram")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khovanov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="bigraded homology groups")
    _add_input(p)
    p.add_argument("--ring", choices=["z", "zc"], default="z", help="z: c = 0 theory; zc: coefficients Z[c]")
    p.add_argument("--window", help="q-degree window lo:hi (required for zc unless KHOVANOV_WINDOW is set)")
    p.add_argument("--format", choices=["table", "json", "poincare"], default="table")
    p.add_argument("--modern", action="store_true", help="print (i, j) as (-i, -j)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes over q-degrees")
    p.add_argument("--twist", help="crossing indices of a twist chain to collapse first")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("jones", help="Jones polynomial")
    _add_input(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_jones)

    p = sub.add_parser("bracket", help="Kauffman bracket and K(D)")
    _add_input(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("check", help="property checks")
    _add_input(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="run every single-diagram check")
    group.add_argument("--property", action="append", help=f"one of {', '.join(sorted(SINGLE_CHECKS))}")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tangle", help="homology of a (1,1)-tangle with module coefficients")
    _add_input(p)
    p.add_argument("--marked", type=int, help="arc to cut when the PD code is closed")
    p.add_argument("--module", required=True, help=f"module JSON file or one of {', '.join(BUILTIN_MODULES)}")
    p.add_argument("--window", help="q-degree window lo:hi")
    p.add_argument("--format", choices=["table", "json", "poincare"], default="table")
    p.add_argument("--modern", action="store_true")
    p.set_defaults(func=cmd_tangle)

    p = sub.add_parser("movie", help="chain map of a movie; closed surfaces print their value")
    p.add_argument("movie", help="movie JSON file")
    p.add_argument("--ring", choices=["z", "zc"], default="zc")
    p.add_argument("--window", help="q-window of the first frame")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_movie)

    p = sub.add_parser("table", help="batch run over a CSV knot table with columns name,pd")
    p.add_argument("table", help="CSV file")
    p.add_argument("--command", choices=["homology", "jones", "check"], default="homology")
    p.add_argument("--ring", choices=["z", "zc"], default="z")
    p.add_argument("--window")
    p.add_argument("--jobs", type=int, default=1, help="rows processed concurrently")
    p.set_defaults(func=cmd_table)
    return parser


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return 2
    if isinstance(exc, WindowError):
        return 3
    if isinstance(exc, UnsupportedMove):
        return 4
    return 1


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--window -12:4`` through argparse, which reads ``-12:4`` as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--window":
            value = next(it, None)
            out.append(tok if value is None else f"--window={value}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except KhovanovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
