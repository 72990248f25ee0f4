"""gasket-walk command line.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
Every artifact starts with a header naming the build; outputs are written
atomically and are byte-identical for identical invocations.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .coupling import fold, parse_path, random_trace
from .exact import exit_distribution, truncated_green
from .geometry import adjacent_combinatorial, edges_upto
from .io import BUILD_ID, csv_text, json_text, write_atomic
from .measures import (
    histogram_rows,
    limit_histogram,
    verify_group_invariance,
    verify_selfsimilar,
    verify_shift_identity,
)
from .symbolic import GasketConfig, format_word, parse_word

log = logging.getLogger("gasket_walk")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _cfg(args) -> GasketConfig:
    if args.d < 1:
        raise UsageError("--d must be >= 1")
    return GasketConfig(args.d)


def _positive(args, *names: str, allow_zero: tuple[str, ...] = ()) -> None:
    for name in names:
        v = getattr(args, name)
        low = 0 if name in allow_zero else 1
        if v is not None and v < low:
            raise UsageError(f"--{name.replace('_', '-')} must be >= {low}, got {v}")


def _word(text: str, cfg: GasketConfig, flag: str):
    try:
        return parse_word(text, cfg)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def cmd_graph_export(args) -> int:
    cfg = _cfg(args)
    _positive(args, "level", allow_zero=("level",))
    rows = [(format_word(x, cfg), format_word(y, cfg), k) for x, y, k in edges_upto(args.level, cfg)]
    _emit(csv_text("graph-export", {"d": args.d, "level": args.level},
                   ["src", "dst", "kind"], rows), args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = _cfg(args)
    _positive(args, "level", "walks", "workers", allow_zero=("burn",))
    _positive(args, "burn", allow_zero=("burn",))
    start = _word(args.start, cfg, "--start")
    h = limit_histogram(start, args.level, args.walks, args.seed, cfg,
                        burn=args.burn, workers=args.workers)
    rows = [(w, c, repr(f)) for w, c, f in histogram_rows(h, cfg)]
    params = {"d": args.d, "level": args.level, "burn": args.burn, "walks": args.walks,
              "seed": args.seed, "start": format_word(start, cfg)}
    _emit(csv_text("simulate", params, ["word", "count", "fraction"], rows), args.out)
    return 0


def cmd_exit_dist(args) -> int:
    cfg = _cfg(args)
    _positive(args, "level")
    start = _word(args.start, cfg, "--start")
    if len(start) >= args.level:
        raise UsageError("--start must be shorter than --level")
    dist = exit_distribution(start, args.level, cfg, exact=args.exact)
    rows = [(format_word(w, cfg), str(p), repr(float(p)), int(dist.exact))
            for w, p in zip(dist.support, dist.probs)]
    params = {"d": args.d, "level": args.level, "start": format_word(start, cfg)}
    _emit(csv_text("exit-dist", params, ["word", "probability", "value", "exact_flag"], rows),
          args.out)
    return 0


def cmd_coupling(args) -> int:
    cfg = _cfg(args)
    if args.random:
        _positive(args, "steps")
        trace = random_trace(args.steps, args.seed, cfg)
        extra = {"seed": args.seed, "steps": args.steps}
    else:
        if not args.path:
            raise UsageError("--path is required unless --random is given")
        try:
            path = parse_path(args.path, cfg)
        except ValueError as exc:
            raise UsageError(f"--path: {exc}") from None
        for a, b in zip(path, path[1:]):
            if not adjacent_combinatorial(a, b):
                raise UsageError(f"--path: {format_word(a, cfg)} and {format_word(b, cfg)} "
                                 "are not adjacent")
        trace = fold(path, cfg)
        extra = {}
    doc = {"d": cfg.d}
    doc.update(extra)
    doc["table"] = trace.table()
    _emit(json_text(doc), args.out)
    return 0


def cmd_green(args) -> int:
    cfg = _cfg(args)
    _positive(args, "radius")
    green = truncated_green(args.radius, cfg)
    rows = []
    for x in green.states:
        for y in green.states:
            v = green(x, y)
            if args.martin:
                v = v / green((), y)
            rows.append((format_word(x, cfg), format_word(y, cfg), str(v), int(green.exact)))
    params = {"d": args.d, "radius": args.radius, "quantity": "martin" if args.martin else "green"}
    _emit(csv_text("green", params, ["x", "y", "value", "exact_flag"], rows), args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = _cfg(args)
    _positive(args, "level", "walks", "workers", "sets")
    _positive(args, "burn", "fold_walks", allow_zero=("burn", "fold_walks"))
    common = dict(burn=args.burn, workers=args.workers)
    if args.sets is not None:
        common["n_sets"] = args.sets
    if args.identity == "group":
        rep = verify_group_invariance(args.level, args.walks, args.seed, cfg, **common)
    elif args.identity == "selfsimilar":
        if args.level < 2:
            raise UsageError("--level must be >= 2 for the self-similar identity")
        rep = verify_selfsimilar(args.level, args.walks, args.seed, cfg,
                                 fold_walks=args.fold_walks, **common)
    else:
        if args.level < 2:
            raise UsageError("--level must be >= 2 for the shift identity")
        start = _word(args.start or "0", cfg, "--start")
        if not start or start[0] != 0:
            raise UsageError("--start must begin with symbol 0 for the shift identity")
        rep = verify_shift_identity(start, args.level, args.walks, args.seed, cfg, **common)
    text = json_text(rep.as_json())
    if args.json:
        write_atomic(args.json, text)
    else:
        sys.stdout.write(text)
    status = "PASS" if rep.passed else "FAIL"
    print(f"{args.identity}: {status} ({len(rep.comparisons)} comparisons)", file=sys.stderr)
    return 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gasket-walk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=BUILD_ID)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def base(name, helptext, func):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--d", type=int, required=True, help="gasket dimension (>= 1)")
        sp.set_defaults(func=func)
        return sp

    def graph_flags(sp):
        sp.add_argument("--level", type=int, required=True)
        sp.add_argument("--out")

    graph_flags(base("graph-export", "CSV edge list of all words up to a level",
                     cmd_graph_export))
    g = sub.add_parser("graph", help="graph utilities")
    gsub = g.add_subparsers(dest="graph_command", required=True)
    ge = gsub.add_parser("export", help="CSV edge list of all words up to a level")
    ge.add_argument("--d", type=int, required=True)
    graph_flags(ge)
    ge.set_defaults(func=cmd_graph_export)

    sp = base("simulate", "histogram of limit-cell estimates", cmd_simulate)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--burn", type=int, default=15)
    sp.add_argument("--walks", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--start", default="-")
    sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--out")

    sp = base("exit-dist", "law of the first vertex at a level", cmd_exit_dist)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--start", default="-")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=None)
    mode.add_argument("--float", dest="exact", action="store_false")
    sp.add_argument("--out")

    sp = base("coupling", "reflection-coupling trace as JSON", cmd_coupling)
    sp.add_argument("--path", help='comma-separated walk, e.g. "-,0,-,1,10"')
    sp.add_argument("--random", action="store_true")
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = base("green", "Green function of the walk killed at a radius", cmd_green)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--martin", action="store_true", help="write K_R(x,y) instead")
    sp.add_argument("--out")

    sp = base("verify", "check a hitting-distribution identity", cmd_verify)
    sp.add_argument("--identity", choices=["group", "selfsimilar", "shift"], required=True)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--walks", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--burn", type=int, default=15)
    sp.add_argument("--sets", type=int)
    sp.add_argument("--start", help="start word for the shift identity (default 0)")
    sp.add_argument("--fold-walks", type=int, default=0)
    sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--json")
    return p


def _join_dash_values(argv: list[str]) -> list[str]:
    # "-,0,-,1" would otherwise be read as an option by argparse
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in ("--path", "--start"):
            nxt = next(it, None)
            if nxt is None:
                out.append(a)
            else:
                out.append(f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_dash_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
