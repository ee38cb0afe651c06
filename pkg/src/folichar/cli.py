"""Command line entry point: ``folichar verify|derive|dump``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import simplicial as sx
from . import suites
from .config import ConfigError, default_config, load_config
from .weil import ParseError, make_gl, parse_wo_word, weil_context, wo_element, wo_to_weil
from .gca import hom_apply

DATA = Path(__file__).with_name("data")
GROUPS = ("weil", "bott", "gv", "model", "gvcocycle", "all")


class UsageError(Exception):
    pass


def positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("codimension must be at least 1")
    return v


def level_range(s: str) -> range:
    try:
        lo, hi = (int(p) for p in s.split("..")) if ".." in s else (int(s), int(s))
    except ValueError:
        raise argparse.ArgumentTypeError(f"levels must look like 0..3, got {s!r}")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or negative level range {s!r}")
    return range(lo, hi + 1)


def resolve_config(name: str | None):
    if name is None:
        return default_config()
    p = Path(name)
    if not p.exists() and (DATA / f"{name}.json").exists():
        p = DATA / f"{name}.json"
    return load_config(p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="folichar", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run check suites")
    v.add_argument("group", choices=GROUPS)
    v.add_argument("--config", help="JSON config path or bundled name (default, rotation, expanding)")
    v.add_argument("--out", help="write JSONL records plus a summary line here")
    v.add_argument("--q", type=positive_int, help="codimension (weil, bott)")
    v.add_argument("--poly", help="Chern monomial for bott, e.g. c1*c2")
    v.add_argument("--levels", type=level_range, help="simplicial levels a..b (bott, gv)")
    v.add_argument("--checks", help="comma separated check names to run")
    v.add_argument("--serial", action="store_true", help="run checks one at a time")

    d = sub.add_parser("derive", help="derive a characteristic cochain")
    d.add_argument("what", choices=("gv",))
    d.add_argument("--levels", type=level_range, default=range(0, 4))
    d.add_argument("--out")

    u = sub.add_parser("dump", help="print the Weil image of an h/c word")
    u.add_argument("element", help="e.g. h1*c1 or c1^2")
    u.add_argument("--q", type=positive_int)
    u.add_argument("--levels", type=level_range, help="also print the simplicial cochain at these levels")
    u.add_argument("--model", choices=("formal", "local"), default="formal")
    return ap


def _bott_cases(args):
    if args.poly is None:
        cases = suites.DEFAULT_BOTT
        if args.q is not None:
            cases = tuple(c for c in cases if c[0] == args.q)
            if not cases:
                raise UsageError(f"no default Bott case for q={args.q}; pass --poly")
    else:
        q = args.q or 1
        factors = parse_wo_word(args.poly, q)
        if any(k != "c" for k, _ in factors):
            raise UsageError("--poly takes Chern classes only")
        cases = ((q, tuple(i for _, i in factors), range(0, 3)),)
    if args.levels is not None:
        cases = tuple((q, p, args.levels) for q, p, _ in cases)
    return cases


def select_checks(args) -> list:
    g = args.group
    needs_cfg = g in ("model", "gvcocycle", "all")
    cfg = resolve_config(args.config) if needs_cfg else None
    checks = []
    if g in ("weil", "all"):
        for q in ([args.q] if args.q and g == "weil" else [1, 2, 3]):
            checks += suites.weil_checks(q)
    if g in ("bott", "all"):
        checks += suites.bott_checks(_bott_cases(args) if g == "bott" else suites.DEFAULT_BOTT)
    if g in ("gv", "all"):
        checks += suites.nerve_checks()
        checks += suites.gv_checks(args.levels if (g == "gv" and args.levels) else range(0, 4))
    if g in ("model", "all"):
        checks += suites.model_checks(cfg)
    if g in ("gvcocycle", "all"):
        checks += suites.gvcocycle_checks(cfg)
    if args.checks:
        wanted = [c.strip() for c in args.checks.split(",") if c.strip()]
        names = {c.name for c in checks}
        unknown = [w for w in wanted if w not in names]
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(unknown)}")
        checks = [c for c in checks if c.name in wanted]
    return checks


def emit(records: list, out: str | None) -> dict:
    summary = suites.summarize(records)
    for r in records:
        print(r.line())
    print(f"{summary['pass']} passed, {summary['fail']} failed, {summary['skipped']} skipped "
          f"in {summary['runtime']:.1f}s")
    if out:
        with open(out, "w") as fh:
            for r in records:
                fh.write(json.dumps(suites.record_dict(r)) + "\n")
            fh.write(json.dumps(summary) + "\n")
    return summary


def cmd_verify(args) -> int:
    checks = select_checks(args)
    records = suites.run_checks(checks, serial=args.serial)
    return 0 if emit(records, args.out)["ok"] else 1


def cmd_derive(args) -> int:
    hc = wo_element([("h", 1), ("c", 1)])
    for k, c in enumerate(sx.char_cochain(hc, max(args.levels), 1)):
        if k in args.levels:
            print(f"level {k}:")
            print(c.dump() or "0")
    records = suites.run_checks(suites.gv_checks(args.levels if max(args.levels) >= 2 else range(0, 3)))
    return 0 if emit(records, args.out)["ok"] else 1


def cmd_dump(args) -> int:
    factors = parse_wo_word(args.element, args.q)
    q = args.q or max(i for _, i in factors)
    ctx = weil_context(make_gl(q))
    word = wo_element(factors)
    print(hom_apply(wo_to_weil(ctx), word).dump() or "0")
    if args.levels is not None:
        for k, c in enumerate(sx.char_cochain(word, max(args.levels), q, args.model)):
            if k in args.levels:
                print(f"level {k}:")
                print(c.dump() or "0")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"verify": cmd_verify, "derive": cmd_derive, "dump": cmd_dump}[args.cmd](args)
    except (UsageError, ParseError, ConfigError, ValueError) as e:
        print(f"folichar: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
