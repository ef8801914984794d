"""Command-line reports over the library.

Exit codes: 0 success, 2 unreadable input, 3 configuration rejected,
4 mismatch verdict, 5 depth exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .backforth import IsoError, run_backforth
from .closure import (Classification, SymbolicSpace, check_identities,
                      classify_algebra, e_of_p, render_trace_dot,
                      render_trace_text, rieger_nishimura_run)
from .completion import complete_finite, complete_over
from .families import family, family_tags
from .poset import DEFAULT_CHAIN_BOUND, Poset, PosetError
from .ring import verify_type_axioms
from .skeleton import BuildConfig, ConfigError, build_levels, verify_structure


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _emit(payload, as_json: bool = True) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(payload)


def _load_poset(args) -> Poset:
    if getattr(args, "family", None):
        return family(args.family)
    with open(args.poset, "r", encoding="utf-8") as fh:
        return Poset.from_json(json.load(fh))


def _poset_args(sub, positional: bool = True) -> None:
    if positional:
        sub.add_argument("poset", nargs="?", help="poset JSON file")
    sub.add_argument("--family", choices=None, metavar="TAG",
                     help="builtin family tag, e.g. omega-chain or rn(2,0)")
    sub.add_argument("--horizon", type=int, default=8,
                     help="enumeration prefix length for infinite posets")


def _verdict_json(v) -> dict:
    return {"status": v.status, "witness": list(v.witness), "note": v.note}


def cmd_analyze(args) -> int:
    try:
        poset = _load_poset(args)
    except (OSError, ValueError) as e:
        return _fail(2, f"cannot load poset: {e}")
    horizon = poset.size if poset.finite else args.horizon
    ext = poset.extremal_elements(horizon)
    delta, delta_exact = poset.p_delta(horizon)
    report = {
        "poset": poset.name,
        "horizon": horizon,
        "minimal": sorted(ext.minimal, key=poset.index),
        "maximal": sorted(ext.maximal, key=poset.index),
        "extremal_exact": ext.exact,
        "p_delta": sorted(delta, key=poset.index),
        "p_delta_exact": delta_exact,
        "acc": _verdict_json(poset.check_acc(horizon, DEFAULT_CHAIN_BOUND)),
        "omega_complete": _verdict_json(poset.check_omega_complete(horizon)),
    }
    if args.subset:
        checks = []
        for members in args.subset:
            res = poset.finite_foundation(frozenset(members), horizon)
            checks.append({"subset": sorted(members),
                           "status": res.status,
                           "foundation": sorted(res.foundation or ()),
                           "note": res.note})
        report["foundations"] = checks
    completed = (complete_finite(poset) if poset.finite
                 else complete_over(poset, poset.prefix(horizon), horizon))
    report["completion"] = {
        "elements": len(completed.elements),
        "tokens": [t.display or t.ref for t in completed.tokens()],
    }
    _emit(report)
    return 0


def _build_config(poset: Poset, args, prefix: str = "") -> BuildConfig:
    def pick(name):
        return frozenset(getattr(args, prefix + name, None) or ())
    return BuildConfig(
        poset,
        isolated=pick("isolated"),
        bounded=pick("pb"),
        unbounded=pick("pu"),
        noncompact=pick("pinf"),
        horizon=args.horizon,
    )


def cmd_build_verify(args) -> int:
    try:
        poset = _load_poset(args)
    except (OSError, ValueError) as e:
        return _fail(2, f"cannot load poset: {e}")
    config = _build_config(poset, args)
    problems = config.validate(args.depth)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 3
    try:
        tree = build_levels(config, args.depth)
    except ConfigError as e:
        return _fail(3, str(e))
    if args.format == "dot":
        print(tree.to_dot())
        return 0
    structure = verify_structure(tree, q_lower=args.q or None)
    tree.extend_to(args.depth + 1)
    axioms = verify_type_axioms(tree, args.depth - 1, seed=args.seed)
    report = {
        "poset": poset.name,
        "depth": args.depth,
        "level_sizes": [len(tree.level(n)) for n in range(1, args.depth + 1)],
        "structure": structure.to_json(),
        "axioms": axioms,
    }
    _emit(report)
    return 0


def cmd_iso(args) -> int:
    sides = {}
    for side in ("left", "right"):
        tag = getattr(args, f"{side}_family")
        path = getattr(args, side)
        try:
            if tag:
                poset = family(tag)
            elif path:
                with open(path, "r", encoding="utf-8") as fh:
                    poset = Poset.from_json(json.load(fh))
            else:
                return _fail(2, f"no {side} poset given")
        except (OSError, ValueError) as e:
            return _fail(2, f"cannot load {side} poset: {e}")
        config = _build_config(poset, args, prefix=f"{side}_")
        problems = config.validate(args.depth)
        if problems:
            for p in problems:
                print(f"{side}: {p}", file=sys.stderr)
            return 3
        try:
            sides[side] = build_levels(config, args.depth)
        except ConfigError as e:
            return _fail(3, f"{side}: {e}")
    try:
        run = run_backforth(sides["left"], sides["right"],
                            q=frozenset(args.q) if args.q else None,
                            depth=args.depth,
                            max_depth=args.max_depth,
                            seed=args.seed)
    except IsoError as e:
        return _fail(3, str(e))
    _emit(run.serialize())
    if run.status == "mismatch":
        return 4
    if run.status == "depth-exhausted":
        return 5
    return 0


def cmd_closure(args) -> int:
    try:
        poset = family(args.family)
    except (PosetError, ValueError) as e:
        return _fail(2, str(e))
    try:
        space = SymbolicSpace(poset, args.horizon)
    except ValueError as e:
        return _fail(3, str(e))
    generator = space.fin({"p0"})
    trace = rieger_nishimura_run(space, generator, args.max_n)
    cls = classify_algebra(trace)
    gen_check = e_of_p(poset, args.horizon)
    if args.format == "text":
        print(render_trace_text(trace, cls))
        print(f"generator check: "
              f"{'holds' if gen_check['holds'] else 'fails'} "
              f"({gen_check['checked']} steps)")
        return 0
    if args.format == "dot":
        print(render_trace_dot(trace))
        return 0
    _emit({
        "family": args.family,
        "trace": trace.serialize(),
        "classification": cls.serialize(),
        "identity_violations": check_identities(trace),
        "generator_check": gen_check,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stonetrim",
        description="Trim partitions of Stone spaces over countable posets")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="order analytics and completion")
    _poset_args(p)
    p.add_argument("--subset", nargs="+", action="append", metavar="ELT",
                   help="check a finite foundation for these elements")
    p.set_defaults(run=cmd_analyze)

    p = subs.add_parser("build-verify",
                        help="build a skeleton and verify its laws")
    _poset_args(p)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--isolated", nargs="+", default=None, metavar="ELT")
    p.add_argument("--pb", nargs="+", default=None, metavar="ELT",
                   help="explicitly bounded elements")
    p.add_argument("--pu", nargs="+", default=None, metavar="ELT",
                   help="unbounded elements")
    p.add_argument("--pinf", nargs="+", default=None, metavar="ELT",
                   help="noncompact elements")
    p.add_argument("--q", nargs="+", default=None, metavar="ELT",
                   help="lower subset for the covering check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(run=cmd_build_verify)

    p = subs.add_parser("iso", help="back-and-forth matching of two builds")
    for side in ("left", "right"):
        p.add_argument(f"--{side}", metavar="FILE")
        p.add_argument(f"--{side}-family", metavar="TAG")
        p.add_argument(f"--{side}-isolated", nargs="+", default=None,
                       metavar="ELT")
        p.add_argument(f"--{side}-pb", nargs="+", default=None, metavar="ELT")
        p.add_argument(f"--{side}-pu", nargs="+", default=None, metavar="ELT")
        p.add_argument(f"--{side}-pinf", nargs="+", default=None,
                       metavar="ELT")
    p.add_argument("--horizon", type=int, default=8)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--q", nargs="+", default=None, metavar="ELT")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_iso)

    p = subs.add_parser("closure",
                        help="peeling recursion over a ladder family")
    p.add_argument("--family", required=True, metavar="TAG",
                   help=f"one of {', '.join(family_tags())} (ladder kinds)")
    p.add_argument("--max-n", type=int, default=30)
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--format", choices=("json", "text", "dot"),
                   default="json")
    p.set_defaults(run=cmd_closure)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.run(args)


if __name__ == "__main__":
    sys.exit(main())
