"""Command line front end.

Single computations (reduce, apply, coord, length, intersect) print one exact
value per invocation; experiments and iterations emit structured reports with
every number as an exact p/q string.  Reports are byte-identical across runs
with equal parameters and seed.

Exit codes: 0 success, 1 failed report assertion or selftest, 2 rejected
literal, 3 domain precondition, 4 limit evaluation not stabilized.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .automorphisms import apply, apply_cyclic, parse_automorphism, power
from .currents import coordinate, length as current_length, parse_current
from .dynamics import (
    ConvergenceReport,
    iterate_current,
    run_minimality_walk,
    run_off_critical_perturbation,
    run_outlook_identity,
    run_primitive_limit,
    run_product_minimal,
    run_theorem_back,
    run_theorem_main,
)
from .errors import CurrentsLabError, NotStabilizedError, ParseError, RankError
from .selftest import run_selftest
from .trees import intersection_form, length_britton, length_limit, parse_tree
from .words import Basis, cyclic_reduce, word

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_NOT_STABILIZED = 4

DEFAULT_RANK = 5


@dataclass(frozen=True)
class RunConfig:
    """Plumbing for one experiment invocation."""

    experiment: str
    rank: int
    level: int | None
    iters: int | None
    cap: int
    seed: int
    trials: int | None
    out: str | None
    csv: str | None


def _print_word(u) -> None:
    print(str(u) if len(u) else "1")


def cmd_reduce(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    u = word(basis, args.word)
    if args.cyclic:
        cycle, _ = cyclic_reduce(u)
        print(str(cycle))
    else:
        _print_word(u)
    return EXIT_OK


def cmd_apply(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    phi = power(parse_automorphism(basis, args.aut), args.power)
    if args.cyclic:
        cycle, _ = cyclic_reduce(word(basis, args.word))
        print(str(apply_cyclic(phi, cycle)))
    else:
        _print_word(apply(phi, word(basis, args.word)))
    return EXIT_OK


def cmd_coord(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    print(coordinate(word(basis, args.word), parse_current(basis, args.current)))
    return EXIT_OK


def cmd_length(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    if (args.tree is None) == (args.current is None):
        raise CurrentsLabError("length needs exactly one of --tree (with -g) or -c")
    if args.current is not None:
        print(current_length(parse_current(basis, args.current)))
        return EXIT_OK
    if args.word is None:
        raise CurrentsLabError("--tree needs a group element: -g WORD")
    tree = parse_tree(basis, args.tree)
    g = word(basis, args.word)
    if args.route == "britton":
        print(length_britton(tree, g))
    elif args.route == "limit":
        print(length_limit(tree, g, cap=args.cap))
    else:
        britton = length_britton(tree, g)
        limit = length_limit(tree, g, cap=args.cap)
        if britton != limit:
            print(f"route disagreement: britton={britton} limit={limit}", file=sys.stderr)
            return EXIT_ASSERTION
        print(britton)
    return EXIT_OK


def cmd_intersect(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    tree = parse_tree(basis, args.tree)
    nu = parse_current(basis, args.current)
    print(intersection_form(tree, nu))
    return EXIT_OK


def _emit_report(report: ConvergenceReport, out: str | None, csv_path: str | None) -> int:
    if out:
        Path(out).write_text(report.to_json())
    if csv_path:
        Path(csv_path).write_text(report.to_csv())
    if out or csv_path:
        for target in filter(None, (out, csv_path)):
            print(f"wrote {target}")
        for result in report.assertions:
            mark = "ok  " if result.passed else "FAIL"
            suffix = f" :: {result.witness}" if not result.passed and result.witness else ""
            print(f"{mark} {result.name}{suffix}")
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_ASSERTION


def cmd_iterate(args: argparse.Namespace) -> int:
    basis = Basis(args.rank)
    phi = parse_automorphism(basis, args.aut)
    nu = parse_current(basis, args.current)
    limit = parse_current(basis, args.limit) if args.limit else None
    report = iterate_current(phi, nu, steps=args.iters, level=args.level, limit=limit)
    return _emit_report(report, args.out, args.csv)


# experiment id -> (minimum rank, default rank)
_EXPERIMENT_RANKS = {
    "theorem-main": (5, 5),
    "theorem-back": (3, 3),
    "product-minimal": (5, 5),
    "primitive-limit": (3, 3),
    "off-critical": (3, 3),
    "outlook-identity": (2, 3),
    "minimality-walk": (3, 3),
}


def _run_experiment(config: RunConfig, args: argparse.Namespace) -> ConvergenceReport:
    basis = Basis(config.rank)
    name = config.experiment
    if name == "theorem-main":
        return run_theorem_main(
            iters=config.iters or 50,
            level=config.level or 2,
            rank=config.rank,
            cap=config.cap,
        )
    if name == "theorem-back":
        return run_theorem_back(rank=config.rank)
    if name == "product-minimal":
        return run_product_minimal(
            iters=config.iters or 20,
            level=config.level or 2,
            rank=config.rank,
            cap=config.cap,
        )
    if name == "primitive-limit":
        return run_primitive_limit(
            word(basis, args.u),
            iters=config.iters or 20,
            level=config.level or 2,
        )
    if name == "off-critical":
        return run_off_critical_perturbation(
            word(basis, args.g),
            word(basis, args.f),
            iters=config.iters or 16,
            level=config.level or 2,
        )
    if name == "outlook-identity":
        return run_outlook_identity(
            iters=config.iters or 20, rank=config.rank, seed=config.seed
        )
    return run_minimality_walk(
        trials=config.trials or 25,
        steps=config.iters or 40,
        level=config.level or 1,
        seed=config.seed,
        rank=config.rank,
    )


def cmd_experiment(args: argparse.Namespace) -> int:
    minimum, default = _EXPERIMENT_RANKS[args.id]
    rank = args.rank if args.rank is not None else default
    if rank < minimum:
        raise RankError(f"experiment {args.id} requires rank >= {minimum}, got {rank}")
    config = RunConfig(
        experiment=args.id,
        rank=rank,
        level=args.level,
        iters=args.iters,
        cap=args.cap,
        seed=args.seed,
        trials=args.trials,
        out=args.out,
        csv=args.csv,
    )
    return _emit_report(_run_experiment(config, args), config.out, config.csv)


def cmd_selftest(args: argparse.Namespace) -> int:
    suites = run_selftest(seed=args.seed, quick=args.quick)
    failures = 0
    for suite in suites:
        for check in suite.checks:
            mark = "ok  " if check.passed else "FAIL"
            line = f"{mark} {suite.module:14s} {check.name} ({check.trials} trials)"
            if not check.passed and check.witness:
                line += f" :: {check.witness}"
            print(line)
            failures += 0 if check.passed else 1
    total = sum(len(s.checks) for s in suites)
    print(f"{total - failures}/{total} checks passed (seed {args.seed})")
    return EXIT_OK if failures == 0 else EXIT_ASSERTION


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="currents-lab",
        description="Exact computations with rational geodesic currents, "
        "twist automorphisms, and splitting trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, rank_default: int | None = DEFAULT_RANK) -> None:
        p.add_argument("--rank", type=int, default=rank_default, help="basis rank")

    p = sub.add_parser("reduce", help="freely or cyclically reduce a word")
    common(p)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("--cyclic", action="store_true", help="canonical cyclic form")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("apply", help="apply an automorphism (power) to a word")
    common(p)
    p.add_argument("--aut", required=True, help="automorphism literal or builtin name")
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-n", "--power", type=int, default=1, help="power, may be negative")
    p.add_argument("--cyclic", action="store_true", help="act on the conjugacy class")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("coord", help="cylinder coordinate of a word on a current")
    common(p)
    p.add_argument("-v", "--word", required=True)
    p.add_argument("-c", "--current", required=True)
    p.set_defaults(handler=cmd_coord)

    p = sub.add_parser("length", help="current length, or translation length on a tree")
    common(p)
    p.add_argument("--tree", help="tree literal, e.g. 'twist (a:b,1)'")
    p.add_argument("-g", "--word", help="group element for --tree")
    p.add_argument("-c", "--current", help="current literal for ||.||")
    p.add_argument(
        "--route",
        choices=("britton", "limit", "both"),
        default="britton",
        help="tree evaluation route; 'both' cross-checks the two",
    )
    p.add_argument("--cap", type=int, default=64, help="iteration cap for the limit route")
    p.set_defaults(handler=cmd_length)

    p = sub.add_parser("intersect", help="intersection pairing of a tree and a current")
    common(p)
    p.add_argument("--tree", required=True)
    p.add_argument("-c", "--current", required=True)
    p.set_defaults(handler=cmd_intersect)

    p = sub.add_parser("iterate", help="iterate an automorphism on a current")
    common(p)
    p.add_argument("--aut", required=True)
    p.add_argument("-c", "--current", required=True)
    p.add_argument("--limit", help="optional target current for distance columns")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV tables here")
    p.set_defaults(handler=cmd_iterate)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("id", choices=sorted(_EXPERIMENT_RANKS))
    common(p, rank_default=None)
    p.add_argument("--level", type=int)
    p.add_argument("--iters", type=int)
    p.add_argument("--cap", type=int, default=64)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int)
    p.add_argument("-u", default="ab", help="primitive-limit: word in a, b")
    p.add_argument("-g", default="abaB", help="off-critical: base word")
    p.add_argument("-f", default="a", help="off-critical: perturbation word")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV tables here")
    p.set_defaults(handler=cmd_experiment)

    p = sub.add_parser("selftest", help="run the seeded invariant suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--quick", action="store_true", help="tenfold smaller corpora")
    p.set_defaults(handler=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.text:
            print(f"  {exc.text}", file=sys.stderr)
            print(f"  {' ' * exc.position}^", file=sys.stderr)
        return EXIT_PARSE
    except NotStabilizedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_STABILIZED
    except (CurrentsLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
